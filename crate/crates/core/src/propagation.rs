//! Scalar free-space propagation by the angular spectrum method.
//!
//! The transfer function is `exp(i·k_z·z)` with `k_z = √(k² − k_x² − k_y²)`;
//! evanescent components are dropped. The field is zero-padded before the
//! transform and cropped back afterwards, so the output grid equals the input
//! grid.

use num_complex::Complex;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::jones::VectorField;
use crate::scalar::Real;

/// Numerical options for [`Propagator`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationConfig {
    /// Zero-padding factor per axis (1 disables padding).
    pub padding: usize,
    /// Restrict the transfer function to the alias-free band of
    /// Matsushima & Shimobaba; without it, distances beyond the sampling
    /// limit are refused.
    pub band_limit: bool,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        Self { padding: 2, band_limit: true }
    }
}

/// Angular-spectrum propagator for a fixed wavelength.
#[derive(Debug, Clone, Copy)]
pub struct Propagator<T> {
    wavelength: T,
    config: PropagationConfig,
}

impl<T: Real> Propagator<T> {
    pub fn new(wavelength: T, config: PropagationConfig) -> Result<Self> {
        if !(wavelength > T::zero()) || !wavelength.is_finite() {
            return Err(Error::domain(format!("wavelength must be positive, got {wavelength}")));
        }
        if config.padding == 0 {
            return Err(Error::domain("padding factor must be at least 1"));
        }
        Ok(Self { wavelength, config })
    }

    /// Largest distance whose transfer-function phase is sampled without
    /// aliasing on the padded grid, `min(N·Δ²/λ · √(1 − (λ/2Δ)²))` over both axes.
    pub fn max_unaliased_distance(&self, f: &ScalarField<T>) -> T {
        let g = f.grid().padded(self.config.padding);
        let axis = |n: usize, d: T| {
            let ratio = self.wavelength / (T::two() * d);
            let root = (T::one() - ratio * ratio).max(T::zero()).sqrt();
            T::from_usize_lossy(n) * d * d / self.wavelength * root
        };
        axis(g.nx(), g.dx()).min(axis(g.ny(), g.dy()))
    }

    pub fn propagate(&self, f: &ScalarField<T>, distance: T) -> Result<ScalarField<T>> {
        if !distance.is_finite() {
            return Err(Error::domain("propagation distance must be finite"));
        }
        if distance == T::zero() {
            return Ok(f.clone());
        }
        if !self.config.band_limit && distance.abs() > self.max_unaliased_distance(f) {
            return Err(Error::precondition(format!(
                "distance {distance} m exceeds the alias-free limit {} m for this grid; \
                 enable band limiting or refine the sampling",
                self.max_unaliased_distance(f)
            )));
        }

        let grid = *f.grid();
        let pad = self.config.padding;
        let (nx, ny) = (grid.nx(), grid.ny());
        let (px, py) = (nx * pad, ny * pad);
        let (ox, oy) = ((px - nx) / 2, (py - ny) / 2);

        let zero = Complex::new(T::zero(), T::zero());
        let mut buf = vec![zero; px * py];
        for j in 0..ny {
            let src = &f.amps()[j * nx..(j + 1) * nx];
            buf[(j + oy) * px + ox..(j + oy) * px + ox + nx].copy_from_slice(src);
        }

        let mut planner = FftPlanner::new();
        let fwd = Fft2::new(&mut planner, px, py, FftDirection::Forward);
        let inv = Fft2::new(&mut planner, px, py, FftDirection::Inverse);
        fwd.process(&mut buf);

        let k = T::TAU() / self.wavelength;
        let k2 = k * k;
        let dfx = T::one() / (T::from_usize_lossy(px) * grid.dx());
        let dfy = T::one() / (T::from_usize_lossy(py) * grid.dy());
        let limit = |df: T| {
            let s = T::two() * df * distance;
            T::one() / (self.wavelength * (s * s + T::one()).sqrt())
        };
        let (fx_lim, fy_lim) = (limit(dfx), limit(dfy));
        // Carrier phase kz reduced in f64; the remainder uses kz − k = −kt²/(k + kz),
        // which keeps the phase accurate in single precision.
        let cycles = distance.to_f64_lossy() / self.wavelength.to_f64_lossy();
        let carrier = T::lit(std::f64::consts::TAU * (cycles - cycles.floor()));
        let fx: Vec<T> = (0..px).map(|i| signed_index::<T>(i, px) * dfx).collect();
        let fy: Vec<T> = (0..py).map(|j| signed_index::<T>(j, py) * dfy).collect();
        for (j, row) in buf.chunks_mut(px).enumerate() {
            let fyj = fy[j];
            for (i, a) in row.iter_mut().enumerate() {
                let fxi = fx[i];
                if self.config.band_limit && (fxi.abs() > fx_lim || fyj.abs() > fy_lim) {
                    *a = zero;
                    continue;
                }
                let kt2 = T::TAU() * T::TAU() * (fxi * fxi + fyj * fyj);
                if kt2 >= k2 {
                    *a = zero;
                    continue;
                }
                let dkz = -kt2 / (k + (k2 - kt2).sqrt());
                *a = *a * Complex::from_polar(T::one(), dkz * distance + carrier);
            }
        }

        inv.process(&mut buf);
        let norm = T::one() / T::from_usize_lossy(px * py);
        let mut out = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            out.extend(buf[(j + oy) * px + ox..(j + oy) * px + ox + nx].iter().map(|a| a * norm));
        }
        ScalarField::new(grid, out)
    }

    /// Propagates the H and V components independently.
    pub fn propagate_vector(&self, f: &VectorField<T>, distance: T) -> Result<VectorField<T>> {
        f.map_components(|c| self.propagate(c, distance))
    }
}

/// Propagation with the default configuration (padding 2, band limited).
pub fn angular_spectrum<T: Real>(f: &ScalarField<T>, distance: T, wavelength: T) -> Result<ScalarField<T>> {
    Propagator::new(wavelength, PropagationConfig::default())?.propagate(f, distance)
}

pub fn propagate_vector<T: Real>(f: &VectorField<T>, distance: T, wavelength: T) -> Result<VectorField<T>> {
    Propagator::new(wavelength, PropagationConfig::default())?.propagate_vector(f, distance)
}

fn signed_index<T: Real>(i: usize, n: usize) -> T {
    if i < n.div_ceil(2) {
        T::from_usize_lossy(i)
    } else {
        T::from_usize_lossy(i) - T::from_usize_lossy(n)
    }
}

/// Row-major 2-D FFT built from 1-D transforms.
struct Fft2<T: Real> {
    nx: usize,
    ny: usize,
    rows: Arc<dyn Fft<T>>,
    cols: Arc<dyn Fft<T>>,
}

impl<T: Real> Fft2<T> {
    fn new(planner: &mut FftPlanner<T>, nx: usize, ny: usize, dir: FftDirection) -> Self {
        Self { nx, ny, rows: planner.plan_fft(nx, dir), cols: planner.plan_fft(ny, dir) }
    }

    fn process(&self, data: &mut [Complex<T>]) {
        self.rows.process(data);
        let mut t = transpose(data, self.nx, self.ny);
        self.cols.process(&mut t);
        let back = transpose(&t, self.ny, self.nx);
        data.copy_from_slice(&back);
    }
}

fn transpose<T: Copy>(data: &[T], nx: usize, ny: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(data.len());
    for i in 0..nx {
        out.extend((0..ny).map(|j| data[j * nx + i]));
    }
    out
}
