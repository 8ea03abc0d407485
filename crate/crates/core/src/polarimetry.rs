//! Spatially resolved Stokes polarimetry.
//!
//! The simulated instrument is a rotating quarter-wave plate followed by a
//! fixed horizontal polarizer (the transmitted port of a polarizing beam
//! splitter) and a camera. For a QWP fast axis at `θ` the detected intensity is
//!
//! ```text
//! I(θ) = ½ (A + B sin 2θ + C cos 4θ + D sin 4θ)
//! ```
//!
//! with `S0 = A − C`, `S1 = 2C`, `S2 = 2D`, `S3 = B`. With `N ≥ 5` angles
//! uniformly spaced over half a turn the four coefficients follow from discrete
//! Fourier projections of the frame stack.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Raster;
use crate::grid::GridSpec;
use crate::jones::{polarizer, quarter_wave_plate, VectorField};
use crate::scalar::Real;

/// Smallest frame count the Fourier reconstruction accepts.
pub const MIN_FRAMES: usize = 5;

/// Default dark-pixel floor relative to `max(S0)`.
pub const DEFAULT_DARK_FLOOR: f64 = 1e-4;

/// Four co-registered Stokes rasters.
#[derive(Debug, Clone, PartialEq)]
pub struct StokesMaps<T> {
    pub grid: GridSpec<T>,
    pub s0: Vec<T>,
    pub s1: Vec<T>,
    pub s2: Vec<T>,
    pub s3: Vec<T>,
}

impl<T: Real> StokesMaps<T> {
    fn with_capacity(grid: GridSpec<T>) -> Self {
        let n = grid.len();
        Self {
            grid,
            s0: Vec::with_capacity(n),
            s1: Vec::with_capacity(n),
            s2: Vec::with_capacity(n),
            s3: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, s: [T; 4]) {
        self.s0.push(s[0]);
        self.s1.push(s[1]);
        self.s2.push(s[2]);
        self.s3.push(s[3]);
    }

    /// Parameter `k ∈ 0..4` as a raster.
    pub fn component(&self, k: usize) -> Raster<T> {
        let values = match k {
            0 => &self.s0,
            1 => &self.s1,
            2 => &self.s2,
            3 => &self.s3,
            _ => panic!("Stokes index {k} out of range"),
        };
        Raster { grid: self.grid, values: values.clone() }
    }

    pub fn components(&self) -> [&[T]; 4] {
        [&self.s0, &self.s1, &self.s2, &self.s3]
    }

    pub fn from_components(grid: GridSpec<T>, c: [Vec<T>; 4]) -> Result<Self> {
        if c.iter().any(|v| v.len() != grid.len()) {
            return Err(Error::shape("Stokes component length does not match the grid"));
        }
        let [s0, s1, s2, s3] = c;
        Ok(Self { grid, s0, s1, s2, s3 })
    }

    pub fn max_s0(&self) -> T {
        self.s0.iter().copied().fold(T::zero(), T::max)
    }

    /// `max |self − other|` over all pixels and parameters, divided by `max(S0)` of `self`.
    pub fn max_relative_error(&self, other: &Self) -> Result<T> {
        self.grid.ensure_same(&other.grid)?;
        let scale = self.max_s0();
        let mut worst = T::zero();
        for (a, b) in self.components().iter().zip(other.components()) {
            for (&x, &y) in a.iter().zip(b) {
                worst = worst.max((x - y).abs());
            }
        }
        Ok(if scale > T::zero() { worst / scale } else { worst })
    }

    /// Fraction of the total intensity that is circularly polarized, `Σ|S3| / ΣS0`.
    pub fn s3_fraction(&self) -> T {
        let num = self.s3.iter().fold(T::zero(), |a, &b| a + b.abs());
        let den = self.s0.iter().fold(T::zero(), |a, &b| a + b);
        if den > T::zero() {
            num / den
        } else {
            T::zero()
        }
    }

    /// Intensity-weighted `ΣS1 / ΣS0`.
    pub fn s1_ratio(&self) -> T {
        let num = self.s1.iter().fold(T::zero(), |a, &b| a + b);
        let den = self.s0.iter().fold(T::zero(), |a, &b| a + b);
        if den > T::zero() {
            num / den
        } else {
            T::zero()
        }
    }
}

/// Stokes parameters of a single Jones vector.
#[inline]
pub fn stokes_of<T: Real>(h: Complex<T>, v: Complex<T>) -> [T; 4] {
    let (ih, iv) = (h.norm_sqr(), v.norm_sqr());
    let x = h * v.conj();
    [ih + iv, ih - iv, T::two() * x.re, T::two() * x.im]
}

/// `S0 = |h|²+|v|²`, `S1 = |h|²−|v|²`, `S2 = 2 Re(h v*)`, `S3 = 2 Im(h v*)`.
pub fn stokes_direct<T: Real>(f: &VectorField<T>) -> StokesMaps<T> {
    let mut out = StokesMaps::with_capacity(*f.grid());
    for (&h, &v) in f.h().amps().iter().zip(f.v().amps()) {
        out.push(stokes_of(h, v));
    }
    out
}

/// Camera frames taken at a set of QWP orientations.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameStack<T> {
    grid: GridSpec<T>,
    angles: Vec<T>,
    frames: Vec<Vec<T>>,
}

impl<T: Real> FrameStack<T> {
    pub fn new(grid: GridSpec<T>, angles: Vec<T>, frames: Vec<Vec<T>>) -> Result<Self> {
        if angles.len() != frames.len() {
            return Err(Error::shape(format!("{} angles but {} frames", angles.len(), frames.len())));
        }
        if let Some(bad) = frames.iter().position(|f| f.len() != grid.len()) {
            return Err(Error::shape(format!("frame {bad} does not match the {}-pixel grid", grid.len())));
        }
        Ok(Self { grid, angles, frames })
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    pub fn frames(&self) -> &[Vec<T>] {
        &self.frames
    }

    pub fn frame(&self, k: usize) -> Raster<T> {
        Raster { grid: self.grid, values: self.frames[k].clone() }
    }
}

/// `n` QWP angles `kπ/n`.
pub fn uniform_angles<T: Real>(n: usize) -> Vec<T> {
    (0..n).map(|k| T::from_usize_lossy(k) * T::PI() / T::from_usize_lossy(n)).collect()
}

/// Frames `|[polarizer(0)·QWP(θ)·E]_h|²` for each angle.
pub fn simulate_qwp_scan<T: Real>(f: &VectorField<T>, angles: &[T]) -> FrameStack<T> {
    let pol = polarizer(T::zero());
    let frames = angles
        .par_iter()
        .map(|&theta| {
            let m = pol * quarter_wave_plate(theta);
            f.h()
                .amps()
                .iter()
                .zip(f.v().amps())
                .map(|(&h, &v)| (m.hh * h + m.hv * v).norm_sqr())
                .collect()
        })
        .collect();
    FrameStack { grid: *f.grid(), angles: angles.to_vec(), frames }
}

/// Checks that `angles` sample half a turn uniformly (any start, any order).
pub fn check_uniform_half_turn<T: Real>(angles: &[T]) -> Result<()> {
    let n = angles.len();
    if n < MIN_FRAMES {
        return Err(Error::precondition(format!(
            "Fourier Stokes reconstruction needs at least {MIN_FRAMES} QWP angles, got {n}"
        )));
    }
    let pi = T::PI();
    let mut reduced: Vec<T> = angles
        .iter()
        .map(|&a| {
            let r = a % pi;
            if r < T::zero() {
                r + pi
            } else {
                r
            }
        })
        .collect();
    reduced.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
    let step = pi / T::from_usize_lossy(n);
    let tol = T::lit(1e-6) * step;
    for k in 0..n {
        let next = if k + 1 < n { reduced[k + 1] } else { reduced[0] + pi };
        if ((next - reduced[k]) - step).abs() > tol {
            return Err(Error::precondition(format!(
                "QWP angles must be uniformly spaced by pi/{n}; found a gap of {} rad",
                next - reduced[k]
            )));
        }
    }
    Ok(())
}

/// Per-pixel Fourier fit of the frame stack.
pub fn stokes_from_frames<T: Real>(stack: &FrameStack<T>) -> Result<StokesMaps<T>> {
    check_uniform_half_turn(&stack.angles)?;
    let n = T::from_usize_lossy(stack.angles.len());
    let basis: Vec<[T; 3]> = stack
        .angles
        .iter()
        .map(|&t| {
            let two = T::two() * t;
            let four = T::two() * two;
            [two.sin(), four.cos(), four.sin()]
        })
        .collect();
    let four_n = T::lit(4.0) / n;
    let two_n = T::two() / n;
    let pixels: Vec<[T; 4]> = (0..stack.grid.len())
        .into_par_iter()
        .map(|p| {
            let (mut a, mut b, mut c, mut d) = (T::zero(), T::zero(), T::zero(), T::zero());
            for (frame, w) in stack.frames.iter().zip(&basis) {
                let i = frame[p];
                a = a + i;
                b = b + i * w[0];
                c = c + i * w[1];
                d = d + i * w[2];
            }
            let (a, b, c, d) = (a * two_n, b * four_n, c * four_n, d * four_n);
            [a - c, T::two() * c, T::two() * d, b]
        })
        .collect();
    let mut out = StokesMaps::with_capacity(stack.grid);
    for s in pixels {
        out.push(s);
    }
    Ok(out)
}

/// `√(S1²+S2²+S3²)/S0` clamped to `[0, 1+1e−9]`; pixels with
/// `S0 < floor·max(S0)` are masked (`None`).
pub fn degree_of_polarization<T: Real>(s: &StokesMaps<T>, floor: T) -> Vec<Option<T>> {
    let cut = floor * s.max_s0();
    let cap = T::one() + T::lit(1e-9);
    (0..s.s0.len())
        .map(|k| {
            let s0 = s.s0[k];
            if !(s0 > cut) || s0 <= T::zero() {
                return None;
            }
            let pol = (s.s1[k] * s.s1[k] + s.s2[k] * s.s2[k] + s.s3[k] * s.s3[k]).sqrt();
            Some((pol / s0).max(T::zero()).min(cap))
        })
        .collect()
}

/// Mean of the unmasked degree-of-polarization values.
pub fn mean_degree_of_polarization<T: Real>(s: &StokesMaps<T>, floor: T) -> Option<T> {
    let (sum, count) = degree_of_polarization(s, floor)
        .into_iter()
        .flatten()
        .fold((T::zero(), 0usize), |(a, n), d| (a + d, n + 1));
    (count > 0).then(|| sum / T::from_usize_lossy(count))
}
