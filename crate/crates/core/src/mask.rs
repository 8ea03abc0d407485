//! Phase patterns for the two SLM halves.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::GridSpec;
use crate::laguerre::laguerre_unchecked;
use crate::scalar::Real;

/// Phase raster with values in `[0, 2π)`.
///
/// `levels == 0` marks a continuous mask; otherwise every phase is an integer
/// multiple of `2π/levels`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMask<T> {
    grid: GridSpec<T>,
    phase: Vec<T>,
    levels: u32,
}

impl<T: Real> PhaseMask<T> {
    /// Wraps `phase` into `[0, 2π)`; the result is continuous.
    pub fn new(grid: GridSpec<T>, phase: Vec<T>) -> Result<Self> {
        if phase.len() != grid.len() {
            return Err(Error::shape(format!("{} phases for a {}-pixel grid", phase.len(), grid.len())));
        }
        if phase.iter().any(|p| !p.is_finite()) {
            return Err(Error::domain("phase mask contains non-finite values"));
        }
        Ok(Self { grid, phase: phase.into_iter().map(Real::wrap_phase).collect(), levels: 0 })
    }

    pub fn zeros(grid: GridSpec<T>) -> Self {
        Self { grid, phase: vec![T::zero(); grid.len()], levels: 0 }
    }

    /// Samples `f(x, y)` and wraps it.
    pub fn from_fn<F: Fn(T, T) -> T + Sync>(grid: GridSpec<T>, f: F) -> Self {
        let phase = (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let (x, y) = grid.coords(k);
                f(x, y).wrap_phase()
            })
            .collect();
        Self { grid, phase, levels: 0 }
    }

    #[inline]
    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    #[inline]
    pub fn phase(&self) -> &[T] {
        &self.phase
    }

    #[inline]
    pub fn levels(&self) -> u32 {
        self.levels
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> T {
        self.phase[self.grid.index(i, j)]
    }

    /// Pixel-wise `−φ`.
    pub fn negate(&self) -> Self {
        self.map(|p| -p)
    }

    /// Adds a constant phase.
    pub fn offset(&self, c: T) -> Self {
        self.map(|p| p + c)
    }

    fn map<F: Fn(T) -> T>(&self, f: F) -> Self {
        Self {
            grid: self.grid,
            phase: self.phase.iter().map(|&p| f(p).wrap_phase()).collect(),
            levels: 0,
        }
    }

    /// Largest circular distance between two masks.
    pub fn max_deviation(&self, other: &Self) -> Result<T> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self
            .phase
            .iter()
            .zip(&other.phase)
            .map(|(&a, &b)| (a - b).wrap_signed().abs())
            .fold(T::zero(), T::max))
    }

    /// Unit-amplitude field `e^{iφ}`.
    pub fn to_field(&self) -> ScalarField<T> {
        let amps = self.phase.iter().map(|&p| Complex::from_polar(T::one(), p)).collect();
        ScalarField::new(self.grid, amps).expect("mask matches its grid")
    }

    /// Marks the mask as quantized without touching values (used by importers).
    pub(crate) fn with_levels(mut self, levels: u32) -> Self {
        self.levels = levels;
        self
    }
}

/// Phase of `LG_{pl}` at the waist: `l·φ` plus `π` where `L_p^{|l|}(2r²/w0²) < 0`.
pub fn lg_phase_mask<T: Real>(p: i32, l: i32, w0: T, grid: &GridSpec<T>) -> Result<PhaseMask<T>> {
    if p < 0 {
        return Err(Error::domain(format!("radial index must be >= 0, got {p}")));
    }
    if !(w0 > T::zero()) {
        return Err(Error::domain("waist must be positive"));
    }
    let (p, al) = (p as u32, l.unsigned_abs());
    let lf = T::from_i64_lossy(l as i64);
    Ok(PhaseMask::from_fn(*grid, |x, y| {
        let u = T::two() * (x * x + y * y) / (w0 * w0);
        let sign_flip = if laguerre_unchecked(p, al, u) < T::zero() { T::PI() } else { T::zero() };
        lf * y.atan2(x) + sign_flip
    }))
}

/// Quadratic lens phase `−π r²/(λ f)`.
pub fn kinoform_lens<T: Real>(focal_length: T, wavelength: T, grid: &GridSpec<T>) -> Result<PhaseMask<T>> {
    if !(wavelength > T::zero()) {
        return Err(Error::domain(format!("wavelength must be positive, got {wavelength}")));
    }
    if focal_length == T::zero() || !focal_length.is_finite() {
        return Err(Error::domain("kinoform focal length must be finite and non-zero"));
    }
    let scale = -T::PI() / (wavelength * focal_length);
    Ok(PhaseMask::from_fn(*grid, |x, y| scale * (x * x + y * y)))
}

/// Pixel-wise sum of phases, wrapped; the result is continuous.
pub fn combine<T: Real>(masks: &[&PhaseMask<T>]) -> Result<PhaseMask<T>> {
    let (first, rest) = masks
        .split_first()
        .ok_or_else(|| Error::domain("combine needs at least one mask"))?;
    let mut phase = first.phase.clone();
    for m in rest {
        first.grid.ensure_same(&m.grid)?;
        for (acc, &p) in phase.iter_mut().zip(&m.phase) {
            *acc = *acc + p;
        }
    }
    Ok(PhaseMask {
        grid: first.grid,
        phase: phase.into_iter().map(Real::wrap_phase).collect(),
        levels: 0,
    })
}

/// Rounds every phase to the nearest multiple of `2π/levels`.
pub fn quantize<T: Real>(mask: &PhaseMask<T>, levels: u32) -> Result<PhaseMask<T>> {
    if levels < 2 {
        return Err(Error::domain(format!("quantization needs at least 2 levels, got {levels}")));
    }
    let n = T::from_u32(levels).unwrap();
    let step = T::TAU() / n;
    let phase = mask
        .phase
        .iter()
        .map(|&p| {
            let k = (p / step).round();
            // k == levels is the same point as 0 on the circle.
            if k >= n {
                T::zero()
            } else {
                k * step
            }
        })
        .collect();
    Ok(PhaseMask { grid: mask.grid, phase, levels })
}
