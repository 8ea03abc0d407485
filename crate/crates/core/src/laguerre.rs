//! Associated Laguerre polynomials and Laguerre-Gaussian modes.
//!
//! Fields follow the `exp(-iωt)` time convention with propagation phase
//! `exp(+ikz)`; the plane-wave carrier `exp(ikz)` is not included in
//! [`lg_mode`], so an angular-spectrum propagation of `lg_mode(z = 0)` by `z`
//! equals `exp(ikz) · lg_mode(z)` in the paraxial limit.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::GridSpec;
use crate::scalar::Real;

/// Power deficit above which a sampled mode is flagged as truncated.
pub const TRUNCATION_LIMIT: f64 = 0.01;

/// `L_p^a(x)` by the upward three-term recurrence.
pub fn assoc_laguerre<T: Real>(p: i32, a: i32, x: T) -> Result<T> {
    if p < 0 || a < 0 {
        return Err(Error::domain(format!("assoc_laguerre needs p >= 0 and a >= 0, got p={p}, a={a}")));
    }
    Ok(laguerre_unchecked(p as u32, a as u32, x))
}

pub(crate) fn laguerre_unchecked<T: Real>(p: u32, a: u32, x: T) -> T {
    let a = T::from_u32(a).unwrap();
    let mut prev = T::one();
    if p == 0 {
        return prev;
    }
    let mut cur = T::one() + a - x;
    for k in 1..p {
        let k = T::from_u32(k).unwrap();
        let next = ((T::two() * k + T::one() + a - x) * cur - (k + a) * prev) / (k + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// Parameters of a Laguerre-Gaussian mode `LG_{pl}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LgModeSpec<T> {
    pub p: u32,
    /// Azimuthal index; the sign is the handedness of the helical phase `exp(ilφ)`.
    pub l: i32,
    pub w0: T,
    pub wavelength: T,
    /// Distance from the waist.
    pub z: T,
}

impl<T: Real> LgModeSpec<T> {
    pub fn new(p: i32, l: i32, w0: T, wavelength: T) -> Result<Self> {
        if p < 0 {
            return Err(Error::domain(format!("radial index must be >= 0, got {p}")));
        }
        if !(w0 > T::zero()) || !(wavelength > T::zero()) {
            return Err(Error::domain("waist and wavelength must be positive"));
        }
        Ok(Self { p: p as u32, l, w0, wavelength, z: T::zero() })
    }

    pub fn at_z(mut self, z: T) -> Self {
        self.z = z;
        self
    }

    pub fn rayleigh_range(&self) -> T {
        T::PI() * self.w0 * self.w0 / self.wavelength
    }

    /// Beam radius `w(z)`.
    pub fn width(&self) -> T {
        let zr = self.rayleigh_range();
        self.w0 * (T::one() + (self.z / zr).powi(2)).sqrt()
    }

    /// Gouy phase `(2p + |l| + 1)·atan(z/z_R)`.
    pub fn gouy_phase(&self) -> T {
        let order = T::from_u32(2 * self.p + self.l.unsigned_abs() + 1).unwrap();
        order * (self.z / self.rayleigh_range()).atan()
    }

    fn norm(&self) -> T {
        let al = self.l.unsigned_abs();
        // p! / (p+|l|)! as a running product to stay finite for large orders.
        let mut ratio = T::one();
        for k in (self.p + 1)..=(self.p + al) {
            ratio = ratio / T::from_u32(k).unwrap();
        }
        (T::two() * ratio / T::PI()).sqrt()
    }

    /// Complex amplitude at transverse position `(x, y)`.
    pub fn eval(&self, x: T, y: T) -> Complex<T> {
        let al = self.l.unsigned_abs();
        let w = self.width();
        let r2 = x * x + y * y;
        let u = T::two() * r2 / (w * w);
        let radial = self.norm() / w
            * u.sqrt().powi(al as i32)
            * laguerre_unchecked(self.p, al, u)
            * (-r2 / (w * w)).exp();
        let phi = y.atan2(x);
        let k = T::TAU() / self.wavelength;
        let curvature = if self.z == T::zero() {
            T::zero()
        } else {
            let zr = self.rayleigh_range();
            k * r2 * self.z / (T::two() * (self.z * self.z + zr * zr))
        };
        let phase = T::from_i64_lossy(self.l as i64) * phi + curvature - self.gouy_phase();
        Complex::from_polar(radial, phase)
    }
}

/// A sampled mode together with its sampling diagnostics.
#[derive(Debug, Clone)]
pub struct SampledMode<T> {
    pub field: ScalarField<T>,
    /// `1 − Σ|a|²·dx·dy`: the power the grid fails to capture.
    pub power_deficit: T,
    /// Set when the deficit exceeds [`TRUNCATION_LIMIT`].
    pub truncated: bool,
}

/// Samples `LG_{pl}` on `grid`, normalised to unit power on the continuum.
pub fn lg_mode<T: Real>(spec: &LgModeSpec<T>, grid: &GridSpec<T>) -> SampledMode<T> {
    let field = ScalarField::from_fn(*grid, |x, y| spec.eval(x, y));
    let power_deficit = T::one() - field.power();
    SampledMode { field, power_deficit, truncated: power_deficit > T::lit(TRUNCATION_LIMIT) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_examples() {
        assert_eq!(assoc_laguerre(0, 3, 7.2).unwrap(), 1.0);
        assert_eq!(assoc_laguerre(1, 0, 1.0).unwrap(), 0.0);
        // L_2^1(x) = x²/2 − 3x + 3, so L_2^1(2) = −1.
        assert!((assoc_laguerre(2, 1, 2.0f64).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn laguerre_rejects_negative_indices() {
        assert!(matches!(assoc_laguerre(-1, 0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(assoc_laguerre(1, -2, 1.0f32), Err(Error::Domain(_))));
    }

    #[test]
    fn mode_spec_validation() {
        assert!(LgModeSpec::new(-1, 0, 1e-3, 1e-6).is_err());
        assert!(LgModeSpec::new(0, 0, 0.0, 1e-6).is_err());
        assert!(LgModeSpec::new(0, 0, 1e-3, -1e-6).is_err());
    }

    #[test]
    fn gaussian_has_flat_phase_at_waist() {
        let spec = LgModeSpec::new(0, 0, 1e-3f64, 1.56e-6).unwrap();
        let grid = GridSpec::square(64, 8e-3).unwrap();
        let m = lg_mode(&spec, &grid);
        assert!(!m.truncated);
        assert!(m.field.amps().iter().all(|a| a.im.abs() <= 1e-12 * a.norm() && a.re > 0.0));
    }

    #[test]
    fn small_grid_is_flagged_truncated() {
        let spec = LgModeSpec::new(0, 3, 1e-3, 1.56e-6).unwrap();
        let grid = GridSpec::square(64, 2e-3).unwrap();
        let m = lg_mode(&spec, &grid);
        assert!(m.truncated, "deficit {}", m.power_deficit);
    }

    #[test]
    fn width_grows_with_rayleigh_law() {
        let spec = LgModeSpec::new(0, 0, 1e-3, 1e-6).unwrap();
        let zr = spec.rayleigh_range();
        let w = spec.at_z(zr).width();
        assert!((w - 1e-3 * 2f64.sqrt()).abs() < 1e-15);
        assert!((spec.at_z(zr).gouy_phase() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }
}
