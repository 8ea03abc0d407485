//! Jones calculus on vector fields.
//!
//! Conventions (fixed so that Stokes maps are reproducible):
//!
//! * Jones vectors are `(h, v)`; the circular basis is
//!   `σ₊ = (1, −i)/√2`, `σ₋ = (1, +i)/√2`, and `σ₊` has `S3 = +S0`.
//! * A retarder with retardance `δ` and fast axis at `θ` (from horizontal) is
//!   `R(−θ)·diag(1, e^{−iδ})·R(θ)` with `R(θ) = [[cos θ, sin θ], [−sin θ, cos θ]]`.
//!   No global phase is attached, so a half-wave plate at 45° is the pure swap
//!   `[[0, 1], [1, 0]]`.

use std::ops::Mul;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::{power, ScalarField};
use crate::grid::GridSpec;
use crate::mask::PhaseMask;
use crate::scalar::Real;

/// Two co-registered polarization components on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField<T> {
    h: ScalarField<T>,
    v: ScalarField<T>,
}

impl<T: Real> VectorField<T> {
    pub fn new(h: ScalarField<T>, v: ScalarField<T>) -> Result<Self> {
        h.grid().ensure_same(v.grid())?;
        Ok(Self { h, v })
    }

    /// Spatial profile `f` carrying the uniform polarization `jones`.
    pub fn uniform(f: &ScalarField<T>, jones: [Complex<T>; 2]) -> Self {
        Self { h: f.scaled(jones[0]), v: f.scaled(jones[1]) }
    }

    pub fn zeros(grid: GridSpec<T>) -> Self {
        Self { h: ScalarField::zeros(grid), v: ScalarField::zeros(grid) }
    }

    #[inline]
    pub fn grid(&self) -> &GridSpec<T> {
        self.h.grid()
    }

    #[inline]
    pub fn h(&self) -> &ScalarField<T> {
        &self.h
    }

    #[inline]
    pub fn v(&self) -> &ScalarField<T> {
        &self.v
    }

    pub fn into_parts(self) -> (ScalarField<T>, ScalarField<T>) {
        (self.h, self.v)
    }

    /// `power(h) + power(v)`.
    pub fn power(&self) -> T {
        power(&self.h) + power(&self.v)
    }

    /// `Σ (conj(h₁)h₂ + conj(v₁)v₂)·dx·dy`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        Ok(crate::field::inner_product(&self.h, &other.h)?
            + crate::field::inner_product(&self.v, &other.v)?)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self { h: self.h.add(&other.h)?, v: self.v.add(&other.v)? })
    }

    pub fn scaled(&self, s: Complex<T>) -> Self {
        Self { h: self.h.scaled(s), v: self.v.scaled(s) }
    }

    pub fn normalized(&self) -> Self {
        let p = self.power();
        if p > T::zero() {
            self.scaled(Complex::new(T::one() / p.sqrt(), T::zero()))
        } else {
            self.clone()
        }
    }

    /// Projections onto `σ₊` and `σ₋`.
    pub fn circular_components(&self) -> (ScalarField<T>, ScalarField<T>) {
        let s = T::FRAC_1_SQRT_2();
        let i = Complex::new(T::zero(), T::one());
        let plus = self.h.zip_with(&self.v, |h, v| (h + i * v) * s).expect("same grid");
        let minus = self.h.zip_with(&self.v, |h, v| (h - i * v) * s).expect("same grid");
        (plus, minus)
    }

    /// Builds `plus·σ₊ + minus·σ₋`.
    pub fn from_circular(plus: &ScalarField<T>, minus: &ScalarField<T>) -> Result<Self> {
        let s = T::FRAC_1_SQRT_2();
        let i = Complex::new(T::zero(), T::one());
        let h = plus.zip_with(minus, |p, m| (p + m) * s)?;
        let v = plus.zip_with(minus, |p, m| (m - p) * i * s)?;
        Ok(Self { h, v })
    }

    pub(crate) fn map_components<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&ScalarField<T>) -> Result<ScalarField<T>>,
    {
        Ok(Self { h: f(&self.h)?, v: f(&self.v)? })
    }
}

/// Jones vector of `σ₊`.
pub fn sigma_plus<T: Real>() -> [Complex<T>; 2] {
    let s = T::FRAC_1_SQRT_2();
    [Complex::new(s, T::zero()), Complex::new(T::zero(), -s)]
}

/// Jones vector of `σ₋`.
pub fn sigma_minus<T: Real>() -> [Complex<T>; 2] {
    let s = T::FRAC_1_SQRT_2();
    [Complex::new(s, T::zero()), Complex::new(T::zero(), s)]
}

/// Linear polarization at `angle` from horizontal.
pub fn linear<T: Real>(angle: T) -> [Complex<T>; 2] {
    [Complex::new(angle.cos(), T::zero()), Complex::new(angle.sin(), T::zero())]
}

/// 2×2 complex matrix `[[hh, hv], [vh, vv]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesMatrix<T> {
    pub hh: Complex<T>,
    pub hv: Complex<T>,
    pub vh: Complex<T>,
    pub vv: Complex<T>,
}

impl<T: Real> JonesMatrix<T> {
    pub fn new(hh: Complex<T>, hv: Complex<T>, vh: Complex<T>, vv: Complex<T>) -> Self {
        Self { hh, hv, vh, vv }
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
        Self::new(o, z, z, o)
    }

    /// Frame rotation `R(θ)`.
    pub fn rotation(theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        let re = |x: T| Complex::new(x, T::zero());
        Self::new(re(c), re(s), re(-s), re(c))
    }

    #[inline]
    pub fn apply(&self, e: [Complex<T>; 2]) -> [Complex<T>; 2] {
        [self.hh * e[0] + self.hv * e[1], self.vh * e[0] + self.vv * e[1]]
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.hh.conj(), self.vh.conj(), self.hv.conj(), self.vv.conj())
    }

    /// Largest absolute entry of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        [self.hh - other.hh, self.hv - other.hv, self.vh - other.vh, self.vv - other.vv]
            .iter()
            .map(|d| d.norm())
            .fold(T::zero(), T::max)
    }

    /// `‖M†M − I‖` in the max-entry norm.
    pub fn unitarity_error(&self) -> T {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    pub fn trace(&self) -> Complex<T> {
        self.hh + self.vv
    }
}

impl<T: Real> Mul for JonesMatrix<T> {
    type Output = Self;

    fn mul(self, b: Self) -> Self {
        Self::new(
            self.hh * b.hh + self.hv * b.vh,
            self.hh * b.hv + self.hv * b.vv,
            self.vh * b.hh + self.vv * b.vh,
            self.vh * b.hv + self.vv * b.vv,
        )
    }
}

/// Linear retarder with retardance `retardance` and fast axis at `fast_axis`.
pub fn waveplate<T: Real>(retardance: T, fast_axis: T) -> JonesMatrix<T> {
    let z = Complex::new(T::zero(), T::zero());
    let retarder = JonesMatrix::new(
        Complex::new(T::one(), T::zero()),
        z,
        z,
        Complex::from_polar(T::one(), -retardance),
    );
    JonesMatrix::rotation(-fast_axis) * retarder * JonesMatrix::rotation(fast_axis)
}

pub fn half_wave_plate<T: Real>(fast_axis: T) -> JonesMatrix<T> {
    waveplate(T::PI(), fast_axis)
}

pub fn quarter_wave_plate<T: Real>(fast_axis: T) -> JonesMatrix<T> {
    waveplate(T::FRAC_PI_2(), fast_axis)
}

/// Ideal linear polarizer transmitting along `axis`.
pub fn polarizer<T: Real>(axis: T) -> JonesMatrix<T> {
    let (s, c) = axis.sin_cos();
    let re = |x: T| Complex::new(x, T::zero());
    JonesMatrix::new(re(c * c), re(c * s), re(c * s), re(s * s))
}

/// Pixel-wise `m · (h, v)`.
pub fn apply_jones<T: Real>(f: &VectorField<T>, m: &JonesMatrix<T>) -> VectorField<T> {
    let h = f.h.zip_with(&f.v, |h, v| m.hh * h + m.hv * v).expect("same grid");
    let v = f.h.zip_with(&f.v, |h, v| m.vh * h + m.vv * v).expect("same grid");
    VectorField { h, v }
}

/// Phase-only SLM that modulates only the horizontal component.
///
/// A fraction `eta_mod` of the horizontally polarized power receives the
/// displayed phase; the rest is reflected specularly and stays coherent with
/// the modulated light.
#[derive(Debug, Clone, Copy)]
pub struct SlmModel<'a, T> {
    eta_mod: T,
    mask: &'a PhaseMask<T>,
}

impl<'a, T: Real> SlmModel<'a, T> {
    pub fn new(eta_mod: T, mask: &'a PhaseMask<T>) -> Result<Self> {
        if !(eta_mod >= T::zero() && eta_mod <= T::one()) {
            return Err(Error::domain(format!("eta_mod must lie in [0, 1], got {eta_mod}")));
        }
        Ok(Self { eta_mod, mask })
    }

    pub fn eta_mod(&self) -> T {
        self.eta_mod
    }

    pub fn mask(&self) -> &PhaseMask<T> {
        self.mask
    }

    /// Per-pixel complex reflectance `√η·e^{iφ} + √(1−η)` for the H component.
    pub fn reflectance(&self) -> impl Iterator<Item = Complex<T>> + '_ {
        let a = self.eta_mod.sqrt();
        let b = (T::one() - self.eta_mod).sqrt();
        self.mask.phase().iter().map(move |&phi| Complex::from_polar(a, phi) + b)
    }
}

/// Reflection off the SLM: `h' = (√η·e^{iφ} + √(1−η))·h`, `v' = v`.
pub fn slm_reflect<T: Real>(f: &VectorField<T>, slm: &SlmModel<'_, T>) -> Result<VectorField<T>> {
    f.grid().ensure_same(slm.mask.grid())?;
    let amps = f.h.amps().iter().zip(slm.reflectance()).map(|(&h, r)| r * h).collect();
    Ok(VectorField { h: ScalarField::new(*f.grid(), amps)?, v: f.v.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn close(a: [C; 2], b: [C; 2], tol: f64) -> bool {
        (a[0] - b[0]).norm() <= tol && (a[1] - b[1]).norm() <= tol
    }

    #[test]
    fn hwp_at_45_swaps_h_and_v() {
        let out = half_wave_plate(FRAC_PI_4).apply([c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(close(out, [c(0.0, 0.0), c(1.0, 0.0)], 1e-15), "{out:?}");
    }

    #[test]
    fn qwp_at_45_makes_h_circular() {
        let out = quarter_wave_plate(FRAC_PI_4).apply([c(1.0, 0.0), c(0.0, 0.0)]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out[0].norm() - s).abs() < 1e-15 && (out[1].norm() - s).abs() < 1e-15);
        let rel = (out[1] / out[0]).arg();
        assert!((rel.abs() - FRAC_PI_2).abs() < 1e-15);
        // H maps onto σ₋ and V onto σ₊ (up to global phase).
        let m = sigma_minus::<f64>();
        let ov = m[0].conj() * out[0] + m[1].conj() * out[1];
        assert!((ov.norm() - 1.0).abs() < 1e-15);
        let outv = quarter_wave_plate(FRAC_PI_4).apply([c(0.0, 0.0), c(1.0, 0.0)]);
        let p = sigma_plus::<f64>();
        assert!(((p[0].conj() * outv[0] + p[1].conj() * outv[1]).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_retardance_is_identity() {
        for k in 0..8 {
            let m = waveplate(0.0, k as f64 * 0.4);
            assert!(m.max_abs_diff(&JonesMatrix::identity()) < 1e-15);
        }
    }

    #[test]
    fn polarizer_examples() {
        let p0 = polarizer(0.0);
        assert!(close(p0.apply([c(1.0, 0.0), c(0.0, 0.0)]), [c(1.0, 0.0), c(0.0, 0.0)], 0.0));
        assert!(close(p0.apply([c(0.0, 0.0), c(1.0, 0.0)]), [c(0.0, 0.0), c(0.0, 0.0)], 0.0));
        let out = polarizer(FRAC_PI_4).apply([c(1.0, 0.0), c(0.0, 0.0)]);
        assert!((out[0].norm_sqr() + out[1].norm_sqr() - 0.5).abs() < 1e-15);
        let p = polarizer(0.7);
        assert!((p * p).max_abs_diff(&p) < 1e-15);
        assert!((p.trace() - c(1.0, 0.0)).norm() < 1e-15);
    }

    fn test_field() -> VectorField<f64> {
        let g = GridSpec::new(6, 5, 0.1, 0.1).unwrap();
        let h = ScalarField::from_fn(g, |x, y| c(x + 1.0, y * 2.0));
        let v = ScalarField::from_fn(g, |x, y| c(y.cos(), x - 0.3));
        VectorField::new(h, v).unwrap()
    }

    #[test]
    fn apply_jones_examples() {
        let f = test_field();
        assert_eq!(apply_jones(&f, &JonesMatrix::identity()), f);
        let crossed = apply_jones(&apply_jones(&f, &polarizer(0.0)), &polarizer(FRAC_PI_2));
        assert!(crossed.power() < 1e-30);
        let u = waveplate(1.1, 0.3);
        let g = apply_jones(&f, &u);
        assert!((g.power() - f.power()).abs() < 1e-12 * f.power());
    }

    #[test]
    fn circular_round_trip() {
        let f = test_field();
        let (p, m) = f.circular_components();
        let back = VectorField::from_circular(&p, &m).unwrap();
        assert!(back.add(&f.scaled(c(-1.0, 0.0))).unwrap().power() < 1e-28);
    }

    #[test]
    fn slm_examples() {
        let f = test_field();
        let g = *f.grid();
        let mask = PhaseMask::from_fn(g, |x, y| 3.0 * x + y);
        let full = slm_reflect(&f, &SlmModel::new(1.0, &mask).unwrap()).unwrap();
        for (k, (a, b)) in full.h().amps().iter().zip(f.h().amps()).enumerate() {
            let expect = b * C::from_polar(1.0, mask.phase()[k]);
            assert!((a - expect).norm() < 1e-15);
        }
        assert_eq!(full.v(), f.v());
        let none = slm_reflect(&f, &SlmModel::new(0.0, &mask).unwrap()).unwrap();
        assert_eq!(none, f);
        let flat = PhaseMask::zeros(g);
        let part = slm_reflect(&f, &SlmModel::new(0.8, &flat).unwrap()).unwrap();
        for (a, b) in part.h().amps().iter().zip(f.h().amps()) {
            assert!((a - b * 1.341_640_786_499_873_8).norm() < 1e-12);
        }
    }

    #[test]
    fn slm_rejects_bad_inputs() {
        let f = test_field();
        let mask = PhaseMask::zeros(*f.grid());
        assert!(SlmModel::new(1.5, &mask).is_err());
        assert!(SlmModel::new(f64::NAN, &mask).is_err());
        let other = PhaseMask::zeros(GridSpec::new(6, 6, 0.1, 0.1).unwrap());
        let slm = SlmModel::new(0.5, &other).unwrap();
        assert!(matches!(slm_reflect(&f, &slm), Err(Error::Shape(_))));
    }

    #[test]
    fn rotation_composition() {
        let r = JonesMatrix::rotation(0.3) * JonesMatrix::rotation(-0.3);
        assert!(r.max_abs_diff(&JonesMatrix::identity()) < 1e-15);
        let _ = PI;
    }
}
