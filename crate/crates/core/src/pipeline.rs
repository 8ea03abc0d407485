//! Double-reflection collinear mode converter and polarizer imaging.
//!
//! The input is a Gaussian polarized at 45°. The first SLM half modulates the
//! H component, a half-wave plate swaps H and V, the second half modulates the
//! formerly untouched component, and a quarter-wave plate turns the two
//! orthogonal linear arms into opposite circular states. With the default
//! 45° plates the arm modulated first leaves as `σ₊`, the other as `σ₋`.

use num_complex::Complex;

use crate::analysis::{count_circular_peaks, dominant_harmonic, lobe_rotation, ring_profile};
use crate::error::{Error, Result};
use crate::field::{Raster, ScalarField};
use crate::grid::GridSpec;
use crate::jones::{apply_jones, half_wave_plate, linear, polarizer, quarter_wave_plate, slm_reflect, SlmModel, VectorField};
use crate::laguerre::{lg_mode, LgModeSpec};
use crate::mask::{combine, kinoform_lens, lg_phase_mask, quantize, PhaseMask};
use crate::propagation::{PropagationConfig, Propagator};
use crate::scalar::Real;

/// Relative prominence used by [`spiral_arm_count`].
pub const ARM_PROMINENCE: f64 = 0.1;

/// Number of azimuthal samples taken on analysis rings.
pub const RING_SAMPLES: usize = 720;

/// Relative phase between the `±l` arms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// `χ = 0`: radially polarized for `l = 1`.
    RadialLike,
    /// `χ = π`: azimuthally polarized for `l = 1`.
    AzimuthalLike,
}

impl Flavor {
    /// Target relative phase `χ` of the `σ₋` arm.
    pub fn chi<T: Real>(self) -> T {
        match self {
            Flavor::RadialLike => T::zero(),
            Flavor::AzimuthalLike => T::PI(),
        }
    }

    /// Constant added to the second mask so that the converter output carries
    /// relative phase [`Flavor::chi`]. The 45° quarter-wave plate puts the two
    /// arms a quarter wave apart, which the extra `π/2` cancels.
    pub fn mask_offset<T: Real>(self) -> T {
        self.chi::<T>() + T::FRAC_PI_2()
    }
}

/// A vector mode built from `LG_{p,+l}` and `LG_{p,−l}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VectorBeamPreset {
    pub p: u32,
    pub l: u32,
    pub flavor: Flavor,
}

impl VectorBeamPreset {
    pub fn new(p: i32, l: i32, flavor: Flavor) -> Result<Self> {
        if p < 0 || l < 1 {
            return Err(Error::domain(format!("vector beam preset needs p >= 0 and l >= 1, got p={p}, l={l}")));
        }
        Ok(Self { p: p as u32, l: l as u32, flavor })
    }

    /// The six modes reported for the experiment: `p ∈ {0, 1}`, `l ∈ {1, 2, 3}`.
    pub fn supported_modes(flavor: Flavor) -> Vec<Self> {
        (0..=1)
            .flat_map(|p| (1..=3).map(move |l| Self { p, l, flavor }))
            .collect()
    }
}

/// Per-mask adjustments used to match the two arms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskTweak<T> {
    /// Multiplies the waist used for the radial sign pattern.
    pub waist_scale: T,
    /// Kinoform focal length added to this mask; `None` disables it.
    pub focal_length: Option<T>,
}

impl<T: Real> Default for MaskTweak<T> {
    fn default() -> Self {
        Self { waist_scale: T::one(), focal_length: None }
    }
}

/// Options for [`preset_masks_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskOptions<T> {
    pub wavelength: T,
    pub tweak_a: MaskTweak<T>,
    pub tweak_b: MaskTweak<T>,
    /// Quantization levels (0 keeps the masks continuous).
    pub levels: u32,
}

impl<T: Real> MaskOptions<T> {
    pub fn new(wavelength: T) -> Self {
        Self { wavelength, tweak_a: MaskTweak::default(), tweak_b: MaskTweak::default(), levels: 0 }
    }

    /// Same kinoform on both halves.
    pub fn with_kinoform(mut self, focal_length: T) -> Self {
        self.tweak_a.focal_length = Some(focal_length);
        self.tweak_b.focal_length = Some(focal_length);
        self
    }
}

/// `(mask_a, mask_b)` = phase of `LG_{p,+l}` and of `LG_{p,−l}` shifted by the flavor offset.
pub fn preset_masks<T: Real>(preset: &VectorBeamPreset, w0: T, grid: &GridSpec<T>) -> Result<(PhaseMask<T>, PhaseMask<T>)> {
    let l = preset.l as i32;
    let p = preset.p as i32;
    let a = lg_phase_mask(p, l, w0, grid)?;
    let b = lg_phase_mask(p, -l, w0, grid)?.offset(preset.flavor.mask_offset());
    Ok((a, b))
}

/// [`preset_masks`] with per-half waist scaling, kinoform lenses and quantization.
pub fn preset_masks_with<T: Real>(
    preset: &VectorBeamPreset,
    w0: T,
    grid: &GridSpec<T>,
    opts: &MaskOptions<T>,
) -> Result<(PhaseMask<T>, PhaseMask<T>)> {
    let l = preset.l as i32;
    let p = preset.p as i32;
    let build = |charge: i32, tweak: &MaskTweak<T>, offset: T| -> Result<PhaseMask<T>> {
        let mut m = lg_phase_mask(p, charge, w0 * tweak.waist_scale, grid)?.offset(offset);
        if let Some(f) = tweak.focal_length {
            m = combine(&[&m, &kinoform_lens(f, opts.wavelength, grid)?])?;
        }
        if opts.levels > 0 {
            m = quantize(&m, opts.levels)?;
        }
        Ok(m)
    };
    Ok((
        build(l, &opts.tweak_a, T::zero())?,
        build(-l, &opts.tweak_b, preset.flavor.mask_offset())?,
    ))
}

/// Everything [`convert`] needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ConversionConfig<T> {
    /// Input Gaussian waist (at the SLM).
    pub w0: T,
    pub wavelength: T,
    /// First SLM half; acts on the initial H component.
    pub mask_a: PhaseMask<T>,
    pub mask_b: PhaseMask<T>,
    pub eta_mod: T,
    /// Free-space path between the two SLM halves.
    pub inter_half_distance: T,
    pub hwp_angle: T,
    pub qwp_angle: T,
    /// Free-space path from the quarter-wave plate to the analysis plane.
    pub observation_distance: T,
    pub propagation: PropagationConfig,
}

impl<T: Real> ConversionConfig<T> {
    /// Defaults: 45° plates, no propagation, band-limited propagator.
    pub fn new(w0: T, wavelength: T, mask_a: PhaseMask<T>, mask_b: PhaseMask<T>, eta_mod: T) -> Self {
        Self {
            w0,
            wavelength,
            mask_a,
            mask_b,
            eta_mod,
            inter_half_distance: T::zero(),
            hwp_angle: T::FRAC_PI_4(),
            qwp_angle: T::FRAC_PI_4(),
            observation_distance: T::zero(),
            propagation: PropagationConfig::default(),
        }
    }

    /// Masks from a preset on `grid`.
    pub fn from_preset(preset: &VectorBeamPreset, w0: T, wavelength: T, grid: &GridSpec<T>, eta_mod: T) -> Result<Self> {
        let (a, b) = preset_masks(preset, w0, grid)?;
        Ok(Self::new(w0, wavelength, a, b, eta_mod))
    }

    pub fn grid(&self) -> &GridSpec<T> {
        self.mask_a.grid()
    }

    pub fn validate(&self) -> Result<()> {
        self.mask_a.grid().ensure_same(self.mask_b.grid())?;
        if !(self.eta_mod >= T::zero() && self.eta_mod <= T::one()) {
            return Err(Error::domain(format!("eta_mod must lie in [0, 1], got {}", self.eta_mod)));
        }
        if !(self.w0 > T::zero()) || !(self.wavelength > T::zero()) {
            return Err(Error::domain("waist and wavelength must be positive"));
        }
        Ok(())
    }
}

/// Unit-power Gaussian at the waist, linearly polarized at 45°.
pub fn input_beam<T: Real>(w0: T, wavelength: T, grid: &GridSpec<T>) -> Result<VectorField<T>> {
    let g = lg_mode(&LgModeSpec::new(0, 0, w0, wavelength)?, grid).field;
    Ok(VectorField::uniform(&g, linear(T::FRAC_PI_4())))
}

/// Runs the full conversion chain.
pub fn convert<T: Real>(cfg: &ConversionConfig<T>) -> Result<VectorField<T>> {
    cfg.validate()?;
    let prop = Propagator::new(cfg.wavelength, cfg.propagation)?;
    let beam = input_beam(cfg.w0, cfg.wavelength, cfg.grid())?;
    let beam = slm_reflect(&beam, &SlmModel::new(cfg.eta_mod, &cfg.mask_a)?)?;
    let beam = prop.propagate_vector(&beam, cfg.inter_half_distance)?;
    let beam = apply_jones(&beam, &half_wave_plate(cfg.hwp_angle));
    let beam = slm_reflect(&beam, &SlmModel::new(cfg.eta_mod, &cfg.mask_b)?)?;
    let beam = apply_jones(&beam, &quarter_wave_plate(cfg.qwp_angle));
    prop.propagate_vector(&beam, cfg.observation_distance)
}

/// Unit-power `(LG_{p,+l}·σ₊ + e^{iχ}·LG_{p,−l}·σ₋)/√2` at the waist.
pub fn target_superposition<T: Real>(
    preset: &VectorBeamPreset,
    w0: T,
    wavelength: T,
    grid: &GridSpec<T>,
) -> Result<VectorField<T>> {
    let l = preset.l as i32;
    let p = preset.p as i32;
    let s = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    let plus = lg_mode(&LgModeSpec::new(p, l, w0, wavelength)?, grid).field.scaled(s);
    let minus = lg_mode(&LgModeSpec::new(p, -l, w0, wavelength)?, grid)
        .field
        .scaled(Complex::from_polar(T::FRAC_1_SQRT_2(), preset.flavor.chi()));
    VectorField::from_circular(&plus, &minus)
}

/// `|⟨a, b⟩|² / (‖a‖²·‖b‖²)`: the power fraction of `b` along `a`.
pub fn overlap_fraction<T: Real>(a: &VectorField<T>, b: &VectorField<T>) -> Result<T> {
    let ip = a.inner(b)?;
    let den = a.power() * b.power();
    if !(den > T::zero()) {
        return Err(Error::domain("overlap of a zero field is undefined"));
    }
    Ok(ip.norm_sqr() / den)
}

/// Scalar version of [`overlap_fraction`].
pub fn scalar_overlap_fraction<T: Real>(a: &ScalarField<T>, b: &ScalarField<T>) -> Result<T> {
    let ip = crate::field::inner_product(a, b)?;
    let den = a.power() * b.power();
    if !(den > T::zero()) {
        return Err(Error::domain("overlap of a zero field is undefined"));
    }
    Ok(ip.norm_sqr() / den)
}

/// Camera image behind a linear polarizer at `axis`.
pub fn polarizer_image<T: Real>(f: &VectorField<T>, axis: T) -> Raster<T> {
    let out = apply_jones(f, &polarizer(axis));
    let values = out
        .h()
        .amps()
        .iter()
        .zip(out.v().amps())
        .map(|(h, v)| h.norm_sqr() + v.norm_sqr())
        .collect();
    Raster { grid: *f.grid(), values }
}

/// Number of azimuthal intensity maxima on a centred ring.
pub fn spiral_arm_count<T: Real>(image: &Raster<T>, radius: T) -> Result<usize> {
    let ring = ring_profile(image, radius, RING_SAMPLES)?;
    let n = T::from_usize_lossy(ring.len());
    let mean = ring.iter().fold(T::zero(), |a, &b| a + b) / n;
    let max = image.max();
    if !(mean > T::lit(1e-9) * max) {
        return Err(Error::precondition(format!("ring at r = {radius} is dark; arm count is undefined")));
    }
    let lo = ring.iter().copied().fold(T::infinity(), T::min);
    let hi = ring.iter().copied().fold(T::neg_infinity(), T::max);
    if hi - lo <= T::lit(1e-9) * hi {
        return Err(Error::precondition(format!("ring at r = {radius} is uniform; arm count is undefined")));
    }
    Ok(count_circular_peaks(&ring, T::lit(ARM_PROMINENCE)))
}

/// Rotation (radians) of the `m`-fold lobe pattern between two rings.
pub fn lobe_twist<T: Real>(image: &Raster<T>, r_inner: T, r_outer: T, m: usize) -> Result<T> {
    let inner = ring_profile(image, r_inner, RING_SAMPLES)?;
    let outer = ring_profile(image, r_outer, RING_SAMPLES)?;
    Ok(lobe_rotation(&inner, &outer, m))
}

/// Highest harmonic considered by [`spiral_twist`].
pub const TWIST_MAX_HARMONIC: usize = 12;

/// Lobe rotation between two rings, measured on the harmonic that dominates
/// the inner ring. Returns `(order, rotation)`.
pub fn spiral_twist<T: Real>(image: &Raster<T>, r_inner: T, r_outer: T) -> Result<(usize, T)> {
    let inner = ring_profile(image, r_inner, RING_SAMPLES)?;
    let outer = ring_profile(image, r_outer, RING_SAMPLES)?;
    let peak = inner.iter().copied().fold(T::zero(), T::max);
    if !(peak > T::lit(1e-9) * image.max()) {
        return Err(Error::precondition(format!("ring at r = {r_inner} is dark; lobe azimuth is undefined")));
    }
    let m = dominant_harmonic(&inner, TWIST_MAX_HARMONIC).order;
    Ok((m, lobe_rotation(&inner, &outer, m)))
}
