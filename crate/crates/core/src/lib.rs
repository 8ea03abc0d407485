//! Cylindrical vector beam simulator.
//!
//! Laguerre-Gaussian mode synthesis, Jones-calculus optics with a
//! partially modulating phase-only SLM, angular-spectrum propagation,
//! QWP-scan Stokes polarimetry and a squeezed-light loss budget.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64` or `f32`.
//!
//! Conventions: fields carry `exp(-iωt)` time dependence and propagate as
//! `exp(+ikz)`; `σ₊ = (1, -i)/√2` has `S3 = +S0`.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod field;
pub mod grid;
pub mod io;
pub mod jones;
pub mod laguerre;
pub mod mask;
pub mod pipeline;
pub mod polarimetry;
pub mod propagation;
pub mod scalar;
pub mod squeezing;

pub use error::{Error, Result};
pub use field::{inner_product, power, Raster, ScalarField};
pub use grid::GridSpec;
pub use jones::{
    apply_jones, half_wave_plate, polarizer, quarter_wave_plate, sigma_minus, sigma_plus, slm_reflect, waveplate,
    JonesMatrix, SlmModel, VectorField,
};
pub use laguerre::{assoc_laguerre, lg_mode, LgModeSpec, SampledMode};
pub use mask::{combine, kinoform_lens, lg_phase_mask, quantize, PhaseMask};
pub use pipeline::{convert, ConversionConfig, Flavor, VectorBeamPreset};
pub use polarimetry::{stokes_direct, stokes_from_frames, FrameStack, StokesMaps};
pub use propagation::{angular_spectrum, PropagationConfig, Propagator};
pub use scalar::Real;
pub use squeezing::{budget, loss_for_target, BudgetReport, SqueezingState};

pub use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type Grid = GridSpec<f64>;
pub type Field = ScalarField<f64>;
pub type VField = VectorField<f64>;
pub type Mask = PhaseMask<f64>;
pub type Stokes = StokesMaps<f64>;
pub type Jones = JonesMatrix<f64>;
pub type Conversion = ConversionConfig<f64>;

pub type C32 = Complex<f32>;
pub type Grid32 = GridSpec<f32>;
pub type Field32 = ScalarField<f32>;
pub type VField32 = VectorField<f32>;
pub type Mask32 = PhaseMask<f32>;
pub type Stokes32 = StokesMaps<f32>;
pub type Jones32 = JonesMatrix<f32>;
pub type Conversion32 = ConversionConfig<f32>;
