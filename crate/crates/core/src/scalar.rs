//! Floating-point abstraction shared by every numerical routine.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Real scalar the simulator is generic over: `f32` or `f64`.
///
/// Everything that touches a field raster is written against this trait so
/// that a single-precision build can trade accuracy for memory on large grids.
/// Tolerances quoted in the tests apply to `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Default + Debug + Display + Send + Sync
{
    /// Converts an `f64` literal. Never fails for finite input.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize fits in a float")
    }

    #[inline]
    fn from_i64_lossy(n: i64) -> Self {
        Self::from_i64(n).expect("i64 fits in a float")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    /// Wraps a phase into `[0, 2π)`.
    #[inline]
    fn wrap_phase(self) -> Self {
        let tau = Self::TAU();
        let w = self % tau;
        let w = if w < Self::zero() { w + tau } else { w };
        // `x % τ + τ` can round up to exactly τ for tiny negative x.
        if w >= tau {
            Self::zero()
        } else {
            w
        }
    }

    /// Wraps a phase difference into `(-π, π]`.
    #[inline]
    fn wrap_signed(self) -> Self {
        let pi = Self::PI();
        let w = (self + pi).wrap_phase() - pi;
        if w <= -pi {
            w + Self::TAU()
        } else {
            w
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}
