//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};
use rustfft::FftNum;

/// Floating point scalar the toolkit can run on (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + FftNum + Default + Debug + Display + LowerExp + Sum
{
    /// Relative agreement demanded from finite-difference self checks.
    ///
    /// Derivatives of tabulated dispersion are differences of large nearly
    /// equal numbers, so the achievable agreement depends on the precision.
    fn fd_tolerance() -> Self;

    /// Converts an `f64` literal. Never fails for the supported types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }
}

impl Real for f32 {
    fn fd_tolerance() -> Self {
        1e-3
    }
}

impl Real for f64 {
    fn fd_tolerance() -> Self {
        1e-6
    }
}

/// Shorthand for [`Real::lit`].
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::lit(x)
}
