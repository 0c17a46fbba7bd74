use num_traits::{Float, FloatConst};
use std::fmt::{Debug, Display};

/// Floating-point scalar used by the geometry, radio and placement math.
///
/// Implemented for `f32` and `f64`. The simulation engine itself runs on
/// [`Real`](crate::Real) (`f64`); the generic layers exist so the pure math
/// can be checked against a second precision.
pub trait Scalar:
    Float + FloatConst + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(v: f64) -> Self;

    fn to_f64_lossy(self) -> f64;
}

impl Scalar for f64 {
    #[inline]
    fn lit(v: f64) -> Self {
        v
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    #[inline]
    fn lit(v: f64) -> Self {
        v as f32
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}
