//! Scalar abstraction: the toolkit's math is generic over an IEEE float type.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Real scalar the toolkit computes with. Implemented for `f32` and `f64`.
pub trait Real: Float + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static {
    /// Lossless-enough conversion from an `f64` constant.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64;
}

impl Real for f32 {
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn to_f64_lossy(self) -> f64 {
        self
    }
}
