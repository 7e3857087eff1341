use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Scalar type for the geometric kernel: `f32` or `f64`.
///
/// Everything in [`crate::plane`], [`crate::domains`] and [`crate::metrics`]
/// is generic over this trait. The verification probes and the renderer work
/// at `f64`, where all the documented tolerances are pinned.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for lifting an `f64` literal into the working scalar type.
#[inline]
pub(crate) fn cst<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("literal representable in scalar type")
}
