//! Scalar trait for the numeric layer.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + Serialize + DeserializeOwned + 'static
{
    /// Slack for unitarity and torus-membership checks.
    const GROUP_TOL: f64;
}

impl Real for f64 {
    const GROUP_TOL: f64 = 1e-9;
}

impl Real for f32 {
    const GROUP_TOL: f64 = 1e-4;
}

#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("finite literal")
}

#[inline]
pub(crate) fn tau<T: Real>() -> T {
    T::TAU()
}
