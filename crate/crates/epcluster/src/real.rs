//! Real scalar abstraction: all core math is generic over the floating
//! point type carrying the lattice parameters (`f32` or `f64`).

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Floating point scalar usable as the real field underlying the complex
/// arithmetic in this crate.
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Debug + Display + LowerExp + Send + Sync + 'static
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
}

impl Real for f32 {
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
}

/// Total order on finite floats: ascending, panics on NaN.
pub(crate) fn cmp_finite<T: Real>(a: T, b: T) -> std::cmp::Ordering {
    a.partial_cmp(&b).expect("non-finite value in comparison")
}
