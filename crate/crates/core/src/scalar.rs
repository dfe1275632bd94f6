//! Floating-point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Scalar type for grids, point sets and networks.
///
/// Implemented for `f32` and `f64`. Everything the analyses need beyond
/// [`Float`] is either arithmetic sugar or text round-tripping for the file
/// formats.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this type.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite conversion to f64")
    }

    /// Tolerance used for rank decisions in factorizations: ε^(2/3).
    #[inline]
    fn rank_tolerance() -> Self {
        Self::epsilon().powf(Self::lit(2.0 / 3.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Total order on floats for sorting and heap keys.
#[inline]
pub(crate) fn total_cmp<T: Real>(a: T, b: T) -> std::cmp::Ordering {
    a.as_f64().total_cmp(&b.as_f64())
}
