//! The real scalar field underneath every exact computation.
//!
//! Everything in this crate is generic over a type implementing [`Scalar`],
//! an exact ordered field such as `BigRational` or `Ratio<i64>`. Floating
//! point types are deliberately not admitted: the trait requires `Eq` and
//! `Ord`, which `f32`/`f64` do not provide.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_traits::{FromPrimitive, Num, Signed};

/// An exact ordered field of characteristic zero.
pub trait Scalar:
    Clone + Debug + Display + Eq + Ord + Hash + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// Parses `p` or `p/q`.
    fn parse_scalar(s: &str) -> Option<Self>;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("scalar type cannot represent a machine integer")
    }
}

impl<T> Scalar for T
where
    T: Clone
        + Debug
        + Display
        + Eq
        + Ord
        + Hash
        + Num
        + Signed
        + FromPrimitive
        + FromStr
        + Send
        + Sync
        + 'static,
{
    fn parse_scalar(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}
