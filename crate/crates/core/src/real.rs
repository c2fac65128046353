//! Scalar abstraction: every numeric routine in this crate is generic over a
//! floating-point type implementing [`Real`].

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar used for attribute values, probabilities, and
/// distances. Implemented by `f32` and `f64` out of the box; any type with
/// the listed capabilities works.
pub trait Real: Float + FromPrimitive + Sum + Debug + Display + FromStr {
    /// Converts an `f64` constant into the scalar type.
    ///
    /// Panics only if the type cannot represent any value near `x`, which
    /// never happens for `f32`/`f64`.
    fn from_constant(x: f64) -> Self {
        Self::from_f64(x).expect("constant not representable in scalar type")
    }

    /// Converts a count into the scalar type.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count not representable in scalar type")
    }
}

impl<T> Real for T where T: Float + FromPrimitive + Sum + Debug + Display + FromStr {}
