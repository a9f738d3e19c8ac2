//! Integer backing for the exact rationals used throughout the crate.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed};

/// Integer type backing every rational value.
///
/// Everything in the crate is generic over this trait. `num_bigint::BigInt`
/// never overflows and is what the crate-root aliases use; `i64` and `i128`
/// are faster but overflow on adversarial inputs.
pub trait Scalar:
    Integer + Signed + Clone + Hash + Debug + Display + FromStr + FromPrimitive + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromStr
        + FromPrimitive
        + Send
        + Sync
        + 'static
{
}
