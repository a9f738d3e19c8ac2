//! Non-negative rationals extended with `+inf`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr<T: Scalar> {
    Finite(Ratio<T>),
    Infinite,
}

/// A value in `[0, +inf]` with measure-theoretic arithmetic.
///
/// Finite values are kept in lowest terms with a positive denominator.
/// `0 * inf = 0`, `x + inf = inf`, `x / inf = 0` for finite `x`, and every
/// finite value is below `inf`. Division by zero and `inf / inf` are errors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtRatio<T: Scalar>(Repr<T>);

impl<T: Scalar> ExtRatio<T> {
    pub fn zero() -> Self {
        ExtRatio(Repr::Finite(Ratio::zero()))
    }

    pub fn one() -> Self {
        ExtRatio(Repr::Finite(Ratio::one()))
    }

    pub fn infinity() -> Self {
        ExtRatio(Repr::Infinite)
    }

    /// `numer / denom`, rejecting zero denominators and negative values.
    pub fn new(numer: T, denom: T) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Self::from_ratio(Ratio::new(numer, denom))
    }

    pub fn from_integer(value: T) -> Result<Self> {
        Self::from_ratio(Ratio::from_integer(value))
    }

    pub fn from_ratio(value: Ratio<T>) -> Result<Self> {
        if value < Ratio::zero() {
            return Err(Error::InvalidNumber(value.to_string()));
        }
        Ok(ExtRatio(Repr::Finite(value)))
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Finite(r) if r.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.0, Repr::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn finite(&self) -> Option<&Ratio<T>> {
        match &self.0 {
            Repr::Finite(r) => Some(r),
            Repr::Infinite => None,
        }
    }

    pub fn into_finite(self) -> Option<Ratio<T>> {
        match self.0 {
            Repr::Finite(r) => Some(r),
            Repr::Infinite => None,
        }
    }

    /// Exact quotient.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        match (&self.0, &rhs.0) {
            (Repr::Finite(a), Repr::Finite(b)) => Ok(ExtRatio(Repr::Finite(a / b))),
            (Repr::Finite(_), Repr::Infinite) => Ok(Self::zero()),
            (Repr::Infinite, Repr::Finite(_)) => Ok(Self::infinity()),
            (Repr::Infinite, Repr::Infinite) => Err(Error::IndeterminateRatio),
        }
    }

    /// Multiply by a non-negative finite rational.
    pub fn scale(&self, factor: &Ratio<T>) -> Result<Self> {
        Self::from_ratio(factor.clone())?;
        Ok(self * &ExtRatio(Repr::Finite(factor.clone())))
    }
}

impl<T: Scalar> Default for ExtRatio<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> From<Ratio<T>> for ExtRatio<T> {
    /// Panics on negative input; use [`ExtRatio::from_ratio`] for untrusted values.
    fn from(value: Ratio<T>) -> Self {
        Self::from_ratio(value).expect("negative rational")
    }
}

impl<T: Scalar> Add<&ExtRatio<T>> for &ExtRatio<T> {
    type Output = ExtRatio<T>;

    fn add(self, rhs: &ExtRatio<T>) -> ExtRatio<T> {
        match (&self.0, &rhs.0) {
            (Repr::Finite(a), Repr::Finite(b)) => ExtRatio(Repr::Finite(a + b)),
            _ => ExtRatio::infinity(),
        }
    }
}

impl<T: Scalar> Add for ExtRatio<T> {
    type Output = ExtRatio<T>;

    fn add(self, rhs: ExtRatio<T>) -> ExtRatio<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Mul<&ExtRatio<T>> for &ExtRatio<T> {
    type Output = ExtRatio<T>;

    fn mul(self, rhs: &ExtRatio<T>) -> ExtRatio<T> {
        match (&self.0, &rhs.0) {
            (Repr::Finite(a), Repr::Finite(b)) => ExtRatio(Repr::Finite(a * b)),
            _ if self.is_zero() || rhs.is_zero() => ExtRatio::zero(),
            _ => ExtRatio::infinity(),
        }
    }
}

impl<T: Scalar> Mul for ExtRatio<T> {
    type Output = ExtRatio<T>;

    fn mul(self, rhs: ExtRatio<T>) -> ExtRatio<T> {
        &self * &rhs
    }
}

impl<T: Scalar> Sum for ExtRatio<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl<'a, T: Scalar> Sum<&'a ExtRatio<T>> for ExtRatio<T> {
    fn sum<I: Iterator<Item = &'a Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| &acc + x)
    }
}

impl<T: Scalar> PartialEq<Ratio<T>> for ExtRatio<T> {
    fn eq(&self, other: &Ratio<T>) -> bool {
        self.finite() == Some(other)
    }
}

impl<T: Scalar> PartialOrd<Ratio<T>> for ExtRatio<T> {
    fn partial_cmp(&self, other: &Ratio<T>) -> Option<Ordering> {
        Some(match self.finite() {
            Some(r) => r.cmp(other),
            None => Ordering::Greater,
        })
    }
}

/// Lowest-terms rendering: `"5/6"`, `"3"`, `"inf"`.
pub fn format_ratio<T: Scalar>(r: &Ratio<T>) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"p/q"` or `"p"`; the result is reduced, so `"6/4"` reads as `3/2`.
pub fn parse_ratio<T: Scalar>(s: &str) -> Result<Ratio<T>> {
    let bad = || Error::InvalidNumber(s.to_string());
    let trimmed = s.trim();
    let (numer, denom) = match trimmed.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (trimmed, "1"),
    };
    let numer: T = numer.parse().map_err(|_| bad())?;
    let denom: T = denom.parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(Ratio::new(numer, denom))
}

impl<T: Scalar> fmt::Display for ExtRatio<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Finite(r) => f.write_str(&format_ratio(r)),
            Repr::Infinite => f.write_str("inf"),
        }
    }
}

impl<T: Scalar> FromStr for ExtRatio<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "inf" {
            return Ok(Self::infinity());
        }
        Self::from_ratio(parse_ratio(s)?)
    }
}

impl<T: Scalar> Serialize for ExtRatio<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de, T: Scalar> Deserialize<'de> for ExtRatio<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
