//! Numeric abstraction shared by every algorithm in the crate.
//!
//! The algorithms only add, subtract and compare lengths, so any ordered
//! additive number type works: binary floats for geometric inputs, and
//! exact integers or rationals for tie-heavy matrix inputs where rounding
//! must not blur `<` versus `<=`.

use std::fmt::{Debug, Display};

use num_rational::Rational64;
use num_traits::{Num, ToPrimitive};

/// Ordered additive scalar used for lengths and thresholds.
///
/// `infinity()` is a sentinel that compares above every finite length. It
/// is only ever compared, never fed into arithmetic.
pub trait Scalar: Num + Copy + PartialOrd + Debug + Display + Send + Sync + 'static {
    fn infinity() -> Self;

    /// Lossy conversion used for reporting and tolerances.
    fn to_f64(self) -> f64;

    /// Conversion from a finite float; `None` if not representable.
    fn from_f64(v: f64) -> Option<Self>;

    /// True for values that may appear as lengths: finite and non-negative.
    fn is_valid_length(self) -> bool {
        self >= Self::zero() && self < Self::infinity()
    }
}

/// Floating-point scalars, the only ones that can host Euclidean points.
pub trait RealScalar: Scalar + num_traits::Float {}

impl Scalar for f64 {
    fn infinity() -> Self {
        f64::INFINITY
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }
}

impl Scalar for f32 {
    fn infinity() -> Self {
        f32::INFINITY
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
    fn from_f64(v: f64) -> Option<Self> {
        let x = v as f32;
        x.is_finite().then_some(x)
    }
}

impl RealScalar for f64 {}
impl RealScalar for f32 {}

impl Scalar for i64 {
    fn infinity() -> Self {
        i64::MAX
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
    fn from_f64(v: f64) -> Option<Self> {
        (v.fract() == 0.0 && v.abs() < 9.0e15).then_some(v as i64)
    }
}

impl Scalar for Rational64 {
    fn infinity() -> Self {
        Rational64::new_raw(i64::MAX, 1)
    }
    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
    fn from_f64(v: f64) -> Option<Self> {
        Rational64::approximate_float(v)
    }
}

/// A threshold together with the comparison used against it.
///
/// The decision procedure runs in two flavours: `length <= value` and
/// `length < value`. Every sweep takes a `Threshold` so both share one code
/// path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold<T> {
    pub value: T,
    pub strict: bool,
}

impl<T: Scalar> Threshold<T> {
    pub fn at_most(value: T) -> Self {
        Threshold {
            value,
            strict: false,
        }
    }

    pub fn below(value: T) -> Self {
        Threshold {
            value,
            strict: true,
        }
    }

    #[inline]
    pub fn admits(&self, length: T) -> bool {
        if self.strict {
            length < self.value
        } else {
            length <= self.value
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_dominates() {
        assert!(1e300_f64 < f64::infinity());
        assert!(i64::MAX - 1 < i64::infinity());
        assert!(Rational64::new(1_000_000_000, 3) < Rational64::infinity());
    }

    #[test]
    fn strict_and_inclusive() {
        assert!(Threshold::at_most(2.0).admits(2.0));
        assert!(!Threshold::below(2.0).admits(2.0));
        assert!(Threshold::below(2.0).admits(1.999));
    }

    #[test]
    fn valid_lengths() {
        assert!(0.0_f64.is_valid_length());
        assert!(!(-1.0_f64).is_valid_length());
        assert!(!f64::NAN.is_valid_length());
        assert!(!f64::INFINITY.is_valid_length());
        assert_eq!(i64::from_f64(3.0), Some(3));
        assert_eq!(i64::from_f64(3.5), None);
    }
}
