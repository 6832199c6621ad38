//! Scalar abstraction for distribution masses.
//!
//! Every distribution, majorization check and metric in this crate is generic
//! over [`Scalar`]. The exact instantiation ([`crate::Rational`]) compares with
//! zero tolerance, so strictness verdicts are decided exactly. The floating
//! point instantiations compare within [`Scalar::tolerance`] and are meant for
//! quick exploration, not for deciding ties.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, MulAssign, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, NumAssign, Signed, ToPrimitive};

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + NumAssign
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Send
    + Sync
    + 'static
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// `true` when arithmetic is exact and [`Scalar::tolerance`] is zero.
    const EXACT: bool;

    /// Absolute slack used by every approximate comparison.
    fn tolerance() -> Self;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar")
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i64(num).expect("numerator representable")
            / Self::from_i64(den).expect("denominator representable")
    }

    /// `1 / n`.
    fn reciprocal(n: usize) -> Self {
        Self::one() / Self::from_count(n)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        let diff = self.clone() - other.clone();
        diff.abs() <= Self::tolerance()
    }

    /// `self <= other` up to tolerance.
    fn approx_le(&self, other: &Self) -> bool {
        *self <= other.clone() + Self::tolerance()
    }

    /// `self < other` by more than the tolerance.
    fn definitely_lt(&self, other: &Self) -> bool {
        self.clone() + Self::tolerance() < *other
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= Self::tolerance()
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn tolerance() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn tolerance() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn tolerance() -> Self {
        1e-5
    }
}

/// Sum of a slice.
pub fn total<S: Scalar>(values: &[S]) -> S {
    let mut acc = S::zero();
    for v in values {
        acc += v;
    }
    acc
}

/// Decreasing rearrangement.
pub fn sorted_desc<S: Scalar>(values: &[S]) -> Vec<S> {
    let mut out = values.to_vec();
    out.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    out
}

/// Increasing rearrangement.
pub fn sorted_asc<S: Scalar>(values: &[S]) -> Vec<S> {
    let mut out = values.to_vec();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    out
}

/// Partial sums `s_k = v_1 + ... + v_k`, `k = 1..=n`.
pub fn prefix_sums<S: Scalar>(values: &[S]) -> Vec<S> {
    let mut acc = S::zero();
    values
        .iter()
        .map(|v| {
            acc += v;
            acc.clone()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_tolerance_is_zero() {
        let third = BigRational::from_ratio(1, 3);
        assert!(third.approx_eq(&BigRational::from_ratio(2, 6)));
        assert!(!third.approx_eq(&BigRational::from_ratio(333, 1000)));
        assert!(BigRational::from_ratio(1, 4).definitely_lt(&third));
    }

    #[test]
    fn float_tolerance_absorbs_rounding() {
        let x = 0.1f64 + 0.2;
        assert!(x.approx_eq(&0.3));
        assert!(!x.definitely_lt(&0.3));
    }

    #[test]
    fn rearrangements() {
        let v: Vec<f64> = vec![0.2, 0.5, 0.3];
        assert_eq!(sorted_desc(&v), vec![0.5, 0.3, 0.2]);
        assert_eq!(sorted_asc(&v), vec![0.2, 0.3, 0.5]);
        let p = prefix_sums(&sorted_desc(&v));
        assert!(p[2].approx_eq(&1.0));
    }
}
