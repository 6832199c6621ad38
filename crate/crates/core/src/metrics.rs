//! Security metrics that respect (or reverse) majorization.
//!
//! Guesswork, marginal guesswork, α-guesswork and variation distance to
//! uniformity are rational in the masses and are returned in the input
//! scalar. Entropies are logarithmic and come back as `f64`; comparisons of
//! entropies use [`ENTROPY_TOLERANCE`].

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{sorted_asc, sorted_desc, total, Scalar};

/// Absolute tolerance for comparing entropies computed in `f64`.
pub const ENTROPY_TOLERANCE: f64 = 1e-12;

/// Whether a metric insists on a probability vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Normalization {
    #[default]
    Strict,
    /// Accept any nonnegative vector (sums of sub-distributions).
    Unchecked,
}

fn check<S: Scalar>(x: &[S], norm: Normalization) -> Result<()> {
    if x.is_empty() {
        return Err(Error::InvalidDistribution("empty vector".into()));
    }
    if x.iter().any(|v| v.is_negative() && !v.is_negligible()) {
        return Err(Error::InvalidDistribution("negative entry".into()));
    }
    if norm == Normalization::Strict && !total(x).approx_eq(&S::one()) {
        return Err(Error::InvalidDistribution(format!("entries sum to {}, not 1", total(x))));
    }
    Ok(())
}

fn check_alpha<S: Scalar>(alpha: &S) -> Result<()> {
    if !(*alpha > S::zero()) || *alpha > S::one() {
        return Err(Error::ParameterOutOfRange(format!("alpha = {alpha} is outside (0, 1]")));
    }
    Ok(())
}

/// `-Σ x_i log₂ x_i` in bits.
pub fn shannon_entropy<S: Scalar>(x: &[S]) -> Result<f64> {
    check(x, Normalization::Strict)?;
    // summing in sorted order keeps the result bit-identical under reordering
    Ok(sorted_desc(x)
        .iter()
        .map(|v| v.to_f64_lossy())
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum())
}

/// `log₂(Σ x_i^order) / (1 - order)` in bits.
pub fn renyi_entropy<S: Scalar>(x: &[S], order: f64) -> Result<f64> {
    check(x, Normalization::Strict)?;
    if !(order > 0.0) || order == 1.0 || !order.is_finite() {
        return Err(Error::ParameterOutOfRange(format!(
            "Rényi order {order} must be positive, finite and not 1"
        )));
    }
    let s: f64 = sorted_desc(x).iter().map(|v| v.to_f64_lossy()).filter(|&p| p > 0.0).map(|p| p.powf(order)).sum();
    Ok(s.log2() / (1.0 - order))
}

/// `Σ x_i^k`, exact for exact scalars. For integer Rényi orders this decides
/// entropy ties without rounding.
pub fn power_sum<S: Scalar>(x: &[S], k: u32) -> S {
    let mut acc = S::zero();
    for v in x {
        let mut p = S::one();
        for _ in 0..k {
            p *= v;
        }
        acc += &p;
    }
    acc
}

/// `Σ i · x_[i]`, the expected number of guesses in decreasing-mass order.
pub fn guesswork<S: Scalar>(x: &[S]) -> Result<S> {
    guesswork_with(x, Normalization::Strict)
}

pub fn guesswork_with<S: Scalar>(x: &[S], norm: Normalization) -> Result<S> {
    check(x, norm)?;
    let mut acc = S::zero();
    for (i, v) in sorted_desc(x).iter().enumerate() {
        let mut t = S::from_count(i + 1);
        t *= v;
        acc += &t;
    }
    Ok(acc)
}

/// Fewest guesses whose cumulative mass reaches `alpha` (`>=` counts).
pub fn marginal_guesswork<S: Scalar>(x: &[S], alpha: &S) -> Result<usize> {
    check(x, Normalization::Strict)?;
    check_alpha(alpha)?;
    Ok(marginal_unchecked(&sorted_desc(x), alpha))
}

fn marginal_unchecked<S: Scalar>(sorted: &[S], alpha: &S) -> usize {
    let mut acc = S::zero();
    for (i, v) in sorted.iter().enumerate() {
        acc += v;
        if alpha.approx_le(&acc) {
            return i + 1;
        }
    }
    sorted.len()
}

/// α-guesswork: `w - w·Σ_{i≤w} x_[i] + Σ_{i≤w} i·x_[i]` with `w` the marginal
/// guesswork at `alpha`.
pub fn alpha_guesswork<S: Scalar>(x: &[S], alpha: &S) -> Result<S> {
    check(x, Normalization::Strict)?;
    check_alpha(alpha)?;
    let sorted = sorted_desc(x);
    let w = marginal_unchecked(&sorted, alpha);
    let covered = total(&sorted[..w]);
    let mut weighted = S::zero();
    for (i, v) in sorted[..w].iter().enumerate() {
        let mut t = S::from_count(i + 1);
        t *= v;
        weighted += &t;
    }
    let wn = S::from_count(w);
    Ok(wn.clone() - wn * covered + weighted)
}

/// Variation distance to the uniform distribution of the same length, from
/// the decreasing rearrangement: `Σ_{i≤k} x_[i] - k/n` with
/// `k = max{i : x_[i] >= 1/n}`.
pub fn variation_to_uniform<S: Scalar>(x: &[S]) -> Result<S> {
    check(x, Normalization::Strict)?;
    let n = x.len();
    let level = S::reciprocal(n);
    let sorted = sorted_desc(x);
    let k = sorted.iter().take_while(|v| **v >= level).count();
    let value = total(&sorted[..k]) - S::from_count(k) / S::from_count(n);
    debug_assert!(variation_to_uniform_increasing(x).map(|alt| alt.approx_eq(&value)).unwrap_or(false));
    Ok(value)
}

/// Same quantity from the increasing rearrangement: `q/n - Σ_{i≤q} x_(i)`
/// with `q = max{i : x_(i) <= 1/n}`.
pub fn variation_to_uniform_increasing<S: Scalar>(x: &[S]) -> Result<S> {
    check(x, Normalization::Strict)?;
    let n = x.len();
    let level = S::reciprocal(n);
    let sorted = sorted_asc(x);
    let q = sorted.iter().take_while(|v| **v <= level).count();
    Ok(S::from_count(q) / S::from_count(n) - total(&sorted[..q]))
}

#[derive(Clone, Debug, PartialEq)]
pub enum MetricKind {
    Shannon,
    Renyi(f64),
    Guesswork,
    MarginalGuesswork(String),
    AlphaGuesswork(String),
    VariationToUniform,
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricKind::Shannon => write!(f, "shannon_entropy"),
            MetricKind::Renyi(o) => write!(f, "renyi_entropy[{o}]"),
            MetricKind::Guesswork => write!(f, "guesswork"),
            MetricKind::MarginalGuesswork(a) => write!(f, "marginal_guesswork[{a}]"),
            MetricKind::AlphaGuesswork(a) => write!(f, "alpha_guesswork[{a}]"),
            MetricKind::VariationToUniform => write!(f, "variation_to_uniform"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value<S> {
    Exact(S),
    Count(usize),
    Real(f64),
}

impl<S: Scalar> fmt::Display for Value<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(v) => write!(f, "{v}"),
            Value::Count(c) => write!(f, "{c}"),
            Value::Real(r) => write!(f, "{r:.15}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricValue<S> {
    pub kind: MetricKind,
    pub value: Value<S>,
}

/// Every metric for one vector, in a fixed order.
pub fn all_metrics<S: Scalar>(x: &[S], alpha: Option<&S>, renyi: Option<f64>) -> Result<Vec<MetricValue<S>>> {
    let mut out = vec![MetricValue { kind: MetricKind::Shannon, value: Value::Real(shannon_entropy(x)?) }];
    if let Some(order) = renyi {
        out.push(MetricValue { kind: MetricKind::Renyi(order), value: Value::Real(renyi_entropy(x, order)?) });
    }
    out.push(MetricValue { kind: MetricKind::Guesswork, value: Value::Exact(guesswork(x)?) });
    if let Some(a) = alpha {
        out.push(MetricValue {
            kind: MetricKind::MarginalGuesswork(a.to_string()),
            value: Value::Count(marginal_guesswork(x, a)?),
        });
        out.push(MetricValue {
            kind: MetricKind::AlphaGuesswork(a.to_string()),
            value: Value::Exact(alpha_guesswork(x, a)?),
        });
    }
    out.push(MetricValue { kind: MetricKind::VariationToUniform, value: Value::Exact(variation_to_uniform(x)?) });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::Signed;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn uniform(n: usize) -> Vec<Rational> {
        vec![Rational::reciprocal(n); n]
    }

    fn point(n: usize) -> Vec<Rational> {
        let mut v = vec![r(0, 1); n];
        v[n - 1] = r(1, 1);
        v
    }

    // ½ Σ |x_i - 1/n|
    fn half_l1(x: &[Rational]) -> Rational {
        let u = Rational::reciprocal(x.len());
        let mut acc = r(0, 1);
        for v in x {
            acc += (v.clone() - u.clone()).abs();
        }
        acc / r(2, 1)
    }

    // ∫_0^{⌈α⌉} w_β dβ as a sum of whole rectangles, plus (1-⌈α⌉)·w_α
    fn alpha_guesswork_by_rectangles(x: &[Rational], alpha: &Rational) -> Rational {
        let sorted = sorted_desc(x);
        let w = marginal_guesswork(x, alpha).unwrap();
        let mut area = r(0, 1);
        let mut lower = r(0, 1);
        for i in 1..=w {
            let upper = total(&sorted[..i]);
            area += Rational::from_count(i) * (upper.clone() - lower);
            lower = upper;
        }
        let ceil = lower;
        (r(1, 1) - ceil) * Rational::from_count(w) + area
    }

    #[test]
    fn shannon_examples() {
        assert!((shannon_entropy(&uniform(4)).unwrap() - 2.0).abs() < ENTROPY_TOLERANCE);
        assert_eq!(shannon_entropy(&point(3)).unwrap(), 0.0);
        let x = vec![r(1, 2), r(1, 4), r(1, 4)];
        assert!((shannon_entropy(&x).unwrap() - 1.5).abs() < ENTROPY_TOLERANCE);
    }

    #[test]
    fn renyi_examples() {
        for order in [0.5, 2.0, 3.0] {
            assert!((renyi_entropy(&uniform(8), order).unwrap() - 3.0).abs() < ENTROPY_TOLERANCE);
        }
        assert!((renyi_entropy(&[r(1, 2), r(1, 2)], 2.0).unwrap() - 1.0).abs() < ENTROPY_TOLERANCE);
        let x = [r(3, 4), r(1, 4)];
        assert_eq!(power_sum(&x, 2), r(5, 8));
        let expected = (8.0f64 / 5.0).log2();
        assert!((renyi_entropy(&x, 2.0).unwrap() - expected).abs() < ENTROPY_TOLERANCE);
        assert!(matches!(renyi_entropy(&x, 1.0), Err(Error::ParameterOutOfRange(_))));
    }

    #[test]
    fn guesswork_examples() {
        assert_eq!(guesswork(&point(5)).unwrap(), r(1, 1));
        assert_eq!(guesswork(&uniform(5)).unwrap(), r(3, 1));
        assert_eq!(guesswork(&[r(1, 4), r(1, 2), r(1, 4)]).unwrap(), r(7, 4));
        assert!(guesswork(&[r(1, 2), r(1, 4)]).is_err());
        assert_eq!(guesswork_with(&[r(1, 2), r(1, 4)], Normalization::Unchecked).unwrap(), r(1, 1));
    }

    #[test]
    fn marginal_guesswork_examples() {
        assert_eq!(marginal_guesswork(&point(4), &r(1, 1)).unwrap(), 1);
        assert_eq!(marginal_guesswork(&uniform(4), &r(1, 2)).unwrap(), 2);
        assert_eq!(marginal_guesswork(&uniform(7), &r(1, 1)).unwrap(), 7);
        assert!(matches!(marginal_guesswork(&uniform(3), &r(0, 1)), Err(Error::ParameterOutOfRange(_))));
        assert!(matches!(marginal_guesswork(&uniform(3), &r(3, 2)), Err(Error::ParameterOutOfRange(_))));
    }

    #[test]
    fn alpha_guesswork_examples() {
        let x = vec![r(1, 2), r(1, 3), r(1, 6)];
        assert_eq!(alpha_guesswork(&x, &r(1, 1)).unwrap(), guesswork(&x).unwrap());
        assert_eq!(alpha_guesswork(&uniform(4), &r(1, 2)).unwrap(), r(7, 4));
        assert_eq!(alpha_guesswork_by_rectangles(&uniform(4), &r(1, 2)), r(7, 4));
        for a in [r(1, 10), r(1, 2), r(1, 1)] {
            assert_eq!(alpha_guesswork(&point(3), &a).unwrap(), r(1, 1));
        }
        for a in [r(1, 5), r(1, 2), r(2, 3), r(5, 6), r(9, 10)] {
            assert_eq!(alpha_guesswork(&x, &a).unwrap(), alpha_guesswork_by_rectangles(&x, &a));
        }
    }

    #[test]
    fn variation_examples() {
        assert_eq!(variation_to_uniform(&uniform(5)).unwrap(), r(0, 1));
        assert_eq!(variation_to_uniform(&point(4)).unwrap(), r(3, 4));
        let x = vec![r(1, 2), r(1, 2), r(0, 1), r(0, 1)];
        assert_eq!(variation_to_uniform(&x).unwrap(), r(1, 2));
        for v in [uniform(3), point(4), x, vec![r(1, 2), r(1, 3), r(1, 6)]] {
            let d = variation_to_uniform(&v).unwrap();
            assert_eq!(variation_to_uniform_increasing(&v).unwrap(), d);
            assert_eq!(half_l1(&v), d);
        }
    }

    #[test]
    fn metrics_are_permutation_invariant() {
        let x = vec![r(1, 2), r(1, 3), r(1, 6), r(0, 1)];
        let y = vec![r(0, 1), r(1, 6), r(1, 2), r(1, 3)];
        let a = all_metrics(&x, Some(&r(2, 3)), Some(2.0)).unwrap();
        let b = all_metrics(&y, Some(&r(2, 3)), Some(2.0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn metric_listing_format() {
        let x = vec![r(1, 2), r(1, 4), r(1, 4)];
        let names: Vec<String> = all_metrics(&x, Some(&r(1, 2)), None).unwrap().iter().map(|m| m.kind.to_string()).collect();
        assert_eq!(
            names,
            ["shannon_entropy", "guesswork", "marginal_guesswork[1/2]", "alpha_guesswork[1/2]", "variation_to_uniform"]
        );
    }
}
