//! The majorization preorder and its constructive witnesses.
//!
//! `x ⪯ y` when both have the same total and every partial sum of the
//! decreasing rearrangement of `x` is bounded by the matching partial sum for
//! `y`. Equivalently `x = D y` for a doubly stochastic `D`, and every such `D`
//! is a convex combination of permutation matrices. [`hlp_witness`] builds a
//! `D` out of T-transforms and [`birkhoff_decompose`] splits it into
//! permutations.
//!
//! Vectors of different length are compared after padding the shorter one
//! with zeros.

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::scalar::{prefix_sums, sorted_desc, total, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `x` is a rearrangement of `y`.
    EqualUpToPermutation,
    /// `x ⪯ y` and `x` is not a rearrangement of `y`.
    StrictlyBelow,
    /// `x ⪯ y`, strictness undetermined (aggregate of `Equal` and `StrictlyBelow` verdicts).
    Below,
    StrictlyAbove,
    Above,
    Incomparable,
    /// Totals differ.
    NormMismatch,
}

impl Relation {
    /// The relation seen from the other side.
    pub fn mirror(self) -> Relation {
        match self {
            Relation::StrictlyBelow => Relation::StrictlyAbove,
            Relation::Below => Relation::Above,
            Relation::StrictlyAbove => Relation::StrictlyBelow,
            Relation::Above => Relation::Below,
            other => other,
        }
    }

    /// `x ⪯ y`.
    pub fn is_below(self) -> bool {
        matches!(self, Relation::EqualUpToPermutation | Relation::StrictlyBelow | Relation::Below)
    }

    /// `y ⪯ x`.
    pub fn is_above(self) -> bool {
        self.mirror().is_below()
    }

    /// Joint relation of two comparisons that must both hold, e.g. the
    /// verdicts for every plaintext tuple at a fixed data complexity.
    pub fn combine(self, other: Relation) -> Relation {
        use Relation::*;
        if self == NormMismatch || other == NormMismatch {
            return NormMismatch;
        }
        if self == other {
            return self;
        }
        match (self.is_below() && other.is_below(), self.is_above() && other.is_above()) {
            (true, _) => Below,
            (false, true) => Above,
            (false, false) => Incomparable,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Relation::EqualUpToPermutation => "equal",
            Relation::StrictlyBelow => "strictly-below",
            Relation::Below => "below",
            Relation::StrictlyAbove => "strictly-above",
            Relation::Above => "above",
            Relation::Incomparable => "incomparable",
            Relation::NormMismatch => "norm-mismatch",
        }
    }
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MajorizationVerdict {
    pub relation: Relation,
    /// For `Incomparable`: the first prefix length (1-based) where `x`'s
    /// partial sum exceeds `y`'s, and the first where it falls short.
    pub witness_prefix: Option<(usize, usize)>,
}

impl MajorizationVerdict {
    pub fn mirror(self) -> MajorizationVerdict {
        MajorizationVerdict {
            relation: self.relation.mirror(),
            witness_prefix: self.witness_prefix.map(|(a, b)| (b, a)),
        }
    }
}

fn padded<S: Scalar>(x: &[S], len: usize) -> Vec<S> {
    let mut v = x.to_vec();
    v.resize(len, S::zero());
    v
}

/// Decide how `x` relates to `y` under majorization.
pub fn compare<S: Scalar>(x: &[S], y: &[S]) -> MajorizationVerdict {
    let n = x.len().max(y.len());
    let xs = sorted_desc(&padded(x, n));
    let ys = sorted_desc(&padded(y, n));
    if !total(&xs).approx_eq(&total(&ys)) {
        return MajorizationVerdict { relation: Relation::NormMismatch, witness_prefix: None };
    }
    let px = prefix_sums(&xs);
    let py = prefix_sums(&ys);
    let mut first_above = None;
    let mut first_below = None;
    for (k, (a, b)) in px.iter().zip(&py).enumerate() {
        if first_above.is_none() && b.definitely_lt(a) {
            first_above = Some(k + 1);
        }
        if first_below.is_none() && a.definitely_lt(b) {
            first_below = Some(k + 1);
        }
    }
    let relation = match (first_above, first_below) {
        (None, None) => Relation::EqualUpToPermutation,
        (None, Some(_)) => Relation::StrictlyBelow,
        (Some(_), None) => Relation::StrictlyAbove,
        (Some(_), Some(_)) => Relation::Incomparable,
    };
    let witness_prefix = match (first_above, first_below) {
        (Some(a), Some(b)) => Some((a, b)),
        _ => None,
    };
    MajorizationVerdict { relation, witness_prefix }
}

/// `x ⪯ y`.
pub fn is_majorized_by<S: Scalar>(x: &[S], y: &[S]) -> bool {
    compare(x, y).relation.is_below()
}

/// Dense square matrix, row-major as nested vectors.
pub type Matrix<S> = Vec<Vec<S>>;

pub fn identity_matrix<S: Scalar>(n: usize) -> Matrix<S> {
    (0..n).map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect()
}

/// Matrix with a one at `(i, σ(i))`, so `(P y)_i = y_{σ(i)}`.
pub fn permutation_matrix<S: Scalar>(sigma: &Permutation) -> Matrix<S> {
    let n = sigma.degree();
    (0..n)
        .map(|i| (0..n).map(|j| if sigma.images()[i] == j { S::one() } else { S::zero() }).collect())
        .collect()
}

pub fn mat_vec<S: Scalar>(m: &Matrix<S>, v: &[S]) -> Vec<S> {
    m.iter()
        .map(|row| {
            let mut acc = S::zero();
            for (a, b) in row.iter().zip(v) {
                let mut t = a.clone();
                t *= b;
                acc += &t;
            }
            acc
        })
        .collect()
}

/// Nonnegative with all row and column sums equal to one (within tolerance).
pub fn is_doubly_stochastic<S: Scalar>(m: &Matrix<S>) -> bool {
    check_doubly_stochastic(m).is_ok()
}

fn check_doubly_stochastic<S: Scalar>(m: &Matrix<S>) -> Result<()> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::NotDoublyStochastic("matrix is not square".into()));
    }
    for (i, row) in m.iter().enumerate() {
        if let Some(j) = row.iter().position(|v| v.is_negative() && !v.is_negligible()) {
            return Err(Error::NotDoublyStochastic(format!("negative entry at ({i}, {j})")));
        }
        if !total(row).approx_eq(&S::one()) {
            return Err(Error::NotDoublyStochastic(format!("row {i} does not sum to 1")));
        }
    }
    for j in 0..n {
        let mut col = S::zero();
        for row in m {
            col += &row[j];
        }
        if !col.approx_eq(&S::one()) {
            return Err(Error::NotDoublyStochastic(format!("column {j} does not sum to 1")));
        }
    }
    Ok(())
}

/// `λ I + (1-λ) Q`, where `Q` swaps coordinates `i` and `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TTransform<S> {
    pub i: usize,
    pub j: usize,
    pub lambda: S,
}

/// A doubly stochastic `D` with `x = D y`, plus a Birkhoff form of `D`.
#[derive(Clone, Debug)]
pub struct DoublyStochasticWitness<S> {
    pub matrix: Matrix<S>,
    pub decomposition: Vec<(S, Permutation)>,
    /// T-transforms on the decreasing rearrangements, in application order.
    pub transforms: Vec<TTransform<S>>,
}

/// Indices ordering `v` decreasingly; ties keep the lower index first.
fn argsort_desc<S: Scalar>(v: &[S]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[b].partial_cmp(&v[a]).unwrap_or(std::cmp::Ordering::Equal));
    idx
}

/// Build `D` with `x = D y` from at most `n-1` T-transforms.
///
/// On the decreasing rearrangements, each step takes the last coordinate `j`
/// where the current vector still exceeds `x` and the first later coordinate
/// `k` where it falls short, and moves `min(v_j - x_j, x_k - v_k)` from `j` to
/// `k`. Every step fixes at least one coordinate for good.
pub fn hlp_witness<S: Scalar>(x: &[S], y: &[S]) -> Result<DoublyStochasticWitness<S>> {
    let verdict = compare(x, y);
    if !verdict.relation.is_below() {
        return Err(Error::NotMajorized(format!("x is {} y", verdict.relation)));
    }
    let n = x.len().max(y.len());
    let x = padded(x, n);
    let y = padded(y, n);
    let sx = argsort_desc(&x);
    let sy = argsort_desc(&y);
    let target: Vec<S> = sx.iter().map(|&i| x[i].clone()).collect();
    let mut current: Vec<S> = sy.iter().map(|&i| y[i].clone()).collect();
    let mut sorted_d = identity_matrix::<S>(n);
    let mut transforms = Vec::new();

    for _ in 0..n {
        let Some(j) = (0..n).rev().find(|&i| target[i].definitely_lt(&current[i])) else {
            break;
        };
        let k = (j + 1..n)
            .find(|&i| current[i].definitely_lt(&target[i]))
            .ok_or_else(|| Error::NotMajorized("no receiving coordinate".into()))?;
        let give = current[j].clone() - target[j].clone();
        let take = target[k].clone() - current[k].clone();
        let delta = if give < take { give } else { take };
        let gap = current[j].clone() - current[k].clone();
        let moved = delta.clone() / gap;
        let lambda = S::one() - moved.clone();

        current[j] -= &delta;
        current[k] += &delta;
        for col in 0..n {
            let a = sorted_d[j][col].clone();
            let b = sorted_d[k][col].clone();
            sorted_d[j][col] = lambda.clone() * a.clone() + moved.clone() * b.clone();
            sorted_d[k][col] = moved.clone() * a + lambda.clone() * b;
        }
        transforms.push(TTransform { i: j, j: k, lambda });
    }

    let mut matrix = vec![vec![S::zero(); n]; n];
    for (r, &orig_r) in sx.iter().enumerate() {
        for (c, &orig_c) in sy.iter().enumerate() {
            matrix[orig_r][orig_c] = sorted_d[r][c].clone();
        }
    }
    let decomposition = birkhoff_decompose(&matrix)?;
    Ok(DoublyStochasticWitness { matrix, decomposition, transforms })
}

/// Kuhn's augmenting-path matching on `allowed`, rows in order and columns
/// smallest-first. Returns the column matched to each row when perfect.
fn perfect_matching(allowed: &[Vec<bool>]) -> Option<Vec<usize>> {
    let n = allowed.len();
    let mut row_of_col: Vec<Option<usize>> = vec![None; n];

    fn augment(r: usize, allowed: &[Vec<bool>], seen: &mut [bool], row_of_col: &mut [Option<usize>]) -> bool {
        for c in 0..allowed.len() {
            if allowed[r][c] && !seen[c] {
                seen[c] = true;
                let free = match row_of_col[c] {
                    None => true,
                    Some(other) => augment(other, allowed, seen, row_of_col),
                };
                if free {
                    row_of_col[c] = Some(r);
                    return true;
                }
            }
        }
        false
    }

    for r in 0..n {
        let mut seen = vec![false; n];
        if !augment(r, allowed, &mut seen, &mut row_of_col) {
            return None;
        }
    }
    let mut col_of_row = vec![0; n];
    for (c, r) in row_of_col.into_iter().enumerate() {
        col_of_row[r.expect("perfect matching")] = c;
    }
    Some(col_of_row)
}

/// Largest threshold `t` such that the entries `>= t` contain a perfect
/// matching, and that matching.
fn bottleneck_matching<S: Scalar>(residual: &Matrix<S>) -> Option<Vec<usize>> {
    let mut values: Vec<S> =
        residual.iter().flatten().filter(|v| !v.is_negligible() && v.is_positive()).cloned().collect();
    values = sorted_desc(&values);
    values.dedup_by(|a, b| a == b);
    let allowed_at = |t: &S| -> Vec<Vec<bool>> {
        residual.iter().map(|row| row.iter().map(|v| v >= t && !v.is_negligible()).collect()).collect()
    };
    // feasibility is monotone as the threshold drops: binary search for the
    // first feasible value in decreasing order
    let (mut lo, mut hi) = (0usize, values.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(&allowed_at(&values[mid])).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    values.get(lo).and_then(|t| perfect_matching(&allowed_at(t)))
}

/// Write a doubly stochastic matrix as `Σ w_k P_k` with positive weights
/// summing to one and at most `(n-1)² + 1` terms.
pub fn birkhoff_decompose<S: Scalar>(d: &Matrix<S>) -> Result<Vec<(S, Permutation)>> {
    check_doubly_stochastic(d)?;
    let n = d.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut residual = d.clone();
    let mut terms: Vec<(S, Permutation)> = Vec::new();
    let mut remaining = S::one();
    while !remaining.is_negligible() {
        let cols = bottleneck_matching(&residual)
            .ok_or_else(|| Error::NotDoublyStochastic("residual has no perfect matching".into()))?;
        let weight = cols
            .iter()
            .enumerate()
            .map(|(r, &c)| residual[r][c].clone())
            .reduce(|a, b| if b < a { b } else { a })
            .expect("n > 0");
        for (r, &c) in cols.iter().enumerate() {
            residual[r][c] -= &weight;
        }
        remaining -= &weight;
        terms.push((weight, Permutation::new(cols).expect("matching is a bijection")));
        if terms.len() > n * n {
            return Err(Error::NotDoublyStochastic("decomposition did not terminate".into()));
        }
    }
    reduce_terms(&mut terms, n);
    Ok(terms)
}

/// Carathéodory reduction: while there are more terms than the dimension of
/// the Birkhoff polytope allows, find an affine dependence among the
/// permutation matrices and shift weight along it until one term vanishes.
fn reduce_terms<S: Scalar>(terms: &mut Vec<(S, Permutation)>, n: usize) {
    let limit = (n - 1) * (n - 1) + 1;
    while terms.len() > limit {
        let Some(c) = null_vector(terms, n) else { return };
        let mut best: Option<(usize, S)> = None;
        for (k, ck) in c.iter().enumerate() {
            if ck.is_positive() && !ck.is_negligible() {
                let ratio = terms[k].0.clone() / ck.clone();
                if best.as_ref().is_none_or(|(_, b)| ratio < *b) {
                    best = Some((k, ratio));
                }
            }
        }
        let Some((drop, step)) = best else { return };
        for (k, ck) in c.iter().enumerate() {
            let mut shift = ck.clone();
            shift *= &step;
            terms[k].0 -= &shift;
        }
        terms[drop].0 = S::zero();
        terms.retain(|(w, _)| !w.is_negligible());
    }
}

/// Nonzero `c` with `Σ c_k P_k = 0`, by Gaussian elimination on the
/// `n² × K` matrix whose columns are the flattened permutation matrices.
fn null_vector<S: Scalar>(terms: &[(S, Permutation)], n: usize) -> Option<Vec<S>> {
    let cols = terms.len();
    let mut a: Vec<Vec<S>> = (0..n * n)
        .map(|cell| {
            let (r, c) = (cell / n, cell % n);
            terms.iter().map(|(_, p)| if p.images()[r] == c { S::one() } else { S::zero() }).collect()
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_negligible()) else { continue };
        a.swap(row, p);
        let pivot = a[row][col].clone();
        for v in a[row].iter_mut() {
            *v = v.clone() / pivot.clone();
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for cc in 0..cols {
                    let mut t = factor.clone();
                    t *= &a[row][cc];
                    a[r][cc] -= &t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut c = vec![S::zero(); cols];
    c[free] = S::one();
    for (r, &pc) in pivots.iter().enumerate() {
        c[pc] = -a[r][free].clone();
    }
    Some(c)
}

/// `Σ w_k P_k`.
pub fn birkhoff_sum<S: Scalar>(terms: &[(S, Permutation)], n: usize) -> Matrix<S> {
    let mut m = vec![vec![S::zero(); n]; n];
    for (w, p) in terms {
        for (r, &c) in p.images().iter().enumerate() {
            m[r][c] += w;
        }
    }
    m
}
