//! Security at data complexity `q`.
//!
//! An adversary that submits the distinct plaintexts `p = (p_1, .., p_q)` sees
//! their images `g(p)`. Two permutations give the same images exactly when
//! they lie in the same left coset of `H = Stab_G(p)`, so the ciphertext
//! distribution is the vector of coset masses `x(g_i H)`. The nonadaptive
//! chosen-plaintext advantage is the variation distance of that vector from
//! uniform over `G/H`. For conditional guesswork the relevant projection keeps
//! each coset's masses sorted decreasingly and adds them up coordinatewise.
//!
//! When `Z = XY`, both projections of `z` are majorized by those of `y`, so
//! `Z` is never less secure than `Y` by either metric.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::dist::CipherDist;
use crate::error::{Error, Result};
use crate::group::{left_cosets, CosetDecomposition, GroupTable};
use crate::majorization::{compare, Relation};
use crate::metrics::{guesswork_with, variation_to_uniform, Normalization};
use crate::scalar::{sorted_desc, total, Scalar};

/// An ordered tuple of distinct plaintexts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaintextTuple {
    points: Vec<usize>,
}

impl PlaintextTuple {
    pub fn new(points: Vec<usize>, message_count: usize) -> Result<Self> {
        let mut seen = vec![false; message_count];
        for &p in &points {
            if p >= message_count {
                return Err(Error::PointOutOfRange { point: p, degree: message_count });
            }
            if seen[p] {
                return Err(Error::DuplicatePoint(p));
            }
            seen[p] = true;
        }
        Ok(PlaintextTuple { points })
    }

    /// The zero-query tuple.
    pub fn empty() -> Self {
        PlaintextTuple { points: Vec::new() }
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl fmt::Display for PlaintextTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All `m (m-1) ... (m-q+1)` ordered tuples of distinct points, lexicographically.
pub fn distinct_tuples(message_count: usize, q: usize) -> Result<Vec<PlaintextTuple>> {
    if q == 0 || q > message_count {
        return Err(Error::TupleLength { q, m: message_count });
    }
    fn extend(m: usize, q: usize, prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<PlaintextTuple>) {
        if prefix.len() == q {
            out.push(PlaintextTuple { points: prefix.clone() });
            return;
        }
        for p in 0..m {
            if !used[p] {
                used[p] = true;
                prefix.push(p);
                extend(m, q, prefix, used, out);
                prefix.pop();
                used[p] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(message_count, q, &mut Vec::with_capacity(q), &mut vec![false; message_count], &mut out);
    Ok(out)
}

/// A distribution seen through the images of a plaintext tuple.
#[derive(Clone, Debug)]
pub struct ImageProjection<S> {
    pub tuple: PlaintextTuple,
    pub stabilizer: GroupTable,
    pub cosets: CosetDecomposition,
    /// `x(g_i H)` in transversal order.
    pub coset_masses: Vec<S>,
    /// Masses inside each coset, sorted decreasingly, each of length `|H|`.
    pub coset_profiles: Vec<Vec<S>>,
}

impl<S: Scalar> ImageProjection<S> {
    /// Coordinatewise sum of the sorted coset profiles.
    pub fn profile_sum(&self) -> Vec<S> {
        let width = self.stabilizer.order();
        let mut acc = vec![S::zero(); width];
        for profile in &self.coset_profiles {
            for (a, v) in acc.iter_mut().zip(profile) {
                *a += v;
            }
        }
        acc
    }
}

fn check_tuple(degree: usize, p: &PlaintextTuple) -> Result<()> {
    PlaintextTuple::new(p.points.clone(), degree).map(|_| ())
}

pub fn project<S: Scalar>(x: &CipherDist<S>, p: &PlaintextTuple) -> Result<ImageProjection<S>> {
    let g = x.group();
    check_tuple(g.degree(), p)?;
    let stabilizer = g.stabilizer(p.points())?;
    let cosets = left_cosets(g, &stabilizer)?;
    let mut coset_masses = Vec::with_capacity(cosets.len());
    let mut coset_profiles = Vec::with_capacity(cosets.len());
    for block in &cosets.blocks {
        let masses: Vec<S> = block.iter().map(|&i| x.mass(i).clone()).collect();
        coset_masses.push(total(&masses));
        coset_profiles.push(sorted_desc(&masses));
    }
    Ok(ImageProjection { tuple: p.clone(), stabilizer, cosets, coset_masses, coset_profiles })
}

/// Variation distance of the ciphertext-tuple distribution from uniform over `G/H`.
pub fn ncpa_advantage<S: Scalar>(x: &CipherDist<S>, p: &PlaintextTuple) -> Result<S> {
    variation_to_uniform(&project(x, p)?.coset_masses)
}

/// Best advantage over every distinct `q`-tuple, with the first maximizing tuple.
pub fn max_ncpa_advantage<S: Scalar>(x: &CipherDist<S>, q: usize) -> Result<(S, PlaintextTuple)> {
    let mut best: Option<(S, PlaintextTuple)> = None;
    for p in distinct_tuples(x.group().degree(), q)? {
        let adv = ncpa_advantage(x, &p)?;
        if best.as_ref().is_none_or(|(b, _)| b.definitely_lt(&adv)) {
            best = Some((adv, p));
        }
    }
    Ok(best.expect("at least one tuple"))
}

/// `W(X | C, p)`: guesswork of the summed sorted coset profiles.
pub fn conditional_guesswork<S: Scalar>(x: &CipherDist<S>, p: &PlaintextTuple) -> Result<S> {
    guesswork_with(&project(x, p)?.profile_sum(), Normalization::Unchecked)
}

/// `W(X | C, p)` straight from the definition: group permutations by the
/// ciphertext tuple they produce and guess each group in decreasing order.
pub fn conditional_guesswork_oracle<S: Scalar>(x: &CipherDist<S>, p: &PlaintextTuple) -> Result<S> {
    let g = x.group();
    check_tuple(g.degree(), p)?;
    let mut by_ciphertext: BTreeMap<Vec<usize>, Vec<S>> = BTreeMap::new();
    for (perm, m) in g.elements().iter().zip(x.masses()) {
        by_ciphertext.entry(perm.apply_tuple(p.points())?).or_default().push(m.clone());
    }
    let mut acc = S::zero();
    for masses in by_ciphertext.values() {
        // P(c) · Σ i·posterior_[i] = Σ i·mass_[i]
        for (i, m) in sorted_desc(masses).iter().enumerate() {
            let mut t = S::from_count(i + 1);
            t *= m;
            acc += &t;
        }
    }
    Ok(acc)
}

/// Which side a pair of metric values favours.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coherence {
    /// The left cipher is at least as secure everywhere, strictly somewhere.
    LeftMoreSecure,
    RightMoreSecure,
    Equivalent,
    /// The metrics or tuples disagree on direction.
    Mixed,
}

impl Coherence {
    fn from_flags(left_ok: bool, right_ok: bool) -> Coherence {
        match (left_ok, right_ok) {
            (true, true) => Coherence::Equivalent,
            (true, false) => Coherence::LeftMoreSecure,
            (false, true) => Coherence::RightMoreSecure,
            (false, false) => Coherence::Mixed,
        }
    }

    fn from_relation(r: Relation) -> Coherence {
        Coherence::from_flags(r.is_below(), r.is_above())
    }

    /// Both observations must hold at once.
    pub fn combine(self, other: Coherence) -> Coherence {
        let left = |c: Coherence| matches!(c, Coherence::LeftMoreSecure | Coherence::Equivalent);
        let right = |c: Coherence| matches!(c, Coherence::RightMoreSecure | Coherence::Equivalent);
        Coherence::from_flags(left(self) && left(other), right(self) && right(other))
    }

    pub fn name(self) -> &'static str {
        match self {
            Coherence::LeftMoreSecure => "left-more-secure",
            Coherence::RightMoreSecure => "right-more-secure",
            Coherence::Equivalent => "equivalent",
            Coherence::Mixed => "mixed",
        }
    }
}

impl fmt::Display for Coherence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn lower_is_safer<S: Scalar>(left: &S, right: &S) -> Coherence {
    Coherence::from_flags(left.approx_le(right), right.approx_le(left))
}

/// Metrics for both ciphers at one plaintext tuple.
#[derive(Clone, Debug)]
pub struct TupleComparison<S> {
    pub tuple: PlaintextTuple,
    pub advantage: (S, S),
    pub conditional_guesswork: (S, S),
    /// Left coset masses against right coset masses.
    pub coset_relation: Relation,
    /// Left profile sum against right profile sum.
    pub profile_relation: Relation,
}

impl<S: Scalar> TupleComparison<S> {
    pub fn coherence(&self) -> Coherence {
        let (al, ar) = &self.advantage;
        let (wl, wr) = &self.conditional_guesswork;
        lower_is_safer(al, ar)
            .combine(lower_is_safer(wr, wl))
            .combine(Coherence::from_relation(self.coset_relation))
            .combine(Coherence::from_relation(self.profile_relation))
    }
}

/// Every tuple at one data complexity, plus the worst-case aggregates.
#[derive(Clone, Debug)]
pub struct LevelComparison<S> {
    pub q: usize,
    pub tuples: Vec<TupleComparison<S>>,
    pub max_advantage: ((S, PlaintextTuple), (S, PlaintextTuple)),
    pub min_conditional_guesswork: (S, S),
    pub coset_relation: Relation,
    pub profile_relation: Relation,
}

impl<S: Scalar> LevelComparison<S> {
    pub fn coherence(&self) -> Coherence {
        self.tuples.iter().map(|t| t.coherence()).reduce(Coherence::combine).unwrap_or(Coherence::Equivalent)
    }
}

/// Side-by-side security of two ciphers on the same group for `q = 0..=q_max`.
#[derive(Clone, Debug)]
pub struct ComparisonReport<S> {
    pub left: String,
    pub right: String,
    pub levels: Vec<LevelComparison<S>>,
}

fn compare_tuple<S: Scalar>(
    z: &CipherDist<S>,
    y: &CipherDist<S>,
    p: &PlaintextTuple,
) -> Result<TupleComparison<S>> {
    let pz = project(z, p)?;
    let py = project(y, p)?;
    let (sz, sy) = (pz.profile_sum(), py.profile_sum());
    Ok(TupleComparison {
        tuple: p.clone(),
        advantage: (variation_to_uniform(&pz.coset_masses)?, variation_to_uniform(&py.coset_masses)?),
        conditional_guesswork: (
            guesswork_with(&sz, Normalization::Unchecked)?,
            guesswork_with(&sy, Normalization::Unchecked)?,
        ),
        coset_relation: compare(&pz.coset_masses, &py.coset_masses).relation,
        profile_relation: compare(&sz, &sy).relation,
    })
}

/// Compare `z` (left) with `y` (right) at every data complexity up to `q_max`.
///
/// Level `q = 0` uses the empty tuple: no advantage, unconditional guesswork
/// and plain majorization of the two distributions.
pub fn compare_q<S: Scalar>(
    z: &CipherDist<S>,
    y: &CipherDist<S>,
    q_max: usize,
    names: (&str, &str),
) -> Result<ComparisonReport<S>> {
    if z.group() != y.group() {
        return Err(Error::GroupMismatch);
    }
    let m = z.group().degree();
    if q_max > m {
        return Err(Error::TupleLength { q: q_max, m });
    }
    let mut levels = Vec::with_capacity(q_max + 1);
    for q in 0..=q_max {
        let tuples = if q == 0 { vec![PlaintextTuple::empty()] } else { distinct_tuples(m, q)? };
        let rows = tuples.iter().map(|p| compare_tuple(z, y, p)).collect::<Result<Vec<_>>>()?;

        let argmax = |pick: fn(&TupleComparison<S>) -> &S| {
            let mut best: Option<(S, PlaintextTuple)> = None;
            for row in &rows {
                let v = pick(row);
                if best.as_ref().is_none_or(|(b, _)| b.definitely_lt(v)) {
                    best = Some((v.clone(), row.tuple.clone()));
                }
            }
            best.expect("nonempty")
        };
        let min = |pick: fn(&TupleComparison<S>) -> &S| {
            rows.iter().map(pick).cloned().reduce(|a, b| if b < a { b } else { a }).expect("nonempty")
        };
        levels.push(LevelComparison {
            q,
            max_advantage: (argmax(|r| &r.advantage.0), argmax(|r| &r.advantage.1)),
            min_conditional_guesswork: (min(|r| &r.conditional_guesswork.0), min(|r| &r.conditional_guesswork.1)),
            coset_relation: rows.iter().map(|r| r.coset_relation).reduce(Relation::combine).expect("nonempty"),
            profile_relation: rows.iter().map(|r| r.profile_relation).reduce(Relation::combine).expect("nonempty"),
            tuples: rows,
        });
    }
    Ok(ComparisonReport { left: names.0.to_string(), right: names.1.to_string(), levels })
}

/// One CSV record: `q, tuple, metric, value_left, value_right, verdict`.
pub type CsvRow = [String; 6];

pub const CSV_HEADER: [&str; 6] = ["q", "tuple", "metric", "value_left", "value_right", "verdict"];

impl<S: Scalar> ComparisonReport<S> {
    /// Consolidated verdict over every level, tuple and metric.
    pub fn coherence(&self) -> Coherence {
        self.levels.iter().map(|l| l.coherence()).reduce(Coherence::combine).unwrap_or(Coherence::Equivalent)
    }

    /// `left ⪯_q right` at every level: the left cipher is no less secure.
    pub fn left_no_less_secure(&self) -> bool {
        matches!(self.coherence(), Coherence::LeftMoreSecure | Coherence::Equivalent)
    }

    pub fn right_no_less_secure(&self) -> bool {
        matches!(self.coherence(), Coherence::RightMoreSecure | Coherence::Equivalent)
    }

    /// Rows per level; with `per_tuple` also one block of rows per tuple.
    pub fn csv_rows(&self, per_tuple: bool) -> Vec<CsvRow> {
        let mut out = Vec::new();
        for level in &self.levels {
            let q = level.q.to_string();
            let ((al, _), (ar, _)) = &level.max_advantage;
            out.push([
                q.clone(),
                "max".into(),
                "ncpa_advantage".into(),
                al.to_string(),
                ar.to_string(),
                lower_is_safer(al, ar).to_string(),
            ]);
            let (wl, wr) = &level.min_conditional_guesswork;
            out.push([
                q.clone(),
                "min".into(),
                "conditional_guesswork".into(),
                wl.to_string(),
                wr.to_string(),
                lower_is_safer(wr, wl).to_string(),
            ]);
            out.push([q.clone(), "all".into(), "coset_majorization".into(), String::new(), String::new(), level.coset_relation.to_string()]);
            out.push([q.clone(), "all".into(), "profile_majorization".into(), String::new(), String::new(), level.profile_relation.to_string()]);
            if per_tuple {
                for t in &level.tuples {
                    let tuple = t.tuple.to_string();
                    let (al, ar) = &t.advantage;
                    let (wl, wr) = &t.conditional_guesswork;
                    out.push([q.clone(), tuple.clone(), "ncpa_advantage".into(), al.to_string(), ar.to_string(), lower_is_safer(al, ar).to_string()]);
                    out.push([q.clone(), tuple.clone(), "conditional_guesswork".into(), wl.to_string(), wr.to_string(), lower_is_safer(wr, wl).to_string()]);
                    out.push([q.clone(), tuple.clone(), "coset_majorization".into(), String::new(), String::new(), t.coset_relation.to_string()]);
                    out.push([q.clone(), tuple, "profile_majorization".into(), String::new(), String::new(), t.profile_relation.to_string()]);
                }
            }
        }
        out
    }

    /// Human-readable table: one line per level with the three orderings
    /// (majorization, advantage, conditional guesswork) side by side.
    pub fn to_text(&self, per_tuple: bool) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "compare {} vs {}", self.left, self.right);
        let _ = writeln!(
            s,
            "{:>3}  {:<16} {:<16} {:<20} {:<20} coherence",
            "q", "x-hat", "profiles", "max adv (L | R)", "min W(.|C,p) (L | R)"
        );
        for level in &self.levels {
            let ((al, _), (ar, _)) = &level.max_advantage;
            let (wl, wr) = &level.min_conditional_guesswork;
            let _ = writeln!(
                s,
                "{:>3}  {:<16} {:<16} {:<20} {:<20} {}",
                level.q,
                level.coset_relation.to_string(),
                level.profile_relation.to_string(),
                format!("{al} | {ar}"),
                format!("{wl} | {wr}"),
                level.coherence()
            );
            if per_tuple {
                for t in &level.tuples {
                    let (al, ar) = &t.advantage;
                    let (wl, wr) = &t.conditional_guesswork;
                    let _ = writeln!(
                        s,
                        "     {:<10} adv {al} | {ar}   W {wl} | {wr}   {} / {}",
                        t.tuple.to_string(),
                        t.coset_relation,
                        t.profile_relation
                    );
                }
            }
        }
        let _ = writeln!(s, "overall: {}", self.coherence());
        s
    }
}
