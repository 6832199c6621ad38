//! Distributions of `G`-ciphers and their products.
//!
//! A `G`-cipher is a random permutation drawn from a group `G`; we store its
//! law densely, one mass per canonical group element. The law of the series
//! composition `XY` (with `Y` applied first) is the convolution
//! `(x * y)(g) = Σ_h x(g h⁻¹) y(h)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{double_coset, DoubleCoset, GroupTable};
use crate::perm::Permutation;
use crate::scalar::{total, Scalar};

/// Probability distribution over the elements of a [`GroupTable`].
#[derive(Clone)]
pub struct CipherDist<S> {
    group: GroupTable,
    mass: Vec<S>,
}

impl<S: Scalar> CipherDist<S> {
    /// Checks length, nonnegativity and unit total (within the scalar's tolerance).
    pub fn new(group: &GroupTable, mass: Vec<S>) -> Result<Self> {
        if mass.len() != group.order() {
            return Err(Error::LengthMismatch(mass.len(), group.order()));
        }
        if let Some(i) = mass.iter().position(|m| m.is_negative() && !m.is_negligible()) {
            return Err(Error::InvalidDistribution(format!("negative mass at index {i}")));
        }
        let sum = total(&mass);
        if !sum.approx_eq(&S::one()) {
            return Err(Error::InvalidDistribution(format!("masses sum to {sum}, not 1")));
        }
        Ok(CipherDist { group: group.clone(), mass })
    }

    /// Normalizes nonnegative weights.
    pub fn from_weights(group: &GroupTable, weights: Vec<S>) -> Result<Self> {
        let sum = total(&weights);
        if !(sum > S::zero()) {
            return Err(Error::InvalidDistribution("weights have no positive mass".into()));
        }
        let mass = weights.into_iter().map(|w| w / sum.clone()).collect();
        Self::new(group, mass)
    }

    pub fn uniform(group: &GroupTable) -> Self {
        let all: Vec<usize> = (0..group.order()).collect();
        Self::uniform_on(group, &all).expect("groups are nonempty")
    }

    /// Mass `1/|subset|` on each listed element index.
    pub fn uniform_on(group: &GroupTable, subset: &[usize]) -> Result<Self> {
        let mut members = subset.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::EmptySubset);
        }
        let order = group.order();
        if let Some(&bad) = members.iter().find(|&&i| i >= order) {
            return Err(Error::IndexOutOfRange { index: bad, order });
        }
        let share = S::reciprocal(members.len());
        let mut mass = vec![S::zero(); order];
        for i in members {
            mass[i] = share.clone();
        }
        Ok(CipherDist { group: group.clone(), mass })
    }

    /// Uniform on a set of permutations, each of which must lie in `group`.
    pub fn uniform_on_elements(group: &GroupTable, elements: &[Permutation]) -> Result<Self> {
        let idx = elements.iter().map(|g| group.require(g)).collect::<Result<Vec<_>>>()?;
        Self::uniform_on(group, &idx)
    }

    /// Point mass at `g`.
    pub fn deterministic(group: &GroupTable, g: &Permutation) -> Result<Self> {
        let i = group.require(g)?;
        let mut mass = vec![S::zero(); group.order()];
        mass[i] = S::one();
        Ok(CipherDist { group: group.clone(), mass })
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn masses(&self) -> &[S] {
        &self.mass
    }

    pub fn into_masses(self) -> Vec<S> {
        self.mass
    }

    pub fn mass(&self, index: usize) -> &S {
        &self.mass[index]
    }

    pub fn mass_of(&self, g: &Permutation) -> S {
        self.group.index_of(g).map(|i| self.mass[i].clone()).unwrap_or_else(S::zero)
    }

    /// Element indices with strictly positive mass, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.mass
            .iter()
            .enumerate()
            .filter(|(_, m)| **m > S::zero() && !m.is_negligible())
            .map(|(i, _)| i)
            .collect()
    }

    /// Total mass of the elements satisfying `pred`.
    pub fn probability_of(&self, pred: impl Fn(&Permutation) -> bool) -> S {
        let mut acc = S::zero();
        for (g, m) in self.group.elements().iter().zip(&self.mass) {
            if pred(g) {
                acc += m;
            }
        }
        acc
    }

    /// Total mass on a set of element indices.
    pub fn mass_on(&self, indices: &[usize]) -> S {
        let mut acc = S::zero();
        for &i in indices {
            acc += &self.mass[i];
        }
        acc
    }

    /// Whether the law is uniform with support exactly `subset`.
    pub fn is_uniform_on(&self, subset: &[usize]) -> bool {
        let mut members = subset.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return false;
        }
        let share = S::reciprocal(members.len());
        let mut next = members.iter().peekable();
        self.mass.iter().enumerate().all(|(i, m)| {
            if next.peek() == Some(&&i) {
                next.next();
                m.approx_eq(&share)
            } else {
                m.is_negligible()
            }
        })
    }

    /// Law of `XY` where `self ~ X`, `other ~ Y` and `Y` acts first.
    pub fn convolve(&self, other: &CipherDist<S>) -> Result<CipherDist<S>> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let right = other.support();
        let mut out = vec![S::zero(); self.group.order()];
        for a in self.support() {
            for &b in &right {
                let mut term = self.mass[a].clone();
                term *= &other.mass[b];
                out[self.group.product_index(a, b)] += &term;
            }
        }
        Ok(CipherDist { group: self.group.clone(), mass: out })
    }

    /// Left translation `(g·x)(f) = x(g⁻¹ f)`.
    pub fn translate(&self, g: &Permutation) -> Result<CipherDist<S>> {
        let gi = self.group.require(g)?;
        let mut out = vec![S::zero(); self.group.order()];
        for (f, m) in self.mass.iter().enumerate() {
            out[self.group.product_index(gi, f)] = m.clone();
        }
        Ok(CipherDist { group: self.group.clone(), mass: out })
    }

    /// Elementwise equality within the scalar tolerance.
    pub fn approx_eq(&self, other: &CipherDist<S>) -> bool {
        self.group == other.group && self.mass.iter().zip(&other.mass).all(|(a, b)| a.approx_eq(b))
    }
}

impl<S: Scalar> PartialEq for CipherDist<S> {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.mass == other.mass
    }
}

impl<S: Scalar> fmt::Debug for CipherDist<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for i in self.support() {
            m.entry(&self.group.element(i).to_string(), &self.mass[i].to_string());
        }
        m.finish()
    }
}

pub fn convolve<S: Scalar>(x: &CipherDist<S>, y: &CipherDist<S>) -> Result<CipherDist<S>> {
    x.convolve(y)
}

pub fn translate<S: Scalar>(g: &Permutation, x: &CipherDist<S>) -> Result<CipherDist<S>> {
    x.translate(g)
}

/// Law of the product `F_1 F_2 ... F_r`; the last factor acts first.
pub fn product<S: Scalar>(factors: &[&CipherDist<S>]) -> Result<CipherDist<S>> {
    let (last, rest) = factors.split_last().ok_or(Error::EmptySubset)?;
    rest.iter().rev().try_fold((*last).clone(), |acc, f| f.convolve(&acc))
}

/// `x * δ_π * z` written as a convex direct sum `Σ α_i z_i`, with `z_i`
/// supported on the left coset `λ_i K` of the double coset `HπK`.
#[derive(Clone)]
pub struct TripleDecomposition<S> {
    pub weights: Vec<S>,
    pub parts: Vec<CipherDist<S>>,
    pub coset_reps: Vec<Permutation>,
    pub m: usize,
    /// `|H ∩ πKπ⁻¹|`.
    pub stabilizer_order: usize,
    pub double_coset: DoubleCoset,
}

impl<S: Scalar> fmt::Debug for TripleDecomposition<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TripleDecomposition")
            .field("m", &self.m)
            .field("weights", &self.weights)
            .field("coset_reps", &self.coset_reps)
            .field("parts", &self.parts)
            .finish()
    }
}

impl<S: Scalar> TripleDecomposition<S> {
    /// `Σ α_i z_i`.
    pub fn reconstruct(&self) -> CipherDist<S> {
        let group = self.parts[0].group().clone();
        let mut mass = vec![S::zero(); group.order()];
        for (w, part) in self.weights.iter().zip(&self.parts) {
            for i in part.support() {
                let mut term = w.clone();
                term *= &part.mass[i];
                mass[i] += &term;
            }
        }
        CipherDist { group, mass }
    }
}

/// Split `t = x * δ_π * z` along the left cosets of `K` inside `HπK`.
///
/// `x` must be supported in `h` and `z` in `k`. Cosets that receive no mass
/// from `x` still get a part (uniform on the coset) with weight zero, so the
/// part count always equals `[H : H ∩ πKπ⁻¹]`.
pub fn triple_decompose<S: Scalar>(
    x: &CipherDist<S>,
    h: &GroupTable,
    pi: &Permutation,
    z: &CipherDist<S>,
    k: &GroupTable,
) -> Result<TripleDecomposition<S>> {
    let g = x.group();
    if z.group() != g {
        return Err(Error::GroupMismatch);
    }
    let h_in_g = h.indices_in(g)?;
    k.indices_in(g)?;
    if x.support().iter().any(|i| !h.contains(g.element(*i))) {
        return Err(Error::SupportViolation { which: "x" });
    }
    if z.support().iter().any(|i| !k.contains(g.element(*i))) {
        return Err(Error::SupportViolation { which: "z" });
    }
    let pi_index = g.require(pi)?;
    let dc = double_coset(g, h, pi, k)?;
    let shifted = z.translate(pi)?;
    let shifted_support = shifted.support();

    let mut weights = vec![S::zero(); dc.m];
    let mut acc = vec![vec![S::zero(); g.order()]; dc.m];
    let mut members = vec![0usize; dc.m];
    for &hi in &h_in_g {
        let block = dc
            .block_containing(g.product_index(hi, pi_index))
            .expect("hπ lies in HπK");
        members[block] += 1;
        let xh = x.mass(hi);
        weights[block] += xh;
        if xh.is_zero() {
            continue;
        }
        for &f in &shifted_support {
            let mut term = xh.clone();
            term *= shifted.mass(f);
            acc[block][g.product_index(hi, f)] += &term;
        }
    }
    debug_assert!(members.iter().all(|&c| c == dc.intersection_order));

    let parts = acc
        .into_iter()
        .zip(&weights)
        .zip(&dc.blocks)
        .map(|((mass, w), block)| {
            if w.is_zero() {
                CipherDist::uniform_on(g, block)
            } else {
                let mass = mass.into_iter().map(|v| v / w.clone()).collect();
                Ok(CipherDist { group: g.clone(), mass })
            }
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(TripleDecomposition {
        weights,
        parts,
        coset_reps: dc.representatives.clone(),
        m: dc.m,
        stabilizer_order: dc.intersection_order,
        double_coset: dc,
    })
}
