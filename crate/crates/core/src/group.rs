//! Fully enumerated permutation groups and their coset structure.
//!
//! Groups are small enough to list every element. Elements are stored in
//! lexicographic order of their image arrays, so two generator sets for the
//! same group produce identical tables and identical indices.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Element cap used by the named constructors. Covers `Sym(7)`.
pub const DEFAULT_CAP: usize = 50_000;

struct GroupData {
    degree: usize,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

/// An enumerated finite permutation group with canonical element indexing.
///
/// Cloning is cheap; the element table is shared.
#[derive(Clone)]
pub struct GroupTable {
    data: Arc<GroupData>,
}

impl GroupTable {
    fn from_sorted(degree: usize, elements: Vec<Permutation>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        let index = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        GroupTable { data: Arc::new(GroupData { degree, elements, index }) }
    }

    /// The group generated by `generators`, failing once more than `cap`
    /// elements have been produced.
    pub fn closure(generators: &[Permutation], cap: usize) -> Result<Self> {
        let first = generators.first().ok_or(Error::EmptyGenerators)?;
        let degree = first.degree();
        if let Some(bad) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch { expected: degree, found: bad.degree() });
        }
        let identity = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(identity.clone());
        queue.push_back(identity);
        // left multiplication by generators reaches every word in them; in a
        // finite group that is the whole generated subgroup
        while let Some(g) = queue.pop_front() {
            for s in generators {
                let next = s.compose_unchecked(&g);
                if !seen.contains(&next) {
                    if seen.len() >= cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        Ok(Self::from_sorted(degree, elements))
    }

    /// The trivial group `{e}` of the given degree.
    pub fn trivial(degree: usize) -> Self {
        Self::from_sorted(degree, vec![Permutation::identity(degree)])
    }

    /// `Sym(m)`.
    pub fn symmetric(degree: usize) -> Result<Self> {
        Self::symmetric_on(degree, &(0..degree).collect::<Vec<_>>())
    }

    /// `Z/m` generated by the cycle `0 -> 1 -> ... -> m-1 -> 0`.
    pub fn cyclic(degree: usize) -> Result<Self> {
        let points: Vec<usize> = (0..degree).collect();
        Self::closure(&[Permutation::cycle(degree, &points)?], DEFAULT_CAP)
    }

    /// The full symmetric group on `{0..m-1}` fixing the point `fixed`.
    pub fn point_stabilizer(degree: usize, fixed: usize) -> Result<Self> {
        if fixed >= degree {
            return Err(Error::PointOutOfRange { point: fixed, degree });
        }
        let moved: Vec<usize> = (0..degree).filter(|&p| p != fixed).collect();
        Self::symmetric_on(degree, &moved)
    }

    /// Every permutation of `points`, fixing all other points.
    pub fn symmetric_on(degree: usize, points: &[usize]) -> Result<Self> {
        if degree == 0 {
            return Err(Error::EmptyPermutation);
        }
        if points.len() < 2 {
            return Ok(Self::trivial(degree));
        }
        let swap = Permutation::transposition(degree, points[0], points[1])?;
        let rotate = Permutation::cycle(degree, points)?;
        Self::closure(&[swap, rotate], DEFAULT_CAP)
    }

    pub fn degree(&self) -> usize {
        self.data.degree
    }

    pub fn order(&self) -> usize {
        self.data.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.data.elements
    }

    pub fn element(&self, index: usize) -> &Permutation {
        &self.data.elements[index]
    }

    pub fn index_of(&self, g: &Permutation) -> Option<usize> {
        self.data.index.get(g).copied()
    }

    /// Like [`GroupTable::index_of`] but with an error naming the element.
    pub fn require(&self, g: &Permutation) -> Result<usize> {
        if g.degree() != self.degree() {
            return Err(Error::DegreeMismatch { expected: self.degree(), found: g.degree() });
        }
        self.index_of(g).ok_or_else(|| Error::NotInGroup(g.to_string()))
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.data.index.contains_key(g)
    }

    /// Identity is the lexicographically smallest permutation.
    pub fn identity_index(&self) -> usize {
        0
    }

    /// Index of `element(i) ∘ element(j)`.
    pub fn product_index(&self, i: usize, j: usize) -> usize {
        let g = self.element(i).compose_unchecked(self.element(j));
        self.data.index[&g]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.data.index[&self.element(i).inverse()]
    }

    /// Same underlying table (pointer equality).
    pub fn same_table(&self, other: &GroupTable) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
    }

    /// Positions of this group's elements inside `parent`, in this group's
    /// canonical order.
    pub fn indices_in(&self, parent: &GroupTable) -> Result<Vec<usize>> {
        if self.degree() != parent.degree() {
            return Err(Error::DegreeMismatch { expected: parent.degree(), found: self.degree() });
        }
        self.elements()
            .iter()
            .map(|g| parent.index_of(g).ok_or(Error::NotSubgroup))
            .collect()
    }

    pub fn is_subgroup_of(&self, parent: &GroupTable) -> bool {
        self.indices_in(parent).is_ok()
    }

    /// Pointwise stabilizer of `points`.
    pub fn stabilizer(&self, points: &[usize]) -> Result<GroupTable> {
        let degree = self.degree();
        let mut seen = HashSet::new();
        for &p in points {
            if p >= degree {
                return Err(Error::PointOutOfRange { point: p, degree });
            }
            if !seen.insert(p) {
                return Err(Error::DuplicatePoint(p));
            }
        }
        let elements: Vec<Permutation> = self
            .elements()
            .iter()
            .filter(|g| points.iter().all(|&p| g.fixes(p)))
            .cloned()
            .collect();
        Ok(Self::from_sorted(degree, elements))
    }

    /// `π K π⁻¹`.
    pub fn conjugate_by(&self, pi: &Permutation) -> Result<GroupTable> {
        if pi.degree() != self.degree() {
            return Err(Error::DegreeMismatch { expected: self.degree(), found: pi.degree() });
        }
        let inv = pi.inverse();
        let mut elements: Vec<Permutation> = self
            .elements()
            .iter()
            .map(|k| pi.compose_unchecked(k).compose_unchecked(&inv))
            .collect();
        elements.sort();
        Ok(Self::from_sorted(self.degree(), elements))
    }

    pub fn intersection(&self, other: &GroupTable) -> Result<GroupTable> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { expected: self.degree(), found: other.degree() });
        }
        let elements = self.elements().iter().filter(|g| other.contains(g)).cloned().collect();
        Ok(Self::from_sorted(self.degree(), elements))
    }
}

impl PartialEq for GroupTable {
    fn eq(&self, other: &Self) -> bool {
        self.same_table(other)
            || (self.degree() == other.degree() && self.elements() == other.elements())
    }
}

impl Eq for GroupTable {}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupTable")
            .field("degree", &self.degree())
            .field("order", &self.order())
            .finish()
    }
}

/// `π K π⁻¹` as a free function.
pub fn conjugate_subgroup(pi: &Permutation, k: &GroupTable) -> Result<GroupTable> {
    k.conjugate_by(pi)
}

/// Left cosets `g_i H` of `H` in `G`.
#[derive(Clone, Debug)]
pub struct CosetDecomposition {
    pub parent: GroupTable,
    pub subgroup: GroupTable,
    /// Lexicographically minimal member of each block.
    pub transversal: Vec<Permutation>,
    /// Parent element indices of each coset, ascending.
    pub blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl CosetDecomposition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Which coset a parent element index belongs to.
    pub fn block_of(&self, element: usize) -> usize {
        self.block_of[element]
    }
}

/// Partition `G` into left cosets of `H`.
pub fn left_cosets(g: &GroupTable, h: &GroupTable) -> Result<CosetDecomposition> {
    let h_in_g = h.indices_in(g)?;
    let mut block_of = vec![usize::MAX; g.order()];
    let mut transversal = Vec::new();
    let mut blocks = Vec::new();
    // scanning in canonical order makes the first unassigned element the
    // minimum of its coset
    for rep in 0..g.order() {
        if block_of[rep] != usize::MAX {
            continue;
        }
        let b = blocks.len();
        let mut block: Vec<usize> = h_in_g.iter().map(|&hi| g.product_index(rep, hi)).collect();
        block.sort_unstable();
        for &e in &block {
            block_of[e] = b;
        }
        transversal.push(g.element(rep).clone());
        blocks.push(block);
    }
    Ok(CosetDecomposition { parent: g.clone(), subgroup: h.clone(), transversal, blocks, block_of })
}

/// The double coset `H π K` with its decomposition into left cosets of `K`.
#[derive(Clone, Debug)]
pub struct DoubleCoset {
    /// Parent element indices of `HπK`, ascending.
    pub elements: Vec<usize>,
    /// `λ_i`, the minimal member of each left coset `λ_i K`.
    pub representatives: Vec<Permutation>,
    /// Parent element indices of each `λ_i K`, ascending.
    pub blocks: Vec<Vec<usize>>,
    /// Number of left cosets of `K` in `HπK`.
    pub m: usize,
    /// `|H ∩ πKπ⁻¹|`.
    pub intersection_order: usize,
    lookup: HashMap<usize, usize>,
}

impl DoubleCoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Block number of the left coset containing a parent element index.
    pub fn block_containing(&self, element: usize) -> Option<usize> {
        self.lookup.get(&element).copied()
    }
}

pub fn double_coset(
    g: &GroupTable,
    h: &GroupTable,
    pi: &Permutation,
    k: &GroupTable,
) -> Result<DoubleCoset> {
    let h_in_g = h.indices_in(g)?;
    let k_in_g = k.indices_in(g)?;
    let pi_index = g.require(pi)?;

    let mut by_min: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut assigned: HashSet<usize> = HashSet::new();
    for &hi in &h_in_g {
        let hpi = g.product_index(hi, pi_index);
        if assigned.contains(&hpi) {
            continue;
        }
        let mut block: Vec<usize> = k_in_g.iter().map(|&ki| g.product_index(hpi, ki)).collect();
        block.sort_unstable();
        assigned.extend(block.iter().copied());
        by_min.insert(block[0], block);
    }

    let mut representatives = Vec::with_capacity(by_min.len());
    let mut blocks = Vec::with_capacity(by_min.len());
    let mut lookup = HashMap::new();
    for (i, (min, block)) in by_min.into_iter().enumerate() {
        representatives.push(g.element(min).clone());
        for &e in &block {
            lookup.insert(e, i);
        }
        blocks.push(block);
    }
    let mut elements: Vec<usize> = lookup.keys().copied().collect();
    elements.sort_unstable();

    let m = blocks.len();
    let intersection_order = h.intersection(&k.conjugate_by(pi)?)?.order();
    assert_eq!(m * intersection_order, h.order(), "orbit-stabilizer count violated");

    Ok(DoubleCoset { elements, representatives, blocks, m, intersection_order, lookup })
}
