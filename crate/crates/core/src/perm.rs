//! Permutations of `{0, .., m-1}` stored as image arrays.
//!
//! Composition convention: `a.compose(&b)` is the function `a ∘ b`, so `b`
//! acts first. A product cipher `E = X Y Z` reads the same way: `Z` is applied
//! to the plaintext first and `X` last.

use std::fmt;

use crate::error::{Error, Result};

/// A bijection on `{0, .., degree-1}`. Entry `i` is the image of point `i`.
///
/// The derived ordering is lexicographic on the image sequence, which is the
/// canonical element order used by [`crate::GroupTable`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let degree = images.len();
        if degree == 0 {
            return Err(Error::EmptyPermutation);
        }
        let mut seen = vec![false; degree];
        for &p in &images {
            if p >= degree || seen[p] {
                return Err(Error::NotABijection { degree, images });
            }
            seen[p] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: usize) -> Self {
        assert!(degree > 0, "degree must be positive");
        Permutation { images: (0..degree).collect() }
    }

    /// The transposition swapping `a` and `b`.
    pub fn transposition(degree: usize, a: usize, b: usize) -> Result<Self> {
        Self::cycle(degree, &[a, b])
    }

    /// The cycle `c[0] -> c[1] -> ... -> c[0]`.
    pub fn cycle(degree: usize, cycle: &[usize]) -> Result<Self> {
        if degree == 0 {
            return Err(Error::EmptyPermutation);
        }
        let mut images: Vec<usize> = (0..degree).collect();
        let mut seen = vec![false; degree];
        for (i, &p) in cycle.iter().enumerate() {
            if p >= degree {
                return Err(Error::PointOutOfRange { point: p, degree });
            }
            if seen[p] {
                return Err(Error::DuplicatePoint(p));
            }
            seen[p] = true;
            images[p] = cycle[(i + 1) % cycle.len()];
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn into_images(self) -> Vec<usize> {
        self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { expected: self.degree(), found: other.degree() });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: other.images.iter().map(|&p| self.images[p]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &p) in self.images.iter().enumerate() {
            images[p] = i;
        }
        Permutation { images }
    }

    /// `self ∘ other ∘ self⁻¹`.
    pub fn conjugate(&self, other: &Permutation) -> Result<Permutation> {
        Ok(self.compose(other)?.compose_unchecked(&self.inverse()))
    }

    pub fn apply(&self, point: usize) -> Result<usize> {
        self.images
            .get(point)
            .copied()
            .ok_or(Error::PointOutOfRange { point, degree: self.degree() })
    }

    /// Componentwise image of a tuple of points.
    pub fn apply_tuple(&self, points: &[usize]) -> Result<Vec<usize>> {
        points.iter().map(|&p| self.apply(p)).collect()
    }

    pub fn fixes(&self, point: usize) -> bool {
        self.images.get(point) == Some(&point)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    // pointwise a(b(i)), written out independently of compose()
    fn compose_oracle(a: &[usize], b: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for i in 0..b.len() {
            let mid = b[i];
            out.push(a[mid]);
        }
        out
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(matches!(Permutation::new(vec![0, 0, 2]), Err(Error::NotABijection { .. })));
        assert!(matches!(Permutation::new(vec![0, 3, 1]), Err(Error::NotABijection { .. })));
        assert_eq!(Permutation::new(vec![]), Err(Error::EmptyPermutation));
    }

    #[test]
    fn identity_and_inverse_laws() {
        let g = perm(&[2, 0, 3, 1]);
        let e = Permutation::identity(4);
        assert_eq!(e.compose(&g).unwrap(), g);
        assert_eq!(g.compose(&e).unwrap(), g);
        assert!(g.compose(&g.inverse()).unwrap().is_identity());
        assert!(g.inverse().compose(&g).unwrap().is_identity());
    }

    #[test]
    fn right_factor_acts_first() {
        let a = Permutation::transposition(3, 0, 1).unwrap();
        let b = Permutation::transposition(3, 1, 2).unwrap();
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.images(), compose_oracle(a.images(), b.images()).as_slice());
        // (0 1)∘(1 2): 0 -> 1, 1 -> 2, 2 -> 0
        assert_eq!(ab, perm(&[1, 2, 0]));
        assert_ne!(ab, b.compose(&a).unwrap());
    }

    #[test]
    fn compose_degree_mismatch() {
        let a = Permutation::identity(3);
        let b = Permutation::identity(4);
        assert_eq!(a.compose(&b), Err(Error::DegreeMismatch { expected: 3, found: 4 }));
    }

    #[test]
    fn inverse_examples() {
        assert!(Permutation::identity(5).inverse().is_identity());
        let t = Permutation::transposition(3, 0, 1).unwrap();
        assert_eq!(t.inverse(), t);
        let c = Permutation::cycle(3, &[0, 1, 2]).unwrap();
        assert_eq!(c, perm(&[1, 2, 0]));
        assert_eq!(c.inverse(), Permutation::cycle(3, &[0, 2, 1]).unwrap());
    }

    #[test]
    fn apply_points_and_tuples() {
        let e = Permutation::identity(3);
        assert_eq!(e.apply_tuple(&[0, 2]).unwrap(), vec![0, 2]);
        let t = Permutation::transposition(3, 0, 1).unwrap();
        assert_eq!(t.apply(0).unwrap(), 1);
        let c = Permutation::cycle(3, &[0, 1, 2]).unwrap();
        assert_eq!(c.apply_tuple(&[0, 1]).unwrap(), vec![1, 2]);
        assert_eq!(c.apply(3), Err(Error::PointOutOfRange { point: 3, degree: 3 }));
    }

    #[test]
    fn display_is_image_array() {
        assert_eq!(perm(&[1, 0, 2]).to_string(), "[1,0,2]");
    }

    #[test]
    fn conjugation_moves_fixed_points() {
        let pi = perm(&[2, 0, 1]);
        let k = Permutation::transposition(3, 0, 1).unwrap(); // fixes 2
        let c = pi.conjugate(&k).unwrap();
        assert!(c.fixes(pi.apply(2).unwrap()));
    }
}
