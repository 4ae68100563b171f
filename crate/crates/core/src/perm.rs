//! Permutations of `0..n` and finite permutation groups.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;
use core::fmt;

use crate::graph::Vertex;

/// Largest group order that will be materialized element by element.
pub const MATERIALIZE_LIMIT: usize = 400_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("image list is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("generator of degree {found} in a group of degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group has more than {0} elements and cannot be materialized")]
    TooLarge(usize),
}

/// A permutation given by its image list: `x -> images[x]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<Vertex>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as Vertex).collect())
    }

    pub fn from_images(images: Vec<Vertex>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        for &x in &images {
            if x as usize >= n || core::mem::replace(&mut seen[x as usize], true) {
                return Err(PermError::NotAPermutation(n));
            }
        }
        Ok(Permutation(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<Vertex>) -> Self {
        Permutation(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[Vertex] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, x: Vertex) -> Vertex {
        self.0[x as usize]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = alloc::vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as Vertex;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as Vertex == x)
    }

    /// Image of a vertex set, sorted.
    pub fn apply_set(&self, set: &[Vertex]) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = set.iter().map(|&x| self.apply(x)).collect();
        out.sort_unstable();
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// How a group was produced; informational only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic,
    /// `x -> a*x + b` over `Z_n` with `a` a nonzero square unit.
    AffineSquare,
    Symmetric,
    Custom,
}

#[derive(Debug, Clone)]
pub struct PermutationGroup {
    degree: usize,
    kind: GroupKind,
    generators: Vec<Permutation>,
    order: u64,
    elements: Option<Vec<Permutation>>,
}

impl PermutationGroup {
    /// Materializes the group generated by `generators` by breadth-first
    /// closure. Elements are returned sorted, identity first.
    pub fn generate(degree: usize, generators: Vec<Permutation>, kind: GroupKind) -> Result<Self, PermError> {
        Self::generate_bounded(degree, generators, kind, MATERIALIZE_LIMIT)
    }

    pub fn generate_bounded(
        degree: usize,
        generators: Vec<Permutation>,
        kind: GroupKind,
        limit: usize,
    ) -> Result<Self, PermError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        let id = Permutation::identity(degree);
        let mut seen = BTreeSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for s in &generators {
                let y = s.compose(&x);
                if !seen.contains(&y) {
                    if seen.len() >= limit {
                        return Err(PermError::TooLarge(limit));
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let elements: Vec<_> = seen.into_iter().collect();
        Ok(PermutationGroup { degree, kind, generators, order: elements.len() as u64, elements: Some(elements) })
    }

    /// A group described by generators and a known order, not materialized.
    pub fn with_order(degree: usize, generators: Vec<Permutation>, order: u64, kind: GroupKind) -> Self {
        PermutationGroup { degree, kind, generators, order, elements: None }
    }

    /// A group from an explicit element list (which must be closed).
    pub(crate) fn from_elements(degree: usize, generators: Vec<Permutation>, mut elements: Vec<Permutation>, kind: GroupKind) -> Self {
        elements.sort();
        elements.dedup();
        PermutationGroup { degree, kind, generators, order: elements.len() as u64, elements: Some(elements) }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn elements(&self) -> Option<&[Permutation]> {
        self.elements.as_deref()
    }

    /// Materialized copy of this group, if it is small enough.
    pub fn materialized(&self) -> Result<PermutationGroup, PermError> {
        if self.elements.is_some() {
            return Ok(self.clone());
        }
        if self.order > MATERIALIZE_LIMIT as u64 {
            return Err(PermError::TooLarge(MATERIALIZE_LIMIT));
        }
        let mut g = Self::generate(self.degree, self.generators.clone(), self.kind)?;
        g.order = g.elements.as_ref().map_or(0, |e| e.len() as u64);
        Ok(g)
    }

    /// Checks closure of the element list: every element times every
    /// generator, and every inverse, is again an element.
    pub fn check_closure(&self) -> bool {
        let Some(elements) = &self.elements else {
            return false;
        };
        let contains = |p: &Permutation| elements.binary_search(p).is_ok();
        elements.iter().all(|x| contains(&x.inverse()) && self.generators.iter().all(|s| contains(&s.compose(x))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        let p = Permutation::from_images(alloc::vec![1, 2, 0]).unwrap();
        let q = Permutation::from_images(alloc::vec![0, 2, 1]).unwrap();
        // p∘q: 0 -> q 0 -> p 1
        assert_eq!(p.compose(&q).images(), &[1, 0, 2]);
        assert!(p.compose(&p.inverse()).is_identity());
        assert!(Permutation::from_images(alloc::vec![0, 0, 1]).is_err());
    }

    #[test]
    fn closure_of_generators() {
        let r = Permutation::from_images(alloc::vec![1, 2, 3, 0]).unwrap();
        let s = Permutation::from_images(alloc::vec![0, 3, 2, 1]).unwrap();
        let d8 = PermutationGroup::generate(4, alloc::vec![r, s], GroupKind::Custom).unwrap();
        assert_eq!(d8.order(), 8);
        assert!(d8.check_closure());
        assert!(d8.elements().unwrap()[0].is_identity());
    }

    #[test]
    fn materialization_limit() {
        let cyc = Permutation::from_images((1..6).chain([0]).collect()).unwrap();
        let swap = Permutation::from_images(alloc::vec![1, 0, 2, 3, 4, 5]).unwrap();
        let err = PermutationGroup::generate_bounded(6, alloc::vec![cyc, swap], GroupKind::Symmetric, 100);
        assert_eq!(err.unwrap_err(), PermError::TooLarge(100));
    }
}
