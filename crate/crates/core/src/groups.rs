//! Permutation group actions on blocks, orbit decompositions, and samplings
//! lifted equivariantly from a system of orbit representatives.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::designs::{complete_design, BlockSet, DesignError, PatternFamily};
use crate::graph::{is_subgraph, LabeledGraph, Vertex};
pub use crate::perm::GroupKind;
use crate::perm::{PermError, Permutation, PermutationGroup};
use crate::sampler::{verify_sampling, Regularity, SamplerError, SamplingMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("the affine-square group is only built for prime n, got {0}")]
    NotPrime(usize),
    #[error("group degree must be at least 1")]
    EmptyDegree,
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("object set is not closed under the group: image of object {object} is missing")]
    NotClosed { object: usize },
    #[error("group is not semiregular on the big class: {representative:?} has stabilizer of order {stabilizer}")]
    NotSemiregular { representative: LabeledGraph, stabilizer: usize },
    #[error("{0:?} is not in the object class")]
    NotInClass(LabeledGraph),
    #[error("{second:?} lies in the orbit of {first:?}; its sample is forced to be {forced:?}")]
    RepresentativeConflict { first: LabeledGraph, second: LabeledGraph, forced: LabeledGraph },
    #[error("no representative given for the orbit of {0:?}")]
    MissingOrbit(LabeledGraph),
    #[error("sample {sample:?} is not contained in representative {block:?}")]
    RowContainment { block: LabeledGraph, sample: LabeledGraph },
    #[error("class sizes {big} and {small} do not divide")]
    NotDivisible { big: usize, small: usize },
    #[error("{representative:?} is sampled {count} times with stabilizer order {stabilizer}; redundancy {lambda} needs count·stabilizer = redundancy")]
    PreimageCount { representative: LabeledGraph, count: usize, stabilizer: usize, lambda: usize },
    #[error("n = {0} is not congruent to 2 mod 3 (or is below 5)")]
    NotTwoModThree(usize),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Design(#[from] DesignError),
}

/// Objects a permutation of the ground set acts on.
pub trait Action: Ord + Clone {
    fn act(&self, p: &Permutation) -> Self;
}

impl Action for LabeledGraph {
    fn act(&self, p: &Permutation) -> Self {
        self.permuted(p)
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn affine(n: usize, a: usize, b: usize) -> Permutation {
    Permutation::from_images((0..n).map(|x| ((a * x + b) % n) as Vertex).collect()).expect("unit multiplier")
}

/// Builds and materializes one of the standard groups on `0..n`.
///
/// Cyclic has order `n`; the affine-square group `x -> a·x + b` with `a` a
/// nonzero square has order `n·(n−1)/2` for odd prime `n`; symmetric has
/// order `n!` and is only materialized for small `n`.
pub fn make_group(kind: GroupKind, n: usize) -> Result<PermutationGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::EmptyDegree);
    }
    match kind {
        GroupKind::Cyclic => {
            let elements: Vec<_> = (0..n).map(|b| affine(n, 1, b)).collect();
            Ok(PermutationGroup::from_elements(n, vec![affine(n, 1, 1 % n)], elements, kind))
        }
        GroupKind::AffineSquare => {
            if !is_prime(n) {
                return Err(GroupError::NotPrime(n));
            }
            let mut squares: Vec<usize> = (1..n).map(|a| a * a % n).collect();
            squares.sort_unstable();
            squares.dedup();
            let elements = squares.iter().flat_map(|&a| (0..n).map(move |b| affine(n, a, b))).collect();
            let generators = core::iter::once(affine(n, 1, 1))
                .chain(squares.iter().filter(|&&a| a != 1).map(|&a| affine(n, a, 0)))
                .collect();
            Ok(PermutationGroup::from_elements(n, generators, elements, kind))
        }
        GroupKind::Symmetric => {
            let cycle = Permutation::from_images((0..n).map(|x| ((x + 1) % n) as Vertex).collect())?;
            let mut swap: Vec<Vertex> = (0..n as Vertex).collect();
            if n > 1 {
                swap.swap(0, 1);
            }
            let gens = vec![cycle, Permutation::from_images(swap)?];
            Ok(PermutationGroup::generate(n, gens, kind)?)
        }
        GroupKind::Custom => Ok(PermutationGroup::generate(n, Vec::new(), kind)?),
    }
}

/// Orbits of a group on a closed, sorted collection of objects.
#[derive(Debug, Clone)]
pub struct OrbitDecomposition<T> {
    objects: Vec<T>,
    orbit_of: Vec<usize>,
    // index into the group's element list with element(representative) = object
    transporter: Vec<usize>,
    representatives: Vec<usize>,
    sizes: Vec<usize>,
    stabilizers: Vec<usize>,
    group_order: usize,
}

impl<T: Action> OrbitDecomposition<T> {
    pub fn objects(&self) -> &[T] {
        &self.objects
    }

    pub fn orbit_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn index_of(&self, x: &T) -> Option<usize> {
        self.objects.binary_search(x).ok()
    }

    pub fn orbit_of(&self, x: &T) -> Option<usize> {
        self.index_of(x).map(|i| self.orbit_of[i])
    }

    /// Representative of orbit `k`: its member with the smallest key.
    pub fn representative(&self, k: usize) -> &T {
        &self.objects[self.representatives[k]]
    }

    pub fn representatives(&self) -> impl Iterator<Item = &T> + '_ {
        self.representatives.iter().map(move |&i| &self.objects[i])
    }

    pub fn orbit_size(&self, k: usize) -> usize {
        self.sizes[k]
    }

    pub fn stabilizer_order(&self, k: usize) -> usize {
        self.stabilizers[k]
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn members(&self, k: usize) -> impl Iterator<Item = &T> + '_ {
        self.objects.iter().zip(&self.orbit_of).filter(move |(_, &o)| o == k).map(|(x, _)| x)
    }
}

fn elements_of(g: &PermutationGroup) -> Result<PermutationGroup, GroupError> {
    Ok(g.materialized()?)
}

/// Splits `objects` into orbits of `g`. Representatives are orbit minima;
/// stabilizer orders are counted directly.
pub fn orbits<T: Action>(g: &PermutationGroup, objects: &[T]) -> Result<OrbitDecomposition<T>, GroupError> {
    let g = elements_of(g)?;
    let elements = g.elements().expect("materialized");
    let mut objects = objects.to_vec();
    objects.sort();
    objects.dedup();
    let mut orbit_of = vec![usize::MAX; objects.len()];
    let mut transporter = vec![usize::MAX; objects.len()];
    let (mut representatives, mut sizes, mut stabilizers) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..objects.len() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let k = representatives.len();
        let (mut size, mut stab) = (0, 0);
        for (e, p) in elements.iter().enumerate() {
            let image = objects[i].act(p);
            let j = objects.binary_search(&image).map_err(|_| GroupError::NotClosed { object: i })?;
            if j == i {
                stab += 1;
            }
            if orbit_of[j] == usize::MAX {
                orbit_of[j] = k;
                transporter[j] = e;
                size += 1;
            }
        }
        assert_eq!(size * stab, elements.len(), "orbit-stabilizer identity");
        representatives.push(i);
        sizes.push(size);
        stabilizers.push(stab);
    }
    Ok(OrbitDecomposition {
        objects,
        orbit_of,
        transporter,
        representatives,
        sizes,
        stabilizers,
        group_order: elements.len(),
    })
}

/// True iff every object has a trivial stabilizer.
pub fn is_semiregular<T: Action>(g: &PermutationGroup, objects: &[T]) -> Result<bool, GroupError> {
    Ok(orbits(g, objects)?.stabilizers.iter().all(|&s| s == 1))
}

/// A sampling obtained by extending a representative-level map along the
/// group, together with the rows it was lifted from.
#[derive(Debug, Clone)]
pub struct LiftedSampling {
    pub sampling: SamplingMap,
    /// `(representative, sample)` in the order supplied.
    pub rows: Vec<(LabeledGraph, LabeledGraph)>,
    pub lambda: usize,
}

fn design_of(n: usize, blocks: Vec<LabeledGraph>) -> Result<BlockSet, DesignError> {
    let host = LabeledGraph::complete(n);
    let edges: usize = blocks.first().map_or(0, LabeledGraph::edge_count);
    let multiplicity = (blocks.len() * edges / host.edge_count().max(1)).max(1);
    BlockSet::new(host, multiplicity as u32, blocks)
}

/// Extends `rows` (one `(block, contained sample)` pair per orbit of the big
/// class) to the whole class by `ξ(σ(t)) = σ(ξ(t))`.
///
/// Requires `g` to act semiregularly on the big class and every small orbit
/// `u` to be hit by exactly `λ / |Stab(u)|` rows, where `λ` is the ratio of
/// the class sizes. The result is checked to be a regular sampling.
pub fn lift_sampling(
    g: &PermutationGroup,
    big: &OrbitDecomposition<LabeledGraph>,
    small: &OrbitDecomposition<LabeledGraph>,
    rows: &[(LabeledGraph, LabeledGraph)],
) -> Result<LiftedSampling, GroupError> {
    let g = elements_of(g)?;
    let elements = g.elements().expect("materialized");
    if let Some(k) = big.stabilizers.iter().position(|&s| s != 1) {
        return Err(GroupError::NotSemiregular {
            representative: big.representative(k).clone(),
            stabilizer: big.stabilizers[k],
        });
    }
    // σ with σ(from) = to, both in the same big orbit
    let carry = |from: usize, to: usize| -> Permutation {
        elements[big.transporter[to]].compose(&elements[big.transporter[from]].inverse())
    };

    let mut row_of_orbit: Vec<Option<usize>> = vec![None; big.orbit_count()];
    let mut row_index = Vec::with_capacity(rows.len());
    for (r, (block, sample)) in rows.iter().enumerate() {
        let t = big.index_of(block).ok_or_else(|| GroupError::NotInClass(block.clone()))?;
        if small.index_of(sample).is_none() {
            return Err(GroupError::NotInClass(sample.clone()));
        }
        let k = big.orbit_of[t];
        if let Some(r0) = row_of_orbit[k] {
            let t0 = row_index[r0];
            return Err(GroupError::RepresentativeConflict {
                first: rows[r0].0.clone(),
                second: block.clone(),
                forced: rows[r0].1.act(&carry(t0, t)),
            });
        }
        if !is_subgraph(sample, block) {
            return Err(GroupError::RowContainment { block: block.clone(), sample: sample.clone() });
        }
        row_of_orbit[k] = Some(r);
        row_index.push(t);
    }
    if let Some(k) = row_of_orbit.iter().position(Option::is_none) {
        return Err(GroupError::MissingOrbit(big.representative(k).clone()));
    }

    let (nb, ns) = (big.objects.len(), small.objects.len());
    if ns == 0 || nb % ns != 0 {
        return Err(GroupError::NotDivisible { big: nb, small: ns });
    }
    let lambda = nb / ns;
    let mut hits = vec![0usize; small.orbit_count()];
    for (_, sample) in rows {
        hits[small.orbit_of(sample).expect("checked above")] += 1;
    }
    for (u, &count) in hits.iter().enumerate() {
        if count * small.stabilizers[u] != lambda {
            return Err(GroupError::PreimageCount {
                representative: small.representative(u).clone(),
                count,
                stabilizer: small.stabilizers[u],
                lambda,
            });
        }
    }

    let mut assignment = Vec::with_capacity(nb);
    for x in 0..nb {
        let r = row_of_orbit[big.orbit_of[x]].expect("all orbits covered");
        let sigma = carry(row_index[r], x);
        let image = rows[r].1.act(&sigma);
        assignment.push(small.index_of(&image).ok_or(GroupError::NotClosed { object: x })?);
    }
    let n = g.degree();
    let sampling = SamplingMap::new(design_of(n, big.objects.clone())?, design_of(n, small.objects.clone())?, assignment);
    let profile = verify_sampling(&sampling)?;
    debug_assert_eq!(profile.regularity(), Regularity::Regular(lambda));
    Ok(LiftedSampling { sampling, rows: rows.to_vec(), lambda })
}

/// First `(element, source block)` pair violating `ξ(σ(t)) = σ(ξ(t))`,
/// scanning every element of `g` and every source block.
pub fn equivariance_violation(g: &PermutationGroup, sm: &SamplingMap) -> Result<Option<(usize, usize)>, GroupError> {
    let g = elements_of(g)?;
    let source = sm.source().blocks();
    let mut order: Vec<usize> = (0..source.len()).collect();
    order.sort_by(|&a, &b| source[a].cmp(&source[b]));
    for (e, sigma) in g.elements().expect("materialized").iter().enumerate() {
        for (t, block) in source.iter().enumerate() {
            let moved = block.act(sigma);
            let Ok(pos) = order.binary_search_by(|&i| source[i].cmp(&moved)) else {
                return Ok(Some((e, t)));
            };
            if *sm.image(order[pos]) != sm.image(t).act(sigma) {
                return Ok(Some((e, t)));
            }
        }
    }
    Ok(None)
}

/// Starter families for a regular 2-sampling of the 3-subsets of `Z_n`
/// under the cyclic group, `n ≡ 2 (mod 3)`.
///
/// Triples are stored ordered as `[0, l, m]`; the sampled pair is `{0, l}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleStarter {
    pub n: usize,
    pub lambda: usize,
    pub v: usize,
    /// `{0, i, i+t}`, `i = 1..=λ+1`, `t = 1..=λ`.
    pub t1: Vec<[Vertex; 3]>,
    /// `{0, l, m}`, `l = λ+2..v`, `m = l+1..=2λ+1`.
    pub t2: Vec<[Vertex; 3]>,
    /// `{0, j, u}`, `j = λ+2..v`, `u = 1..=j−λ−1`.
    pub t3: Vec<[Vertex; 3]>,
    /// `{0, v, u}`: for odd `n`, `u = 1..=v−λ−1` and `u = v+1..=2λ+1`;
    /// for even `n`, `u = 1..=λ/2`.
    pub t4: Vec<[Vertex; 3]>,
    /// Pair representatives `{0, x}`, `x = 1..=v`.
    pub pairs: Vec<[Vertex; 2]>,
}

pub fn triple_starter(n: usize) -> Result<TripleStarter, GroupError> {
    if n < 5 || n % 3 != 2 {
        return Err(GroupError::NotTwoModThree(n));
    }
    let lambda = (n - 2) / 3;
    let v = n / 2;
    let tri = |a: usize, b: usize| [0, a as Vertex, b as Vertex];
    let t1 = (1..=lambda + 1).flat_map(|i| (1..=lambda).map(move |t| tri(i, i + t))).collect();
    let t2 = (lambda + 2..v).flat_map(|l| (l + 1..=2 * lambda + 1).map(move |m| tri(l, m))).collect();
    let t3 = (lambda + 2..v).flat_map(|j| (1..j - lambda).map(move |u| tri(j, u))).collect();
    let t4 = if n % 2 == 1 {
        (1..v - lambda).chain(v + 1..=2 * lambda + 1).map(|u| tri(v, u)).collect()
    } else {
        (1..=lambda / 2).map(|p| tri(v, p)).collect()
    };
    let pairs = (1..=v).map(|x| [0, x as Vertex]).collect();
    Ok(TripleStarter { n, lambda, v, t1, t2, t3, t4, pairs })
}

impl TripleStarter {
    /// Label of the last family: `T4^1` for odd `n`, `T4^2` for even.
    pub fn t4_label(&self) -> &'static str {
        if self.n % 2 == 1 {
            "T4^1"
        } else {
            "T4^2"
        }
    }

    pub fn families(&self) -> [(&'static str, &[[Vertex; 3]]); 4] {
        [("T1", &self.t1), ("T2", &self.t2), ("T3", &self.t3), (self.t4_label(), &self.t4)]
    }

    /// `(triple, sampled pair)` for every starter triple, first occurrence of
    /// each set kept. Families only overlap at `n = 5`.
    pub fn rows(&self) -> Vec<(LabeledGraph, LabeledGraph)> {
        let mut seen = BTreeMap::new();
        for (_, fam) in self.families() {
            for t in fam.iter() {
                let block = LabeledGraph::complete_on(self.n, t);
                let sample = LabeledGraph::complete_on(self.n, &t[..2]);
                let next = seen.len();
                seen.entry(block).or_insert((next, sample));
            }
        }
        let mut rows: Vec<_> = seen.into_iter().map(|(b, (i, s))| (i, b, s)).collect();
        rows.sort_by_key(|r| r.0);
        rows.into_iter().map(|(_, b, s)| (b, s)).collect()
    }
}

/// Regular 2-sampling of the 3-subsets of an `n`-set with redundancy
/// `(n − 2)/3`, lifted from the starter through the cyclic group.
pub fn triple_sampling(n: usize) -> Result<LiftedSampling, GroupError> {
    let starter = triple_starter(n)?;
    let g = make_group(GroupKind::Cyclic, n)?;
    let big = orbits(&g, complete_design(n, &PatternFamily::Complete(3).graph())?.blocks())?;
    let small = orbits(&g, complete_design(n, &PatternFamily::Complete(2).graph())?.blocks())?;
    lift_sampling(&g, &big, &small, &starter.rows())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subsets(n: usize, k: usize) -> Vec<LabeledGraph> {
        complete_design(n, &PatternFamily::Complete(k).graph()).unwrap().into_blocks()
    }

    #[test]
    fn group_orders() {
        assert_eq!(make_group(GroupKind::Cyclic, 7).unwrap().order(), 7);
        assert_eq!(make_group(GroupKind::AffineSquare, 7).unwrap().order(), 21);
        assert_eq!(make_group(GroupKind::AffineSquare, 23).unwrap().order(), 253);
        assert_eq!(make_group(GroupKind::Symmetric, 5).unwrap().order(), 120);
        assert_eq!(make_group(GroupKind::AffineSquare, 15).unwrap_err(), GroupError::NotPrime(15));
        for g in [make_group(GroupKind::AffineSquare, 11).unwrap(), make_group(GroupKind::Cyclic, 9).unwrap()] {
            assert!(g.check_closure());
        }
    }

    #[test]
    fn orbit_stabilizer_holds() {
        let g = make_group(GroupKind::Cyclic, 14).unwrap();
        let dec = orbits(&g, &subsets(14, 2)).unwrap();
        assert_eq!(dec.orbit_count(), 7);
        for k in 0..dec.orbit_count() {
            assert_eq!(dec.orbit_size(k) * dec.stabilizer_order(k), 14);
            assert!(dec.members(k).any(|x| x == dec.representative(k)));
        }
        let half = dec.orbit_of(&LabeledGraph::complete_on(14, &[0, 7])).unwrap();
        assert_eq!(dec.stabilizer_order(half), 2);
    }

    #[test]
    fn semiregularity() {
        let z14 = make_group(GroupKind::Cyclic, 14).unwrap();
        assert!(is_semiregular(&z14, &subsets(14, 3)).unwrap());
        assert!(!is_semiregular(&z14, &subsets(14, 2)).unwrap());
        let aff = make_group(GroupKind::AffineSquare, 23).unwrap();
        let pairs = orbits(&aff, &subsets(23, 2)).unwrap();
        assert_eq!(pairs.orbit_count(), 1);
        assert_eq!(pairs.orbit_size(0), 253);
        assert!(is_semiregular(&aff, &subsets(23, 2)).unwrap());
    }

    #[test]
    fn unclosed_objects() {
        let g = make_group(GroupKind::Cyclic, 5).unwrap();
        let some = vec![LabeledGraph::complete_on(5, &[0, 1])];
        assert!(matches!(orbits(&g, &some), Err(GroupError::NotClosed { .. })));
    }

    #[test]
    fn starter_family_sizes() {
        let s = triple_starter(14).unwrap();
        assert_eq!((s.t1.len(), s.t2.len(), s.t3.len(), s.t4.len()), (20, 3, 1, 2));
        assert_eq!(s.t4_label(), "T4^2");
        let s = triple_starter(17).unwrap();
        assert_eq!((s.t1.len(), s.t2.len(), s.t3.len(), s.t4.len()), (30, 4, 1, 5));
        let s = triple_starter(5).unwrap();
        assert_eq!((s.lambda, s.v), (1, 2));
        assert_eq!(s.t1, vec![[0, 1, 2], [0, 2, 3]]);
        assert!(s.t2.is_empty() && s.t3.is_empty());
        assert_eq!(s.t4, vec![[0, 2, 3]]);
        // 10/5 orbits once the repeated triple is dropped
        assert_eq!(s.rows().len(), 2);
        assert_eq!(triple_starter(9).unwrap_err(), GroupError::NotTwoModThree(9));
        assert_eq!(triple_starter(2).unwrap_err(), GroupError::NotTwoModThree(2));
    }

    #[test]
    fn triple_samplings_are_regular() {
        for (n, lambda) in [(5, 1), (8, 2), (11, 3), (14, 4), (17, 5), (20, 6)] {
            let lifted = triple_sampling(n).unwrap();
            assert_eq!(lifted.lambda, lambda);
            let p = verify_sampling(&lifted.sampling).unwrap();
            assert_eq!(p.regularity(), Regularity::Regular(lambda), "n = {n}");
            let g = make_group(GroupKind::Cyclic, n).unwrap();
            assert_eq!(equivariance_violation(&g, &lifted.sampling).unwrap(), None);
        }
    }

    #[test]
    fn missing_and_miscounted_rows() {
        let g = make_group(GroupKind::Cyclic, 8).unwrap();
        let big = orbits(&g, &subsets(8, 3)).unwrap();
        let small = orbits(&g, &subsets(8, 2)).unwrap();
        let mut rows = triple_starter(8).unwrap().rows();
        let last = rows.pop().unwrap();
        assert!(matches!(lift_sampling(&g, &big, &small, &rows), Err(GroupError::MissingOrbit(_))));
        // resample the {0,4,1} row onto {0,1}: {0,1} gets three rows
        rows.push((last.0.clone(), LabeledGraph::complete_on(8, &[0, 1])));
        assert!(matches!(lift_sampling(&g, &big, &small, &rows), Err(GroupError::PreimageCount { .. })));
        rows.pop();
        rows.push((last.0, LabeledGraph::complete_on(8, &[2, 3])));
        assert!(matches!(lift_sampling(&g, &big, &small, &rows), Err(GroupError::RowContainment { .. })));
    }

    #[test]
    fn non_semiregular_big_class() {
        let g = make_group(GroupKind::Cyclic, 6).unwrap();
        // {0,2,4} is fixed by the shift by 2
        let big = orbits(&g, &subsets(6, 3)).unwrap();
        let small = orbits(&g, &subsets(6, 2)).unwrap();
        assert!(matches!(lift_sampling(&g, &big, &small, &[]), Err(GroupError::NotSemiregular { stabilizer: 3, .. })));
    }
}
