//! Samplings and embeddings between complete designs.
//!
//! Every construction works on the containment graph between the two
//! designs. Regular samplings and embeddings come from a perfect matching of
//! a replicated containment graph; the floor variant saturates the small
//! side and hands out the leftovers; the `(1, 2)`-semiregular variant
//! completes a full matching with one colour class of an edge colouring of
//! the residual graph.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::coloring::{color_bipartite, BipartiteEdges};
use crate::containment::{biregular_degrees, build_containment, replicate, ContainmentError};
use crate::designs::{check_proper_subpattern, complete_design, copies_in_complete, BlockSet, DesignError, Redundancy};
use crate::graph::{is_subgraph, LabeledGraph};
use crate::matching::full_matching;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SamplerError {
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Containment(#[from] ContainmentError),
    #[error("divisibility fails: {0}")]
    Divisibility(Redundancy),
    #[error("the big design has fewer blocks than the small one ({big} < {small})")]
    ZeroFloor { big: usize, small: usize },
    #[error("containment graph has no full matching (maximum {size}, needed {needed})")]
    NoFullMatching { size: usize, needed: usize },
    #[error("remainder {remainder} is not strictly between 0 and {small}")]
    RemainderOutOfRange { remainder: i128, small: usize },
    #[error("count bound fails: {big}·({e}+{r}-1) <= {e}·{r}²")]
    BoundViolated { big: usize, e: usize, r: usize },
    #[error("no colour class covers the unmatched blocks")]
    NoCoveringColor,
    #[error("assignment has {found} entries for {expected} source blocks")]
    LengthMismatch { expected: usize, found: usize },
    #[error("source block {index} is assigned to nonexistent target {target}")]
    IndexOutOfRange { index: usize, target: usize },
    #[error("source block {index} does not contain its assigned block {target}")]
    ContainmentViolation { index: usize, target: usize },
    #[error("{} target blocks have no preimage (first: {})", missing.len(), missing[0])]
    NotSurjective { missing: Vec<usize> },
    #[error("the middle designs of a composition differ")]
    MidMismatch,
    #[error("block count {0} does not fit in memory")]
    TooManyBlocks(BigUint),
}

/// A map from every source block to a target block it contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingMap {
    source: BlockSet,
    target: BlockSet,
    assignment: Vec<usize>,
}

impl SamplingMap {
    /// No validation beyond shape; see [`verify_sampling`].
    pub fn new(source: BlockSet, target: BlockSet, assignment: Vec<usize>) -> Self {
        SamplingMap { source, target, assignment }
    }

    pub fn source(&self) -> &BlockSet {
        &self.source
    }

    pub fn target(&self) -> &BlockSet {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn image(&self, source_index: usize) -> &LabeledGraph {
        &self.target.blocks()[self.assignment[source_index]]
    }
}

/// A map from every block of a small-pattern design into a containing block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingMap {
    source: BlockSet,
    target: BlockSet,
    assignment: Vec<usize>,
}

impl EmbeddingMap {
    pub fn new(source: BlockSet, target: BlockSet, assignment: Vec<usize>) -> Self {
        EmbeddingMap { source, target, assignment }
    }

    pub fn source(&self) -> &BlockSet {
        &self.source
    }

    pub fn target(&self) -> &BlockSet {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Injective embeddings are called strict.
    pub fn is_strict(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.assignment.iter().all(|&t| !core::mem::replace(&mut seen[t], true))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularity {
    /// Every target has exactly `λ` preimages.
    Regular(usize),
    /// Every target has `λ` or `λ + 1` preimages, both occurring.
    Semiregular(usize),
    Irregular { min: usize, max: usize },
}

/// Preimage counts per target block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedundancyProfile {
    pub counts: Vec<usize>,
    pub min: usize,
    pub max: usize,
    /// preimage count -> number of targets with that count
    pub histogram: BTreeMap<usize, usize>,
}

impl RedundancyProfile {
    pub fn from_counts(counts: Vec<usize>) -> Self {
        let mut histogram = BTreeMap::new();
        for &c in &counts {
            *histogram.entry(c).or_insert(0) += 1;
        }
        let min = counts.iter().copied().min().unwrap_or(0);
        let max = counts.iter().copied().max().unwrap_or(0);
        RedundancyProfile { counts, min, max, histogram }
    }

    pub fn regularity(&self) -> Regularity {
        match self.max - self.min {
            0 => Regularity::Regular(self.min),
            1 => Regularity::Semiregular(self.min),
            _ => Regularity::Irregular { min: self.min, max: self.max },
        }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

fn to_count(x: &BigUint) -> Result<usize, SamplerError> {
    x.to_usize().ok_or_else(|| SamplerError::TooManyBlocks(x.clone()))
}

/// Assigns every block of `big` to a contained block of `small` so that each
/// small block is hit exactly `|big| / |small|` times.
pub fn regular_sampling_between(big: BlockSet, small: BlockSet) -> Result<SamplingMap, SamplerError> {
    let redundancy = Redundancy::divide(BigUint::from(big.len()), BigUint::from(small.len()));
    let Some(lambda) = redundancy.lambda().and_then(ToPrimitive::to_usize) else {
        return Err(SamplerError::Divisibility(redundancy));
    };
    let cg = build_containment(&big, &small)?;
    let replicated = replicate(&cg, 1, lambda);
    let matching = full_matching(&replicated);
    if matching.size() != big.len() {
        return Err(SamplerError::NoFullMatching { size: matching.size(), needed: big.len() });
    }
    let assignment = (0..big.len())
        .map(|i| replicated.collapse_right(matching.mate_of_left(i).expect("perfect matching")).0)
        .collect();
    Ok(SamplingMap::new(big, small, assignment))
}

/// A regular sampling `K_n(big) -> K_n(small)`; exists iff the block counts
/// divide exactly.
pub fn regular_sampling(n: usize, big: &LabeledGraph, small: &LabeledGraph) -> Result<SamplingMap, SamplerError> {
    let r = crate::designs::required_redundancy(n, big, small)?;
    if !r.is_exact() {
        return Err(SamplerError::Divisibility(r));
    }
    regular_sampling_between(complete_design(n, big)?, complete_design(n, small)?)
}

/// A `λ`-fold regular embedding `K_n(small) -> K_n(big)`; exists iff
/// `|K_n(small)| = λ·|K_n(big)|`.
pub fn regular_embedding(n: usize, small: &LabeledGraph, big: &LabeledGraph) -> Result<EmbeddingMap, SamplerError> {
    check_proper_subpattern(big, small)?;
    let needed = big.support().len();
    if needed > n {
        return Err(DesignError::PatternTooLarge { needed, n }.into());
    }
    let r = Redundancy::divide(copies_in_complete(n, small)?, copies_in_complete(n, big)?);
    let Some(lambda) = r.lambda().and_then(ToPrimitive::to_usize) else {
        return Err(SamplerError::Divisibility(r));
    };
    let big_design = complete_design(n, big)?;
    let small_design = complete_design(n, small)?;
    let cg = build_containment(&big_design, &small_design)?;
    let replicated = replicate(&cg, lambda, 1);
    let matching = full_matching(&replicated);
    if matching.size() != small_design.len() {
        return Err(SamplerError::NoFullMatching { size: matching.size(), needed: small_design.len() });
    }
    let assignment = (0..small_design.len())
        .map(|j| replicated.collapse_left(matching.mate_of_right(j).expect("perfect matching")).0)
        .collect();
    Ok(EmbeddingMap::new(small_design, big_design, assignment))
}

/// A sampling where every small block has at least `⌊|big| / |small|⌋`
/// preimages. Blocks left over after the saturating matching go to their
/// smallest contained target.
pub fn floor_sampling(n: usize, big: &LabeledGraph, small: &LabeledGraph) -> Result<SamplingMap, SamplerError> {
    check_proper_subpattern(big, small)?;
    let big_design = complete_design(n, big)?;
    let small_design = complete_design(n, small)?;
    let lambda = big_design.len() / small_design.len();
    if lambda == 0 {
        return Err(SamplerError::ZeroFloor { big: big_design.len(), small: small_design.len() });
    }
    let cg = build_containment(&big_design, &small_design)?;
    let replicated = replicate(&cg, 1, lambda);
    let matching = full_matching(&replicated);
    let needed = lambda * small_design.len();
    if matching.size() != needed {
        return Err(SamplerError::NoFullMatching { size: matching.size(), needed });
    }
    let mut assignment = Vec::with_capacity(big_design.len());
    for i in 0..big_design.len() {
        let target = match matching.mate_of_left(i) {
            Some(v) => replicated.collapse_right(v).0,
            None => cg
                .adjacent(i)
                .iter()
                .map(|&j| j as usize)
                .min_by(|&a, &b| small_design.blocks()[a].cmp(&small_design.blocks()[b]))
                .ok_or(SamplerError::NoFullMatching { size: matching.size(), needed: big_design.len() })?,
        };
        assignment.push(target);
    }
    Ok(SamplingMap::new(big_design, small_design, assignment))
}

/// A `(1, 2)`-semiregular sampling when `|big| = |small| + r` with
/// `0 < r < |small|` and `|big| > e·r² / (e + r − 1)`.
pub fn semiregular_sampling(n: usize, big: &LabeledGraph, small: &LabeledGraph) -> Result<SamplingMap, SamplerError> {
    check_proper_subpattern(big, small)?;
    let b1 = to_count(&copies_in_complete(n, big)?)?;
    let b2 = to_count(&copies_in_complete(n, small)?)?;
    let r = b1 as i128 - b2 as i128;
    if r <= 0 || r >= b2 as i128 {
        return Err(SamplerError::RemainderOutOfRange { remainder: r, small: b2 });
    }
    let r = r as usize;
    let big_design = complete_design(n, big)?;
    let small_design = complete_design(n, small)?;
    let mut cg = build_containment(&big_design, &small_design)?;
    let (d, e) = biregular_degrees(&mut cg)?;
    let (b1w, ew, rw) = (b1 as u128, e as u128, r as u128);
    if b1w * (ew + rw - 1) <= ew * rw * rw {
        return Err(SamplerError::BoundViolated { big: b1, e, r });
    }
    // d > (r − 1)(e − 1) / r
    assert!(d * r > (r - 1) * (e - 1), "degree bound d > (r-1)(e-1)/r violated");

    let matching = full_matching(&cg);
    if matching.size() != b2 {
        return Err(SamplerError::NoFullMatching { size: matching.size(), needed: b2 });
    }
    let mut assignment: Vec<Option<usize>> = (0..b1).map(|i| matching.mate_of_left(i)).collect();
    let unmatched: Vec<usize> = (0..b1).filter(|&i| assignment[i].is_none()).collect();
    debug_assert_eq!(unmatched.len(), r);

    let residual_edges = unmatched
        .iter()
        .enumerate()
        .flat_map(|(k, &i)| cg.adjacent(i).iter().map(move |&j| (k, j as usize)))
        .collect();
    let residual = BipartiteEdges::new(unmatched.len(), b2, residual_edges);
    let coloring = color_bipartite(&residual);
    assert!(coloring.color_count() < e, "residual graph needs at most e - 1 colours");

    let covering = (0..coloring.color_count())
        .find_map(|c| {
            let mut picks = vec![None; unmatched.len()];
            for id in coloring.class(c) {
                let (k, j) = residual.edges()[id];
                picks[k] = Some(j);
            }
            picks.into_iter().collect::<Option<Vec<usize>>>()
        })
        .ok_or(SamplerError::NoCoveringColor)?;
    for (k, &i) in unmatched.iter().enumerate() {
        assignment[i] = Some(covering[k]);
    }
    let assignment = assignment.into_iter().map(|a| a.expect("every block assigned")).collect();
    Ok(SamplingMap::new(big_design, small_design, assignment))
}

fn tally(source: &BlockSet, target: &BlockSet, assignment: &[usize]) -> Result<Vec<usize>, SamplerError> {
    if assignment.len() != source.len() {
        return Err(SamplerError::LengthMismatch { expected: source.len(), found: assignment.len() });
    }
    let mut counts = vec![0usize; target.len()];
    for (index, &t) in assignment.iter().enumerate() {
        let Some(c) = counts.get_mut(t) else {
            return Err(SamplerError::IndexOutOfRange { index, target: t });
        };
        *c += 1;
    }
    Ok(counts)
}

/// Checks containment and surjectivity and returns the preimage profile.
pub fn verify_sampling(sm: &SamplingMap) -> Result<RedundancyProfile, SamplerError> {
    let counts = tally(&sm.source, &sm.target, &sm.assignment)?;
    for (index, &t) in sm.assignment.iter().enumerate() {
        if !is_subgraph(&sm.target.blocks()[t], &sm.source.blocks()[index]) {
            return Err(SamplerError::ContainmentViolation { index, target: t });
        }
    }
    let missing: Vec<usize> = counts.iter().enumerate().filter(|(_, &c)| c == 0).map(|(j, _)| j).collect();
    if !missing.is_empty() {
        return Err(SamplerError::NotSurjective { missing });
    }
    Ok(RedundancyProfile::from_counts(counts))
}

/// Checks `G ≤ ψ(G)` for every source block and returns the preimage
/// profile over the target design.
pub fn verify_embedding(em: &EmbeddingMap) -> Result<RedundancyProfile, SamplerError> {
    let counts = tally(&em.source, &em.target, &em.assignment)?;
    for (index, &t) in em.assignment.iter().enumerate() {
        if !is_subgraph(&em.source.blocks()[index], &em.target.blocks()[t]) {
            return Err(SamplerError::ContainmentViolation { index, target: t });
        }
    }
    Ok(RedundancyProfile::from_counts(counts))
}

/// `second ∘ first`: source of `first` to target of `second`.
pub fn compose(first: &SamplingMap, second: &SamplingMap) -> Result<SamplingMap, SamplerError> {
    if first.target != second.source {
        return Err(SamplerError::MidMismatch);
    }
    let assignment = first.assignment.iter().map(|&mid| second.assignment[mid]).collect();
    Ok(SamplingMap::new(first.source.clone(), second.target.clone(), assignment))
}
