//! Complete designs, exact copy counts and design verification.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::graph::{contains_copy, enumerate_copies, graph_automorphisms, is_subgraph, GraphError, LabeledGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DesignError {
    #[error("block {index} is not a subgraph of the host")]
    BlockOutsideHost { index: usize },
    #[error("block {index} has order {found}, host has order {expected}")]
    OrderMismatch { index: usize, expected: usize, found: usize },
    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("pattern has no edges")]
    EmptyPattern,
    #[error("pattern needs {needed} vertices but the host has {n}")]
    PatternTooLarge { needed: usize, n: usize },
    #[error("the small pattern is not a proper subgraph of the big pattern")]
    NotProperSubgraph,
    #[error("no closed form is available for {0}")]
    UnsupportedFamily(PatternFamily),
    #[error("invalid pattern family `{0}`")]
    BadFamily(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A (multi)design: blocks inside a host graph whose edges are meant to be
/// covered `multiplicity` times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSet {
    host: LabeledGraph,
    multiplicity: u32,
    blocks: Vec<LabeledGraph>,
}

impl BlockSet {
    pub fn new(host: LabeledGraph, multiplicity: u32, blocks: Vec<LabeledGraph>) -> Result<Self, DesignError> {
        if multiplicity == 0 {
            return Err(DesignError::ZeroMultiplicity);
        }
        for (index, b) in blocks.iter().enumerate() {
            if b.n() != host.n() {
                return Err(DesignError::OrderMismatch { index, expected: host.n(), found: b.n() });
            }
            if !is_subgraph(b, &host) {
                return Err(DesignError::BlockOutsideHost { index });
            }
        }
        Ok(BlockSet { host, multiplicity, blocks })
    }

    pub fn host(&self) -> &LabeledGraph {
        &self.host
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn blocks(&self) -> &[LabeledGraph] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Index of `block`, assuming blocks are sorted (true for complete designs).
    pub fn position_sorted(&self, block: &LabeledGraph) -> Option<usize> {
        self.blocks.binary_search(block).ok()
    }

    pub fn into_blocks(self) -> Vec<LabeledGraph> {
        self.blocks
    }
}

/// Named pattern graphs. Sizes count vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternFamily {
    Complete(usize),
    Cycle(usize),
    Path(usize),
    /// `S_{m+1}`: centre `0`, rays to `1..=m`.
    Star(usize),
    /// `W_{m+1}`: rim cycle on `0..m`, hub `m`.
    Wheel(usize),
}

impl PatternFamily {
    pub fn size(&self) -> usize {
        match *self {
            PatternFamily::Complete(k)
            | PatternFamily::Cycle(k)
            | PatternFamily::Path(k)
            | PatternFamily::Star(k)
            | PatternFamily::Wheel(k) => k,
        }
    }

    fn min_size(&self) -> usize {
        match self {
            PatternFamily::Complete(_) | PatternFamily::Path(_) | PatternFamily::Star(_) => 2,
            PatternFamily::Cycle(_) => 3,
            PatternFamily::Wheel(_) => 4,
        }
    }

    pub fn validate(self) -> Result<Self, DesignError> {
        if self.size() < self.min_size() {
            return Err(DesignError::BadFamily(alloc::format!("{self}")));
        }
        Ok(self)
    }

    pub fn graph(&self) -> LabeledGraph {
        let k = self.size();
        let vs: Vec<Vertex> = (0..k as Vertex).collect();
        let edges: Vec<(Vertex, Vertex)> = match *self {
            PatternFamily::Complete(_) => return LabeledGraph::complete(k),
            PatternFamily::Cycle(_) => (0..k).map(|i| (vs[i], vs[(i + 1) % k])).collect(),
            PatternFamily::Path(_) => vs.windows(2).map(|w| (w[0], w[1])).collect(),
            PatternFamily::Star(_) => (1..k as Vertex).map(|x| (0, x)).collect(),
            PatternFamily::Wheel(_) => {
                let m = k - 1;
                (0..m)
                    .map(|i| (vs[i], vs[(i + 1) % m]))
                    .chain((0..m).map(|i| (vs[i], m as Vertex)))
                    .collect()
            }
        };
        LabeledGraph::new(k, edges).expect("family graphs are well formed")
    }

    /// The family graph on `0..n` with template vertex `i` sent to `seq[i]`:
    /// a cycle or path in sequence order, a star centred at `seq[0]`, a
    /// wheel with rim `seq[..k-1]` and hub `seq[k-1]`.
    pub fn place(&self, n: usize, seq: &[Vertex]) -> Result<LabeledGraph, DesignError> {
        if seq.len() != self.size() {
            return Err(DesignError::BadFamily(alloc::format!("{self} needs {} vertices, got {}", self.size(), seq.len())));
        }
        let edges = self.graph().edges().iter().map(|&(u, v)| (seq[u as usize], seq[v as usize])).collect::<Vec<_>>();
        let mut distinct = seq.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != seq.len() {
            return Err(DesignError::BadFamily(alloc::format!("{self} placed on repeated vertices")));
        }
        Ok(LabeledGraph::new(n, edges)?)
    }
}

impl fmt::Display for PatternFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            PatternFamily::Complete(_) => 'K',
            PatternFamily::Cycle(_) => 'C',
            PatternFamily::Path(_) => 'P',
            PatternFamily::Star(_) => 'S',
            PatternFamily::Wheel(_) => 'W',
        };
        write!(f, "{c}{}", self.size())
    }
}

impl FromStr for PatternFamily {
    type Err = DesignError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DesignError::BadFamily(String::from(s));
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(bad)?;
        let size: usize = chars.as_str().parse().map_err(|_| bad())?;
        let fam = match head.to_ascii_uppercase() {
            'K' => PatternFamily::Complete(size),
            'C' => PatternFamily::Cycle(size),
            'P' => PatternFamily::Path(size),
            'S' => PatternFamily::Star(size),
            'W' => PatternFamily::Wheel(size),
            _ => return Err(bad()),
        };
        fam.validate()
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `|K_n(fam)|` from the family's closed form.
pub fn closed_form_count(n: usize, fam: PatternFamily) -> Result<BigUint, DesignError> {
    let fam = fam.validate()?;
    let k = fam.size();
    match fam {
        PatternFamily::Complete(_) => Ok(binomial(n, k)),
        PatternFamily::Cycle(_) => Ok(binomial(n, k) * factorial(k - 1) / 2u32),
        PatternFamily::Path(_) => Ok(binomial(n, k) * factorial(k) / 2u32),
        PatternFamily::Star(_) | PatternFamily::Wheel(_) => Err(DesignError::UnsupportedFamily(fam)),
    }
}

/// Relabels the non-isolated vertices of `g` onto `0..v`.
pub(crate) fn compact(g: &LabeledGraph) -> LabeledGraph {
    let support = g.support();
    let pos = |x: Vertex| support.binary_search(&x).expect("endpoint in support") as Vertex;
    LabeledGraph::new(support.len(), g.edges().iter().map(|&(u, v)| (pos(u), pos(v)))).expect("relabeling is valid")
}

/// `|K_n(pattern)|` for an arbitrary pattern: injective placements of its
/// `v` non-isolated vertices, `n!/(n-v)!`, divided by `|Aut(pattern)|`.
pub fn copies_in_complete(n: usize, pattern: &LabeledGraph) -> Result<BigUint, DesignError> {
    let core = compact(pattern);
    let v = core.n();
    if v > n {
        return Ok(BigUint::zero());
    }
    let placements = (n - v + 1..=n).fold(BigUint::one(), |acc, i| acc * i);
    let aut = graph_automorphisms(&core)?.order();
    Ok(placements / aut)
}

/// The complete design `K_n(pattern)`, blocks sorted by canonical key.
pub fn complete_design(n: usize, pattern: &LabeledGraph) -> Result<BlockSet, DesignError> {
    if pattern.edge_count() == 0 {
        return Err(DesignError::EmptyPattern);
    }
    let needed = pattern.support().len();
    if needed > n {
        return Err(DesignError::PatternTooLarge { needed, n });
    }
    let host = LabeledGraph::complete(n);
    let blocks = enumerate_copies(&host, pattern);
    // Edge-transitivity of K_n makes the cover count uniform.
    let multiplicity = blocks.len() * pattern.edge_count() / host.edge_count();
    Ok(BlockSet { host, multiplicity: multiplicity as u32, blocks })
}

/// Outcome of [`verify_design`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub holds: bool,
    pub multiplicity: u32,
    /// Host edges covered fewer than `multiplicity` times, with their count.
    pub under: Vec<((Vertex, Vertex), u32)>,
    /// Host edges covered more than `multiplicity` times, with their count.
    pub over: Vec<((Vertex, Vertex), u32)>,
    /// Blocks using an edge that is not in the host.
    pub stray_blocks: Vec<usize>,
}

/// Checks that every host edge lies in exactly `multiplicity` blocks.
pub fn verify_design(bs: &BlockSet) -> CoverageReport {
    let mut tally: BTreeMap<(Vertex, Vertex), u32> = bs.host.edges().iter().map(|&e| (e, 0)).collect();
    let mut stray_blocks = Vec::new();
    for (i, b) in bs.blocks.iter().enumerate() {
        for e in b.edges() {
            match tally.get_mut(e) {
                Some(c) => *c += 1,
                None => {
                    if stray_blocks.last() != Some(&i) {
                        stray_blocks.push(i);
                    }
                }
            }
        }
    }
    let lambda = bs.multiplicity;
    let under: Vec<_> = tally.iter().filter(|(_, &c)| c < lambda).map(|(&e, &c)| (e, c)).collect();
    let over: Vec<_> = tally.iter().filter(|(_, &c)| c > lambda).map(|(&e, &c)| (e, c)).collect();
    CoverageReport {
        holds: under.is_empty() && over.is_empty() && stray_blocks.is_empty(),
        multiplicity: lambda,
        under,
        over,
        stray_blocks,
    }
}

/// `dividend = quotient · divisor + remainder`, where the dividend is the
/// number of blocks being mapped and the divisor the number of blocks hit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Redundancy {
    pub dividend: BigUint,
    pub divisor: BigUint,
    pub quotient: BigUint,
    pub remainder: BigUint,
}

impl Redundancy {
    pub fn divide(dividend: BigUint, divisor: BigUint) -> Self {
        let quotient = &dividend / &divisor;
        let remainder = &dividend % &divisor;
        Redundancy { dividend, divisor, quotient, remainder }
    }

    pub fn is_exact(&self) -> bool {
        self.remainder.is_zero()
    }

    /// The redundancy `λ` of a regular sampling, when one can exist.
    pub fn lambda(&self) -> Option<&BigUint> {
        self.is_exact().then_some(&self.quotient)
    }
}

impl fmt::Display for Redundancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}·{} + {}", self.dividend, self.quotient, self.divisor, self.remainder)
    }
}

pub(crate) fn check_proper_subpattern(big: &LabeledGraph, small: &LabeledGraph) -> Result<(), DesignError> {
    if small.edge_count() == 0 || big.edge_count() == 0 {
        return Err(DesignError::EmptyPattern);
    }
    let (b, s) = (compact(big), compact(small));
    if s.edge_count() >= b.edge_count() || !contains_copy(&b, &s) {
        return Err(DesignError::NotProperSubgraph);
    }
    Ok(())
}

/// Divides `|K_n(big)|` by `|K_n(small)|` exactly.
pub fn required_redundancy(n: usize, big: &LabeledGraph, small: &LabeledGraph) -> Result<Redundancy, DesignError> {
    check_proper_subpattern(big, small)?;
    let needed = big.support().len();
    if needed > n {
        return Err(DesignError::PatternTooLarge { needed, n });
    }
    let dividend = copies_in_complete(n, big)?;
    let divisor = copies_in_complete(n, small)?;
    Ok(Redundancy::divide(dividend, divisor))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(s: &str) -> PatternFamily {
        s.parse().unwrap()
    }

    #[test]
    fn placing_families() {
        let c = PatternFamily::Cycle(4).place(7, &[0, 1, 5, 2]).unwrap();
        assert_eq!(c.edges(), &[(0, 1), (0, 2), (1, 5), (2, 5)]);
        let p = PatternFamily::Path(3).place(7, &[0, 2, 5]).unwrap();
        assert_eq!(p.edges(), &[(0, 2), (2, 5)]);
        assert!(PatternFamily::Path(3).place(7, &[0, 2]).is_err());
        assert!(PatternFamily::Path(3).place(7, &[0, 2, 0]).is_err());
        assert!(PatternFamily::Path(3).place(4, &[0, 2, 5]).is_err());
    }

    #[test]
    fn family_parsing() {
        assert_eq!(fam("K3"), PatternFamily::Complete(3));
        assert_eq!(fam("w5"), PatternFamily::Wheel(5));
        assert!("C2".parse::<PatternFamily>().is_err());
        assert!("W3".parse::<PatternFamily>().is_err());
        assert!("X4".parse::<PatternFamily>().is_err());
        assert!("K".parse::<PatternFamily>().is_err());
        assert_eq!(fam("W5").graph().edge_count(), 8);
        assert_eq!(fam("S4").graph().edge_count(), 3);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_form_count(7, fam("C4")).unwrap(), BigUint::from(105u32));
        assert_eq!(closed_form_count(7, fam("P3")).unwrap(), BigUint::from(105u32));
        assert_eq!(closed_form_count(14, fam("K3")).unwrap(), BigUint::from(364u32));
        assert_eq!(
            closed_form_count(7, fam("S4")).unwrap_err(),
            DesignError::UnsupportedFamily(PatternFamily::Star(4))
        );
    }

    #[test]
    fn complete_design_sizes() {
        assert_eq!(complete_design(4, &fam("K2").graph()).unwrap().len(), 6);
        let c4 = complete_design(7, &fam("C4").graph()).unwrap();
        assert_eq!(c4.len(), 105);
        // each edge of K7 lies in 105·4/21 = 20 four-cycles
        assert_eq!(c4.multiplicity(), 20);
        assert!(verify_design(&c4).holds);
        assert_eq!(complete_design(23, &fam("K3").graph()).unwrap().len(), 1771);
        assert!(matches!(
            complete_design(3, &fam("K4").graph()),
            Err(DesignError::PatternTooLarge { needed: 4, n: 3 })
        ));
    }

    fn sts7() -> BlockSet {
        let blocks = (0..7u32)
            .map(|i| LabeledGraph::complete_on(7, &[i, (i + 1) % 7, (i + 3) % 7]))
            .collect();
        BlockSet::new(LabeledGraph::complete(7), 1, blocks).unwrap()
    }

    #[test]
    fn steiner_triple_system_verifies() {
        let report = verify_design(&sts7());
        assert!(report.holds, "{report:?}");
    }

    #[test]
    fn missing_block_reports_three_edges() {
        let mut blocks = sts7().into_blocks();
        blocks.pop();
        let bs = BlockSet::new(LabeledGraph::complete(7), 1, blocks).unwrap();
        let report = verify_design(&bs);
        assert!(!report.holds);
        assert_eq!(report.under.len(), 3);
        assert!(report.under.iter().all(|&(_, c)| c == 0));
        assert!(report.over.is_empty());
    }

    #[test]
    fn overcover_and_bad_blocks() {
        let mut blocks = sts7().into_blocks();
        blocks.push(blocks[0].clone());
        let report = verify_design(&BlockSet::new(LabeledGraph::complete(7), 1, blocks).unwrap());
        assert_eq!(report.over.len(), 3);
        let path = LabeledGraph::path_on(3, &[0, 1, 2]).unwrap();
        assert_eq!(
            BlockSet::new(path, 1, alloc::vec![LabeledGraph::complete(3)]).unwrap_err(),
            DesignError::BlockOutsideHost { index: 0 }
        );
    }

    #[test]
    fn redundancy_examples() {
        let r = required_redundancy(7, &fam("C4").graph(), &fam("P3").graph()).unwrap();
        assert_eq!(r.lambda(), Some(&BigUint::from(1u32)));
        let r = required_redundancy(14, &fam("K3").graph(), &fam("K2").graph()).unwrap();
        assert_eq!(r.lambda(), Some(&BigUint::from(4u32)));
        let r = required_redundancy(6, &fam("K3").graph(), &fam("K2").graph()).unwrap();
        assert!(!r.is_exact());
        assert_eq!(r.quotient, BigUint::from(1u32));
        assert_eq!(r.remainder, BigUint::from(5u32));
        assert_eq!(alloc::format!("{r}"), "20 = 1·15 + 5");
        assert_eq!(
            required_redundancy(6, &fam("K2").graph(), &fam("K3").graph()).unwrap_err(),
            DesignError::NotProperSubgraph
        );
        assert_eq!(
            required_redundancy(6, &fam("C4").graph(), &fam("K3").graph()).unwrap_err(),
            DesignError::NotProperSubgraph
        );
    }

    #[test]
    fn trivial_edge_design() {
        for n in 2..9 {
            let bs = complete_design(n, &fam("K2").graph()).unwrap();
            assert_eq!(bs.multiplicity(), 1);
            assert!(verify_design(&bs).holds);
        }
    }
}
