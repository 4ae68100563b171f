//! Cycle systems, their nestings, and the wheel designs built from them.
//!
//! A nesting assigns to every cycle of an `m`-cycle system a hub off the
//! cycle such that the hub-to-rim edges form a star design. Cycle plus star
//! is a wheel, and the wheels cover every edge twice. Conversely a sampling
//! of a wheel design onto a star design splits each wheel back into its rim
//! and its spokes.

use alloc::vec;
use alloc::vec::Vec;

use crate::designs::{verify_design, BlockSet, CoverageReport, DesignError};
use crate::graph::{LabeledGraph, Vertex};
use crate::sampler::{verify_sampling, Regularity, SamplerError, SamplingMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NestingError {
    #[error("cycle length must be at least 3, got {0}")]
    ShortCycle(usize),
    #[error("cycle {index} has {found} vertices, expected {expected}")]
    CycleLength { index: usize, expected: usize, found: usize },
    #[error("cycle {index} repeats a vertex")]
    RepeatedVertex { index: usize },
    #[error("vertex {vertex} is outside 0..{n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("{hubs} hubs given for {cycles} cycles")]
    HubCountMismatch { cycles: usize, hubs: usize },
    #[error("the cycles do not form a cycle system of K_{n}")]
    NotCycleSystem { n: usize },
    #[error("{cycles} cycles of length {m} cannot cover the {edges} edges of K_n once")]
    EdgeCount { edges: usize, cycles: usize, m: usize },
    #[error("hub assignment is not a nesting")]
    InvalidNesting(NestingReport),
    #[error("search budget of {0} nodes exhausted")]
    BudgetExceeded(u64),
    #[error("sampling source does not match the wheel design")]
    WheelMismatch,
    #[error("wheel {index} is sampled to a block that is not a star")]
    NotAStar { index: usize },
    #[error("removing the sampled star from wheel {index} does not leave an {m}-cycle")]
    NotACycle { index: usize, m: usize },
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
}

fn canonical_rotation(cycle: &mut [Vertex]) {
    let Some(start) = (0..cycle.len()).min_by_key(|&i| cycle[i]) else {
        return;
    };
    cycle.rotate_left(start);
    if cycle.len() > 2 && cycle[cycle.len() - 1] < cycle[1] {
        cycle[1..].reverse();
    }
}

/// Cycles of length `m` on `0..n`, each stored from its smallest vertex,
/// heading to the smaller of its two neighbours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSystem {
    n: usize,
    m: usize,
    cycles: Vec<Vec<Vertex>>,
}

impl CycleSystem {
    /// Checks the shape of every cycle only; see [`CycleSystem::coverage`].
    pub fn new(n: usize, m: usize, cycles: Vec<Vec<Vertex>>) -> Result<Self, NestingError> {
        if m < 3 {
            return Err(NestingError::ShortCycle(m));
        }
        let mut cycles = cycles;
        for (index, c) in cycles.iter_mut().enumerate() {
            if c.len() != m {
                return Err(NestingError::CycleLength { index, expected: m, found: c.len() });
            }
            if let Some(&vertex) = c.iter().find(|&&v| v as usize >= n) {
                return Err(NestingError::VertexOutOfRange { vertex, n });
            }
            let mut sorted = c.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(NestingError::RepeatedVertex { index });
            }
            canonical_rotation(c);
        }
        Ok(CycleSystem { n, m, cycles })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cycles(&self) -> &[Vec<Vertex>] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn graphs(&self) -> Vec<LabeledGraph> {
        self.cycles.iter().map(|c| LabeledGraph::cycle_on(self.n, c).expect("validated cycle")).collect()
    }

    pub fn design(&self) -> BlockSet {
        BlockSet::new(LabeledGraph::complete(self.n), 1, self.graphs()).expect("cycles lie in K_n")
    }

    pub fn coverage(&self) -> CoverageReport {
        verify_design(&self.design())
    }
}

/// Hub `f(C)` of every cycle, in cycle order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestingAssignment {
    pub hubs: Vec<Vertex>,
}

/// Outcome of [`verify_nesting`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestingReport {
    pub holds: bool,
    /// Whether the cycles themselves cover `K_n` once.
    pub cycles_cover: bool,
    /// Cycles whose hub lies on the cycle.
    pub hub_on_cycle: Vec<usize>,
    /// Star coverage of `K_n`.
    pub stars: CoverageReport,
}

fn star_of(n: usize, cycle: &[Vertex], hub: Vertex) -> LabeledGraph {
    LabeledGraph::new(n, cycle.iter().filter(|&&x| x != hub).map(|&x| (x, hub))).expect("in range")
}

fn check_hubs(cs: &CycleSystem, f: &NestingAssignment) -> Result<(), NestingError> {
    if f.hubs.len() != cs.len() {
        return Err(NestingError::HubCountMismatch { cycles: cs.len(), hubs: f.hubs.len() });
    }
    match f.hubs.iter().find(|&&h| h as usize >= cs.n) {
        Some(&vertex) => Err(NestingError::VertexOutOfRange { vertex, n: cs.n }),
        None => Ok(()),
    }
}

/// Stars `{x, f(C)}`, `x` on `C`, one per cycle.
pub fn star_system(cs: &CycleSystem, f: &NestingAssignment) -> Result<BlockSet, NestingError> {
    check_hubs(cs, f)?;
    let stars = cs.cycles.iter().zip(&f.hubs).map(|(c, &h)| star_of(cs.n, c, h)).collect();
    Ok(BlockSet::new(LabeledGraph::complete(cs.n), 1, stars)?)
}

/// Checks that every hub is off its cycle and that the stars cover every
/// edge of `K_n` exactly once.
pub fn verify_nesting(cs: &CycleSystem, f: &NestingAssignment) -> Result<NestingReport, NestingError> {
    let stars = verify_design(&star_system(cs, f)?);
    let hub_on_cycle: Vec<usize> =
        cs.cycles.iter().zip(&f.hubs).enumerate().filter(|(_, (c, h))| c.contains(h)).map(|(i, _)| i).collect();
    let cycles_cover = cs.coverage().holds;
    Ok(NestingReport { holds: cycles_cover && hub_on_cycle.is_empty() && stars.holds, cycles_cover, hub_on_cycle, stars })
}

/// A wheel: rim cycle in canonical rotation plus a hub off the rim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wheel {
    pub hub: Vertex,
    pub rim: Vec<Vertex>,
}

impl Wheel {
    pub fn graph(&self, n: usize) -> LabeledGraph {
        let m = self.rim.len();
        let rim = (0..m).map(|i| (self.rim[i], self.rim[(i + 1) % m]));
        let spokes = self.rim.iter().map(|&x| (x, self.hub));
        LabeledGraph::new(n, rim.chain(spokes)).expect("in range")
    }
}

/// Wheels `W_{m+1}` meant to cover every edge of `K_n` twice. The hub is
/// kept explicitly since `W_4 = K_4` does not determine it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WheelDesign {
    pub n: usize,
    pub m: usize,
    pub wheels: Vec<Wheel>,
}

impl WheelDesign {
    pub const MULTIPLICITY: u32 = 2;

    pub fn graphs(&self) -> Vec<LabeledGraph> {
        self.wheels.iter().map(|w| w.graph(self.n)).collect()
    }

    pub fn design(&self) -> BlockSet {
        BlockSet::new(LabeledGraph::complete(self.n), Self::MULTIPLICITY, self.graphs()).expect("wheels lie in K_n")
    }

    pub fn coverage(&self) -> CoverageReport {
        verify_design(&self.design())
    }
}

/// A wheel design with its samplings onto the cycles and onto the stars.
#[derive(Debug, Clone)]
pub struct NestedWheels {
    pub wheels: WheelDesign,
    pub to_cycles: SamplingMap,
    pub to_stars: SamplingMap,
}

/// Wheel `C ∪ star(C)` for every cycle `C`, in cycle order, with both
/// projections. All three designs and both samplings are re-verified.
pub fn wheels_from_nesting(cs: &CycleSystem, f: &NestingAssignment) -> Result<NestedWheels, NestingError> {
    let report = verify_nesting(cs, f)?;
    if !report.holds {
        return Err(NestingError::InvalidNesting(report));
    }
    let wheels = WheelDesign {
        n: cs.n,
        m: cs.m,
        wheels: cs.cycles.iter().zip(&f.hubs).map(|(c, &hub)| Wheel { hub, rim: c.clone() }).collect(),
    };
    assert!(wheels.coverage().holds, "wheels of a nesting cover K_n twice");
    let identity: Vec<usize> = (0..cs.len()).collect();
    let to_cycles = SamplingMap::new(wheels.design(), cs.design(), identity.clone());
    let to_stars = SamplingMap::new(wheels.design(), star_system(cs, f)?, identity);
    for sm in [&to_cycles, &to_stars] {
        let profile = verify_sampling(sm)?;
        assert!(sm.source().is_empty() || profile.regularity() == Regularity::Regular(1));
    }
    Ok(NestedWheels { wheels, to_cycles, to_stars })
}

/// Centre of a star with `m` rays, if `g` is one.
fn star_centre(g: &LabeledGraph, m: usize) -> Option<Vertex> {
    if g.edge_count() != m {
        return None;
    }
    let deg = g.degrees();
    let centre = (0..g.n()).find(|&v| deg[v] == m)?;
    Some(centre as Vertex)
}

/// Cyclic vertex order of `g` if it is a single `m`-cycle.
fn cycle_order(g: &LabeledGraph, m: usize) -> Option<Vec<Vertex>> {
    if g.edge_count() != m {
        return None;
    }
    let mut nbrs = vec![Vec::new(); g.n()];
    for &(u, v) in g.edges() {
        nbrs[u as usize].push(v);
        nbrs[v as usize].push(u);
    }
    if nbrs.iter().any(|a| !a.is_empty() && a.len() != 2) {
        return None;
    }
    let start = g.edges().first()?.0;
    let mut order = vec![start];
    let (mut prev, mut cur) = (start, nbrs[start as usize][0]);
    while cur != start {
        order.push(cur);
        let a = &nbrs[cur as usize];
        let next = if a[0] == prev { a[1] } else { a[0] };
        (prev, cur) = (cur, next);
    }
    (order.len() == m).then(|| {
        canonical_rotation(&mut order);
        order
    })
}

/// Splits every wheel `W` into the star `ξ(W)` and the rest `W \ ξ(W)`,
/// which must be an `m`-cycle; the star's centre becomes that cycle's hub.
///
/// For `m = 3` any star of `K_4` leaves a triangle, so the centre of the
/// sampled star is taken as the hub whatever the wheel's annotation says.
pub fn nesting_from_sampling(
    wd: &WheelDesign,
    xi: &SamplingMap,
) -> Result<(CycleSystem, NestingAssignment), NestingError> {
    if xi.source().blocks() != wd.graphs().as_slice() {
        return Err(NestingError::WheelMismatch);
    }
    verify_sampling(xi)?;
    let mut cycles = Vec::with_capacity(wd.wheels.len());
    let mut hubs = Vec::with_capacity(wd.wheels.len());
    for (index, w) in xi.source().blocks().iter().enumerate() {
        let star = xi.image(index);
        let hub = star_centre(star, wd.m).ok_or(NestingError::NotAStar { index })?;
        let rest = w.difference(star);
        let rim = cycle_order(&rest, wd.m).filter(|r| !r.contains(&hub));
        cycles.push(rim.ok_or(NestingError::NotACycle { index, m: wd.m })?);
        hubs.push(hub);
    }
    let cs = CycleSystem::new(wd.n, wd.m, cycles)?;
    let f = NestingAssignment { hubs };
    let report = verify_nesting(&cs, &f)?;
    if !report.holds {
        return Err(NestingError::InvalidNesting(report));
    }
    Ok((cs, f))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(NestingAssignment),
    /// The whole search space was exhausted.
    NoneExists,
}

/// Exact cover: every edge of `K_n` and every cycle is covered once by the
/// chosen options `(cycle, hub)`.
struct Search {
    /// `(cycle, hub, columns)`; edge columns first, then one column per cycle.
    options: Vec<(usize, Vertex, Vec<usize>)>,
    by_column: Vec<Vec<usize>>,
    covered: Vec<bool>,
    blocked: Vec<u32>,
    chosen: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search {
    fn new(cs: &CycleSystem, budget: u64) -> Self {
        let n = cs.n;
        let edge = |a: Vertex, b: Vertex| {
            let (a, b) = (a.min(b) as usize, a.max(b) as usize);
            a * n - a * (a + 1) / 2 + (b - a - 1)
        };
        let edges = n * n.saturating_sub(1) / 2;
        let mut options = Vec::new();
        for (c, cycle) in cs.cycles.iter().enumerate() {
            for h in (0..n as Vertex).filter(|h| !cycle.contains(h)) {
                let mut cols: Vec<usize> = cycle.iter().map(|&x| edge(x, h)).collect();
                cols.push(edges + c);
                options.push((c, h, cols));
            }
        }
        let mut by_column = vec![Vec::new(); edges + cs.len()];
        for (o, (_, _, cols)) in options.iter().enumerate() {
            for &col in cols {
                by_column[col].push(o);
            }
        }
        let blocked = vec![0; options.len()];
        Search { options, covered: vec![false; by_column.len()], by_column, blocked, chosen: Vec::new(), nodes: 0, budget }
    }

    fn select(&mut self, o: usize, on: bool) {
        for k in 0..self.options[o].2.len() {
            let col = self.options[o].2[k];
            self.covered[col] = on;
            for &other in &self.by_column[col] {
                if on {
                    self.blocked[other] += 1;
                } else {
                    self.blocked[other] -= 1;
                }
            }
        }
    }

    /// Uncovered column with the fewest live options, and those options.
    fn tightest(&self) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        for (col, opts) in self.by_column.iter().enumerate() {
            if self.covered[col] {
                continue;
            }
            let live: Vec<usize> = opts.iter().copied().filter(|&o| self.blocked[o] == 0).collect();
            if best.as_ref().is_none_or(|b| live.len() < b.len()) {
                let dead = live.is_empty();
                best = Some(live);
                if dead {
                    break;
                }
            }
        }
        best
    }

    fn run(&mut self) -> Result<bool, NestingError> {
        let Some(live) = self.tightest() else {
            return Ok(true);
        };
        for o in live {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(NestingError::BudgetExceeded(self.budget));
            }
            self.select(o, true);
            self.chosen.push(o);
            if self.run()? {
                return Ok(true);
            }
            self.chosen.pop();
            self.select(o, false);
        }
        Ok(false)
    }
}

/// Backtracking search for a nesting of `cs`, visiting at most `budget`
/// hub choices. Each step branches on the edge or cycle with the fewest
/// remaining ways to be covered; ties and options go in increasing order,
/// so the result is deterministic.
pub fn search_nesting(cs: &CycleSystem, budget: u64) -> Result<SearchOutcome, NestingError> {
    let edges = cs.n * cs.n.saturating_sub(1) / 2;
    if edges != cs.m * cs.len() {
        return Err(NestingError::EdgeCount { edges, cycles: cs.len(), m: cs.m });
    }
    if !cs.coverage().holds {
        return Err(NestingError::NotCycleSystem { n: cs.n });
    }
    let mut search = Search::new(cs, budget);
    if !search.run()? {
        return Ok(SearchOutcome::NoneExists);
    }
    let mut hubs = vec![0; cs.len()];
    for &o in &search.chosen {
        let (c, h, _) = search.options[o];
        hubs[c] = h;
    }
    Ok(SearchOutcome::Found(NestingAssignment { hubs }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano() -> CycleSystem {
        CycleSystem::new(7, 3, (0..7).map(|i| vec![i, (i + 1) % 7, (i + 3) % 7]).collect()).unwrap()
    }

    fn offset(c: Vertex) -> NestingAssignment {
        NestingAssignment { hubs: (0..7).map(|i| (i + c) % 7).collect() }
    }

    #[test]
    fn canonical_cycles() {
        let cs = CycleSystem::new(6, 4, vec![vec![3, 5, 1, 2]]).unwrap();
        assert_eq!(cs.cycles()[0], vec![1, 2, 3, 5]);
        let cs = CycleSystem::new(6, 4, vec![vec![3, 2, 1, 5]]).unwrap();
        assert_eq!(cs.cycles()[0], vec![1, 2, 3, 5]);
        assert_eq!(CycleSystem::new(6, 4, vec![vec![0, 1, 1, 2]]).unwrap_err(), NestingError::RepeatedVertex { index: 0 });
        assert_eq!(CycleSystem::new(6, 2, vec![]).unwrap_err(), NestingError::ShortCycle(2));
        assert!(fano().coverage().holds);
    }

    #[test]
    fn hub_offsets_on_the_fano_plane() {
        let cs = fano();
        assert!(verify_nesting(&cs, &offset(6)).unwrap().holds);
        let bad = verify_nesting(&cs, &offset(5)).unwrap();
        assert!(!bad.holds && bad.hub_on_cycle.is_empty());
        for c in [0, 1, 3] {
            let r = verify_nesting(&cs, &offset(c)).unwrap();
            assert!(!r.holds);
            assert_eq!(r.hub_on_cycle.len(), 7);
        }
        assert!(matches!(
            verify_nesting(&cs, &NestingAssignment { hubs: vec![0] }),
            Err(NestingError::HubCountMismatch { cycles: 7, hubs: 1 })
        ));
    }

    #[test]
    fn wheels_and_back() {
        let cs = fano();
        let f = offset(6);
        let nw = wheels_from_nesting(&cs, &f).unwrap();
        assert_eq!(nw.wheels.wheels.len(), 7);
        assert!(nw.wheels.coverage().holds);
        let (cs2, f2) = nesting_from_sampling(&nw.wheels, &nw.to_stars).unwrap();
        assert_eq!((cs2, f2), (cs, f));
        assert!(matches!(wheels_from_nesting(&fano(), &offset(5)), Err(NestingError::InvalidNesting(_))));
    }

    #[test]
    fn off_hub_star_is_rejected_for_longer_cycles() {
        // K_9 splits into 9 four-cycles; find any nesting and then break it
        let base = [[0u32, 1, 5, 2]];
        let cycles: Vec<Vec<Vertex>> =
            (0..9).flat_map(|i| base.iter().map(move |c| c.iter().map(|&x| (x + i) % 9).collect())).collect();
        let cs = CycleSystem::new(9, 4, cycles).unwrap();
        assert!(cs.coverage().holds);
        let SearchOutcome::Found(f) = search_nesting(&cs, 1_000_000).unwrap() else {
            panic!("C4 system of order 9 has a nesting");
        };
        let nw = wheels_from_nesting(&cs, &f).unwrap();
        let (cs2, f2) = nesting_from_sampling(&nw.wheels, &nw.to_stars).unwrap();
        assert_eq!((&cs2, &f2), (&cs, &f));
        // a rim vertex of W_5 has degree 3, so no S_5 centred there fits
        let w = &nw.wheels.wheels[0];
        let r = w.rim[0];
        let mut stars = nw.to_stars.target().blocks().to_vec();
        stars.push(LabeledGraph::new(9, [(r, w.rim[1]), (r, w.rim[2]), (r, w.rim[3]), (r, w.hub)]).unwrap());
        let target = BlockSet::new(LabeledGraph::complete(9), 1, stars).unwrap();
        let mut assignment: Vec<usize> = (0..nw.wheels.wheels.len()).collect();
        assignment[0] = target.len() - 1;
        let xi = SamplingMap::new(nw.wheels.design(), target, assignment);
        assert!(matches!(
            nesting_from_sampling(&nw.wheels, &xi),
            Err(NestingError::Sampler(SamplerError::ContainmentViolation { index: 0, .. }))
        ));
    }

    #[test]
    fn search() {
        let SearchOutcome::Found(f) = search_nesting(&fano(), 10_000).unwrap() else {
            panic!("the Fano plane nests");
        };
        assert!(verify_nesting(&fano(), &f).unwrap().holds);
        let triangle = CycleSystem::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(search_nesting(&triangle, 10).unwrap(), SearchOutcome::NoneExists);
        let short = CycleSystem::new(7, 3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(search_nesting(&short, 10).unwrap_err(), NestingError::EdgeCount { edges: 21, cycles: 1, m: 3 });
        assert_eq!(search_nesting(&fano(), 0).unwrap_err(), NestingError::BudgetExceeded(0));
    }

    #[test]
    fn empty_design() {
        let cs = CycleSystem::new(1, 3, vec![]).unwrap();
        let f = NestingAssignment { hubs: vec![] };
        let nw = wheels_from_nesting(&cs, &f).unwrap();
        assert!(nw.wheels.wheels.is_empty());
        let (cs2, f2) = nesting_from_sampling(&nw.wheels, &nw.to_stars).unwrap();
        assert!(cs2.is_empty() && f2.hubs.is_empty());
    }
}
