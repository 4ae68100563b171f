//! Labeled graphs on `0..n`, copy enumeration and automorphism groups.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::perm::{GroupKind, Permutation, PermutationGroup};

pub type Vertex = u32;

/// Largest graph order accepted by [`graph_automorphisms`].
pub const DEFAULT_AUTOMORPHISM_BOUND: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge ({0}, {0}) is a loop")]
    Loop(Vertex),
    #[error("edge endpoint {vertex} is out of range for a graph on {n} vertices")]
    EndpointOutOfRange { vertex: Vertex, n: usize },
    #[error("graph on {n} vertices exceeds the configured bound of {bound}")]
    TooLarge { n: usize, bound: usize },
}

/// A simple undirected graph on the vertex set `0..n`.
///
/// Edges are stored normalized (`u < v`), sorted and deduplicated, so the
/// derived equality and ordering compare exact labeled edge sets.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LabeledGraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

/// Total-order encoding of a [`LabeledGraph`]: big-endian `n`, then each
/// edge endpoint pair in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl LabeledGraph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut out = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::Loop(u));
            }
            for w in [u, v] {
                if w as usize >= n {
                    return Err(GraphError::EndpointOutOfRange { vertex: w, n });
                }
            }
            out.push(if u < v { (u, v) } else { (v, u) });
        }
        out.sort_unstable();
        out.dedup();
        Ok(LabeledGraph { n, edges: out })
    }

    /// Builds a graph from edges already known to be normalized and valid.
    pub(crate) fn from_sorted(n: usize, edges: Vec<(Vertex, Vertex)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|&(u, v)| u < v && (v as usize) < n));
        LabeledGraph { n, edges }
    }

    pub fn empty(n: usize) -> Self {
        LabeledGraph { n, edges: Vec::new() }
    }

    pub fn complete(n: usize) -> Self {
        Self::complete_on(n, &(0..n as Vertex).collect::<Vec<_>>())
    }

    /// The complete graph on `vertices`, embedded in a graph of order `n`.
    pub fn complete_on(n: usize, vertices: &[Vertex]) -> Self {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        let mut edges = Vec::with_capacity(vs.len() * vs.len().saturating_sub(1) / 2);
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                edges.push((u, v));
            }
        }
        LabeledGraph { n: n.max(vs.last().map_or(0, |&v| v as usize + 1)), edges }
    }

    /// The path visiting `vertices` in order.
    pub fn path_on(n: usize, vertices: &[Vertex]) -> Result<Self, GraphError> {
        Self::new(n, vertices.windows(2).map(|w| (w[0], w[1])))
    }

    /// The closed cycle visiting `vertices` in order.
    pub fn cycle_on(n: usize, vertices: &[Vertex]) -> Result<Self, GraphError> {
        let k = vertices.len();
        Self::new(n, (0..k).map(|i| (vertices[i], vertices[(i + 1) % k])))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let e = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&e).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        deg
    }

    /// Vertices incident to at least one edge, ascending.
    pub fn support(&self) -> Vec<Vertex> {
        let mut vs: Vec<Vertex> = self.edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn key(&self) -> CanonicalKey {
        let mut bytes = Vec::with_capacity(4 + 8 * self.edges.len());
        bytes.extend_from_slice(&(self.n as u32).to_be_bytes());
        for &(u, v) in &self.edges {
            bytes.extend_from_slice(&u.to_be_bytes());
            bytes.extend_from_slice(&v.to_be_bytes());
        }
        CanonicalKey(bytes)
    }

    /// The same edge set viewed inside a graph of order `n`.
    pub fn with_order(&self, n: usize) -> Result<Self, GraphError> {
        if let Some(&(_, v)) = self.edges.iter().max_by_key(|e| e.1) {
            if v as usize >= n {
                return Err(GraphError::EndpointOutOfRange { vertex: v, n });
            }
        }
        Ok(LabeledGraph { n, edges: self.edges.clone() })
    }

    /// Image of the graph under a vertex permutation of degree `n`.
    pub fn permuted(&self, p: &Permutation) -> Self {
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (p.apply(u), p.apply(v));
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        edges.sort_unstable();
        LabeledGraph { n: self.n, edges }
    }

    /// Edges of `self` that are not edges of `other`.
    pub fn difference(&self, other: &LabeledGraph) -> Self {
        let edges = self.edges.iter().copied().filter(|&(u, v)| !other.has_edge(u, v)).collect();
        LabeledGraph { n: self.n, edges }
    }

    fn adjacency(&self) -> Vec<bool> {
        let mut adj = vec![false; self.n * self.n];
        for &(u, v) in &self.edges {
            adj[u as usize * self.n + v as usize] = true;
            adj[v as usize * self.n + u as usize] = true;
        }
        adj
    }
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}{{", self.n)?;
        for (i, (u, v)) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        f.write_str("}")
    }
}

/// True iff every edge of `a` is an edge of `b`, labels taken as given.
pub fn is_subgraph(a: &LabeledGraph, b: &LabeledGraph) -> bool {
    if a.edges.len() > b.edges.len() {
        return false;
    }
    // Both edge lists are sorted: a single merge pass suffices.
    let mut it = b.edges.iter();
    'outer: for e in &a.edges {
        for f in it.by_ref() {
            match f.cmp(e) {
                core::cmp::Ordering::Less => continue,
                core::cmp::Ordering::Equal => continue 'outer,
                core::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

/// Backtracking search over injective maps of the pattern's non-isolated
/// vertices into the host that carry pattern edges onto host edges.
struct EmbeddingSearch<'a> {
    host_n: usize,
    host_adj: Vec<bool>,
    host_deg: Vec<usize>,
    order: Vec<Vertex>,
    pattern_deg: Vec<usize>,
    // For each position in `order`, the earlier positions adjacent to it.
    back_edges: Vec<Vec<usize>>,
    pattern: &'a LabeledGraph,
}

impl<'a> EmbeddingSearch<'a> {
    fn new(host: &LabeledGraph, pattern: &'a LabeledGraph) -> Self {
        let pattern_deg = pattern.degrees();
        let support = pattern.support();
        let padj = pattern.adjacency();
        let pn = pattern.n;

        // Connectivity-first ordering: most constrained vertex next.
        let mut order: Vec<Vertex> = Vec::with_capacity(support.len());
        let mut placed = vec![false; pn];
        while order.len() < support.len() {
            let next = support
                .iter()
                .copied()
                .filter(|&v| !placed[v as usize])
                .max_by(|&a, &b| {
                    let links = |x: Vertex| order.iter().filter(|&&o| padj[x as usize * pn + o as usize]).count();
                    (links(a), pattern_deg[a as usize], core::cmp::Reverse(a)).cmp(&(
                        links(b),
                        pattern_deg[b as usize],
                        core::cmp::Reverse(b),
                    ))
                })
                .expect("unplaced support vertex");
            placed[next as usize] = true;
            order.push(next);
        }
        let back_edges = order
            .iter()
            .enumerate()
            .map(|(i, &v)| (0..i).filter(|&j| padj[v as usize * pn + order[j] as usize]).collect())
            .collect();

        EmbeddingSearch {
            host_n: host.n,
            host_adj: host.adjacency(),
            host_deg: host.degrees(),
            order,
            pattern_deg,
            back_edges,
            pattern,
        }
    }

    /// Calls `visit` with the image of every pattern vertex (indexed by pattern
    /// label) for each embedding; stops early when `visit` returns false.
    fn run<F: FnMut(&[Vertex]) -> bool>(&self, mut visit: F) {
        if self.order.len() > self.host_n {
            return;
        }
        let mut image = vec![Vertex::MAX; self.pattern.n];
        let mut assigned: Vec<Vertex> = Vec::with_capacity(self.order.len());
        let mut used = vec![false; self.host_n];
        self.extend(&mut image, &mut assigned, &mut used, &mut visit);
    }

    fn extend<F: FnMut(&[Vertex]) -> bool>(
        &self,
        image: &mut Vec<Vertex>,
        assigned: &mut Vec<Vertex>,
        used: &mut [bool],
        visit: &mut F,
    ) -> bool {
        let pos = assigned.len();
        if pos == self.order.len() {
            return visit(image);
        }
        let pv = self.order[pos];
        let need = self.pattern_deg[pv as usize];
        for h in 0..self.host_n as Vertex {
            if used[h as usize] || self.host_deg[h as usize] < need {
                continue;
            }
            let fits = self.back_edges[pos]
                .iter()
                .all(|&j| self.host_adj[assigned[j] as usize * self.host_n + h as usize]);
            if !fits {
                continue;
            }
            used[h as usize] = true;
            image[pv as usize] = h;
            assigned.push(h);
            let keep_going = self.extend(image, assigned, used, visit);
            assigned.pop();
            used[h as usize] = false;
            if !keep_going {
                return false;
            }
        }
        true
    }

    fn image_graph(&self, image: &[Vertex]) -> LabeledGraph {
        let mut edges: Vec<_> = self
            .pattern
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (image[u as usize], image[v as usize]);
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        edges.sort_unstable();
        LabeledGraph::from_sorted(self.host_n, edges)
    }
}

/// All subgraphs of `host` isomorphic to `pattern`, as edge sets, sorted by
/// canonical key. Isolated pattern vertices are ignored: copies are
/// identified by their edges alone.
pub fn enumerate_copies(host: &LabeledGraph, pattern: &LabeledGraph) -> Vec<LabeledGraph> {
    if pattern.edges.is_empty() {
        return vec![LabeledGraph::empty(host.n)];
    }
    let search = EmbeddingSearch::new(host, pattern);
    let mut seen = BTreeSet::new();
    search.run(|image| {
        seen.insert(search.image_graph(image));
        true
    });
    seen.into_iter().collect()
}

/// Whether `host` contains at least one copy of `pattern`.
pub fn contains_copy(host: &LabeledGraph, pattern: &LabeledGraph) -> bool {
    if pattern.edges.is_empty() {
        return true;
    }
    let search = EmbeddingSearch::new(host, pattern);
    let mut found = false;
    search.run(|_| {
        found = true;
        false
    });
    found
}

/// Full automorphism group of `g`, for `g.n()` up to
/// [`DEFAULT_AUTOMORPHISM_BOUND`].
pub fn graph_automorphisms(g: &LabeledGraph) -> Result<PermutationGroup, GraphError> {
    graph_automorphisms_bounded(g, DEFAULT_AUTOMORPHISM_BOUND)
}

/// Automorphism group via a point-stabilizer chain: at level `i` the orbit
/// of `i` under the pointwise stabilizer of `0..i` is found by searching for
/// one automorphism per candidate image. The group order is the product of
/// those orbit lengths and the witnesses form a strong generating set.
pub fn graph_automorphisms_bounded(g: &LabeledGraph, bound: usize) -> Result<PermutationGroup, GraphError> {
    let n = g.n;
    if n > bound {
        return Err(GraphError::TooLarge { n, bound });
    }
    let adj = g.adjacency();
    let deg = g.degrees();
    let mut generators = Vec::new();
    let mut order: u64 = 1;
    for level in 0..n {
        let mut orbit_len = 1u64;
        for target in level + 1..n {
            if deg[target] != deg[level] {
                continue;
            }
            let mut image: Vec<usize> = (0..level).collect();
            image.push(target);
            let mut used = vec![false; n];
            for &x in &image {
                used[x] = true;
            }
            if extend_automorphism(&adj, &deg, n, &mut image, &mut used) {
                orbit_len += 1;
                generators.push(Permutation::from_images_unchecked(image.into_iter().map(|x| x as Vertex).collect()));
            }
        }
        order *= orbit_len;
    }
    Ok(PermutationGroup::with_order(n, generators, order, GroupKind::Custom))
}

fn extend_automorphism(adj: &[bool], deg: &[usize], n: usize, image: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let pos = image.len();
    if pos == n {
        return true;
    }
    for h in 0..n {
        if used[h] || deg[h] != deg[pos] {
            continue;
        }
        let ok = (0..pos).all(|j| adj[pos * n + j] == adj[h * n + image[j]]);
        if !ok {
            continue;
        }
        used[h] = true;
        image.push(h);
        if extend_automorphism(adj, deg, n, image, used) {
            return true;
        }
        image.pop();
        used[h] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(u32, u32)]) -> LabeledGraph {
        LabeledGraph::new(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn rejects_malformed_edges() {
        assert_eq!(LabeledGraph::new(3, [(1, 1)]), Err(GraphError::Loop(1)));
        assert_eq!(
            LabeledGraph::new(3, [(0, 3)]),
            Err(GraphError::EndpointOutOfRange { vertex: 3, n: 3 })
        );
        let dup = g(3, &[(1, 0), (0, 1), (2, 1)]);
        assert_eq!(dup.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn subgraph_relation() {
        let p = g(4, &[(0, 1), (1, 2)]);
        let c = g(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        assert!(is_subgraph(&p, &c));
        assert!(!is_subgraph(&c, &p));
        assert!(is_subgraph(&LabeledGraph::empty(0), &c));
        assert!(!is_subgraph(&g(4, &[(0, 2)]), &c));
    }

    #[test]
    fn copy_counts() {
        let k3 = LabeledGraph::complete(3);
        assert_eq!(enumerate_copies(&LabeledGraph::complete(4), &k3).len(), 4);
        let c4 = LabeledGraph::cycle_on(4, &[0, 1, 2, 3]).unwrap();
        let p3 = LabeledGraph::path_on(3, &[0, 1, 2]).unwrap();
        let k7 = LabeledGraph::complete(7);
        assert_eq!(enumerate_copies(&k7, &c4).len(), 105);
        assert_eq!(enumerate_copies(&k7, &p3).len(), 105);
        // no room for the pattern
        assert!(enumerate_copies(&LabeledGraph::complete(2), &k3).is_empty());
        assert!(!contains_copy(&c4, &k3));
        assert!(contains_copy(&c4, &p3));
    }

    #[test]
    fn copies_are_sorted_and_distinct() {
        let copies = enumerate_copies(&LabeledGraph::complete(6), &LabeledGraph::path_on(4, &[0, 1, 2, 3]).unwrap());
        assert!(copies.windows(2).all(|w| w[0].key() < w[1].key()));
    }

    #[test]
    fn automorphism_orders() {
        let order = |x: &LabeledGraph| graph_automorphisms(x).unwrap().order();
        assert_eq!(order(&LabeledGraph::complete(3)), 6);
        assert_eq!(order(&LabeledGraph::cycle_on(4, &[0, 1, 2, 3]).unwrap()), 8);
        assert_eq!(order(&LabeledGraph::path_on(3, &[0, 1, 2]).unwrap()), 2);
        assert_eq!(order(&LabeledGraph::complete(10)), 3_628_800);
        assert_eq!(
            graph_automorphisms(&LabeledGraph::empty(17)).unwrap_err(),
            GraphError::TooLarge { n: 17, bound: 16 }
        );
    }

    #[test]
    fn automorphism_generators_preserve_edges() {
        let petersen_like = g(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)]);
        let aut = graph_automorphisms(&petersen_like).unwrap();
        for p in aut.generators() {
            assert_eq!(petersen_like.permuted(p), petersen_like);
        }
        // swap the triangles, plus swapping the two free vertices of each
        assert_eq!(aut.order(), 8);
    }
}
