//! The bipartite containment graph between two block collections.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::designs::BlockSet;
use crate::graph::{is_subgraph, LabeledGraph, Vertex};
use crate::matching::Bipartite;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContainmentError {
    #[error("block sets live on different hosts")]
    HostMismatch,
    #[error("containment graph is not biregular: left degrees {left_min}..={left_max}, right degrees {right_min}..={right_max}")]
    NotBiregular { left_min: usize, left_max: usize, right_min: usize, right_max: usize },
}

/// Left blocks joined to every right block they properly contain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainmentGraph {
    left: Vec<LabeledGraph>,
    right: Vec<LabeledGraph>,
    adjacency: Vec<Vec<u32>>,
    degrees: Option<(usize, usize)>,
}

impl ContainmentGraph {
    pub fn left(&self) -> &[LabeledGraph] {
        &self.left
    }

    pub fn right(&self) -> &[LabeledGraph] {
        &self.right
    }

    /// Sorted right indices contained in left block `i`.
    pub fn adjacent(&self, i: usize) -> &[u32] {
        &self.adjacency[i]
    }

    pub fn degrees(&self) -> Option<(usize, usize)> {
        self.degrees
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.right.len()];
        for adj in &self.adjacency {
            for &j in adj {
                deg[j as usize] += 1;
            }
        }
        deg
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }
}

impl Bipartite for ContainmentGraph {
    fn left_len(&self) -> usize {
        self.left.len()
    }
    fn right_len(&self) -> usize {
        self.right.len()
    }
    fn degree(&self, left: usize) -> usize {
        self.adjacency[left].len()
    }
    fn neighbor(&self, left: usize, k: usize) -> usize {
        self.adjacency[left][k] as usize
    }
}

fn choose_at_most(m: usize, k: usize, cap: usize) -> usize {
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (m - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return cap + 1;
        }
    }
    acc as usize
}

/// Visits every `k`-subset of `items` in lexicographic order, in `buf`.
fn for_each_subset<T: Copy, F: FnMut(&[T])>(items: &[T], k: usize, buf: &mut Vec<T>, mut f: F) {
    let m = items.len();
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        buf.clear();
        buf.extend(idx.iter().map(|&i| items[i]));
        f(buf);
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + m - k) else {
            return;
        };
        idx[pos] += 1;
        for p in pos + 1..k {
            idx[p] = idx[p - 1] + 1;
        }
    }
}

/// Block indices keyed by edge set.
type EdgeIndex<'a> = BTreeMap<&'a [(Vertex, Vertex)], Vec<u32>>;

/// Joins each block of `a` to each block of `b` it contains as a proper
/// subgraph. Block orders are kept, so indices agree with the inputs.
pub fn build_containment(a: &BlockSet, b: &BlockSet) -> Result<ContainmentGraph, ContainmentError> {
    if a.host() != b.host() {
        return Err(ContainmentError::HostMismatch);
    }
    let right = b.blocks();
    // Right blocks grouped by edge count, then by edge set.
    let mut by_size: BTreeMap<usize, EdgeIndex<'_>> = BTreeMap::new();
    for (j, blk) in right.iter().enumerate() {
        by_size.entry(blk.edge_count()).or_default().entry(blk.edges()).or_default().push(j as u32);
    }

    let mut buf = Vec::new();
    let adjacency = a
        .blocks()
        .iter()
        .map(|left| {
            let mut adj = Vec::new();
            let m = left.edge_count();
            for (&k, index) in by_size.range(..=m) {
                let population: usize = index.values().map(Vec::len).sum();
                if choose_at_most(m, k, population) <= population {
                    for_each_subset(left.edges(), k, &mut buf, |sub| {
                        if k == m {
                            return;
                        }
                        if let Some(js) = index.get(sub) {
                            adj.extend_from_slice(js);
                        }
                    });
                } else {
                    for js in index.values() {
                        for &j in js {
                            let blk = &right[j as usize];
                            if blk != left && is_subgraph(blk, left) {
                                adj.push(j);
                            }
                        }
                    }
                }
            }
            adj.sort_unstable();
            adj
        })
        .collect();

    Ok(ContainmentGraph { left: a.blocks().to_vec(), right: right.to_vec(), adjacency, degrees: None })
}

/// Returns `(d, e)` when every left block contains exactly `d` right blocks
/// and every right block lies in exactly `e` left blocks.
pub fn biregular_degrees(cg: &mut ContainmentGraph) -> Result<(usize, usize), ContainmentError> {
    let left = cg.left_degrees();
    let right = cg.right_degrees();
    let span = |v: &[usize]| (v.iter().copied().min().unwrap_or(0), v.iter().copied().max().unwrap_or(0));
    let (left_min, left_max) = span(&left);
    let (right_min, right_max) = span(&right);
    if left_min != left_max || right_min != right_max {
        return Err(ContainmentError::NotBiregular { left_min, left_max, right_min, right_max });
    }
    let (d, e) = (left_min, right_min);
    assert_eq!(d * cg.left.len(), e * cg.right.len(), "handshake identity violated");
    cg.degrees = Some((d, e));
    Ok((d, e))
}

/// `a` copies of every left vertex and `b` copies of every right vertex,
/// each copy of `(i, j)` joined to each copy of the other end.
///
/// Left vertex `(i, c)` has index `i * a + c`; right vertex `(j, c)` has
/// index `j * b + c`.
#[derive(Debug, Clone, Copy)]
pub struct ReplicatedGraph<'a> {
    base: &'a ContainmentGraph,
    left_copies: usize,
    right_copies: usize,
}

pub fn replicate(cg: &ContainmentGraph, a: usize, b: usize) -> ReplicatedGraph<'_> {
    assert!(a >= 1 && b >= 1, "replication factors must be positive");
    ReplicatedGraph { base: cg, left_copies: a, right_copies: b }
}

impl<'a> ReplicatedGraph<'a> {
    pub fn base(&self) -> &'a ContainmentGraph {
        self.base
    }

    pub fn left_copies(&self) -> usize {
        self.left_copies
    }

    pub fn right_copies(&self) -> usize {
        self.right_copies
    }

    /// `(d·b, e·a)` when the base graph is biregular.
    pub fn degrees(&self) -> Option<(usize, usize)> {
        self.base.degrees.map(|(d, e)| (d * self.right_copies, e * self.left_copies))
    }

    pub fn left_vertex(&self, block: usize, copy: usize) -> usize {
        block * self.left_copies + copy
    }

    pub fn right_vertex(&self, block: usize, copy: usize) -> usize {
        block * self.right_copies + copy
    }

    /// `(block, copy)` of a left vertex.
    pub fn collapse_left(&self, v: usize) -> (usize, usize) {
        (v / self.left_copies, v % self.left_copies)
    }

    /// `(block, copy)` of a right vertex.
    pub fn collapse_right(&self, v: usize) -> (usize, usize) {
        (v / self.right_copies, v % self.right_copies)
    }
}

impl Bipartite for ReplicatedGraph<'_> {
    fn left_len(&self) -> usize {
        self.base.left.len() * self.left_copies
    }
    fn right_len(&self) -> usize {
        self.base.right.len() * self.right_copies
    }
    fn degree(&self, left: usize) -> usize {
        self.base.adjacency[left / self.left_copies].len() * self.right_copies
    }
    fn neighbor(&self, left: usize, k: usize) -> usize {
        let j = self.base.adjacency[left / self.left_copies][k / self.right_copies] as usize;
        j * self.right_copies + k % self.right_copies
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{complete_design, PatternFamily};
    use crate::matching::full_matching;

    fn design(n: usize, fam: &str) -> BlockSet {
        complete_design(n, &fam.parse::<PatternFamily>().unwrap().graph()).unwrap()
    }

    #[test]
    fn cycles_over_paths_n7() {
        let mut cg = build_containment(&design(7, "C4"), &design(7, "P3")).unwrap();
        assert_eq!(biregular_degrees(&mut cg).unwrap(), (4, 4));
        assert_eq!(cg.degrees(), Some((4, 4)));
    }

    #[test]
    fn triangles_over_edges_n6() {
        let mut cg = build_containment(&design(6, "K3"), &design(6, "K2")).unwrap();
        assert_eq!(biregular_degrees(&mut cg).unwrap(), (3, 4));
    }

    #[test]
    fn self_containment_is_excluded() {
        let d = design(5, "K3");
        let mut cg = build_containment(&d, &d).unwrap();
        assert_eq!(cg.edge_count(), 0);
        assert_eq!(biregular_degrees(&mut cg).unwrap(), (0, 0));
    }

    #[test]
    fn pairwise_scan_matches_subset_lookup() {
        // K5 inside K6 has 10 edges; few right blocks force the scan branch.
        let big = design(6, "K5");
        let right = BlockSet::new(LabeledGraph::complete(6), 1, design(6, "C4").blocks()[..3].to_vec()).unwrap();
        let cg = build_containment(&big, &right).unwrap();
        for (i, l) in cg.left().iter().enumerate() {
            let expect: Vec<u32> =
                (0..3u32).filter(|&j| is_subgraph(&right.blocks()[j as usize], l)).collect();
            assert_eq!(cg.adjacent(i), expect.as_slice());
        }
    }

    #[test]
    fn path_host_is_not_biregular() {
        let host = LabeledGraph::path_on(4, &[0, 1, 2, 3]).unwrap();
        let p3 = crate::graph::enumerate_copies(&host, &PatternFamily::Path(3).graph());
        let p2 = crate::graph::enumerate_copies(&host, &PatternFamily::Path(2).graph());
        let a = BlockSet::new(host.clone(), 1, p3).unwrap();
        let b = BlockSet::new(host, 1, p2).unwrap();
        let mut cg = build_containment(&a, &b).unwrap();
        // end edges lie in one P3, the middle edge in two
        assert_eq!(
            biregular_degrees(&mut cg).unwrap_err(),
            ContainmentError::NotBiregular { left_min: 2, left_max: 2, right_min: 1, right_max: 2 }
        );
    }

    #[test]
    fn host_mismatch() {
        assert_eq!(
            build_containment(&design(6, "K3"), &design(7, "K2")).unwrap_err(),
            ContainmentError::HostMismatch
        );
    }

    #[test]
    fn replication_sizes_and_degrees() {
        let mut cg = build_containment(&design(6, "K3"), &design(6, "K2")).unwrap();
        biregular_degrees(&mut cg).unwrap();
        let one = replicate(&cg, 1, 1);
        assert_eq!((one.left_len(), one.right_len()), (20, 15));
        assert_eq!(one.degrees(), Some((3, 4)));
        let r = replicate(&cg, 3, 4);
        assert_eq!((r.left_len(), r.right_len()), (60, 60));
        assert_eq!(r.degrees(), Some((12, 12)));
        for u in 0..r.left_len() {
            assert_eq!(r.degree(u), 12);
            let (i, _) = r.collapse_left(u);
            for k in 0..r.degree(u) {
                let (j, _) = r.collapse_right(r.neighbor(u, k));
                assert!(cg.adjacent(i).contains(&(j as u32)));
            }
        }
        assert!(full_matching(&r).is_full());
    }
}
