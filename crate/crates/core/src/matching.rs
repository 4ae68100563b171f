//! Maximum bipartite matching (Hopcroft–Karp) over indexable bipartite graphs.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

/// A bipartite graph whose left vertices expose their neighbours by index.
pub trait Bipartite {
    fn left_len(&self) -> usize;
    fn right_len(&self) -> usize;
    fn degree(&self, left: usize) -> usize;
    /// The `k`-th neighbour of `left`, for `k < degree(left)`.
    fn neighbor(&self, left: usize, k: usize) -> usize;
}

/// An explicit bipartite (multi)graph given by its edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteEdges {
    left_len: usize,
    right_len: usize,
    edges: Vec<(usize, usize)>,
    // adjacency[u] lists (right vertex, edge id) in edge-list order
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl BipartiteEdges {
    /// Panics if an endpoint is out of range.
    pub fn new(left_len: usize, right_len: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); left_len];
        for (id, &(u, v)) in edges.iter().enumerate() {
            assert!(u < left_len && v < right_len, "edge ({u}, {v}) out of range");
            adjacency[u].push((v, id));
        }
        BipartiteEdges { left_len, right_len, edges, adjacency }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn max_degree(&self) -> usize {
        let mut right = vec![0usize; self.right_len];
        for &(_, v) in &self.edges {
            right[v] += 1;
        }
        let left = self.adjacency.iter().map(Vec::len).max().unwrap_or(0);
        left.max(right.into_iter().max().unwrap_or(0))
    }
}

impl Bipartite for BipartiteEdges {
    fn left_len(&self) -> usize {
        self.left_len
    }
    fn right_len(&self) -> usize {
        self.right_len
    }
    fn degree(&self, left: usize) -> usize {
        self.adjacency[left].len()
    }
    fn neighbor(&self, left: usize, k: usize) -> usize {
        self.adjacency[left][k].0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    left_len: usize,
    right_len: usize,
    mate_left: Vec<Option<usize>>,
    mate_right: Vec<Option<usize>>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.mate_left.iter().flatten().count()
    }

    /// Whether the matching saturates the smaller side.
    pub fn is_full(&self) -> bool {
        self.size() == self.left_len.min(self.right_len)
    }

    pub fn mate_of_left(&self, u: usize) -> Option<usize> {
        self.mate_left[u]
    }

    pub fn mate_of_right(&self, v: usize) -> Option<usize> {
        self.mate_right[v]
    }

    /// Matched pairs `(left, right)` in increasing left order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.mate_left.iter().enumerate().filter_map(|(u, m)| m.map(|v| (u, v))).collect()
    }
}

const UNSET: usize = usize::MAX;

/// A maximum matching; full whenever the graph has one (in particular for
/// every biregular graph with positive degrees). Deterministic: vertices and
/// neighbours are scanned in index order.
pub fn full_matching<G: Bipartite + ?Sized>(g: &G) -> Matching {
    let (nl, nr) = (g.left_len(), g.right_len());
    let mut mate_l = vec![UNSET; nl];
    let mut mate_r = vec![UNSET; nr];

    for (u, mate) in mate_l.iter_mut().enumerate() {
        for k in 0..g.degree(u) {
            let v = g.neighbor(u, k);
            if mate_r[v] == UNSET {
                *mate = v;
                mate_r[v] = u;
                break;
            }
        }
    }

    let mut dist = vec![UNSET; nl];
    let mut cursor = vec![0usize; nl];
    let mut queue = VecDeque::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut via: Vec<usize> = Vec::new();
    loop {
        // Layer the graph from the free left vertices.
        queue.clear();
        for u in 0..nl {
            if mate_l[u] == UNSET {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = UNSET;
            }
        }
        let mut free_layer = UNSET;
        while let Some(u) = queue.pop_front() {
            if dist[u] >= free_layer {
                continue;
            }
            for k in 0..g.degree(u) {
                let w = mate_r[g.neighbor(u, k)];
                if w == UNSET {
                    if free_layer == UNSET {
                        free_layer = dist[u] + 1;
                    }
                } else if dist[w] == UNSET {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if free_layer == UNSET {
            break;
        }

        cursor.iter_mut().for_each(|c| *c = 0);
        for root in 0..nl {
            if mate_l[root] != UNSET {
                continue;
            }
            stack.clear();
            via.clear();
            stack.push(root);
            while let Some(&u) = stack.last() {
                if cursor[u] == g.degree(u) {
                    dist[u] = UNSET;
                    stack.pop();
                    via.pop();
                    continue;
                }
                let v = g.neighbor(u, cursor[u]);
                cursor[u] += 1;
                let w = mate_r[v];
                if w == UNSET {
                    if dist[u] + 1 == free_layer {
                        via.push(v);
                        for (&a, &b) in stack.iter().zip(via.iter()) {
                            mate_l[a] = b;
                            mate_r[b] = a;
                        }
                        break;
                    }
                } else if dist[w] != UNSET && dist[w] == dist[u] + 1 {
                    stack.push(w);
                    via.push(v);
                }
            }
        }
    }

    let wrap = |x: usize| (x != UNSET).then_some(x);
    Matching {
        left_len: nl,
        right_len: nr,
        mate_left: mate_l.into_iter().map(wrap).collect(),
        mate_right: mate_r.into_iter().map(wrap).collect(),
    }
}
