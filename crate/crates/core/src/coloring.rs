//! Proper edge colourings of bipartite graphs with exactly max-degree colours.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{LabeledGraph, Vertex};
pub use crate::matching::BipartiteEdges;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColoringError {
    #[error("graph is not bipartite: odd cycle through vertex {0}")]
    NotBipartite(Vertex),
}

/// Colour of every edge, in input edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    colors: Vec<usize>,
    color_count: usize,
}

impl EdgeColoring {
    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color_count(&self) -> usize {
        self.color_count
    }

    /// Edge ids carrying colour `c`.
    pub fn class(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.colors.iter().enumerate().filter(move |&(_, &x)| x == c).map(|(i, _)| i)
    }
}

const NONE: usize = usize::MAX;

/// Colours `g` with `Δ` colours by alternating-path recolouring: each edge
/// takes the smallest colour free at its left end; when that colour is busy
/// at the right end, the two-coloured path leaving the right end is swapped
/// first. Bipartiteness keeps that path away from the left end.
pub fn color_bipartite(g: &BipartiteEdges) -> EdgeColoring {
    let delta = g.max_degree();
    let nl = crate::matching::Bipartite::left_len(g);
    let nr = crate::matching::Bipartite::right_len(g);
    let edges = g.edges();
    let ends = |id: usize| (edges[id].0, nl + edges[id].1);
    let mut at = vec![NONE; (nl + nr) * delta];
    let mut colors = vec![NONE; edges.len()];
    let free = |at: &[usize], x: usize| (0..delta).find(|&c| at[x * delta + c] == NONE).expect("degree bound");

    let mut path = Vec::new();
    for id in 0..edges.len() {
        let (u, v) = ends(id);
        let a = free(&at, u);
        if at[v * delta + a] != NONE {
            let b = free(&at, v);
            path.clear();
            let (mut cur, mut col) = (v, a);
            while at[cur * delta + col] != NONE {
                let e = at[cur * delta + col];
                path.push(e);
                let (x, y) = ends(e);
                cur = if x == cur { y } else { x };
                col = if col == a { b } else { a };
            }
            for &e in &path {
                let (x, y) = ends(e);
                at[x * delta + colors[e]] = NONE;
                at[y * delta + colors[e]] = NONE;
            }
            for &e in &path {
                let (x, y) = ends(e);
                colors[e] = if colors[e] == a { b } else { a };
                at[x * delta + colors[e]] = e;
                at[y * delta + colors[e]] = e;
            }
            debug_assert_eq!(at[u * delta + a], NONE, "alternating path reached the left end");
        }
        colors[id] = a;
        at[u * delta + a] = id;
        at[v * delta + a] = id;
    }
    EdgeColoring { colors, color_count: delta }
}

/// Two-colours the vertices of `g`, then edge-colours it with
/// `max degree` colours. Colours are indexed by `g.edges()`.
pub fn bipartite_edge_coloring(g: &LabeledGraph) -> Result<EdgeColoring, ColoringError> {
    let n = g.n();
    let mut nbrs = vec![Vec::new(); n];
    for &(u, v) in g.edges() {
        nbrs[u as usize].push(v as usize);
        nbrs[v as usize].push(u as usize);
    }
    let mut side = vec![NONE; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        if side[s] != NONE {
            continue;
        }
        side[s] = 0;
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            for &y in &nbrs[x] {
                if side[y] == NONE {
                    side[y] = 1 - side[x];
                    queue.push_back(y);
                } else if side[y] == side[x] {
                    return Err(ColoringError::NotBipartite(y as Vertex));
                }
            }
        }
    }
    // Index each side compactly.
    let mut index = vec![0usize; n];
    let mut counts = [0usize; 2];
    for x in 0..n {
        index[x] = counts[side[x]];
        counts[side[x]] += 1;
    }
    let edges = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (l, r) = if side[u as usize] == 0 { (u, v) } else { (v, u) };
            (index[l as usize], index[r as usize])
        })
        .collect();
    Ok(color_bipartite(&BipartiteEdges::new(counts[0], counts[1], edges)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn proper(g: &BipartiteEdges, c: &EdgeColoring) -> bool {
        let e = g.edges();
        (0..e.len()).all(|i| {
            (i + 1..e.len()).all(|j| {
                let touch = e[i].0 == e[j].0 || e[i].1 == e[j].1;
                !touch || c.colors()[i] != c.colors()[j]
            })
        })
    }

    #[test]
    fn four_cycle_uses_two_colours() {
        let c4 = LabeledGraph::cycle_on(4, &[0, 1, 2, 3]).unwrap();
        let c = bipartite_edge_coloring(&c4).unwrap();
        assert_eq!(c.color_count(), 2);
        assert_eq!(c.class(0).count(), 2);
    }

    #[test]
    fn complete_bipartite_three() {
        let g = LabeledGraph::new(6, (0..3).flat_map(|u| (3..6).map(move |v| (u, v)))).unwrap();
        let c = bipartite_edge_coloring(&g).unwrap();
        assert_eq!(c.color_count(), 3);
        let mut used: Vec<_> = c.colors().to_vec();
        used.sort_unstable();
        used.dedup();
        assert_eq!(used, vec![0, 1, 2]);
    }

    #[test]
    fn odd_cycle_rejected() {
        assert!(matches!(
            bipartite_edge_coloring(&LabeledGraph::complete(3)),
            Err(ColoringError::NotBipartite(_))
        ));
    }

    #[test]
    fn recolouring_is_exercised() {
        // edges arrive in an order that forces alternating-path swaps
        let g = BipartiteEdges::new(3, 3, vec![(0, 0), (1, 1), (0, 1), (2, 0), (2, 2), (1, 2), (1, 0), (0, 2), (2, 1)]);
        let c = color_bipartite(&g);
        assert_eq!(c.color_count(), 3);
        assert!(proper(&g, &c));
    }

    #[test]
    fn multigraph_edges() {
        let g = BipartiteEdges::new(2, 2, vec![(0, 0), (0, 0), (1, 1), (0, 1), (1, 0)]);
        let c = color_bipartite(&g);
        assert_eq!(c.color_count(), 3);
        assert!(proper(&g, &c));
        assert_eq!(color_bipartite(&g), c);
    }
}
