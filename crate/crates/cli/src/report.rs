//! Plain-text tables. Starter rows print with the sampled vertices in
//! brackets ahead of the rest of the block, e.g. `[012]6`.

use std::fmt;

use sampling_core::groups::OrbitDecomposition;
use sampling_core::sampler::Regularity;
use sampling_core::{LabeledGraph, RedundancyProfile, TripleStarter, Vertex};

use crate::format::Starter;

/// Header lines followed by `(group, cell)` rows.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<(String, String)>,
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in &self.header {
            writeln!(f, "{h}")?;
        }
        let width = self.rows.iter().map(|(g, _)| g.chars().count()).max().unwrap_or(0);
        for (g, cell) in &self.rows {
            writeln!(f, "{g:<width$}  {cell}")?;
        }
        Ok(())
    }
}

/// Vertices as base-36 digits when they fit, comma separated otherwise.
fn vertices(n: usize, vs: &[Vertex]) -> String {
    if n <= 36 {
        vs.iter().map(|&v| char::from_digit(v, 36).expect("below 36")).collect()
    } else {
        vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }
}

pub fn marked_row(n: usize, block: &[Vertex], sample: &[Vertex]) -> String {
    let rest: Vec<Vertex> = block.iter().copied().filter(|v| !sample.contains(v)).collect();
    let sep = if n <= 36 || rest.is_empty() { "" } else { "," };
    format!("[{}]{sep}{}", vertices(n, sample), vertices(n, &rest))
}

pub fn regularity(p: &RedundancyProfile) -> String {
    match p.regularity() {
        Regularity::Regular(l) => format!("regular({l})"),
        Regularity::Semiregular(l) => format!("semiregular({l},{})", l + 1),
        Regularity::Irregular { min, max } => format!("irregular({min}..{max})"),
    }
}

/// Complete patterns by their vertex set, anything else by its edges.
fn label(n: usize, g: &LabeledGraph) -> String {
    let support = g.support();
    if g.edge_count() * 2 == support.len() * (support.len() - 1) {
        vertices(n, &support)
    } else {
        let edges: Vec<String> = g.edges().iter().map(|&(u, v)| vertices(n, &[u, v])).collect();
        edges.join(" ")
    }
}

/// Profile summary plus one line per preimage count.
pub fn profile(p: &RedundancyProfile) -> String {
    let mut s = format!("profile {}: {} source blocks onto {} targets\n", regularity(p), p.total(), p.counts.len());
    for (count, targets) in &p.histogram {
        s.push_str(&format!("  {targets} targets x {count} preimage(s)\n"));
    }
    s
}

/// The starter families, one row per triple, `{0, l}` marked.
pub fn starter_table(s: &TripleStarter) -> Table {
    let header = vec![format!("n = {}, lambda = {}, v = {}", s.n, s.lambda, s.v)];
    let rows = s
        .families()
        .iter()
        .flat_map(|(name, fam)| fam.iter().map(move |t| (name.to_string(), marked_row(s.n, t, &t[..2]))))
        .collect();
    Table { header, rows }
}

/// Starter rows grouped by the orbit of their sample, groups in
/// representative order, rows in file order within a group.
pub fn lift_table(
    starter: &Starter,
    small: &OrbitDecomposition<LabeledGraph>,
    group_order: u64,
    lambda: usize,
) -> Table {
    let header = vec![format!(
        "n = {}, {} -> {}, group {} (order {group_order}), lambda = {lambda}",
        starter.n,
        starter.big,
        starter.small,
        crate::format::group_name(starter.group)
    )];
    let mut keyed: Vec<(usize, usize, String, String)> = starter
        .rows
        .iter()
        .zip(&starter.graphs)
        .enumerate()
        .map(|(i, (row, (_, sample)))| {
            let orbit = small.orbit_of(sample).expect("sample in the small class");
            let rep = small.representative(orbit);
            (orbit, i, label(starter.n, rep), marked_row(starter.n, &row.block, &row.sample))
        })
        .collect();
    keyed.sort();
    Table { header, rows: keyed.into_iter().map(|(_, _, g, c)| (g, c)).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn marked_rows() {
        assert_eq!(marked_row(7, &[0, 1, 5, 2], &[0, 1, 5]), "[015]2");
        assert_eq!(marked_row(17, &[0, 8, 11], &[0, 8]), "[08]b");
        assert_eq!(marked_row(40, &[0, 1, 13, 12], &[0, 1, 13]), "[0,1,13],12");
    }

    #[test]
    fn fourteen_point_starter_table() {
        let t = starter_table(&sampling_core::triple_starter(14).unwrap());
        assert_eq!(t.rows.len(), 26);
        assert_eq!(t.rows[0], ("T1".into(), "[01]2".into()));
        assert_eq!(t.rows[20], ("T2".into(), "[06]7".into()));
        assert_eq!(t.rows[23], ("T3".into(), "[06]1".into()));
        assert_eq!(t.rows[25], ("T4^2".into(), "[07]2".into()));
        assert_eq!(t.to_string().lines().count(), 27);
    }

    #[test]
    fn empty_table() {
        assert_eq!(Table::default().to_string(), "");
    }
}
