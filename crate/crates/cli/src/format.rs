//! JSON file formats. Every reader validates into the core types; every
//! writer emits compact, key-ordered JSON so equal inputs give equal bytes.

use std::path::Path;

use sampling_core::designs::DesignError;
use sampling_core::graph::GraphError;
use sampling_core::groups::OrbitDecomposition;
use sampling_core::nesting::{NestingError, WheelDesign};
use sampling_core::{
    BlockSet, CycleSystem, EmbeddingMap, GroupKind, LabeledGraph, NestingAssignment, PatternFamily,
    PermutationGroup, RedundancyProfile, SamplingMap, Vertex,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Nesting(#[from] NestingError),
    #[error("{0}")]
    Schema(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
}

impl From<&LabeledGraph> for GraphJson {
    fn from(g: &LabeledGraph) -> Self {
        GraphJson { n: g.n(), edges: g.edges().iter().map(|&(u, v)| [u, v]).collect() }
    }
}

impl TryFrom<&GraphJson> for LabeledGraph {
    type Error = FormatError;

    fn try_from(j: &GraphJson) -> Result<Self, FormatError> {
        Ok(LabeledGraph::new(j.n, j.edges.iter().map(|e| (e[0], e[1])))?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSetJson {
    pub host: GraphJson,
    pub multiplicity: u32,
    pub blocks: Vec<GraphJson>,
}

impl From<&BlockSet> for BlockSetJson {
    fn from(b: &BlockSet) -> Self {
        BlockSetJson {
            host: b.host().into(),
            multiplicity: b.multiplicity(),
            blocks: b.blocks().iter().map(GraphJson::from).collect(),
        }
    }
}

impl TryFrom<&BlockSetJson> for BlockSet {
    type Error = FormatError;

    fn try_from(j: &BlockSetJson) -> Result<Self, FormatError> {
        let blocks = j.blocks.iter().map(LabeledGraph::try_from).collect::<Result<_, _>>()?;
        Ok(BlockSet::new((&j.host).try_into()?, j.multiplicity, blocks)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Sampling,
    Embedding,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileJson {
    pub min: usize,
    pub max: usize,
}

impl From<&RedundancyProfile> for ProfileJson {
    fn from(p: &RedundancyProfile) -> Self {
        ProfileJson { min: p.min, max: p.max }
    }
}

/// A sampling `source -> target`, or an embedding of the source design
/// into the target design.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    #[serde(default = "default_kind")]
    pub kind: MapKind,
    pub source: BlockSetJson,
    pub target: BlockSetJson,
    pub assignment: Vec<usize>,
    pub profile: ProfileJson,
}

fn default_kind() -> MapKind {
    MapKind::Sampling
}

impl MapJson {
    pub fn from_sampling(sm: &SamplingMap, profile: &RedundancyProfile) -> Self {
        MapJson {
            kind: MapKind::Sampling,
            source: sm.source().into(),
            target: sm.target().into(),
            assignment: sm.assignment().to_vec(),
            profile: profile.into(),
        }
    }

    pub fn from_embedding(em: &EmbeddingMap, profile: &RedundancyProfile) -> Self {
        MapJson {
            kind: MapKind::Embedding,
            source: em.source().into(),
            target: em.target().into(),
            assignment: em.assignment().to_vec(),
            profile: profile.into(),
        }
    }

    fn parts(&self) -> Result<(BlockSet, BlockSet), FormatError> {
        Ok(((&self.source).try_into()?, (&self.target).try_into()?))
    }

    pub fn to_sampling(&self) -> Result<SamplingMap, FormatError> {
        if self.kind != MapKind::Sampling {
            return Err(FormatError::Schema("expected a sampling, found an embedding".into()));
        }
        let (s, t) = self.parts()?;
        Ok(SamplingMap::new(s, t, self.assignment.clone()))
    }

    pub fn to_embedding(&self) -> Result<EmbeddingMap, FormatError> {
        if self.kind != MapKind::Embedding {
            return Err(FormatError::Schema("expected an embedding, found a sampling".into()));
        }
        let (s, t) = self.parts()?;
        Ok(EmbeddingMap::new(s, t, self.assignment.clone()))
    }
}

/// A cycle system, with hubs when it carries a nesting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NestingJson {
    pub n: usize,
    pub m: usize,
    pub cycles: Vec<Vec<Vertex>>,
    #[serde(default)]
    pub hubs: Vec<Vertex>,
}

impl NestingJson {
    pub fn new(cs: &CycleSystem, f: Option<&NestingAssignment>) -> Self {
        NestingJson {
            n: cs.n(),
            m: cs.m(),
            cycles: cs.cycles().to_vec(),
            hubs: f.map(|f| f.hubs.clone()).unwrap_or_default(),
        }
    }

    pub fn cycle_system(&self) -> Result<CycleSystem, FormatError> {
        Ok(CycleSystem::new(self.n, self.m, self.cycles.clone())?)
    }

    pub fn assignment(&self) -> Option<NestingAssignment> {
        (!self.hubs.is_empty() || self.cycles.is_empty()).then(|| NestingAssignment { hubs: self.hubs.clone() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WheelJson {
    pub hub: Vertex,
    pub rim: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WheelDesignJson {
    pub n: usize,
    pub m: usize,
    pub multiplicity: u32,
    pub wheels: Vec<WheelJson>,
}

impl From<&WheelDesign> for WheelDesignJson {
    fn from(w: &WheelDesign) -> Self {
        WheelDesignJson {
            n: w.n,
            m: w.m,
            multiplicity: WheelDesign::MULTIPLICITY,
            wheels: w.wheels.iter().map(|w| WheelJson { hub: w.hub, rim: w.rim.clone() }).collect(),
        }
    }
}

/// One starter row: a big block given as a vertex sequence placed on the
/// big family, and its sample placed on the small family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowJson {
    pub block: Vec<Vertex>,
    pub sample: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarterJson {
    pub n: usize,
    pub group: String,
    pub big: String,
    pub small: String,
    pub rows: Vec<RowJson>,
}

/// A starter file resolved into graphs.
#[derive(Debug, Clone)]
pub struct Starter {
    pub n: usize,
    pub group: GroupKind,
    pub big: PatternFamily,
    pub small: PatternFamily,
    pub rows: Vec<RowJson>,
    pub graphs: Vec<(LabeledGraph, LabeledGraph)>,
}

impl TryFrom<&StarterJson> for Starter {
    type Error = FormatError;

    fn try_from(j: &StarterJson) -> Result<Self, FormatError> {
        let group = parse_group(&j.group)?;
        let big: PatternFamily = j.big.parse()?;
        let small: PatternFamily = j.small.parse()?;
        let graphs = j
            .rows
            .iter()
            .map(|r| Ok((big.place(j.n, &r.block)?, small.place(j.n, &r.sample)?)))
            .collect::<Result<_, FormatError>>()?;
        Ok(Starter { n: j.n, group, big, small, rows: j.rows.clone(), graphs })
    }
}

pub fn parse_group(s: &str) -> Result<GroupKind, FormatError> {
    match s {
        "cyclic" => Ok(GroupKind::Cyclic),
        "affine" | "affine-square" => Ok(GroupKind::AffineSquare),
        "sym" | "symmetric" => Ok(GroupKind::Symmetric),
        _ => Err(FormatError::Schema(format!("unknown group `{s}` (expected cyclic, affine or sym)"))),
    }
}

pub fn group_name(kind: GroupKind) -> &'static str {
    match kind {
        GroupKind::Cyclic => "cyclic",
        GroupKind::AffineSquare => "affine",
        GroupKind::Symmetric => "sym",
        GroupKind::Custom => "custom",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub kind: String,
    pub degree: usize,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitJson {
    pub rep: GraphJson,
    pub size: usize,
    pub stab: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitTableJson {
    pub group: GroupJson,
    pub orbits: Vec<OrbitJson>,
}

impl OrbitTableJson {
    pub fn new(g: &PermutationGroup, dec: &OrbitDecomposition<LabeledGraph>) -> Self {
        OrbitTableJson {
            group: GroupJson { kind: group_name(g.kind()).into(), degree: g.degree(), order: g.order() },
            orbits: (0..dec.orbit_count())
                .map(|k| OrbitJson {
                    rep: dec.representative(k).into(),
                    size: dec.orbit_size(k),
                    stab: dec.stabilizer_order(k),
                })
                .collect(),
        }
    }
}

/// A pattern given as family shorthand (`K3`, `C4`, ...) or as a path to a
/// graph file.
pub fn parse_pattern(s: &str) -> Result<LabeledGraph, FormatError> {
    match s.parse::<PatternFamily>() {
        Ok(f) => Ok(f.graph()),
        Err(shorthand) => {
            if Path::new(s).exists() {
                let j: GraphJson = read_json(Path::new(s))?;
                (&j).try_into()
            } else {
                Err(shorthand.into())
            }
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|source| FormatError::Json { path: path.display().to_string(), source })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = PatternFamily::Cycle(4).place(7, &[0, 1, 5, 2]).unwrap();
        let j = GraphJson::from(&g);
        assert_eq!(to_json(&j), "{\"n\":7,\"edges\":[[0,1],[0,2],[1,5],[2,5]]}\n");
        assert_eq!(LabeledGraph::try_from(&j).unwrap(), g);
    }

    #[test]
    fn malformed_graphs_are_rejected() {
        let loop_edge: GraphJson = serde_json::from_str(r#"{"n":3,"edges":[[1,1]]}"#).unwrap();
        assert!(LabeledGraph::try_from(&loop_edge).is_err());
        let outside: GraphJson = serde_json::from_str(r#"{"n":3,"edges":[[0,3]]}"#).unwrap();
        assert!(LabeledGraph::try_from(&outside).is_err());
        assert!(serde_json::from_str::<GraphJson>(r#"{"n":3,"edges":[],"extra":1}"#).is_err());
    }

    #[test]
    fn block_sets_validate_against_the_host() {
        let j: BlockSetJson = serde_json::from_str(
            r#"{"host":{"n":3,"edges":[[0,1],[1,2]]},"multiplicity":1,"blocks":[{"n":3,"edges":[[0,2]]}]}"#,
        )
        .unwrap();
        assert!(matches!(BlockSet::try_from(&j), Err(FormatError::Design(DesignError::BlockOutsideHost { index: 0 }))));
    }

    #[test]
    fn starter_rows_place_on_families() {
        let j = StarterJson {
            n: 7,
            group: "affine".into(),
            big: "C4".into(),
            small: "P3".into(),
            rows: vec![RowJson { block: vec![0, 1, 5, 4], sample: vec![0, 1, 5] }],
        };
        let s = Starter::try_from(&j).unwrap();
        assert_eq!(s.group, GroupKind::AffineSquare);
        assert!(sampling_core::is_subgraph(&s.graphs[0].1, &s.graphs[0].0));
        let bad = StarterJson { group: "dihedral".into(), ..j };
        assert!(Starter::try_from(&bad).is_err());
    }

    #[test]
    fn nesting_files() {
        let j: NestingJson = serde_json::from_str(r#"{"n":7,"m":3,"cycles":[[0,1,3]]}"#).unwrap();
        assert!(j.assignment().is_none());
        assert_eq!(j.cycle_system().unwrap().len(), 1);
    }
}
