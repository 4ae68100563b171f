#![no_std]

//! Construction and verification of samplings between complete graph designs.
//!
//! A complete design `K_n(G)` is the set of all copies of a pattern graph `G`
//! inside the complete graph on `n` vertices. A sampling maps every block of
//! a big-pattern design onto a contained block of a small-pattern design,
//! surjectively. This crate builds such maps through bipartite matchings and
//! edge colourings of the containment graph, through orbit lifting under
//! permutation groups, and relates wheel designs to nestings of cycle systems.
//!
//! Everything here is pure and allocation-only; file formats and the command
//! line front end live in the `design-sampler` crate.

extern crate alloc;

pub mod coloring;
pub mod containment;
pub mod designs;
pub mod graph;
pub mod groups;
pub mod matching;
pub mod nesting;
pub mod perm;
pub mod sampler;

pub use coloring::{bipartite_edge_coloring, color_bipartite, BipartiteEdges, EdgeColoring};
pub use containment::{biregular_degrees, build_containment, replicate, ContainmentGraph, ReplicatedGraph};
pub use designs::{
    closed_form_count, complete_design, copies_in_complete, required_redundancy, verify_design, BlockSet,
    CoverageReport, DesignError, PatternFamily, Redundancy,
};
pub use graph::{enumerate_copies, graph_automorphisms, is_subgraph, CanonicalKey, GraphError, LabeledGraph, Vertex};
pub use groups::{
    equivariance_violation, is_semiregular, lift_sampling, make_group, orbits, triple_sampling, triple_starter,
    Action, GroupError, GroupKind, LiftedSampling, OrbitDecomposition, TripleStarter,
};
pub use matching::{full_matching, Bipartite, Matching};
pub use nesting::{
    nesting_from_sampling, search_nesting, star_system, verify_nesting, wheels_from_nesting, CycleSystem,
    NestedWheels, NestingAssignment, NestingError, NestingReport, SearchOutcome, Wheel, WheelDesign,
};
pub use perm::{Permutation, PermutationGroup};
pub use sampler::{
    compose, floor_sampling, regular_embedding, regular_sampling, regular_sampling_between, semiregular_sampling,
    verify_embedding, verify_sampling, EmbeddingMap, RedundancyProfile, Regularity, SamplerError, SamplingMap,
};
