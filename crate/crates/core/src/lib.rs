//! Low-degree spanning trees of 2-edge-connected graphs in linear time.
//!
//! [`low_degree_spanning_tree`] returns a spanning tree `T` of a
//! 2-edge-connected multigraph `G` with `deg_T(v) <= ⌈deg_G(v)/2⌉ + 1` for
//! every vertex. The tree is grown from an edge DFS of `G` ([`edge_dfs`]) by a
//! FIFO candidate queue ([`builder`]). [`verify`] and [`oracle`] certify the
//! result independently; [`generators`] and [`bench`] provide inputs and the
//! scaling harness.

pub mod bench;
pub mod builder;
mod dsu;
pub mod edge_dfs;
pub mod generators;
pub mod graph;
mod mem;
pub mod num;
pub mod oracle;
pub mod verify;

pub use builder::{
    build_spanning_tree, low_degree_spanning_tree, BuildError, BuilderTrace, Solution, SolveError,
    SolveOptions, SpanningTree,
};
pub use edge_dfs::{
    classify_steps, compute_edge_dfs, validate_edge_dfs, EdgeDfsError, EdgeDfsList, TraversalItem,
};
pub use graph::{EdgeId, Graph, GraphError, ParseError, VertexId};
pub use verify::{
    check_degree_bound, check_partition_cut, find_bridges, is_two_edge_connected,
    orientation_stats, validate_spanning_tree, DegreeReport, OrientationStats,
};

/// Exact spanning-tree counts for ordinary instances.
pub type TreeCount = i128;
/// Exact spanning-tree counts without an overflow ceiling.
pub type BigTreeCount = num_bigint::BigInt;
