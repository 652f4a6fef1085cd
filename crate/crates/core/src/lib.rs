//! Multicast subgraph construction for unit-capacity networks.
//!
//! An online construction grows one edge-disjoint path set per receiver,
//! coloring arcs into zones so that receivers can share paths. Each zone
//! carries one source-coded symbol; a receiver decodes once the zones it
//! touches span the source block.

pub mod coding;
pub mod dot;
pub mod error;
pub mod experiments;
pub mod gf;
pub mod graph;
pub mod maxflow;
pub mod online;
pub mod topology;

pub use coding::{build_assignment, decode, receiver_rank, simulate_round, SourceCodeAssignment, SymbolBlock};
pub use error::{CodingError, ConstructionError, ExperimentError, FlowError, GraphError};
pub use gf::FieldSpec;
pub use graph::{DirectedMultigraph, EdgeId, GraphFile, NodeId, Path};
pub use maxflow::{ek_decompose, group_max_flow, merge_subgraph};
pub use online::{check_invariants, online_construct, online_construct_with, ColorId, ExpansionOrder, OnlineResult};
pub use topology::{fixture, sample_session, SessionSpec, TopologySpec};
