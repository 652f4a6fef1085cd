use thiserror::Error;

use crate::graph::{EdgeId, NodeId};
use crate::online::ColorId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("arc {index} ({tail} -> {head}) has an endpoint outside 0..{node_count}")]
    EndpointOutOfRange {
        index: usize,
        tail: usize,
        head: usize,
        node_count: usize,
    },
    #[error("arc {index} is a self-loop on node {node}")]
    SelfLoop { index: usize, node: usize },
    #[error("node {node} is not in a graph of {node_count} nodes")]
    InvalidNode { node: usize, node_count: usize },
    #[error("source and receiver are the same node ({0})")]
    SourceIsReceiver(NodeId),
    #[error("malformed graph file: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("group max-flow needs at least one receiver")]
    NoReceivers,
    #[error("brute-force oracle is limited to {limit} nodes, graph has {node_count}")]
    GraphTooLarge { node_count: usize, limit: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("receiver list is empty")]
    NoReceivers,
    #[error("receiver {0} is listed more than once")]
    DuplicateReceiver(NodeId),
    #[error("path to receiver {receiver} overlaps {count} zones")]
    MultiColorOverlap { receiver: NodeId, count: usize },
    #[error("path to receiver {receiver} revisits node {node}")]
    NonSimplePath { receiver: NodeId, node: NodeId },
    #[error("edge {edge} already carries color {existing}, refusing to recolor with {requested}")]
    Recolor {
        edge: EdgeId,
        existing: ColorId,
        requested: ColorId,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodingError {
    #[error("no feasible code: group max-flow is 0")]
    NoFeasibleCode,
    #[error("field GF(2^{degree}) has {available} nonzero points but {zones} zones need one each; use degree 16")]
    FieldTooSmall {
        degree: u32,
        zones: usize,
        available: usize,
    },
    #[error("zone {0} is not part of the assignment")]
    UnknownZone(ColorId),
    #[error("receiver {receiver} observed rank {rank} < {needed}; undecodable")]
    Undecodable {
        receiver: NodeId,
        rank: usize,
        needed: usize,
    },
    #[error("symbol block has length {got}, expected {expected}")]
    BlockLength { got: usize, expected: usize },
    #[error("path {path} of receiver {receiver} spans more than one zone")]
    MixedPath { receiver: NodeId, path: usize },
    #[error("path {path} of receiver {receiver} contains an uncolored edge {edge}")]
    UncoloredEdge {
        receiver: NodeId,
        path: usize,
        edge: EdgeId,
    },
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid topology spec: {0}")]
    InvalidTopology(String),
    #[error("invalid session spec: {0}")]
    InvalidSession(String),
    #[error("invalid grid spec: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Coding(#[from] CodingError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
