use thiserror::Error;

use crate::graph::NodeRef;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("node {0} does not exist")]
    InvalidNode(NodeRef),
    #[error("edge must join an upper node to a lower node, got ({u}, {v})")]
    WrongSides { u: NodeRef, v: NodeRef },
    #[error("edge ({u}, {v}) already present")]
    DuplicateEdge { u: NodeRef, v: NodeRef },
    #[error("edge ({u}, {v}) not present")]
    MissingEdge { u: NodeRef, v: NodeRef },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrientationError {
    #[error("capped node {node} has indegree {indegree}, expected {expected}")]
    CapViolated {
        node: NodeRef,
        indegree: u32,
        expected: u32,
    },
    #[error("invalid path: {0}")]
    InvalidPath(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed index file at byte {offset}: {reason}")]
pub struct FormatError {
    pub offset: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large for brute force: {what} = {actual} exceeds limit {limit}")]
    LimitExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("valid orientations disagree on the dense subgraph for ({alpha}, {beta})")]
    ModelViolation { alpha: u32, beta: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MaintenanceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("integrity check failed: {0}")]
    Integrity(String),
}
