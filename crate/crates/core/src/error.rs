use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {0} not found")]
    NotFound(NodeId),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },

    #[error("field element {value} out of range for GF({modulus})")]
    InvalidElement { value: u64, modulus: u64 },

    #[error("{what}: {count} exceeds the budget of {limit}")]
    TooLarge {
        what: &'static str,
        count: u128,
        limit: u128,
    },

    #[error("no feasible parameters: {0}")]
    Infeasible(String),

    #[error("node {0} has no color set")]
    Incomplete(NodeId),

    #[error("one-shot contract violated: {0}")]
    ContractViolation(String),

    #[error("refusing to convert an invalid coloring ({violations} violations)")]
    RefusedInvalid { violations: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("self-loop on {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(NodeId, NodeId),
    #[error("id {id} outside [1, {id_space}]")]
    IdOutOfRange { id: NodeId, id_space: u64 },
    #[error("malformed line: {0:?}")]
    Malformed(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}
