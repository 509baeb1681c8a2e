use thiserror::Error;

use crate::graph::Edge;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),

    #[error("{0} is not an edge")]
    NotAnEdge(Edge),

    #[error("{0} is already an edge")]
    AlreadyAnEdge(Edge),

    #[error("{0} is listed both as an addition and a removal")]
    ConflictingEdit(Edge),

    #[error("clique count overflowed 64 bits")]
    CountOverflow,

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("part {part} has {size} vertices, fewer than the target {target}")]
    PartTooSmall {
        part: usize,
        size: usize,
        target: usize,
    },

    #[error("exact search refused: {0}")]
    SizeGuard(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
