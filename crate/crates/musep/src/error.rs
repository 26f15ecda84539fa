//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("node index {index} out of range for graph with {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },
    #[error("node counts differ: {left} vs {right}")]
    NodeCountMismatch { left: usize, right: usize },
    #[error("{guard} guard exceeded: {detail}")]
    GuardExceeded { guard: &'static str, detail: String },
    #[error("conditioning families require at most 63 nodes, graph has {n}")]
    FamilyTooLarge { n: usize },
    #[error("invalid walk: {0}")]
    InvalidWalk(String),
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("invalid document: {0}")]
    InvalidDocument(String),
    #[error("assignment does not falsify the formula")]
    NotFalsifying,
}

pub type Result<T> = std::result::Result<T, Error>;
