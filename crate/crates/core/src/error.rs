//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by computations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("expected integer entries")]
    NotInteger,
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("kernel over Q/Z has a divisible part (column rank {rank} < {cols})")]
    DivisibleKernel { rank: usize, cols: usize },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("degenerate network: {0}")]
    Degenerate(String),
    #[error("not layerable: {0}")]
    NotLayerable(String),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("not harmonic: {0}")]
    NotHarmonic(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
