use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::constructions::{MoveViolation, PinchViolation};
use crate::graph::{BodyBarOrbitGraph, BodyId, EdgeId};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("operation needs a non-empty edge subset")]
    EmptySubset,
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown body {0}")]
    UnknownBody(BodyId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("duplicate body id {0}")]
    DuplicateBody(BodyId),
    #[error("gain component {value} exceeds the cap {cap}")]
    GainOutOfRange { value: i64, cap: i64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{edges} edges exceed the enumeration cap of {cap}")]
    CapExceeded { edges: usize, cap: usize },
    #[error("graph is not tight: {edges} edges, expected {expected}")]
    NotTight { edges: usize, expected: usize },
    #[error("graph is not sparse; violating edge set {witness:?}")]
    NotSparse { witness: Vec<EdgeId> },
    #[error("invalid edge pinch: {0}")]
    Pinch(PinchViolation),
    #[error("invalid bar-joint move: {0}")]
    Move(MoveViolation),
    #[error("no valid pinch found after {attempts} attempts")]
    SamplingExhausted { attempts: usize },
    #[error("splitting-off search exhausted at body {body}; this is a bug, instance attached")]
    ExhaustedSearch { body: BodyId, graph: Box<BodyBarOrbitGraph> },
}

impl From<PinchViolation> for Error {
    fn from(v: PinchViolation) -> Self {
        Error::Pinch(v)
    }
}

impl From<MoveViolation> for Error {
    fn from(v: MoveViolation) -> Self {
        Error::Move(v)
    }
}
