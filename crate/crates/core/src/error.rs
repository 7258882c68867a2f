use thiserror::Error;

use crate::graph::{EdgeId, VertexId};
use crate::trail::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge {edge:?} would be a loop at {at:?}")]
    LoopWouldForm { edge: EdgeId, at: VertexId },

    #[error("terminals must be distinct, got {0:?} twice")]
    SameVertex(VertexId),

    #[error("vertex {vertex:?} out of range for a graph on {count} vertices")]
    VertexOutOfRange { vertex: VertexId, count: usize },

    #[error("edge {0:?} is not present in the graph")]
    UnknownEdge(EdgeId),

    #[error("malformed graph: {0}")]
    InvalidGraph(String),

    #[error("requested {requested} edge-disjoint paths but lambda is {available}")]
    InsufficientConnectivity { requested: usize, available: usize },

    #[error("vertex occurrence {position} is outside a trail with {len} vertices")]
    BadPosition { position: usize, len: usize },

    #[error("cannot concatenate: first trail ends at {end:?}, second starts at {start:?}")]
    EndpointMismatch { end: VertexId, start: VertexId },

    #[error("cannot concatenate: edge {0:?} appears in both trails")]
    EdgeOverlap(EdgeId),

    #[error("malformed trail: {0}")]
    MalformedTrail(String),

    #[error("invalid trail: {0}")]
    InvalidTrail(Violation),

    #[error("trail collection invariant broken: {0}")]
    InvalidCollection(String),

    #[error("no case of the contact classification applies")]
    ClassificationFailure,

    #[error("case witness does not satisfy its defining condition: {0}")]
    WitnessInvalid(String),

    #[error("lambda(u,v) = {lambda} is below 2 * {trails} trails")]
    ConnectivityTooLow { lambda: usize, trails: usize },

    #[error("untangling exceeded the iteration bound {bound}")]
    IterationBoundExceeded { bound: usize },

    #[error("potential did not drop: {before} -> {after}")]
    PotentialNotDecreasing { before: i64, after: i64 },

    #[error("not a path in the gadget graph: {0}")]
    NotAPath(String),

    #[error("path endpoints must lie in the terminal clique")]
    EndpointsNotInA,

    #[error("trail has no edges")]
    EmptyTrail,

    #[error("{what} budget exceeded: instance size {size} > cap {cap}")]
    BudgetExceeded { what: &'static str, size: usize, cap: usize },

    #[error("invalid triple: {0}")]
    InvalidTriple(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("terminal sets must be disjoint and non-empty")]
    OverlappingTerminalSets,

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
