use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: malformed edge, expected two vertex labels: {text:?}")]
    MalformedLine { line: usize, text: String },

    #[error("line {line}: loop at vertex {label:?}")]
    Loop { line: usize, label: String },

    #[error("line {line}: parallel edge {a:?}-{b:?}")]
    ParallelEdge { line: usize, a: String, b: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("vertex {vertex} out of range for a graph with {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("graph has {edges} edges, more than the limit of {limit}")]
    TooManyEdges { edges: usize, limit: usize },

    #[error("more than {limit} paths and even cycles; raise the sequence cap to continue")]
    SequenceCapExceeded { limit: usize },

    #[error("edge set is empty")]
    EmptyEdgeSet,

    #[error("edge index {index} out of range for {edge_count} edges")]
    EdgeOutOfRange { index: usize, edge_count: usize },

    #[error("not a valid edge sequence: {0}")]
    InvalidSequence(String),

    #[error("point has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point lies on hyperplane {index}")]
    OnHyperplane { index: usize },

    #[error("arrangement has no hyperplanes")]
    EmptyArrangement,

    #[error("characteristic polynomial interpolation inconsistent: {0}")]
    InterpolationInconsistent(String),

    #[error("dimension {dimension} exceeds the limit of {limit} for this computation")]
    DimensionTooLarge { dimension: usize, limit: usize },

    #[error("functional ties on skeleton edge {edge} ({a}, {b})")]
    TieOnEdge { edge: usize, a: usize, b: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
