use thiserror::Error;

/// Engine-wide error type.
///
/// Size caps and the coloring-search budget exist to keep every operation
/// exact: anything the engine answers, it answers by finished exhaustive
/// search, never by truncation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("loop edge at vertex {vertex}")]
    LoopEdge { vertex: usize },

    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("operation requires a total coloring but none is present")]
    MissingColoring,

    #[error("operation requires an ordered structure")]
    NotOrdered,

    #[error("color {color} outside universe 1..={n}")]
    ColorOutOfRange { color: usize, n: usize },

    #[error("color universe size must be positive")]
    InvalidColorUniverse,

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("{what}: size {actual} exceeds cap {cap}")]
    SizeCapExceeded {
        what: &'static str,
        cap: usize,
        actual: usize,
    },

    #[error("coloring-search budget of {budget} nodes exhausted")]
    BudgetExceeded { budget: u64 },

    #[error("structure is not {n}-colorable")]
    NotNColorable { n: usize },

    #[error("invalid extension: {reason}")]
    InvalidExtension { reason: String },

    #[error("mismatched structure kinds: {reason}")]
    KindMismatch { reason: String },

    #[error("duplicate pattern at position {position}")]
    DuplicatePattern { position: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
