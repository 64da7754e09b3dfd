use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("graph has {n} vertices, limit is {limit}")]
    TooManyVertices { n: usize, limit: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("graph6: invalid character {byte:#04x} at byte {offset}")]
    Graph6BadChar { offset: usize, byte: u8 },
    #[error("graph6: input truncated at byte {offset}, expected {expected} bytes")]
    Graph6Truncated { offset: usize, expected: usize },
    #[error("graph6: unexpected trailing data at byte {offset}")]
    Graph6Trailing { offset: usize },

    #[error("{what}: {n} vertices exceeds the exhaustive limit of {limit}")]
    SizeLimit { what: &'static str, n: usize, limit: usize },
    #[error("profile dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parameters outside supported envelope: {0}")]
    Envelope(String),
    #[error("mode {0} is not supported here")]
    UnsupportedMode(&'static str),

    #[error("catalog line {line}: {msg}")]
    CatalogFormat { line: usize, msg: String },
    #[error("catalog version mismatch: {0}")]
    CatalogVersion(String),
    #[error("catalog checksum mismatch: header {expected}, computed {found}")]
    CatalogChecksum { expected: String, found: String },
    #[error("catalog entry {0} has no profile")]
    Unannotated(usize),
    #[error("io: {0}")]
    Io(String),

    #[error("linear program is unbounded in column {0}")]
    Unbounded(usize),
    #[error("k - 1 = {km1} is not divisible by {lcm}; smallest admissible k is {smallest_k}")]
    Divisibility { km1: u64, lcm: u64, smallest_k: u64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid model parameters: {0}")]
    Model(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
