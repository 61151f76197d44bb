use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph is disconnected: vertex {vertex} is unreachable from vertex 0")]
    Disconnected { vertex: usize },
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(usize, usize),
    #[error("vertex set is empty")]
    EmptySet,
    #[error("{what}: n = {n} exceeds the limit of {limit}")]
    TooLarge { what: &'static str, n: usize, limit: usize },
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("diameter {0} is too small (need at least 2)")]
    DiameterTooSmall(usize),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("base graph too small: n = {n}, need at least {min}")]
    TooSmall { n: usize, min: usize },
    #[error("time budget exhausted before the search completed")]
    TimedOut,
}
