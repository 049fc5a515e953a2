use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("generator index {index} is out of range (provider has {available} generators)")]
    InvalidGenerator { index: usize, available: usize },

    #[error("element is not a canonical element of this provider")]
    ProviderMismatch,

    #[error("invalid group specification: {0}")]
    InvalidGroup(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("element is outside the ball of radius {radius}")]
    OutsideBall { radius: u32 },

    #[error("word distance exceeds cap {cap}")]
    DistanceCapExceeded { cap: u64 },

    #[error("ball of radius {radius} exceeds the vertex cap of {limit}")]
    ResourceCap { radius: u32, limit: usize },

    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),

    #[error("vertex {0} has neighbours outside the ball")]
    NotInterior(usize),

    #[error("ball has no interior vertices")]
    NoInterior,

    #[error("sphere of radius {0} is empty")]
    EmptySphere(u32),

    #[error("field has {got} values but the ball has {expected} vertices")]
    FieldMismatch { expected: usize, got: usize },

    #[error("boundary values do not cover the sphere exactly: {0}")]
    BoundaryMismatch(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("internal error: {0}")]
    Internal(String),
}
