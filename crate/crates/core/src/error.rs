use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero character has no primitive part")]
    ZeroCharacter,
    #[error("character {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),
    #[error("congruence exponent must be positive, got {0}")]
    NonPositiveExponent(i64),
    #[error("lattice mismatch: expected rank {expected}, found {found}")]
    LatticeMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("cone {0:?} is not in the fan")]
    ConeNotInFan(Vec<usize>),
    #[error("fan is not smooth")]
    NotSmooth,
    #[error("fan is not complete")]
    NotComplete,
    #[error("invalid GKM graph: {0}")]
    InvalidGraph(String),
    #[error("vertex mismatch: graph has {graph} vertices, class has {class}")]
    VertexMismatch { graph: usize, class: usize },
    #[error("not a graph automorphism: {0}")]
    NotAutomorphism(String),
    #[error("window is not closed under the group action")]
    WindowNotStable,
    #[error("quotient presentation inconsistent: invariant window rank {invariant}, quotient window rank {quotient}")]
    QuotientInconsistent { invariant: usize, quotient: usize },
    #[error("lattice map is not surjective")]
    NotSurjective,
    #[error("invalid root datum: {0}")]
    InvalidRootDatum(String),
    #[error("Weyl group exceeds the configured bound of {0} elements")]
    WeylBoundExceeded(usize),
    #[error("involution incompatible with positive system: {0}")]
    IncompatibleInvolution(String),
    #[error("restricted root system is not reduced")]
    NonReduced,
    #[error("not minimal rank: {0}")]
    NotMinimalRank(String),
    #[error("subgroup check failed: {0}")]
    NotSubgroup(String),
    #[error("fundamental weights are required")]
    MissingWeights,
    #[error("Steinberg family failed validation: {0}")]
    SteinbergInvalid(String),
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("triangularity violated: {0}")]
    Triangularity(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
