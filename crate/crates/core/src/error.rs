use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown instance `{0}` (expected one of M2, M3, M2xM2)")]
    UnknownInstance(String),

    #[error("branching integral {value} is not within 1e-3 of an integer")]
    NonIntegerMultiplicity { value: f64 },

    #[error("no K-type up to weight {lambda_max} contains the stabilizer irrep {mu}")]
    EmptyBasis { mu: String, lambda_max: u32 },

    #[error("irrep label {label} does not belong to the stabilizer {stabilizer}")]
    StratumMismatch { label: String, stabilizer: String },

    #[error("epsilon {epsilon} too large: a wall at distance {wall_distance} changes the stabilizer")]
    EpsilonTooLarge { epsilon: f64, wall_distance: f64 },

    #[error("sequence mixes instances `{0}` and `{1}`")]
    MixedInstance(String, String),

    #[error("empty sequence")]
    EmptySequence,

    #[error("quadrature order {order} too low: refinement moved an entry by {deviation:e}")]
    QuadratureOrderTooLow { order: usize, deviation: f64 },

    #[error("path crosses strata at index {index}")]
    PathCrossesStrata { index: usize },

    #[error("field has no Γ₂ entry for K-type {0}")]
    MissingGamma2Data(String),

    #[error("test function is not integrable: {0}")]
    NotIntegrable(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
