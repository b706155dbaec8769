use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability {value} at index {index} is outside [0, 1]")]
    ProbabilityOutOfRange { index: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Bloch vector has norm {norm} > 1")]
    OutsideBlochBall { norm: f64 },

    #[error("measurement direction must be a pure state, got squared norm {norm_sq}")]
    NotPureDirection { norm_sq: f64 },

    #[error("state is not pure: |x|^2 + |y|^2 + |T|^2 = {normalization}, expected 3")]
    NotPureState { normalization: f64 },

    #[error("mixture weights sum to {sum}, expected 1")]
    WeightsNotNormalized { sum: f64 },

    #[error("mixture weight {value} at index {index} is negative")]
    NegativeWeight { index: usize, value: f64 },

    #[error("mixture needs at least one state")]
    EmptyMixture,

    #[error("{states} states but {weights} weights")]
    WeightCount { states: usize, weights: usize },

    #[error("matrix is not orthogonal (max |R^T R - I| = {deviation})")]
    NotOrthogonal { deviation: f64 },

    #[error("matrix is not unitary (max |U^dag U - I| = {deviation})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("metric is not positive definite (min eigenvalue {min_eigenvalue})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("state lies outside the convex state space")]
    OutsideStateSpace,

    #[error("state space needs a convex polygon with at least 3 vertices")]
    DegenerateStateSpace,

    #[error("unsupported dimension {d}: {reason}")]
    UnsupportedDimension { d: usize, reason: &'static str },

    #[error("subsystem {index} out of range for {parties} parties")]
    InvalidSubsystem { index: usize, parties: usize },

    #[error("flip map must send e1 to -e1")]
    NotAFlip,

    #[error("state is not in the correlated subspace S12")]
    NotInS12,

    #[error("malformed state: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
