use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("element is not in the ambient group")]
    NotInAmbient,
    #[error("element is not hyperbolic")]
    NotHyperbolic,
    #[error("point is outside the upper half-space (y must be positive)")]
    InvalidPoint,
    #[error("coset enumeration did not close below the cap of {0} cosets")]
    IndexOverflow(usize),
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("no cusp data available")]
    NoCuspData,
    #[error("stabilizer generators unavailable")]
    StabilizerUnavailable,
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("adaptive quadrature did not reach tolerance {tol:e} within {budget} evaluations (estimate {estimate:e})")]
    NoConvergence { tol: f64, budget: usize, estimate: f64 },
    #[error("cusp {0} is not singular")]
    CuspNotSingular(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation needs the 2-dimensional (modular) ambient group")]
    Not2D,
    #[error("cusp stabilizer is not cyclic")]
    StabilizerNotCyclic,
}
