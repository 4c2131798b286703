//! Error types shared across the crate.

use thiserror::Error;

/// Everything that can go wrong in the bound pipeline.
///
/// Rejection of a witness candidate is *not* an error — certification
/// returns a verdict. Errors are reserved for invalid inputs and for
/// numerical procedures that could not meet their advertised tolerance.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A hypergeometric parameter hit a pole (c a non-positive integer).
    #[error("parameter pole: {0}")]
    ParameterPole(String),

    /// A special-function evaluation could not certify its target accuracy.
    /// The payload carries the internal error estimate.
    #[error("accuracy loss in {context}: estimated error {estimate:e}")]
    AccuracyLoss { context: String, estimate: f64 },

    /// An argument fell outside the operation's domain.
    #[error("domain error: {0}")]
    DomainError(String),

    /// Adaptive quadrature could not meet the requested tolerance.
    #[error("integration failure: {0}")]
    IntegrationFailure(String),

    /// A spectral point was used with a geometry it does not belong to.
    #[error("spectrum mismatch: {0}")]
    SpectrumMismatch(String),

    /// Numerical differentiation could not be stabilized.
    #[error("differentiation instability: {0}")]
    DifferentiationInstability(String),

    /// A pushforward or transport step violated margins it must satisfy.
    #[error("certification failure: {0}")]
    CertificationFailure(String),

    /// The candidate has f̂(1) <= 0 and cannot witness any bound.
    #[error("degenerate witness: {0}")]
    DegenerateWitness(String),

    /// Lattice enumeration is limited to small dimensions.
    #[error("dimension too large: {0}")]
    DimensionTooLarge(String),

    /// An envelope could not certify a truncation tail.
    #[error("tail bound failure: {0}")]
    TailBoundFailure(String),

    /// A grid does not satisfy its structural requirements.
    #[error("grid error: {0}")]
    GridError(String),

    /// The refine loop ran out of budget; carries the last diagnostics.
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    /// Malformed configuration or CLI usage.
    #[error("usage error: {0}")]
    UsageError(String),

    /// I/O or serialization problems surfaced by the CLI.
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::DomainError(msg.into())
    }

    pub(crate) fn integration(msg: impl Into<String>) -> Self {
        Error::IntegrationFailure(msg.into())
    }
}
