use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "inadmissible plate parameters: {0} (require n >= 2, tau > 0, sigma in (-1/(n-1), 1))"
    )]
    Inadmissible(String),

    #[error("floating-point overflow: {0}")]
    Overflow(String),

    #[error("series did not converge: {0}")]
    NonConvergence(String),

    #[error("numerical breakdown: {0}")]
    Numerical(String),

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("factorization failed: {reason} (stiffness condition estimate {condition:.3e})")]
    Factorization { reason: String, condition: f64 },

    #[error("mass normalization failed: integral {integral} vs target {target}")]
    MassNormalization { integral: f64, target: f64 },

    #[error("zero denominator in Rayleigh quotient (trial function has vanishing trace)")]
    ZeroDenominator,

    #[error("inequality check failed: {0}")]
    Assertion(String),
}
