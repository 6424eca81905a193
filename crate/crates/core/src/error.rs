use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument |z| = {modulus} outside the Bessel accuracy envelope (|z| <= {limit})")]
    AccuracyEnvelopeExceeded { modulus: f64, limit: f64 },

    #[error("invalid spectral parameters: {0}")]
    InvalidParams(String),

    #[error("invalid shape parameters: {0}")]
    InvalidShapeParams(String),

    #[error("no saddle point of g in the search window")]
    NoSaddle,

    #[error("saddle at {0} is degenerate (g'' vanishes)")]
    DegenerateSaddle(Complex64),

    #[error("Re g(±π) = {endpoint} is not below Re g(t0) = {level}")]
    EndpointAboveLevel { endpoint: f64, level: f64 },

    #[error("no admissible descent contour: {0}")]
    NoAdmissiblePath(String),

    #[error("contour margin violated at t = {t}: excess {excess:e} > -{delta:e}")]
    MarginViolated {
        t: Complex64,
        excess: f64,
        delta: f64,
    },

    #[error("no admissible branch of arg(-g''(t0)) for departure angle {omega}")]
    BranchUnresolvable { omega: f64 },

    #[error("mu_n has no real solution for n = {0}")]
    NoRealSolution(i32),

    #[error("mu_n degenerates to the circle for n = 5")]
    DegenerateCircle,

    #[error("quadrature did not converge: {0}")]
    QuadratureNotConverged(String),

    #[error("exponent {exponent} at t = {t} risks overflow; supply a normalization")]
    OverflowRisk { t: Complex64, exponent: f64 },

    #[error("curve is not star-shaped about the origin")]
    StarShapeViolated,

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}
