use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the quadrature library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("integrand is not finite at node {index} (x = {x})")]
    NonFinite { index: usize, x: f64 },

    #[error("singularity {0} lies on the interval [-1, 1]")]
    DegenerateSingularity(Complex64),

    #[error("insufficient pre-plateau data: {found} usable records, need at least {needed}")]
    InsufficientData { found: usize, needed: usize },

    #[error("reference oracles disagree for {id} (epsilon = {epsilon:e}): {oracle1:e} vs {oracle2:e}")]
    ReferenceDisagreement {
        id: String,
        epsilon: f64,
        oracle1: f64,
        oracle2: f64,
    },

    #[error(
        "no reference value for {id} at epsilon = {epsilon:e}; \
         generate one with `nsquad references --out <path>`"
    )]
    MissingReference { id: String, epsilon: f64 },

    #[error("unknown integrand id `{0}`")]
    UnknownIntegrand(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("target lies on the surface")]
    OnSurface,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
