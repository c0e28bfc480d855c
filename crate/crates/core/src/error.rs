use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("level {0} is not square-free")]
    NotSquareFree(u64),

    #[error("coefficient kinds differ: {left} vs {right}")]
    KindMismatch {
        left: &'static str,
        right: &'static str,
    },

    #[error("y = {y} is below the evaluation floor {floor}")]
    BelowFloor { y: f64, floor: f64 },

    #[error("{what}: need at least {required} terms, have {available}")]
    InsufficientTerms {
        what: String,
        required: usize,
        available: usize,
    },

    #[error("least-squares system is ill-conditioned (condition estimate {condition:.3e})")]
    IllConditioned { condition: f64 },

    #[error("missing second-order coefficients b_m: they come from the continuation of L±_m(s) to s = 1 and must be supplied")]
    MissingCoefficients,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
