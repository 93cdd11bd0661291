use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector is not unit in the model metric (deviation {deviation:.3e})")]
    NotUnit { deviation: f64 },

    #[error("{what} = {value} is outside the admissible range [{lo}, {hi}]")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge on [{a}, {b}] (error estimate {estimate:.3e})")]
    Quadrature { a: f64, b: f64, estimate: f64 },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error("profile endpoint is {found}, expected {expected}")]
    WrongEndpoint {
        found: &'static str,
        expected: &'static str,
    },

    #[error("hypersurface does not meet the slab {lo} < t < {hi}")]
    EmptySlab { lo: f64, hi: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_domain(what: &'static str, value: f64, (lo, hi): (f64, f64)) -> Error {
    Error::OutOfDomain { what, value, lo, hi }
}
