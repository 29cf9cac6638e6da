use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid profile: {0}")]
    Profile(String),
    #[error("pieces {a} and {b} overlap after rotation: {detail}")]
    Overlap { a: usize, b: usize, detail: String },
    #[error("requires m-fold rotational symmetry with m >= 3 (got m = {0})")]
    SymmetryTooLow(usize),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid state: {0}")]
    State(String),
    #[error("quadrature did not converge (achieved error {achieved:.3e})")]
    Quadrature { achieved: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
