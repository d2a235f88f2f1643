use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma has a pole at {0}")]
    GammaPole(String),
    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },
    #[error("invalid test function: {0}")]
    InvalidTestFunction(String),
    #[error("s = {0} is a pole of the completed L-function")]
    PoleHit(String),
    #[error("result is not real: imaginary residual {residual:e} exceeds {tolerance:e}")]
    NonReal { residual: f64, tolerance: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("index {n} needs a product of two unknown coefficients ({first} and {second})")]
    TwoUnknowns { n: u64, first: u64, second: u64 },
    #[error("Satake reconstruction mismatch at p = {p}: residual {residual:e}")]
    ReconstructionMismatch { p: u64, residual: f64 },
    #[error("no root pairing multiplies to p^(2k-3) at p = {0}")]
    PairingAmbiguity(u64),
    #[error("coefficient has imaginary part {0:e} beyond tolerance")]
    ComplexCoefficient(f64),
    #[error("singular least-squares system (condition estimate {condition:e})")]
    Singular { condition: f64 },
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
