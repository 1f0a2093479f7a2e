use thiserror::Error;

/// Errors raised by the Fock-space constructions and verification suites.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid is invalid: {0}")]
    InvalidGrid(String),
    #[error("q = {re} + {im}i is not unimodular (| |q| - 1 | = {defect:e})")]
    NotUnimodular { re: f64, im: f64, defect: f64 },
    #[error("window radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("kernel is invalid: {0}")]
    InvalidKernel(String),
    #[error("index {index} out of range (valid: {valid})")]
    IndexOutOfRange { index: usize, valid: String },
    #[error("tensor is not Q-symmetric (defect {defect:e})")]
    NotSymmetric { defect: f64 },
    #[error("tensor is not symmetric within its chaos groups (defect {defect:e})")]
    NotGroupSymmetric { defect: f64 },
    #[error("q is not a nontrivial {order}-th root of unity (|q^N - 1| = {defect:e})")]
    BadRoot { order: usize, defect: f64 },
    #[error("operation requires an anyonic kernel")]
    NotAnyonic,
    #[error("cutoff {cutoff} too small, need at least {required}")]
    CutoffTooSmall { cutoff: usize, required: usize },
    #[error("word of length {len} exceeds cutoff {cutoff}")]
    WordTooLong { len: usize, cutoff: usize },
    #[error("q = 1 (boson case): the restricted creation operator is unbounded")]
    BosonCase,
    #[error("{what} = {value} is outside the supported range {range}")]
    Range {
        what: &'static str,
        value: usize,
        range: String,
    },
    #[error("envelope exceeded: {0}")]
    EnvelopeExceeded(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("jump measure is invalid: {0}")]
    InvalidMeasure(String),
    #[error("jump measure is degenerate: C_{index} = {norm:e}")]
    DegenerateMeasure { index: usize, norm: f64 },
    #[error("supports of the two word families overlap at cell {0}")]
    SupportOverlap(usize),
    #[error("operation requires {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
