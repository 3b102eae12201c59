use thiserror::Error;

/// Crate-wide error type. Variants map one-to-one onto the failure classes of
/// the public operations; CLI exit codes are derived from them.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid configuration (bad field value or inconsistent combination).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Sub-band plan with no target bins or no white bins.
    #[error("degenerate sub-band plan: {0}")]
    DegeneratePlan(String),

    /// Input data that makes the statistic undefined (e.g. all-zero white band).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Buffer length does not match the plan it is evaluated against.
    #[error("bin count mismatch: expected {expected}, got {got}")]
    BinCountMismatch { expected: usize, got: usize },

    /// Sample window shorter than the frame requires.
    #[error("insufficient samples: need {needed}, have {have}")]
    InsufficientSamples { needed: usize, have: usize },

    /// Iteration budget exhausted before the bracket shrank below tolerance.
    /// Carries the best point seen so far.
    #[error("no convergence after {iterations} iterations (best x = {best_x:.6e}, f = {best_f:.6e})")]
    Convergence {
        best_x: f64,
        best_f: f64,
        iterations: usize,
    },

    /// Coarse scan found more than one interior local maximum; the scan is
    /// attached for diagnosis.
    #[error("objective is not unimodal on the coarse scan ({} points)", scan.len())]
    NotUnimodal { scan: Vec<(f64, f64)> },

    /// Sample file violates the on-disk format (bad sidecar, truncated data).
    #[error("malformed sample file: {0}")]
    MalformedFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
