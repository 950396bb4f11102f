use thiserror::Error;

/// Errors produced by the simulator, solvers and trainer.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Points coincide or the geometry is otherwise unusable.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// Matrix/vector dimensions do not agree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Brute-force enumeration would exceed its size bound.
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    /// Scenario file or config field rejected.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A training update produced a non-finite loss or parameter.
    #[error("training diverged at step {step}: {detail}")]
    TrainingDiverged { step: u64, detail: String },

    /// Caller misuse of a CLI-facing operation.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
