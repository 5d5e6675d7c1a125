use thiserror::Error;

/// Errors produced by the simulator, the problem model and the experiment drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {got} outside supported range 1..={max}")]
    Size { got: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid qubit index {index} for {num_qubits}-qubit register")]
    InvalidQubit { index: usize, num_qubits: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid noise channel: {0}")]
    InvalidChannel(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },

    #[error("degenerate Kraus branch probabilities (all numerically zero)")]
    Degenerate,

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by invalid user input (graphs, channels, configs)
    /// as opposed to failures during a numeric run.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidChannel(_)
                | Error::InvalidGraph(_)
                | Error::InvalidParams(_)
                | Error::InvalidConfig(_)
                | Error::Parse { .. }
                | Error::Size { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
