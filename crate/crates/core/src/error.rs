use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("qubit target {target} out of range for {n} qubits")]
    TargetOutOfRange { target: usize, n: usize },

    #[error("invalid ansatz specification: {0}")]
    InvalidSpec(String),

    #[error("empty fidelity sample")]
    EmptySample,

    #[error("frame potential order t={0} has no closed-form Haar reference")]
    UnsupportedOrder(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("cache format: {0}")]
    CacheFormat(String),
}
