use thiserror::Error;

/// Errors surfaced by every module of the crate.
///
/// The `Display` form always starts with the variant name so CLI diagnostics
/// can be matched on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("InvalidPattern: {0}")]
    InvalidPattern(String),

    #[error("DimensionMismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("QubitOutOfRange: qubit {qubit} not in 1..={n}")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("NegativePhase: phi = {0}")]
    NegativePhase(f64),

    #[error("InvalidRate: {0} (rates must be finite and non-negative)")]
    InvalidRate(f64),

    #[error("OverdampedQubit: rate {0} must be below 4")]
    OverdampedQubit(f64),

    #[error("UnsupportedSize: {0}")]
    UnsupportedSize(String),

    #[error("UnknownTable: {0}")]
    UnknownTable(usize),

    #[error("MalformedConfig: {0}")]
    MalformedConfig(String),

    #[error("Io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
