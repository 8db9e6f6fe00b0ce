use thiserror::Error;

/// Errors produced by the simulator core.
#[derive(Debug, Error)]
pub enum OimError {
    /// Malformed instance, schedule or signal file.
    #[error("format error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Format { line: Option<usize>, message: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A phase became NaN or infinite during integration.
    #[error("integration produced a non-finite phase at index {index} (t = {t})")]
    Integration { index: usize, t: f64 },

    #[error("non-finite phase at index {index}")]
    NonFinitePhase { index: usize },

    #[error("problem too large: n = {n} exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("time {t} outside schedule horizon [0, {t_end}]")]
    OutOfRange { t: f64, t_end: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl OimError {
    pub(crate) fn format(line: Option<usize>, message: impl Into<String>) -> Self {
        OimError::Format { line, message: message.into() }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        OimError::InvalidParameter(message.into())
    }

    /// True for failures of the numerical integration rather than of the input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, OimError::Integration { .. } | OimError::NonFinitePhase { .. })
    }
}

pub type Result<T> = std::result::Result<T, OimError>;
