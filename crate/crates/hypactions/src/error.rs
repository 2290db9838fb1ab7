use thiserror::Error;

use hypactions_core::compression::CompressionError;
use hypactions_core::group::GroupError;
use hypactions_core::lox::LoxError;
use hypactions_core::metric::MetricError;
use hypactions_core::quasimorphism::QmError;
use hypactions_core::sl2::Sl2Error;
use hypactions_core::tight_span::TightSpanError;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid config:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("time cap of {cap}s exceeded ({elapsed:.2}s)")]
    TimeCap { cap: f64, elapsed: f64 },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("verification failed:\n  {}", .0.join("\n  "))]
    Verification(Vec<String>),
    #[error("{0}")]
    Failed(String),
}

impl RunError {
    /// 0 success, 2 budget, 1 everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Budget(_) | RunError::TimeCap { .. } => 2,
            _ => 1,
        }
    }

    pub fn invalid(path: &str, msg: impl std::fmt::Display) -> RunError {
        RunError::Validation(vec![format!("{path}: {msg}")])
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> RunError {
        RunError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

impl From<GroupError> for RunError {
    fn from(e: GroupError) -> Self {
        RunError::Budget(e.to_string())
    }
}

impl From<MetricError> for RunError {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::BudgetExceeded { .. } => RunError::Budget(e.to_string()),
            _ => RunError::Failed(e.to_string()),
        }
    }
}

impl From<CompressionError> for RunError {
    fn from(e: CompressionError) -> Self {
        match e {
            CompressionError::BudgetExceeded { .. } => RunError::Budget(e.to_string()),
            CompressionError::Metric(m) => m.into(),
            _ => RunError::Failed(e.to_string()),
        }
    }
}

impl From<LoxError> for RunError {
    fn from(e: LoxError) -> Self {
        match e {
            LoxError::BudgetExceeded { .. } => RunError::Budget(e.to_string()),
            LoxError::Metric(m) => m.into(),
            _ => RunError::Failed(e.to_string()),
        }
    }
}

impl From<Sl2Error> for RunError {
    fn from(e: Sl2Error) -> Self {
        match e {
            Sl2Error::BudgetExceeded { .. } => RunError::Budget(e.to_string()),
            _ => RunError::Failed(e.to_string()),
        }
    }
}

impl From<QmError> for RunError {
    fn from(e: QmError) -> Self {
        RunError::Failed(e.to_string())
    }
}

impl From<TightSpanError> for RunError {
    fn from(e: TightSpanError) -> Self {
        match e {
            TightSpanError::Metric(m) => m.into(),
            _ => RunError::Failed(e.to_string()),
        }
    }
}
