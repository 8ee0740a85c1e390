use std::path::PathBuf;

/// Failures surfaced by the CLI, grouped by exit status.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{context}: {message}")]
    Format { context: String, message: String },
    #[error("{0}")]
    Pipeline(aoi_core::Error),
}

impl AppError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(context: impl Into<String>, message: impl ToString) -> Self {
        AppError::Format {
            context: context.into(),
            message: message.to_string(),
        }
    }

    /// 1 for IO, 2 for malformed or invalid input, 3 for pipeline failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Io { .. } => 1,
            AppError::Format { .. } => 2,
            AppError::Pipeline(_) => 3,
        }
    }
}
