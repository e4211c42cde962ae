use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config syntax error at line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("invalid config: {0}")]
    Invalid(String),

    #[error("{source} ({parameter})")]
    Numeric {
        parameter: String,
        source: dfflab_core::Error,
    },

    /// A continuation stopped early; everything that converged was written.
    #[error("partial result: {source} at U = {failed_at}; {converged} converged points flushed")]
    Partial {
        converged: usize,
        failed_at: f64,
        source: dfflab_core::Error,
    },

    #[error("{0}")]
    Core(#[from] dfflab_core::Error),

    #[error("input {path}: {message}")]
    Input { path: PathBuf, message: String },

    #[error("i/o on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Syntax { .. } | CliError::Invalid(_) => "config",
            CliError::Numeric { .. } | CliError::Core(_) => "numeric",
            CliError::Partial { .. } => "partial",
            CliError::Input { .. } => "input",
            CliError::Io { .. } => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "config" => 2,
            "numeric" => 3,
            "partial" => 4,
            "input" => 5,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
