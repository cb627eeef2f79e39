//! CLI error type and exit codes.

use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_FLAGGED: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("config error: {0}")]
    Parse(String),

    #[error("numeric failure: {0}")]
    Numeric(#[from] fadecap_core::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl std::fmt::Display) -> Self {
        CliError::Config { field: field.into(), message: message.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Parse(_) => EXIT_CONFIG,
            CliError::Numeric(_) | CliError::Io { .. } => EXIT_NUMERIC,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Attaches a config field name to a core error raised while building inputs.
pub trait ConfigContext<T> {
    fn field(self, name: &str) -> Result<T>;
}

impl<T> ConfigContext<T> for fadecap_core::Result<T> {
    fn field(self, name: &str) -> Result<T> {
        self.map_err(|e| CliError::config(name, e))
    }
}
