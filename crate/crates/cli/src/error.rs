use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}, column {column}{}: {message}", field_suffix(.field))]
    Parse {
        line: usize,
        column: usize,
        field: Option<String>,
        message: String,
    },

    #[error("schema error in `{field}`: {message}")]
    Schema { field: String, message: String },

    #[error("unknown command `{0}`")]
    UnknownCommand(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] siframes_core::Error),
}

fn field_suffix(field: &Option<String>) -> String {
    field.as_ref().map(|f| format!(" (in `{f}`)")).unwrap_or_default()
}

impl CliError {
    pub(crate) fn schema(field: impl Into<String>, message: impl ToString) -> Self {
        CliError::Schema {
            field: field.into(),
            message: message.to_string(),
        }
    }

    /// Process exit code for an input or processing error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
