use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

/// Failure of a CLI run, rendered as the JSON error record on stderr.
#[derive(Debug)]
pub enum CliError {
    /// A configuration field violates its contract.
    Config {
        field: String,
        message: String,
    },
    Parse {
        path: String,
        message: String,
    },
    Io {
        path: String,
        message: String,
    },
    Core(linresp::Error),
}

/// `{module, code, message, context}`.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub module: String,
    pub code: String,
    pub message: String,
    pub context: Value,
}

impl CliError {
    pub fn config(field: &str, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    pub fn record(&self, verb: &str) -> ErrorRecord {
        match self {
            CliError::Config { field, message } => ErrorRecord {
                module: "cli".into(),
                code: "invalid_config".into(),
                message: format!("{field}: {message}"),
                context: json!({ "verb": verb, "field": field }),
            },
            CliError::Parse { path, message } => ErrorRecord {
                module: "cli".into(),
                code: "parse_error".into(),
                message: message.clone(),
                context: json!({ "verb": verb, "path": path }),
            },
            CliError::Io { path, message } => ErrorRecord {
                module: "cli".into(),
                code: "io".into(),
                message: message.clone(),
                context: json!({ "verb": verb, "path": path }),
            },
            CliError::Core(e) => ErrorRecord {
                module: e.module().into(),
                code: e.code().into(),
                message: e.to_string(),
                context: json!({ "verb": verb }),
            },
        }
    }

    /// 2 for configuration problems, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Parse { .. } => 2,
            CliError::Io { .. } | CliError::Core(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { field, message } => write!(f, "invalid config field {field}: {message}"),
            CliError::Parse { path, message } => write!(f, "cannot parse {path}: {message}"),
            CliError::Io { path, message } => write!(f, "{path}: {message}"),
            CliError::Core(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for CliError {}

impl From<linresp::Error> for CliError {
    fn from(e: linresp::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
