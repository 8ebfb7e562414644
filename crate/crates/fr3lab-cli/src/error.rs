//! CLI error taxonomy mapped onto process exit codes.

use serde::Serialize;
use thiserror::Error;

/// Exit codes: 0 success, 2 config parse, 3 validation, 4 numerical,
/// 5 I/O.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitKind {
    ConfigParse,
    Validation,
    Numerical,
    Io,
}

impl ExitKind {
    pub fn code(self) -> i32 {
        match self {
            ExitKind::ConfigParse => 2,
            ExitKind::Validation => 3,
            ExitKind::Numerical => 4,
            ExitKind::Io => 5,
        }
    }
}

#[derive(Debug, Error, Serialize)]
#[error("{message}")]
pub struct CliError {
    #[serde(rename = "error_kind")]
    pub kind: ExitKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub message: String,
}

impl CliError {
    pub fn numerical(message: impl std::fmt::Display) -> Self {
        Self {
            kind: ExitKind::Numerical,
            field: None,
            message: message.to_string(),
        }
    }

    pub fn io(message: impl std::fmt::Display) -> Self {
        Self {
            kind: ExitKind::Io,
            field: None,
            message: message.to_string(),
        }
    }
}
