use std::fmt;

use serde_json::{json, Value};

/// Exit-code classes of the command-line tool.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Validation,
    Domain,
    Tolerance,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Parse => 2,
            ErrorKind::Validation => 3,
            ErrorKind::Domain => 4,
            ErrorKind::Tolerance => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorKind::Parse => "parse",
            ErrorKind::Validation => "validation",
            ErrorKind::Domain => "domain",
            ErrorKind::Tolerance => "tolerance",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn parse(msg: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Parse,
            message: msg.into(),
        }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Validation,
            message: msg.into(),
        }
    }

    pub fn tolerance(msg: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Tolerance,
            message: msg.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }

    pub fn to_json(&self, command: &str) -> Value {
        json!({
            "command": command,
            "error": {
                "kind": self.kind.name(),
                "exit_code": self.exit_code(),
                "message": self.message,
            }
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind.name(), self.message)
    }
}

impl std::error::Error for CliError {}

impl From<rtp_core::Error> for CliError {
    fn from(e: rtp_core::Error) -> Self {
        use rtp_core::Error as E;
        let kind = match e {
            E::Domain(_) => ErrorKind::Domain,
            E::Tolerance(_) => ErrorKind::Tolerance,
            E::Validation(_)
            | E::NotPositive(_)
            | E::NotARepresentation(_)
            | E::Mismatch(_)
            | E::Unsupported(_) => ErrorKind::Validation,
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
