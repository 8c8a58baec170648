//! Front end for `twosimple`: family sources, the acceptance suite and the
//! subcommands behind the `twosimple` binary.

pub mod commands;
pub mod source;
pub mod suite;

use twosimple::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed or unreadable input; exit status 2.
    #[error("input error: {0}")]
    Input(String),
    /// A check did not hold or a cutoff was reached; exit status 1.
    #[error("check failed: {0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::CutoffExceeded { .. } | Error::Verification(_) => CliError::Failure(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// Serializes a report the same way everywhere so repeated runs compare byte for byte.
pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
