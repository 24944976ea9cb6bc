//! Command implementations behind the `critprobe` binary.
//!
//! Everything here writes deterministic, self-describing CSV: a
//! `# critprobe v1` banner, the fully resolved configuration as `#` lines,
//! a column header, then data rows with fixed 17-significant-digit float
//! formatting. Identical configurations produce identical bytes in every
//! column except `wall_time_ms` (see `sweep`).

pub mod config;
pub mod csvfmt;
pub mod dissipative_cmd;
pub mod echo;
pub mod ensemble;
pub mod scaling;
pub mod sweep;
pub mod verify;

use std::fmt;
use std::process::ExitCode;

/// Command failures, mapped onto the documented exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or input file (exit 2).
    Config(String),
    /// I/O failure (exit 1).
    Io(std::io::Error),
    /// `--strict` was set and a trajectory hit its resolution cap (exit 3).
    StrictNumerical,
    /// The verification suite reported a failure (exit 4).
    VerifyFailed,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::StrictNumerical => {
                write!(f, "resolution cap reached while --strict is set")
            }
            CliError::VerifyFailed => write!(f, "verification failed"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<critprobe_core::Error> for CliError {
    fn from(e: critprobe_core::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Io(_) => ExitCode::from(1),
            CliError::Config(_) => ExitCode::from(2),
            CliError::StrictNumerical => ExitCode::from(3),
            CliError::VerifyFailed => ExitCode::from(4),
        }
    }
}
