use thiserror::Error;

use kpb_core::KpbError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const ESCALATED_WARNING: i32 = 3;
    pub const RESIDUAL: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{0} suspected missed band(s); rerun with a larger --grid")]
    MissedBands(usize),

    #[error("oracle residuals above threshold")]
    Residual,

    #[error(transparent)]
    Compute(#[from] KpbError),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::MissedBands(_) => exit::ESCALATED_WARNING,
            CliError::Residual => exit::RESIDUAL,
            CliError::Compute(KpbError::StaleBand { .. } | KpbError::ExpmOverflow(_)) => {
                exit::RESIDUAL
            }
            CliError::Compute(_) => exit::CONFIG,
            CliError::Io { .. } => exit::FAILURE,
        }
    }
}
