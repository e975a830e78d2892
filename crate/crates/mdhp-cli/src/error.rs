use gds_solver::SolverError;
use mdhp_lstm::LstmError;
use thiserror::Error;
use traffic_gen::TrafficError;

/// Exit-code classes: distinct nonzero codes for configuration, I/O and
/// numeric failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(i32)]
pub enum ExitCode {
    Ok = 0,
    Config = 2,
    Io = 3,
    Numeric = 4,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::Config,
            CliError::Io(_) => ExitCode::Io,
            CliError::Numeric(_) => ExitCode::Numeric,
        }
    }
}

impl From<TrafficError> for CliError {
    fn from(e: TrafficError) -> Self {
        match e {
            TrafficError::Io(m) => CliError::Io(m),
            TrafficError::InvalidScenario(_) | TrafficError::InvalidWindow(_) => {
                CliError::Config(e.to_string())
            }
            TrafficError::GenerationStalled(_) | TrafficError::Hawkes(_) | TrafficError::Sim(_) => {
                CliError::Numeric(e.to_string())
            }
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::InvalidConfig(_) | SolverError::MixedDims { .. } => {
                CliError::Config(e.to_string())
            }
            SolverError::DumpIo(m) => CliError::Io(m),
            SolverError::EmptyEvents
            | SolverError::DegenerateTimeRange { .. }
            | SolverError::Diverged { .. }
            | SolverError::Hawkes(_) => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<LstmError> for CliError {
    fn from(e: LstmError) -> Self {
        match e {
            LstmError::Io(m) => CliError::Io(m),
            LstmError::Checkpoint(m) => CliError::Io(format!("checkpoint: {m}")),
            LstmError::NanLoss { .. } => CliError::Numeric(e.to_string()),
            LstmError::ShapeMismatch(_)
            | LstmError::WindowLength { .. }
            | LstmError::EmptyDataset
            | LstmError::SingleClassDataset
            | LstmError::InvalidConfig(_)
            | LstmError::RsabUnavailable => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(e.to_string())
    }
}
