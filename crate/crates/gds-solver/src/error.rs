use hawkes_core::HawkesError;
use thiserror::Error;

/// Errors from standardization and estimation.
#[derive(Debug, Clone, Error)]
pub enum SolverError {
    #[error("invalid solver config: {0}")]
    InvalidConfig(String),

    #[error("no events in any dimension")]
    EmptyEvents,

    /// All timestamps identical; the standardization denominator vanishes
    /// and estimation for the window is skipped.
    #[error("degenerate time range: all timestamps equal ({at})")]
    DegenerateTimeRange { at: f64 },

    #[error("windows disagree on dimension count: expected {expected}, window {index} has {got}")]
    MixedDims {
        expected: usize,
        got: usize,
        index: usize,
    },

    /// The log-likelihood stayed non-finite through repeated step halvings.
    #[error("optimizer diverged after {halvings} step halvings at epoch {epoch}")]
    Diverged { epoch: usize, halvings: usize },

    #[error(transparent)]
    Hawkes(#[from] HawkesError),

    #[error("dump I/O: {0}")]
    DumpIo(String),
}
