//! Gradient-descent solver for MDHP parameter estimation.
//!
//! Per observation window the pipeline is: standardize timestamps to a fixed
//! range, pad/stack them and precompute the pairwise-difference tensor, then
//! run projected gradient ascent on the closed-form log-likelihood (the loss
//! is `−lnL`). Projection clamps `α` to `≥ 0` and `β`, `θ` to a positive
//! floor after every step, so intermediate parameters always satisfy the
//! type invariants.
//!
//! [`batch_estimate`] fans independent windows over a worker pool and
//! reports the same Window-Cost / Throughput columns used when profiling the
//! solver, and [`DumpRecord`] is the line-delimited parameter-dump format
//! consumed downstream.

mod batch;
mod config;
mod dump;
mod error;
mod estimate;
mod optim;
mod standardize;

pub use batch::{batch_estimate, BatchResult, ThroughputReport};
pub use config::{EstimationResult, OptimizerKind, SolverConfig};
pub use dump::{read_dump, write_dump, DumpRecord};
pub use error::SolverError;
pub use estimate::{estimate, estimate_standardized};
pub use standardize::{pad_and_stack, standardize, standardize_with_scale};

pub type Result<T> = std::result::Result<T, SolverError>;
