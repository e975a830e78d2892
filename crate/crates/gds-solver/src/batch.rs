use crate::{estimate, EstimationResult, Result, SolverConfig, SolverError};
use hawkes_core::EventSequences;
use std::time::Instant;

/// Speed summary in the Dim / Max-T-Len / Min-T-Len / Window-Cost /
/// Throughput column layout.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ThroughputReport {
    pub dims: usize,
    pub max_t_len: usize,
    pub min_t_len: usize,
    /// Mean seconds spent estimating one window.
    pub window_cost: f64,
    /// Messages processed per wall-clock second over the whole batch.
    pub throughput: f64,
    pub windows: usize,
    pub total_messages: usize,
    pub wall_seconds: f64,
}

/// Per-window outcomes (input order) plus the speed report.
#[derive(Debug)]
pub struct BatchResult {
    pub results: Vec<Result<EstimationResult>>,
    pub report: ThroughputReport,
}

/// Estimates every window independently, fanning out across `workers`
/// threads when `workers > 1`. Results come back in input order and a
/// failing window never aborts the batch.
pub fn batch_estimate(
    windows: &[EventSequences],
    cfg: &SolverConfig,
    workers: usize,
) -> Result<BatchResult> {
    cfg.validate()?;
    let dims = windows.first().map(EventSequences::dims).unwrap_or(0);
    for (index, w) in windows.iter().enumerate() {
        if w.dims() != dims {
            return Err(SolverError::MixedDims {
                expected: dims,
                got: w.dims(),
                index,
            });
        }
    }

    let start = Instant::now();
    let results: Vec<Result<EstimationResult>> = if workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| SolverError::InvalidConfig(format!("worker pool: {e}")))?;
        pool.install(|| {
            use rayon::prelude::*;
            windows.par_iter().map(|w| estimate(w, cfg)).collect()
        })
    } else {
        windows.iter().map(|w| estimate(w, cfg)).collect()
    };
    let wall_seconds = start.elapsed().as_secs_f64();

    let total_messages: usize = windows.iter().map(EventSequences::total_events).sum();
    let per_window_cost: f64 = results
        .iter()
        .filter_map(|r| r.as_ref().ok().map(|e| e.wall_seconds))
        .sum();
    let estimated = results.iter().filter(|r| r.is_ok()).count();
    let report = ThroughputReport {
        dims,
        max_t_len: windows.iter().map(EventSequences::max_len).max().unwrap_or(0),
        min_t_len: windows.iter().map(EventSequences::min_len).min().unwrap_or(0),
        window_cost: if estimated > 0 {
            per_window_cost / estimated as f64
        } else {
            0.0
        },
        throughput: if wall_seconds > 0.0 {
            total_messages as f64 / wall_seconds
        } else {
            0.0
        },
        windows: windows.len(),
        total_messages,
        wall_seconds,
    };
    Ok(BatchResult { results, report })
}
