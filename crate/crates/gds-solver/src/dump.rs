use crate::{EstimationResult, Result, SolverError};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

/// One line of the parameter dump: a window's estimate in a line-delimited
/// structured format. `alpha`/`beta` are row-major. `label` is carried when
/// the source window is labeled, so distribution reports can split by class.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DumpRecord {
    pub window_id: u64,
    pub dims: usize,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub theta: Vec<f64>,
    pub final_lnl: f64,
    pub epochs_run: usize,
    pub wall_seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl DumpRecord {
    pub fn from_result(window_id: u64, r: &EstimationResult, label: Option<String>) -> Self {
        Self {
            window_id,
            dims: r.params.dims(),
            alpha: r.params.alpha_flat().to_vec(),
            beta: r.params.beta_flat().to_vec(),
            theta: r.params.theta_flat().to_vec(),
            final_lnl: r.final_lnl,
            epochs_run: r.epochs_run,
            wall_seconds: r.wall_seconds,
            label,
        }
    }
}

/// Writes records as JSON lines.
pub fn write_dump<W: Write>(mut w: W, records: &[DumpRecord]) -> Result<()> {
    for rec in records {
        let line = serde_json::to_string(rec).map_err(|e| SolverError::DumpIo(e.to_string()))?;
        writeln!(w, "{line}").map_err(|e| SolverError::DumpIo(e.to_string()))?;
    }
    Ok(())
}

/// Reads a JSON-lines parameter dump; blank lines are skipped.
pub fn read_dump<R: BufRead>(r: R) -> Result<Vec<DumpRecord>> {
    let mut out = Vec::new();
    for (n, line) in r.lines().enumerate() {
        let line = line.map_err(|e| SolverError::DumpIo(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: DumpRecord = serde_json::from_str(&line)
            .map_err(|e| SolverError::DumpIo(format!("line {}: {e}", n + 1)))?;
        out.push(rec);
    }
    Ok(out)
}
