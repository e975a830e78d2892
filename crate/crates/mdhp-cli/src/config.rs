use crate::CliError;
use gds_solver::SolverConfig;
use mdhp_lstm::TrainConfig;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Generation block of the pipeline config.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    pub dims: usize,
    pub windows_per_scenario: usize,
    /// Per-ECU send periods (seconds); length must equal `dims` when set.
    pub periods: Option<Vec<f64>>,
    /// Period jitter fraction override.
    pub jitter: Option<f64>,
    /// Scenario-row override; defaults to the nine standard rows.
    pub scenarios: Option<Vec<traffic_gen::ScenarioRow>>,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            dims: 3,
            windows_per_scenario: 20,
            periods: None,
            jitter: None,
            scenarios: None,
        }
    }
}

/// Top-level JSON config; every block falls back to its defaults, and
/// command-line flags override whatever the file says.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub master_seed: Option<u64>,
    pub workers: Option<usize>,
    pub gen: GenConfig,
    pub solver: SolverConfig,
    pub train: TrainConfig,
}

impl PipelineConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
            }
        }
    }
}
