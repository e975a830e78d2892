use crate::{Result, SolverError};
use hawkes_core::MdhpParams;
use serde::{Deserialize, Serialize};

/// Update rule used for the ascent step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizerKind {
    /// Plain gradient ascent `p ← p + lr·∇lnL`.
    PlainGd,
    /// Adaptive-moment ascent (decoupled weight-decay variant with decay 0).
    #[default]
    AdaptiveMoment,
}

/// Solver configuration. Defaults: adaptive-moment updates, learning rate
/// 0.05, 300 epochs, stop after 10 consecutive epochs with relative lnL
/// improvement below 1e-6, parameters floored at 1e-4, timestamps
/// standardized to `[0, 1]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub max_epochs: usize,
    pub learning_rate: f64,
    pub optimizer: OptimizerKind,
    pub init_alpha: f64,
    pub init_beta: f64,
    pub init_theta: f64,
    /// Projection floor for `β` and `θ` (α is floored at 0).
    pub min_param: f64,
    /// Relative lnL-improvement threshold for the stopping rule.
    pub tol_rel: f64,
    /// Consecutive below-threshold epochs before stopping.
    pub patience: usize,
    pub standardize_min: f64,
    pub standardize_max: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_epochs: 300,
            learning_rate: 0.05,
            optimizer: OptimizerKind::AdaptiveMoment,
            init_alpha: 0.5,
            init_beta: 1.0,
            init_theta: 0.1,
            min_param: 1e-4,
            tol_rel: 1e-6,
            patience: 10,
            standardize_min: 0.0,
            standardize_max: 1.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_epochs == 0 {
            return Err(SolverError::InvalidConfig("max_epochs must be >= 1".into()));
        }
        if !(self.learning_rate > 0.0) {
            return Err(SolverError::InvalidConfig(
                "learning_rate must be > 0".into(),
            ));
        }
        if !(self.min_param > 0.0) {
            return Err(SolverError::InvalidConfig("min_param must be > 0".into()));
        }
        if !(self.standardize_max > self.standardize_min) {
            return Err(SolverError::InvalidConfig(
                "standardize_max must exceed standardize_min".into(),
            ));
        }
        if self.standardize_min < 0.0 {
            return Err(SolverError::InvalidConfig(
                "standardize_min must be >= 0 so timestamps stay in [0, t_span]".into(),
            ));
        }
        for (name, v) in [
            ("init_alpha", self.init_alpha),
            ("init_beta", self.init_beta),
            ("init_theta", self.init_theta),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(SolverError::InvalidConfig(format!("{name} must be > 0")));
            }
        }
        Ok(())
    }
}

/// Outcome of estimating one window.
#[derive(Debug, Clone)]
pub struct EstimationResult {
    /// Estimated parameters, in standardized time units.
    pub params: MdhpParams,
    /// Log-likelihood of the returned parameters.
    pub final_lnl: f64,
    /// Gradient steps taken.
    pub epochs_run: usize,
    /// lnL per epoch, starting with the value at the initial parameters.
    pub lnl_trace: Vec<f64>,
    pub wall_seconds: f64,
    /// Standardized time units per input time unit; multiply rate-like
    /// estimates (`α`, `β`, `θ`) by this to map them back to input units.
    pub time_scale: f64,
}
