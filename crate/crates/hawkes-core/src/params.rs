use crate::{EventSequences, HawkesError, Result};

/// The MDHP parameter triple `(α, β, θ)`.
///
/// `alpha` and `beta` are `D×D` row-major matrices (`alpha[i][j]` scales how
/// much an event in dimension `j` excites dimension `i`), `theta` is the
/// length-`D` baseline vector. Validity: `α ≥ 0` entrywise, `β > 0`
/// entrywise, `θ ≥ 0` entrywise (the solver keeps `θ` strictly positive by
/// projection; a zero baseline is accepted here so a silent process can be
/// simulated).
#[derive(Debug, Clone, PartialEq)]
pub struct MdhpParams {
    dims: usize,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    theta: Vec<f64>,
}

impl MdhpParams {
    /// Builds and validates a parameter set from row-major matrices.
    pub fn new(dims: usize, alpha: Vec<f64>, beta: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        if dims == 0 {
            return Err(HawkesError::InvalidParams("dims must be >= 1".into()));
        }
        if alpha.len() != dims * dims || beta.len() != dims * dims || theta.len() != dims {
            return Err(HawkesError::InvalidParams(format!(
                "expected alpha/beta of length {} and theta of length {dims}, got {}/{}/{}",
                dims * dims,
                alpha.len(),
                beta.len(),
                theta.len()
            )));
        }
        if alpha.iter().any(|a| !a.is_finite() || *a < 0.0) {
            return Err(HawkesError::InvalidParams(
                "alpha entries must be finite and >= 0".into(),
            ));
        }
        if beta.iter().any(|b| !b.is_finite() || *b <= 0.0) {
            return Err(HawkesError::InvalidParams(
                "beta entries must be finite and > 0".into(),
            ));
        }
        if theta.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(HawkesError::InvalidParams(
                "theta entries must be finite and >= 0".into(),
            ));
        }
        Ok(Self {
            dims,
            alpha,
            beta,
            theta,
        })
    }

    /// Constant-valued parameters, handy for tests and simulation setups.
    pub fn constant(dims: usize, alpha: f64, beta: f64, theta: f64) -> Result<Self> {
        Self::new(
            dims,
            vec![alpha; dims * dims],
            vec![beta; dims * dims],
            vec![theta; dims],
        )
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    #[inline]
    pub fn alpha(&self, i: usize, j: usize) -> f64 {
        self.alpha[i * self.dims + j]
    }

    #[inline]
    pub fn beta(&self, i: usize, j: usize) -> f64 {
        self.beta[i * self.dims + j]
    }

    #[inline]
    pub fn theta(&self, i: usize) -> f64 {
        self.theta[i]
    }

    /// Row-major `α` entries.
    pub fn alpha_flat(&self) -> &[f64] {
        &self.alpha
    }

    /// Row-major `β` entries.
    pub fn beta_flat(&self) -> &[f64] {
        &self.beta
    }

    pub fn theta_flat(&self) -> &[f64] {
        &self.theta
    }

    /// Largest branching ratio `α_ij/β_ij`; `>= 1` means the process may be
    /// unstable (runaway excitation).
    pub fn max_branching_ratio(&self) -> f64 {
        self.alpha
            .iter()
            .zip(&self.beta)
            .map(|(a, b)| a / b)
            .fold(0.0, f64::max)
    }

    /// Errors unless `self` and `events` agree on the dimension count.
    pub fn check_compatible(&self, events: &EventSequences) -> Result<()> {
        if self.dims != events.dims() {
            return Err(HawkesError::DimensionMismatch {
                params: self.dims,
                events: events.dims(),
            });
        }
        Ok(())
    }
}
