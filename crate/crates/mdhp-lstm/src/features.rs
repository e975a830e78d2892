use crate::{LstmError, Result};
use hawkes_core::MdhpParams;
use ndarray::{Array1, Array2};
use traffic_gen::{Window, WINDOW_LEN};

/// Input features per message: the ten header fields plus the normalized
/// timestamp.
pub const MESSAGE_FEATURES: usize = 11;

/// Window-level MDHP features feeding the Hawkes gate: flattened `α̂`,
/// entrywise `β̂·T_span` and `θ̂`.
#[derive(Debug, Clone, PartialEq)]
pub struct HawkesFeatures {
    pub alpha_flat: Array1<f64>,
    pub beta_tspan_flat: Array1<f64>,
    pub theta: Array1<f64>,
}

impl HawkesFeatures {
    pub fn new(alpha_flat: Vec<f64>, beta_tspan_flat: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        let d = theta.len();
        if alpha_flat.len() != d * d || beta_tspan_flat.len() != d * d {
            return Err(LstmError::ShapeMismatch(format!(
                "expected D²={} excitation/decay entries for D={d}, got {}/{}",
                d * d,
                alpha_flat.len(),
                beta_tspan_flat.len()
            )));
        }
        for v in alpha_flat
            .iter()
            .chain(beta_tspan_flat.iter())
            .chain(theta.iter())
        {
            if !v.is_finite() {
                return Err(LstmError::ShapeMismatch(
                    "Hawkes features must be finite".into(),
                ));
            }
        }
        Ok(Self {
            alpha_flat: Array1::from(alpha_flat),
            beta_tspan_flat: Array1::from(beta_tspan_flat),
            theta: Array1::from(theta),
        })
    }

    /// Features from an estimated parameter set over a window of length
    /// `t_span` (standardized units).
    pub fn from_params(params: &MdhpParams, t_span: f64) -> Self {
        Self {
            alpha_flat: Array1::from(params.alpha_flat().to_vec()),
            beta_tspan_flat: Array1::from_iter(params.beta_flat().iter().map(|b| b * t_span)),
            theta: Array1::from(params.theta_flat().to_vec()),
        }
    }

    pub fn dims(&self) -> usize {
        self.theta.len()
    }
}

/// Scales a window into the `WINDOW_LEN × 11` input matrix. Integer fields
/// are scaled by their width; timestamps are normalized to `[0, 1]` within
/// the window.
pub fn window_features(w: &Window) -> Array2<f64> {
    let t0 = w.first_timestamp();
    let span = (w.last_timestamp() - t0).max(1e-12);
    let mut out = Array2::zeros((WINDOW_LEN, MESSAGE_FEATURES));
    for (k, m) in w.messages().iter().enumerate() {
        let row = [
            m.service_id as f64 / 65_535.0,
            m.method_id as f64 / 65_535.0,
            m.length as f64 / 65_535.0,
            m.client_id as f64 / 65_535.0,
            m.session_id as f64 / 65_535.0,
            m.protocol_version as f64 / 255.0,
            m.interface_version as f64 / 255.0,
            m.message_type as f64 / 255.0,
            m.return_code as f64 / 255.0,
            m.src_ip_index as f64 / 256.0,
            (m.timestamp - t0) / span,
        ];
        for (j, v) in row.into_iter().enumerate() {
            out[(k, j)] = v;
        }
    }
    out
}
