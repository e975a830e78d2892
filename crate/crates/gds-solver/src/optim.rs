use crate::OptimizerKind;

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const EPS: f64 = 1e-8;

/// Ascent-direction optimizer over a flat parameter vector.
pub(crate) enum Ascender {
    Plain,
    Moment {
        m: Vec<f64>,
        v: Vec<f64>,
        step: u64,
    },
}

impl Ascender {
    pub fn new(kind: OptimizerKind, n: usize) -> Self {
        match kind {
            OptimizerKind::PlainGd => Self::Plain,
            OptimizerKind::AdaptiveMoment => Self::Moment {
                m: vec![0.0; n],
                v: vec![0.0; n],
                step: 0,
            },
        }
    }

    /// One ascent step `p ← p + lr·dir(grad)`.
    pub fn step(&mut self, params: &mut [f64], grad: &[f64], lr: f64) {
        match self {
            Self::Plain => {
                for (p, g) in params.iter_mut().zip(grad) {
                    *p += lr * g;
                }
            }
            Self::Moment { m, v, step } => {
                *step += 1;
                let bc1 = 1.0 - BETA1.powi(*step as i32);
                let bc2 = 1.0 - BETA2.powi(*step as i32);
                for k in 0..params.len() {
                    m[k] = BETA1 * m[k] + (1.0 - BETA1) * grad[k];
                    v[k] = BETA2 * v[k] + (1.0 - BETA2) * grad[k] * grad[k];
                    let m_hat = m[k] / bc1;
                    let v_hat = v[k] / bc2;
                    params[k] += lr * m_hat / (v_hat.sqrt() + EPS);
                }
            }
        }
    }

    /// State snapshot for rollback after a rejected step.
    pub fn snapshot(&self) -> AscenderState {
        match self {
            Self::Plain => AscenderState::Plain,
            Self::Moment { m, v, step } => AscenderState::Moment {
                m: m.clone(),
                v: v.clone(),
                step: *step,
            },
        }
    }

    pub fn restore(&mut self, snap: &AscenderState) {
        match (self, snap) {
            (Self::Plain, AscenderState::Plain) => {}
            (Self::Moment { m, v, step }, AscenderState::Moment { m: m0, v: v0, step: s0 }) => {
                m.copy_from_slice(m0);
                v.copy_from_slice(v0);
                *step = *s0;
            }
            _ => unreachable!("snapshot kind matches optimizer kind"),
        }
    }
}

pub(crate) enum AscenderState {
    Plain,
    Moment { m: Vec<f64>, v: Vec<f64>, step: u64 },
}
