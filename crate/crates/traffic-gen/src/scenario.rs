use crate::{Result, TrafficError};
use serde::{Deserialize, Serialize};

/// Attack-rate form `g(t)` over normalized time `t ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "lowercase")]
pub enum RateStrategy {
    /// Power-law acceleration: `g(t) = a·t^b`.
    Pla { a: f64, b: f64 },
    /// Delayed escalation: power-law probe until `t1`, then exponential
    /// release: `g(t) = W1·α1·t^(α1−1)` for `t < t1`,
    /// `W2·α2·e^(γ(t−t1))` for `t ≥ t1`.
    Dea {
        w1: f64,
        w2: f64,
        alpha1: f64,
        alpha2: f64,
        gamma: f64,
        t1: f64,
    },
    /// Adaptive stealth: rise to a peak, then back off under defender
    /// pressure: `g(t) = C·e^(γt) / (1 + e^(γ(t−t0)))²`.
    Asa { c: f64, gamma: f64, t0: f64 },
    /// Dynamic adjustment, a `w`-weighted mix of power-law and exponential
    /// components: `g(t) = w·α1·t^(α1−1) + (1−w)·α2·e^(α2·t)`.
    Dam { w: f64, alpha1: f64, alpha2: f64 },
}

impl RateStrategy {
    /// Evaluates `g(t)`.
    pub fn rate(&self, t: f64) -> f64 {
        match *self {
            RateStrategy::Pla { a, b } => a * t.powf(b),
            RateStrategy::Dea {
                w1,
                w2,
                alpha1,
                alpha2,
                gamma,
                t1,
            } => {
                if t < t1 {
                    w1 * alpha1 * t.powf(alpha1 - 1.0)
                } else {
                    w2 * alpha2 * (gamma * (t - t1)).exp()
                }
            }
            RateStrategy::Asa { c, gamma, t0 } => {
                let denom = 1.0 + (gamma * (t - t0)).exp();
                c * (gamma * t).exp() / (denom * denom)
            }
            RateStrategy::Dam { w, alpha1, alpha2 } => {
                w * alpha1 * t.powf(alpha1 - 1.0) + (1.0 - w) * alpha2 * (alpha2 * t).exp()
            }
        }
    }

    /// Table-row name.
    pub fn name(&self) -> &'static str {
        match self {
            RateStrategy::Pla { .. } => "PLA",
            RateStrategy::Dea { .. } => "DEA",
            RateStrategy::Asa { .. } => "ASA",
            RateStrategy::Dam { .. } => "DAM",
        }
    }

    /// Max of `g` over a dense grid on `[lo, hi]`; used as the thinning
    /// envelope.
    pub fn grid_max(&self, lo: f64, hi: f64) -> f64 {
        let n = 1024;
        (0..=n)
            .map(|k| self.rate(lo + (hi - lo) * k as f64 / n as f64))
            .fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(TrafficError::InvalidScenario(msg.into()));
        match *self {
            RateStrategy::Pla { a, b } => {
                if !(a >= 0.0 && b >= 0.0) {
                    return bad("PLA rate requires a >= 0 and b >= 0");
                }
            }
            RateStrategy::Dea {
                w1,
                w2,
                alpha1,
                t1,
                ..
            } => {
                if !(w1 >= 0.0 && w2 >= 0.0) {
                    return bad("DEA rate requires W1, W2 >= 0");
                }
                if !(alpha1 >= 1.0) {
                    return bad("DEA rate requires alpha1 >= 1 (finite power-law at t = 0)");
                }
                if !(0.0..=1.0).contains(&t1) {
                    return bad("DEA rate requires t1 in [0, 1]");
                }
            }
            RateStrategy::Asa { c, .. } => {
                if !(c >= 0.0) {
                    return bad("ASA rate requires C >= 0");
                }
            }
            RateStrategy::Dam { w, alpha1, alpha2 } => {
                if !(0.0..=1.0).contains(&w) {
                    return bad("DAM weight w must lie in [0, 1]");
                }
                if !(alpha1 > 1.0 && alpha2 > 1.0) && w > 0.0 {
                    // α1, α2 > 1 keeps both branches finite and increasing
                    if !(alpha1 >= 1.0) {
                        return bad("DAM rate requires alpha1 >= 1");
                    }
                    if !(alpha2 > 0.0) {
                        return bad("DAM rate requires alpha2 > 0");
                    }
                }
            }
        }
        // nonnegativity over the normalized interval
        for k in 0..=256 {
            let t = k as f64 / 256.0;
            let g = self.rate(t);
            if !g.is_finite() || g < 0.0 {
                return bad(&format!("rate g({t}) = {g} is not finite and nonnegative"));
            }
        }
        Ok(())
    }
}

/// IP-control form `f(t)`: how many source addresses the attacker commands
/// at normalized time `t`. Rows correspond one-to-one with [`RateStrategy`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "lowercase")]
pub enum IpStrategy {
    /// `f(t) = (a/(b+1))·t^(b+1)`.
    Pla { a: f64, b: f64 },
    /// Linear growth switching to exponential at `t1`.
    Dea {
        n_base: f64,
        k1: f64,
        k2: f64,
        mu: f64,
        t1: f64,
    },
    /// Sigmoid saturation: `f(t) = n_max / (1 + e^(−γ(t−t0)))`.
    Asa { n_max: f64, gamma: f64, t0: f64 },
    /// `f(t) = n_base + (n_max − n_base)·(α·e^β + (1−α)(1−e^(−γt)))`.
    /// The `α·e^β` term is time-independent as printed; setting
    /// `exp_time_dependent` reads it as `α·e^(βt)` for sensitivity runs.
    Dam {
        n_base: f64,
        n_max: f64,
        alpha: f64,
        beta: f64,
        gamma: f64,
        #[serde(default)]
        exp_time_dependent: bool,
    },
}

impl IpStrategy {
    /// Evaluates `f(t)` before flooring/clamping.
    pub fn count_raw(&self, t: f64) -> f64 {
        match *self {
            IpStrategy::Pla { a, b } => a / (b + 1.0) * t.powf(b + 1.0),
            IpStrategy::Dea {
                n_base,
                k1,
                k2,
                mu,
                t1,
            } => {
                if t < t1 {
                    n_base + k1 * t
                } else {
                    n_base + k1 * t1 + k2 * ((mu * (t - t1)).exp() - 1.0)
                }
            }
            IpStrategy::Asa { n_max, gamma, t0 } => n_max / (1.0 + (-gamma * (t - t0)).exp()),
            IpStrategy::Dam {
                n_base,
                n_max,
                alpha,
                beta,
                gamma,
                exp_time_dependent,
            } => {
                let exp_term = if exp_time_dependent {
                    (beta * t).exp()
                } else {
                    beta.exp()
                };
                n_base + (n_max - n_base) * (alpha * exp_term + (1.0 - alpha) * (1.0 - (-gamma * t).exp()))
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            IpStrategy::Pla { .. } => "PLA",
            IpStrategy::Dea { .. } => "DEA",
            IpStrategy::Asa { .. } => "ASA",
            IpStrategy::Dam { .. } => "DAM",
        }
    }

    /// Upper bound of the victim-pool size over `[0, 1]` (after flooring and
    /// clamping); sizes the attacker part of the IP pool.
    pub fn pool_size(&self) -> u16 {
        let mx = (0..=256)
            .map(|k| self.count_floor(k as f64 / 256.0))
            .max()
            .unwrap_or(1);
        mx.min(u16::MAX as u32) as u16
    }

    fn count_floor(&self, t: f64) -> u32 {
        let f = self.count_raw(t);
        if !f.is_finite() {
            return 1;
        }
        (f.floor().max(1.0) as u32).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        if let IpStrategy::Dam { alpha, beta, gamma, .. } = *self {
            if !(0.0..=1.0).contains(&alpha) {
                return Err(TrafficError::InvalidScenario(
                    "DAM IP control requires alpha in [0, 1]".into(),
                ));
            }
            if !(beta > 0.0 && gamma > 0.0) {
                return Err(TrafficError::InvalidScenario(
                    "DAM IP control requires beta > 0 and gamma > 0".into(),
                ));
            }
        }
        for k in 0..=256 {
            let t = k as f64 / 256.0;
            let f = self.count_raw(t);
            if !f.is_finite() {
                return Err(TrafficError::InvalidScenario(format!(
                    "IP control f({t}) is not finite"
                )));
            }
        }
        Ok(())
    }
}

/// Injection-time sampler family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SamplerKind {
    /// Nonhomogeneous Poisson process thinning (exponential candidate gaps).
    Npp,
    /// Normal-distributed candidate gaps.
    Nd,
    /// Double-random Poisson: the intensity itself is drawn per run.
    Drp,
}

impl SamplerKind {
    pub fn name(&self) -> &'static str {
        match self {
            SamplerKind::Npp => "NPP",
            SamplerKind::Nd => "ND",
            SamplerKind::Drp => "DRP",
        }
    }
}

/// Full attack description: rate form, IP-control form, sampler and seed.
/// `rate` is `None` exactly for DRP scenarios, which generate their own
/// intensity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackScenario {
    pub rate: Option<RateStrategy>,
    pub ip: IpStrategy,
    pub sampler: SamplerKind,
    pub seed: u64,
}

impl AttackScenario {
    pub fn validate(&self) -> Result<()> {
        match (self.sampler, &self.rate) {
            (SamplerKind::Drp, Some(_)) => {
                return Err(TrafficError::InvalidScenario(
                    "DRP generates its own intensity; rate strategy must be absent".into(),
                ))
            }
            (SamplerKind::Drp, None) => {}
            (_, None) => {
                return Err(TrafficError::InvalidScenario(format!(
                    "{} sampler requires a rate strategy",
                    self.sampler.name()
                )))
            }
            (_, Some(r)) => r.validate()?,
        }
        self.ip.validate()
    }
}

/// Evaluates the scenario's attack rate `g(t)`, `t ∈ [0, 1]`.
pub fn attack_rate(scenario: &AttackScenario, t: f64) -> Result<f64> {
    let rate = scenario.rate.as_ref().ok_or_else(|| {
        TrafficError::InvalidScenario("scenario has no rate strategy (DRP row)".into())
    })?;
    Ok(rate.rate(t))
}

/// Number of controlled source IPs at normalized time `t`: `f(t)` floored
/// to an integer and clamped to at least one.
pub fn ip_count(scenario: &AttackScenario, t: f64) -> u32 {
    let f = scenario.ip.count_raw(t);
    if !f.is_finite() {
        return 1;
    }
    (f.floor() as i64).max(1) as u32
}
