use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Exp, Normal};

/// Candidate rate of the thinning samplers: exponential (or normal) gaps
/// with mean 1/512, i.e. about 512 candidates per unit of normalized time.
pub const CANDIDATE_RATE: f64 = 512.0;

/// Nonhomogeneous-Poisson sampler: candidate gaps `Δt ~ Exponential` with
/// mean `1/512`; a candidate at `t` is kept iff `Uniform(0, g_max) < g(t)`,
/// i.e. accepted with probability `g(t)/g_max`. Returns ascending times in
/// `(t_min, t_max]`; empty whenever `t_min ≥ t_max`.
pub fn sample_npp<F: Fn(f64) -> f64>(
    t_min: f64,
    t_max: f64,
    g: F,
    g_max: f64,
    seed: u64,
) -> Vec<f64> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    sample_npp_with_rng(t_min, t_max, g, g_max, &mut rng)
}

pub fn sample_npp_with_rng<F: Fn(f64) -> f64, R: Rng>(
    t_min: f64,
    t_max: f64,
    g: F,
    g_max: f64,
    rng: &mut R,
) -> Vec<f64> {
    let mut out = Vec::new();
    if !(g_max > 0.0) {
        return out;
    }
    let gaps = Exp::new(CANDIDATE_RATE).expect("positive rate");
    let mut t = t_min;
    while t < t_max {
        t += rng.sample(gaps);
        if t > t_max {
            break;
        }
        let u: f64 = rng.random_range(0.0..g_max);
        if u < g(t) {
            out.push(t);
        }
    }
    out
}

/// Normal-gap sampler: `Δt = |Normal(μ, σ)|` with `μ = 1/512`, `σ = μ/2`;
/// acceptance `u < g(t)/g_max` with `u ~ Uniform(0, 1)`.
pub fn sample_nd<F: Fn(f64) -> f64>(
    t_min: f64,
    t_max: f64,
    g: F,
    g_max: f64,
    seed: u64,
) -> Vec<f64> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    sample_nd_with_rng(t_min, t_max, g, g_max, &mut rng)
}

pub fn sample_nd_with_rng<F: Fn(f64) -> f64, R: Rng>(
    t_min: f64,
    t_max: f64,
    g: F,
    g_max: f64,
    rng: &mut R,
) -> Vec<f64> {
    let mut out = Vec::new();
    if !(g_max > 0.0) {
        return out;
    }
    let mu = 1.0 / CANDIDATE_RATE;
    let gaps = Normal::new(mu, mu / 2.0).expect("valid normal");
    let mut t = t_min;
    while t < t_max {
        t += rng.sample(gaps).abs();
        if t > t_max {
            break;
        }
        let u: f64 = rng.random_range(0.0..1.0);
        if u < g(t) / g_max {
            out.push(t);
        }
    }
    out
}

/// The randomly drawn piecewise intensity used by the double-random Poisson
/// sampler: the mixed DAM form with `α1 = 3`, `α2 = 4` and segment weights
/// `w ~ (U(0, 0.33), U(0.33, 0.66), U(0.66, 1))` over thirds of the
/// interval.
#[derive(Debug, Clone)]
pub struct DrpIntensity {
    pub weights: [f64; 3],
    pub break_points: [f64; 2],
    pub alpha1: f64,
    pub alpha2: f64,
}

impl DrpIntensity {
    pub fn generate<R: Rng>(rng: &mut R, t_min: f64, t_max: f64) -> Self {
        let weights = [
            rng.random_range(0.0..0.33),
            rng.random_range(0.33..0.66),
            rng.random_range(0.66..1.0),
        ];
        let third = (t_max - t_min) / 3.0;
        Self {
            weights,
            break_points: [t_min + third, t_min + 2.0 * third],
            alpha1: 3.0,
            alpha2: 4.0,
        }
    }

    fn g_mixed(&self, t: f64, w: f64) -> f64 {
        w * self.alpha1 * t.powf(self.alpha1 - 1.0)
            + (1.0 - w) * self.alpha2 * (self.alpha2 * t).exp()
    }

    pub fn eval(&self, t: f64) -> f64 {
        let w = if t < self.break_points[0] {
            self.weights[0]
        } else if t < self.break_points[1] {
            self.weights[1]
        } else {
            self.weights[2]
        };
        self.g_mixed(t, w)
    }

    /// Envelope for thinning: max over an evaluation grid.
    pub fn grid_max(&self, t_min: f64, t_max: f64) -> f64 {
        let n = 1024;
        (0..=n)
            .map(|k| self.eval(t_min + (t_max - t_min) * k as f64 / n as f64))
            .fold(0.0, f64::max)
    }
}

/// Double-random Poisson sampler: draws a fresh piecewise intensity, then
/// thins exponential-gap candidates against it exactly as in the
/// nonhomogeneous-Poisson sampler.
pub fn sample_drp(t_min: f64, t_max: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    sample_drp_with_rng(t_min, t_max, &mut rng).1
}

pub fn sample_drp_with_rng<R: Rng>(t_min: f64, t_max: f64, rng: &mut R) -> (DrpIntensity, Vec<f64>) {
    let intensity = DrpIntensity::generate(rng, t_min, t_max);
    let g_max = intensity.grid_max(t_min, t_max);
    let times = sample_npp_with_rng(t_min, t_max, |t| intensity.eval(t), g_max, rng);
    (intensity, times)
}
