use crate::{EventSequences, HawkesError, MdhpParams, PaddedEvents, Result};

/// Upper clamp applied to every exponent argument before exponentiation.
/// In the normal regime (positive decay, positive time differences) the
/// argument is negative and the clamp is inert; it only guards against
/// overflow should an optimizer step wander.
pub const EXP_CLAMP_MAX: f64 = 80.0;

/// Floor applied to the event-sum log argument before taking `ln`. The
/// solver keeps `θ > 0`, but underflow of the excitation sum is still
/// possible.
pub const LN_ARG_FLOOR: f64 = 1e-300;

/// Analytic partials of the log-likelihood, row-major `D×D` for the matrix
/// parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MdhpGradient {
    pub d_alpha: Vec<f64>,
    pub d_beta: Vec<f64>,
    pub d_theta: Vec<f64>,
}

impl MdhpGradient {
    fn zeros(dims: usize) -> Self {
        Self {
            d_alpha: vec![0.0; dims * dims],
            d_beta: vec![0.0; dims * dims],
            d_theta: vec![0.0; dims],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.d_alpha.iter().all(|v| v.is_finite())
            && self.d_beta.iter().all(|v| v.is_finite())
            && self.d_theta.iter().all(|v| v.is_finite())
    }
}

#[inline]
fn clamped_exp(arg: f64) -> (f64, bool) {
    if arg >= EXP_CLAMP_MAX {
        (EXP_CLAMP_MAX.exp(), true)
    } else {
        (arg.exp(), false)
    }
}

/// Conditional intensity `λ_i(t)` of dimension `i` at time `t`, evaluated
/// directly from the event history (strict `T_j^k < t`).
pub fn intensity_at(
    params: &MdhpParams,
    events: &EventSequences,
    i: usize,
    t: f64,
) -> Result<f64> {
    params.check_compatible(events)?;
    let dims = events.dims();
    if i >= dims {
        return Err(HawkesError::DimensionOutOfRange { index: i, dims });
    }
    let mut lam = params.theta(i);
    for j in 0..dims {
        let alpha = params.alpha(i, j);
        let beta = params.beta(i, j);
        if alpha == 0.0 {
            continue;
        }
        for &t_jk in events.times(j) {
            if t_jk >= t {
                break;
            }
            lam += alpha * (-beta * (t - t_jk)).exp();
        }
    }
    Ok(lam)
}

/// Brute-force log-likelihood: nested loops over dimensions and events, with
/// the compensator from [`gamma_closed_form`]. No clamping, no flooring — a
/// non-finite intermediate is reported, never silently clipped. Used only as
/// the correctness oracle for [`log_likelihood`].
pub fn log_likelihood_naive(params: &MdhpParams, events: &EventSequences) -> Result<f64> {
    params.check_compatible(events)?;
    let mut part1 = 0.0;
    for i in 0..events.dims() {
        for &t in events.times(i) {
            let lam = intensity_at(params, events, i, t)?;
            if !lam.is_finite() || lam <= 0.0 {
                return Err(HawkesError::NonFinite("log_likelihood_naive intensity"));
            }
            part1 += lam.ln();
        }
    }
    let gamma = gamma_closed_form(params, events)?;
    let lnl = part1 - gamma;
    if !lnl.is_finite() {
        return Err(HawkesError::NonFinite("log_likelihood_naive"));
    }
    Ok(lnl)
}

/// Closed form of the compensator integral
/// `Γ = Σ_i ∫_0^{T} λ_i(v) dv
///    = T·Σ_i θ_i − Σ_i Σ_j (α_ij/β_ij) Σ_z (e^{−β_ij (T − T_j^z)} − 1)`.
pub fn gamma_closed_form(params: &MdhpParams, events: &EventSequences) -> Result<f64> {
    params.check_compatible(events)?;
    let dims = events.dims();
    let t_span = events.t_span();
    let mut gamma = t_span * (0..dims).map(|i| params.theta(i)).sum::<f64>();
    for i in 0..dims {
        for j in 0..dims {
            let alpha = params.alpha(i, j);
            let beta = params.beta(i, j);
            if alpha == 0.0 {
                continue;
            }
            let mut inner = 0.0;
            for &t_jz in events.times(j) {
                inner += (-beta * (t_span - t_jz)).exp() - 1.0;
            }
            gamma -= alpha / beta * inner;
        }
    }
    Ok(gamma)
}

/// Optimized log-likelihood `Part1 + Part2 + Part3` over padded events.
///
/// `Part1` is the masked sum over the 4-D difference tensor,
/// `Part2 = −T·Σθ`, and
/// `Part3 = Σ_i Σ_j (α_ij/β_ij) Σ_k (e^{−β_ij (T − T_j^k)} − 1)`.
/// Exponent arguments are clamped at [`EXP_CLAMP_MAX`] before
/// exponentiation and the log argument floored at [`LN_ARG_FLOOR`].
pub fn log_likelihood(params: &MdhpParams, pe: &PaddedEvents, t_span: f64) -> Result<f64> {
    Ok(lnl_core::<false>(params, pe, t_span)?.0)
}

/// Fused log-likelihood and analytic gradient; one traversal of the
/// difference tensor serves both.
pub fn log_likelihood_with_grad(
    params: &MdhpParams,
    pe: &PaddedEvents,
    t_span: f64,
) -> Result<(f64, MdhpGradient)> {
    let (lnl, grad) = lnl_core::<true>(params, pe, t_span)?;
    Ok((lnl, grad.expect("gradient requested")))
}

/// Analytic `(∂lnL/∂α, ∂lnL/∂β, ∂lnL/∂θ)` at `params`.
pub fn grad_log_likelihood(
    params: &MdhpParams,
    pe: &PaddedEvents,
    t_span: f64,
) -> Result<MdhpGradient> {
    Ok(log_likelihood_with_grad(params, pe, t_span)?.1)
}

fn lnl_core<const GRAD: bool>(
    params: &MdhpParams,
    pe: &PaddedEvents,
    t_span: f64,
) -> Result<(f64, Option<MdhpGradient>)> {
    let dims = pe.dims();
    if params.dims() != dims {
        return Err(HawkesError::DimensionMismatch {
            params: params.dims(),
            events: dims,
        });
    }
    if t_span != pe.t_span() {
        return Err(HawkesError::TSpanMismatch {
            padded: pe.t_span(),
            given: t_span,
        });
    }

    let mut grad = GRAD.then(|| MdhpGradient::zeros(dims));
    // per-(i,a) row accumulators over j: Σ_b e and Σ_b Δ·e
    let mut sum_e = vec![0.0; dims];
    let mut sum_de = vec![0.0; dims];

    // Part1: Σ_{i, a valid} ln(θ_i + Σ_j α_ij Σ_b(masked) e^{−β_ij·tMpT})
    let mut part1 = 0.0;
    for i in 0..dims {
        let theta_i = params.theta(i);
        for a in 0..pe.len(i) {
            let mut lam = theta_i;
            for j in 0..dims {
                let beta = params.beta(i, j);
                let row = pe.tmpt_row(i, a, j);
                let cut = pe.pair_len(i, a, j);
                let mut se = 0.0;
                let mut sde = 0.0;
                for &dt in &row[..cut] {
                    let (e, clamped) = clamped_exp(-beta * dt);
                    se += e;
                    if GRAD && !clamped {
                        sde += dt * e;
                    }
                }
                sum_e[j] = se;
                sum_de[j] = sde;
                lam += params.alpha(i, j) * se;
            }
            part1 += lam.max(LN_ARG_FLOOR).ln();
            if let Some(g) = grad.as_mut() {
                let inv = if lam > LN_ARG_FLOOR { 1.0 / lam } else { 0.0 };
                g.d_theta[i] += inv;
                for j in 0..dims {
                    g.d_alpha[i * dims + j] += sum_e[j] * inv;
                    g.d_beta[i * dims + j] -= params.alpha(i, j) * sum_de[j] * inv;
                }
            }
        }
    }

    // Part2: −T·Σθ
    let mut part2 = 0.0;
    for i in 0..dims {
        part2 -= t_span * params.theta(i);
        if let Some(g) = grad.as_mut() {
            g.d_theta[i] -= t_span;
        }
    }

    // Part3: Σ_ij (α_ij/β_ij) Σ_k (e^{−β_ij (T − T_j^k)} − 1); padded slots
    // hold T so their term is e^0 − 1 = 0 and they may be skipped outright.
    let mut part3 = 0.0;
    for i in 0..dims {
        for j in 0..dims {
            let alpha = params.alpha(i, j);
            let beta = params.beta(i, j);
            let mut sum_g = 0.0;
            let mut sum_h = 0.0;
            for b in 0..pe.len(j) {
                let u = t_span - pe.padded(j, b);
                let (e, clamped) = clamped_exp(-beta * u);
                sum_g += e - 1.0;
                if GRAD && !clamped {
                    sum_h += u * e;
                }
            }
            part3 += alpha / beta * sum_g;
            if let Some(g) = grad.as_mut() {
                g.d_alpha[i * dims + j] += sum_g / beta;
                g.d_beta[i * dims + j] -= alpha * sum_g / (beta * beta) + alpha / beta * sum_h;
            }
        }
    }

    let lnl = part1 + part2 + part3;
    if !lnl.is_finite() {
        return Err(HawkesError::NonFinite("log_likelihood"));
    }
    if let Some(g) = grad.as_ref() {
        if !g.is_finite() {
            return Err(HawkesError::NonFinite("log_likelihood gradient"));
        }
    }
    Ok((lnl, grad))
}
