use crate::standardize::{pad_and_stack, standardize_with_scale};
use crate::{optim::Ascender, EstimationResult, Result, SolverConfig, SolverError};
use hawkes_core::{
    log_likelihood_with_grad, EventSequences, HawkesError, MdhpGradient, MdhpParams, PaddedEvents,
};
use std::time::Instant;

/// Estimates MDHP parameters for one window.
///
/// Timestamps are standardized to `[cfg.standardize_min, cfg.standardize_max]`
/// first (an input with no events at all skips standardization and collapses
/// to the baseline floor). Projected gradient ascent then runs until
/// `max_epochs` or until the relative lnL improvement stays below `tol_rel`
/// for `patience` consecutive epochs. A step that produces a non-finite
/// likelihood is rolled back with the step size halved; persistent failure
/// reports [`SolverError::Diverged`].
pub fn estimate(events: &EventSequences, cfg: &SolverConfig) -> Result<EstimationResult> {
    cfg.validate()?;
    let start = Instant::now();
    if events.total_events() == 0 {
        let empty = EventSequences::new(vec![vec![]; events.dims()], cfg.standardize_max)?;
        return run(&empty, cfg, 1.0, start);
    }
    let (std_events, scale) =
        standardize_with_scale(events, cfg.standardize_min, cfg.standardize_max)?;
    run(&std_events, cfg, scale, start)
}

/// [`estimate`] for inputs that are already on the desired time scale; no
/// rescaling is applied and `time_scale` is reported as 1.
pub fn estimate_standardized(events: &EventSequences, cfg: &SolverConfig) -> Result<EstimationResult> {
    cfg.validate()?;
    run(events, cfg, 1.0, Instant::now())
}

fn run(
    events: &EventSequences,
    cfg: &SolverConfig,
    time_scale: f64,
    start: Instant,
) -> Result<EstimationResult> {
    let d = events.dims();
    let dd = d * d;
    let t_span = events.t_span();
    let pe = pad_and_stack(events);

    let mut flat = vec![0.0; 2 * dd + d];
    flat[..dd].fill(cfg.init_alpha);
    flat[dd..2 * dd].fill(cfg.init_beta);
    flat[2 * dd..].fill(cfg.init_theta);
    project(&mut flat, d, cfg.min_param);

    let (mut lnl_prev, grad) = eval(&flat, d, &pe, t_span)?;
    let mut grad_flat = flatten_grad(&grad);
    let mut trace = vec![lnl_prev];
    let mut best_lnl = lnl_prev;
    let mut best_flat = flat.clone();

    let mut opt = Ascender::new(cfg.optimizer, flat.len());
    let mut lr = cfg.learning_rate;
    let mut stall = 0usize;
    let mut halvings = 0usize;
    let mut epochs = 0usize;

    while epochs < cfg.max_epochs {
        let snap = opt.snapshot();
        let mut cand = flat.clone();
        opt.step(&mut cand, &grad_flat, lr);
        project(&mut cand, d, cfg.min_param);

        match eval(&cand, d, &pe, t_span) {
            Ok((lnl, g)) => {
                epochs += 1;
                flat = cand;
                grad_flat = flatten_grad(&g);
                trace.push(lnl);
                if lnl > best_lnl {
                    best_lnl = lnl;
                    best_flat.copy_from_slice(&flat);
                }
                let rel = (lnl - lnl_prev) / lnl_prev.abs().max(1.0);
                lnl_prev = lnl;
                if rel < cfg.tol_rel {
                    stall += 1;
                    if stall >= cfg.patience {
                        break;
                    }
                } else {
                    stall = 0;
                }
            }
            Err(SolverError::Hawkes(
                HawkesError::NonFinite(_) | HawkesError::InvalidParams(_),
            )) => {
                // divergent step: roll back, halve, retry
                opt.restore(&snap);
                lr *= 0.5;
                halvings += 1;
                if halvings > 40 {
                    return Err(SolverError::Diverged { epoch: epochs, halvings });
                }
            }
            Err(e) => return Err(e),
        }
    }

    let params = to_params(&best_flat, d)?;
    debug_assert!(best_lnl >= trace[0]);
    Ok(EstimationResult {
        params,
        final_lnl: best_lnl,
        epochs_run: trace.len() - 1,
        lnl_trace: trace,
        wall_seconds: start.elapsed().as_secs_f64(),
        time_scale,
    })
}

fn eval(
    flat: &[f64],
    d: usize,
    pe: &PaddedEvents,
    t_span: f64,
) -> Result<(f64, MdhpGradient)> {
    let params = to_params(flat, d)?;
    Ok(log_likelihood_with_grad(&params, pe, t_span)
        .map_err(SolverError::Hawkes)?)
}

fn to_params(flat: &[f64], d: usize) -> Result<MdhpParams> {
    let dd = d * d;
    MdhpParams::new(
        d,
        flat[..dd].to_vec(),
        flat[dd..2 * dd].to_vec(),
        flat[2 * dd..].to_vec(),
    )
    .map_err(SolverError::Hawkes)
}

fn flatten_grad(g: &MdhpGradient) -> Vec<f64> {
    let mut out = Vec::with_capacity(g.d_alpha.len() * 2 + g.d_theta.len());
    out.extend_from_slice(&g.d_alpha);
    out.extend_from_slice(&g.d_beta);
    out.extend_from_slice(&g.d_theta);
    out
}

/// Clamp-to-floor projection: `α ≥ 0`, `β ≥ min_param`, `θ ≥ min_param`.
/// NaNs are left in place so a divergent step is detected at evaluation.
fn project(flat: &mut [f64], d: usize, min_param: f64) {
    let dd = d * d;
    for a in &mut flat[..dd] {
        if *a < 0.0 {
            *a = 0.0;
        }
    }
    for p in &mut flat[dd..] {
        if *p < min_param {
            *p = min_param;
        }
    }
}
