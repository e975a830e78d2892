use crate::message::{Label, Message, Window, SERVICE_ID_BASE, WINDOW_LEN};
use crate::sampler::{sample_drp, sample_nd, sample_npp};
use crate::scenario::{ip_count, AttackScenario, SamplerKind};
use crate::seed::derive_seed;
use crate::{Result, TrafficError};
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;

/// Result of injecting into a single window. When the sampler produced no
/// injections the window keeps its normal label and `needs_resample` is set
/// so the caller may retry with a different seed.
#[derive(Debug, Clone)]
pub struct InjectOutcome {
    pub window: Window,
    pub injected_kept: usize,
    pub needs_resample: bool,
}

/// Injects one attack run into a normal window: the window's time range is
/// normalized to `[0, 1]`, the scenario's sampler is thinned against the
/// attack rate, and each accepted time becomes one well-formed message whose
/// source IP is drawn uniformly from the first `f(t)` attacker-pool entries
/// and whose service/method pair copies a legitimate message of the chosen
/// destination ECU. The merged stream is re-framed to the first
/// [`WINDOW_LEN`] messages.
pub fn inject_attack(w: &Window, scenario: &AttackScenario, dims: usize) -> Result<InjectOutcome> {
    if w.label() != Label::Normal {
        return Err(TrafficError::InvalidWindow(
            "inject_attack expects a normal-labeled window".into(),
        ));
    }
    scenario.validate()?;
    let injected = build_injections(w.messages(), scenario, dims)?;
    let merged = merge_tagged(w.messages(), &injected);

    let kept = &merged[..WINDOW_LEN.min(merged.len())];
    let injected_kept = kept.iter().filter(|(_, inj)| *inj).count();
    let label = if injected_kept > 0 {
        Label::Attack
    } else {
        Label::Normal
    };
    let window = Window::new(
        kept.iter().map(|(m, _)| *m).collect(),
        label,
        w.scenario_id(),
    )?;
    Ok(InjectOutcome {
        window,
        injected_kept,
        needs_resample: injected_kept == 0,
    })
}

/// Injects one attack run over a multi-window span of benign messages and
/// re-frames the merged stream into consecutive [`WINDOW_LEN`]-message
/// windows. A window is labeled attack iff it contains at least one
/// injected message; trailing messages that do not fill a window are
/// dropped.
pub fn inject_span(
    span: &[Message],
    scenario: &AttackScenario,
    dims: usize,
    scenario_id: u8,
) -> Result<Vec<Window>> {
    if span.len() < WINDOW_LEN {
        return Err(TrafficError::InvalidWindow(format!(
            "span of {} messages is shorter than one window",
            span.len()
        )));
    }
    scenario.validate()?;
    let injected = build_injections(span, scenario, dims)?;
    let merged = merge_tagged(span, &injected);

    let mut windows = Vec::new();
    for chunk in merged.chunks_exact(WINDOW_LEN) {
        let any_injected = chunk.iter().any(|(_, inj)| *inj);
        let label = if any_injected {
            Label::Attack
        } else {
            Label::Normal
        };
        windows.push(Window::new(
            chunk.iter().map(|(m, _)| *m).collect(),
            label,
            scenario_id,
        )?);
    }
    Ok(windows)
}

/// Samples injection times on the normalized span and materializes one
/// valid message per accepted time.
fn build_injections(
    span: &[Message],
    scenario: &AttackScenario,
    dims: usize,
) -> Result<Vec<Message>> {
    let t0 = span.first().map(|m| m.timestamp).unwrap_or(0.0);
    let t1 = span.last().map(|m| m.timestamp).unwrap_or(0.0);
    if !(t1 > t0) {
        return Ok(Vec::new());
    }

    let taus: Vec<f64> = match scenario.sampler {
        SamplerKind::Npp => {
            let r = scenario
                .rate
                .ok_or_else(|| TrafficError::InvalidScenario("NPP needs a rate".into()))?;
            sample_npp(0.0, 1.0, |t| r.rate(t), r.grid_max(0.0, 1.0), scenario.seed)
        }
        SamplerKind::Nd => {
            let r = scenario
                .rate
                .ok_or_else(|| TrafficError::InvalidScenario("ND needs a rate".into()))?;
            sample_nd(0.0, 1.0, |t| r.rate(t), r.grid_max(0.0, 1.0), scenario.seed)
        }
        SamplerKind::Drp => sample_drp(0.0, 1.0, scenario.seed),
    };

    // legitimate header templates per destination ECU
    let mut by_ecu: Vec<Vec<usize>> = vec![Vec::new(); dims];
    for (k, m) in span.iter().enumerate() {
        let dim = m.service_id.wrapping_sub(SERVICE_ID_BASE) as usize;
        if dim < dims {
            by_ecu[dim].push(k);
        }
    }

    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(scenario.seed, "inject-meta", 0));
    let mut session: u16 = 0x8000;
    let mut out = Vec::with_capacity(taus.len());
    for tau in taus {
        let t_abs = t0 + tau * (t1 - t0);
        let n_victims = ip_count(scenario, tau);
        let src_ip_index = dims as u16 + rng.random_range(0..n_victims) as u16;
        let dst = rng.random_range(0..dims);
        let template = if by_ecu[dst].is_empty() {
            &span[rng.random_range(0..span.len())]
        } else {
            &span[by_ecu[dst][rng.random_range(0..by_ecu[dst].len())]]
        };
        session = session.wrapping_add(1);
        out.push(Message {
            session_id: session,
            src_ip_index,
            timestamp: t_abs,
            ..*template
        });
    }
    Ok(out)
}

/// Merges two time-ordered message lists, tagging injected ones.
fn merge_tagged(benign: &[Message], injected: &[Message]) -> Vec<(Message, bool)> {
    let mut out = Vec::with_capacity(benign.len() + injected.len());
    let (mut i, mut j) = (0, 0);
    while i < benign.len() || j < injected.len() {
        let take_benign = match (benign.get(i), injected.get(j)) {
            (Some(b), Some(inj)) => b.timestamp <= inj.timestamp,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        if take_benign {
            out.push((benign[i], false));
            i += 1;
        } else {
            out.push((injected[j], true));
            j += 1;
        }
    }
    out
}
