use crate::message::{Label, Message, Window, SERVICE_ID_BASE, WINDOW_LEN};
use crate::seed::derive_seed;
use crate::{Result, TrafficError};
use hawkes_core::MdhpParams;
use point_sim::{simulate_mdhp, SimConfig};
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;

/// Header identity and nominal send period of one ECU.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct EcuProfile {
    pub service_id: u16,
    pub method_id: u16,
    pub client_id: u16,
    pub message_type: u8,
    pub length: u32,
    /// Seconds between messages.
    pub period: f64,
}

/// Per-ECU service/method table plus timing. Benign source IPs are the ECU
/// indices themselves; attacker addresses are appended after them.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct BenignProfile {
    pub ecus: Vec<EcuProfile>,
    /// Uniform period jitter, as a fraction (0.1 = ±10%).
    pub jitter: f64,
}

impl BenignProfile {
    /// Staggered periodic ECUs: REQUEST and NOTIFICATION senders with
    /// periods in the 8–30 ms range, SOME/IP-ish payload sizes.
    pub fn standard(dims: usize) -> Self {
        let ecus = (0..dims)
            .map(|i| EcuProfile {
                service_id: SERVICE_ID_BASE + i as u16,
                method_id: 0x0001 + (i % 4) as u16,
                client_id: 0x0100 + i as u16,
                message_type: if i % 2 == 0 { 0x00 } else { 0x02 },
                length: 16 + 8 * (i % 5) as u32,
                period: 0.008 + 0.004 * i as f64,
            })
            .collect();
        Self { ecus, jitter: 0.1 }
    }

    pub fn dims(&self) -> usize {
        self.ecus.len()
    }
}

/// Timing source for benign traffic: jittered periodic schedules or a
/// Hawkes model (header fields still come from the profile).
#[derive(Debug, Clone)]
pub enum BenignModel {
    Periodic(BenignProfile),
    Mdhp {
        profile: BenignProfile,
        params: MdhpParams,
    },
}

impl BenignModel {
    pub fn profile(&self) -> &BenignProfile {
        match self {
            BenignModel::Periodic(p) => p,
            BenignModel::Mdhp { profile, .. } => profile,
        }
    }
}

/// Generates `n` benign messages, merged across ECUs in time order.
pub fn gen_normal_stream(model: &BenignModel, n: usize, seed: u64) -> Result<Vec<Message>> {
    let profile = model.profile();
    let dims = profile.dims();
    if dims < 2 {
        return Err(TrafficError::InvalidScenario(
            "benign traffic needs at least 2 ECUs".into(),
        ));
    }
    let arrivals: Vec<(f64, usize)> = match model {
        BenignModel::Periodic(p) => periodic_arrivals(p, n, seed),
        BenignModel::Mdhp { params, .. } => mdhp_arrivals(params, n, seed)?,
    };

    let mut session: Vec<u16> = vec![0; dims];
    let out = arrivals
        .into_iter()
        .map(|(t, ecu)| {
            session[ecu] = session[ecu].wrapping_add(1).max(1);
            let e = &profile.ecus[ecu];
            Message {
                service_id: e.service_id,
                method_id: e.method_id,
                length: e.length,
                client_id: e.client_id,
                session_id: session[ecu],
                protocol_version: 1,
                interface_version: 1,
                message_type: e.message_type,
                return_code: 0,
                src_ip_index: ecu as u16,
                timestamp: t,
            }
        })
        .collect();
    Ok(out)
}

/// One benign window of [`WINDOW_LEN`] messages.
pub fn gen_normal_window(model: &BenignModel, scenario_id: u8, seed: u64) -> Result<Window> {
    let msgs = gen_normal_stream(model, WINDOW_LEN, seed)?;
    Window::new(msgs, Label::Normal, scenario_id)
}

fn periodic_arrivals(profile: &BenignProfile, n: usize, seed: u64) -> Vec<(f64, usize)> {
    let dims = profile.dims();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    // random phase per ECU, then period ± jitter steps
    let mut next: Vec<f64> = profile
        .ecus
        .iter()
        .map(|e| e.period * rng.random_range(0.0..1.0))
        .collect();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let ecu = (0..dims)
            .min_by(|&a, &b| next[a].total_cmp(&next[b]))
            .expect("dims >= 2");
        out.push((next[ecu], ecu));
        let e = &profile.ecus[ecu];
        let j = rng.random_range(-profile.jitter..profile.jitter);
        next[ecu] += e.period * (1.0 + j);
    }
    out
}

fn mdhp_arrivals(params: &MdhpParams, n: usize, seed: u64) -> Result<Vec<(f64, usize)>> {
    let dims = params.dims();
    // crude horizon from the baseline rate, grown until enough events land
    let base_rate: f64 = params.theta_flat().iter().sum::<f64>().max(1e-6);
    let mut t_span = n as f64 / base_rate;
    for attempt in 0..8 {
        let sim_seed = derive_seed(seed, "benign-mdhp", attempt);
        let events = simulate_mdhp(&SimConfig::new(params.clone(), t_span, sim_seed))?;
        let mut merged: Vec<(f64, usize)> = Vec::with_capacity(events.total_events());
        for dim in 0..dims {
            merged.extend(events.times(dim).iter().map(|&t| (t, dim)));
        }
        merged.sort_by(|a, b| a.0.total_cmp(&b.0));
        if merged.len() >= n {
            merged.truncate(n);
            return Ok(merged);
        }
        t_span *= 2.0;
    }
    Err(TrafficError::GenerationStalled(
        "MDHP benign model produced too few events".into(),
    ))
}
