use crate::benign::{gen_normal_stream, gen_normal_window, BenignModel, BenignProfile};
use crate::inject::inject_span;
use crate::message::{Label, Message, Window, WINDOW_LEN};
use crate::scenario::{AttackScenario, IpStrategy, RateStrategy, SamplerKind};
use crate::seed::derive_seed;
use crate::{Result, TrafficError};
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

/// One dataset scenario: which rate form, IP-control form and sampler to
/// combine. `rate` is absent for DRP rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRow {
    pub id: u8,
    pub rate: Option<RateStrategy>,
    pub ip: IpStrategy,
    pub sampler: SamplerKind,
}

impl ScenarioRow {
    fn to_scenario(&self, seed: u64) -> AttackScenario {
        AttackScenario {
            rate: self.rate,
            ip: self.ip,
            sampler: self.sampler,
            seed,
        }
    }
}

/// The nine standard scenario rows: the four rate/IP strategy pairs under
/// the NPP sampler (00–03), the self-intense DRP row (04), and the same
/// four pairs under the ND sampler (05–08).
pub fn standard_rows() -> Vec<ScenarioRow> {
    let pla_rate = RateStrategy::Pla { a: 2.0, b: 2.0 };
    let dea_rate = RateStrategy::Dea {
        w1: 0.4,
        w2: 0.6,
        alpha1: 2.0,
        alpha2: 2.0,
        gamma: 3.0,
        t1: 0.5,
    };
    let asa_rate = RateStrategy::Asa {
        c: 2.0,
        gamma: 5.0,
        t0: 0.5,
    };
    let dam_rate = RateStrategy::Dam {
        w: 0.5,
        alpha1: 3.0,
        alpha2: 3.0,
    };
    let pla_ip = IpStrategy::Pla { a: 16.0, b: 2.0 };
    let dea_ip = IpStrategy::Dea {
        n_base: 1.0,
        k1: 4.0,
        k2: 2.0,
        mu: 2.0,
        t1: 0.5,
    };
    let asa_ip = IpStrategy::Asa {
        n_max: 6.0,
        gamma: 8.0,
        t0: 0.5,
    };
    let dam_ip = IpStrategy::Dam {
        n_base: 1.0,
        n_max: 8.0,
        alpha: 0.3,
        beta: 0.5,
        gamma: 3.0,
        exp_time_dependent: false,
    };
    let rows = [
        (0, Some(pla_rate), pla_ip, SamplerKind::Npp),
        (1, Some(dea_rate), dea_ip, SamplerKind::Npp),
        (2, Some(asa_rate), asa_ip, SamplerKind::Npp),
        (3, Some(dam_rate), dam_ip, SamplerKind::Npp),
        (4, None, dam_ip, SamplerKind::Drp),
        (5, Some(pla_rate), pla_ip, SamplerKind::Nd),
        (6, Some(dea_rate), dea_ip, SamplerKind::Nd),
        (7, Some(asa_rate), asa_ip, SamplerKind::Nd),
        (8, Some(dam_rate), dam_ip, SamplerKind::Nd),
    ];
    rows.into_iter()
        .map(|(id, rate, ip, sampler)| ScenarioRow {
            id,
            rate,
            ip,
            sampler,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
}

impl Split {
    pub fn as_str(&self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
        }
    }
}

/// Resolved generation config, embedded in the manifest for provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub dims: usize,
    /// Windows per scenario row (half normal, half attack).
    pub windows_per_scenario: usize,
    pub master_seed: u64,
    pub scenarios: Vec<ScenarioRow>,
    pub profile: BenignProfile,
}

impl DatasetSpec {
    pub fn standard(dims: usize, windows_per_scenario: usize, master_seed: u64) -> Self {
        Self {
            dims,
            windows_per_scenario,
            master_seed,
            scenarios: standard_rows(),
            profile: BenignProfile::standard(dims),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims < 2 {
            return Err(TrafficError::InvalidScenario("dims must be >= 2".into()));
        }
        if self.windows_per_scenario < 2 {
            return Err(TrafficError::InvalidScenario(
                "windows_per_scenario must be >= 2".into(),
            ));
        }
        if self.profile.dims() != self.dims {
            return Err(TrafficError::InvalidScenario(
                "profile ECU count must match dims".into(),
            ));
        }
        for row in &self.scenarios {
            if row.id > 8 {
                return Err(TrafficError::InvalidScenario(format!(
                    "scenario id {} out of 0..=8",
                    row.id
                )));
            }
            row.to_scenario(0).validate()?;
        }
        Ok(())
    }
}

/// One dataset line: a labeled window as ten header integers plus the
/// timestamp per message.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowRecord {
    pub window_id: u64,
    pub scenario_id: u8,
    pub split: Split,
    pub label: Label,
    pub messages: Vec<(u16, u16, u32, u16, u16, u8, u8, u8, u8, u16, f64)>,
}

pub fn window_to_record(w: &Window, window_id: u64, split: Split) -> WindowRecord {
    WindowRecord {
        window_id,
        scenario_id: w.scenario_id(),
        split,
        label: w.label(),
        messages: w
            .messages()
            .iter()
            .map(|m| {
                (
                    m.service_id,
                    m.method_id,
                    m.length,
                    m.client_id,
                    m.session_id,
                    m.protocol_version,
                    m.interface_version,
                    m.message_type,
                    m.return_code,
                    m.src_ip_index,
                    m.timestamp,
                )
            })
            .collect(),
    }
}

pub fn window_from_record(rec: &WindowRecord) -> Result<Window> {
    let messages: Vec<Message> = rec
        .messages
        .iter()
        .map(|&(service_id, method_id, length, client_id, session_id, protocol_version,
                interface_version, message_type, return_code, src_ip_index, timestamp)| {
            Message {
                service_id,
                method_id,
                length,
                client_id,
                session_id,
                protocol_version,
                interface_version,
                message_type,
                return_code,
                src_ip_index,
                timestamp,
            }
        })
        .collect();
    Window::new(messages, rec.label, rec.scenario_id)
}

/// Manifest row in table column order: ID, Train, Val, Attk Rate, IP Ctrl,
/// Sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestRow {
    pub id: u8,
    pub train: usize,
    pub val: usize,
    pub attk_rate: String,
    pub ip_ctrl: String,
    pub sample: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub tool_version: String,
    pub rows: Vec<ManifestRow>,
    pub config: DatasetSpec,
}

/// Generates the labeled dataset: per scenario row, half the windows are
/// benign and half carry injections sampled over three-window spans and
/// re-framed. Splits are 8:2 per label per scenario. Writes
/// `dataset.jsonl` and `manifest.json` under `out_dir`; fully determined by
/// the master seed.
pub fn build_dataset(spec: &DatasetSpec, out_dir: &Path) -> Result<DatasetManifest> {
    spec.validate()?;
    fs::create_dir_all(out_dir).map_err(|e| TrafficError::Io(e.to_string()))?;
    let data_path = out_dir.join("dataset.jsonl");
    let file = fs::File::create(&data_path).map_err(|e| TrafficError::Io(e.to_string()))?;
    let mut out = BufWriter::new(file);

    let model = BenignModel::Periodic(spec.profile.clone());
    let mut manifest_rows = Vec::new();
    let mut window_id: u64 = 0;

    for row in &spec.scenarios {
        let n = spec.windows_per_scenario;
        let n_attack = n / 2;
        let n_normal = n - n_attack;
        let tag = row.id as u64;

        let mut normals = Vec::with_capacity(n_normal);
        for k in 0..n_normal {
            let seed = derive_seed(spec.master_seed, "normal-window", tag << 32 | k as u64);
            normals.push(gen_normal_window(&model, row.id, seed)?);
        }

        let mut attacks = Vec::with_capacity(n_attack);
        let mut span_idx: u64 = 0;
        while attacks.len() < n_attack {
            if span_idx > 20 * n_attack as u64 + 20 {
                return Err(TrafficError::GenerationStalled(format!(
                    "scenario {} produced too few attack windows",
                    row.id
                )));
            }
            let span_seed = derive_seed(spec.master_seed, "attack-span", tag << 32 | span_idx);
            let span = gen_normal_stream(&model, 3 * WINDOW_LEN, span_seed)?;
            let scenario =
                row.to_scenario(derive_seed(spec.master_seed, "attack-run", tag << 32 | span_idx));
            for w in inject_span(&span, &scenario, spec.dims, row.id)? {
                if w.label() == Label::Attack && attacks.len() < n_attack {
                    attacks.push(w);
                }
            }
            span_idx += 1;
        }

        // 8:2 split per label, membership shuffled deterministically
        let mut rng =
            ChaCha12Rng::seed_from_u64(derive_seed(spec.master_seed, "split", tag));
        let mut train = 0usize;
        let mut val = 0usize;
        for group in [&mut normals, &mut attacks] {
            let mut idx: Vec<usize> = (0..group.len()).collect();
            idx.shuffle(&mut rng);
            let train_n = group.len() * 8 / 10;
            let train_set: std::collections::HashSet<usize> =
                idx[..train_n].iter().copied().collect();
            for (k, w) in group.iter().enumerate() {
                let split = if train_set.contains(&k) {
                    Split::Train
                } else {
                    Split::Val
                };
                match split {
                    Split::Train => train += 1,
                    Split::Val => val += 1,
                }
                let rec = window_to_record(w, window_id, split);
                window_id += 1;
                let line =
                    serde_json::to_string(&rec).map_err(|e| TrafficError::Io(e.to_string()))?;
                writeln!(out, "{line}").map_err(|e| TrafficError::Io(e.to_string()))?;
            }
        }

        manifest_rows.push(ManifestRow {
            id: row.id,
            train,
            val,
            attk_rate: row.rate.map(|r| r.name().to_string()).unwrap_or_else(|| "-".into()),
            ip_ctrl: row.ip.name().to_string(),
            sample: row.sampler.name().to_string(),
        });
    }
    out.flush().map_err(|e| TrafficError::Io(e.to_string()))?;

    let manifest = DatasetManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        rows: manifest_rows,
        config: spec.clone(),
    };
    let manifest_json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| TrafficError::Io(e.to_string()))?;
    fs::write(out_dir.join("manifest.json"), manifest_json)
        .map_err(|e| TrafficError::Io(e.to_string()))?;
    Ok(manifest)
}

/// Reads a `dataset.jsonl` file back into records.
pub fn read_dataset(path: &Path) -> Result<Vec<WindowRecord>> {
    let file = fs::File::open(path).map_err(|e| TrafficError::Io(format!("{path:?}: {e}")))?;
    let mut out = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| TrafficError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: WindowRecord = serde_json::from_str(&line)
            .map_err(|e| TrafficError::Io(format!("line {}: {e}", n + 1)))?;
        out.push(rec);
    }
    Ok(out)
}
