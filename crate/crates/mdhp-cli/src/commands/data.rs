//! Shared loading/joining between the dataset, parameter dumps and the
//! classifier's example format.

use crate::CliError;
use gds_solver::DumpRecord;
use mdhp_lstm::{window_features, Example, HawkesFeatures, TrainingSet};
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use traffic_gen::{read_dataset, window_from_record, DatasetManifest, Label, Split, WindowRecord};

/// Accepts either the dataset directory or the JSONL file itself.
pub fn dataset_file(data: &Path) -> PathBuf {
    if data.is_dir() {
        data.join("dataset.jsonl")
    } else {
        data.to_path_buf()
    }
}

pub fn load_windows(data: &Path) -> Result<Vec<WindowRecord>, CliError> {
    Ok(read_dataset(&dataset_file(data))?)
}

/// ECU count: explicit flag, else the manifest sitting next to the dataset,
/// else 3.
pub fn resolve_dims(data: &Path, flag: Option<usize>) -> usize {
    if let Some(d) = flag {
        return d;
    }
    let manifest_path = if data.is_dir() {
        data.join("manifest.json")
    } else {
        data.with_file_name("manifest.json")
    };
    if let Ok(text) = std::fs::read_to_string(manifest_path) {
        if let Ok(manifest) = serde_json::from_str::<DatasetManifest>(&text) {
            return manifest.config.dims;
        }
    }
    3
}

pub fn load_dump(path: &Path) -> Result<Vec<DumpRecord>, CliError> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(gds_solver::read_dump(std::io::BufReader::new(file))?)
}

/// Joins windows with their parameter estimates into classifier examples.
/// Windows without a dump entry (failed estimations) are skipped; the count
/// is returned so callers can surface it.
pub fn build_examples(
    records: &[WindowRecord],
    dump: &[DumpRecord],
    beta_tspan: f64,
    split: Option<Split>,
) -> Result<(Vec<Example>, usize), CliError> {
    let by_id: HashMap<u64, &DumpRecord> = dump.iter().map(|d| (d.window_id, d)).collect();
    let mut out = Vec::new();
    let mut skipped = 0usize;
    for rec in records {
        if let Some(want) = split {
            if rec.split != want {
                continue;
            }
        }
        let Some(d) = by_id.get(&rec.window_id) else {
            skipped += 1;
            continue;
        };
        let window = window_from_record(rec)?;
        let hawkes = HawkesFeatures::new(
            d.alpha.clone(),
            d.beta.iter().map(|b| b * beta_tspan).collect(),
            d.theta.clone(),
        )?;
        out.push(Example {
            features: window_features(&window),
            hawkes,
            label: usize::from(rec.label == Label::Attack),
        });
    }
    Ok((out, skipped))
}

/// Train/val example pair for `train`.
pub fn build_training_set(
    records: &[WindowRecord],
    dump: &[DumpRecord],
    beta_tspan: f64,
) -> Result<(TrainingSet, usize), CliError> {
    let (train, s1) = build_examples(records, dump, beta_tspan, Some(Split::Train))?;
    let (val, s2) = build_examples(records, dump, beta_tspan, Some(Split::Val))?;
    Ok((TrainingSet { train, val }, s1 + s2))
}
