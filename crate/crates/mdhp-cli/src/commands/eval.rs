use super::data::{build_examples, load_dump, load_windows};
use crate::CliError;
use mdhp_lstm::{evaluate, load_checkpoint};
use std::path::Path;
use traffic_gen::Split;

pub fn run(
    data: &Path,
    dump: &Path,
    checkpoint: &Path,
    out: &Path,
    split: &str,
) -> Result<(), CliError> {
    let split = match split {
        "train" => Some(Split::Train),
        "val" => Some(Split::Val),
        "all" => None,
        other => {
            return Err(CliError::Config(format!(
                "unknown split {other:?}; expected train, val or all"
            )))
        }
    };
    let (model, manifest) = load_checkpoint(checkpoint)?;
    let records = load_windows(data)?;
    let dumps = load_dump(dump)?;
    let (examples, skipped) =
        build_examples(&records, &dumps, manifest.train.hawkes_tspan, split)?;
    if skipped > 0 {
        eprintln!("skipped {skipped} windows without parameter estimates");
    }

    let metrics = evaluate(&model, &examples)?;
    let json = serde_json::to_string_pretty(&metrics)?;
    std::fs::write(out, json).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;

    println!(
        "windows {} | accuracy {:.4} precision {:.4} recall {:.4} f1 {:.4} auc {:.4}",
        examples.len(),
        metrics.accuracy,
        metrics.precision,
        metrics.recall,
        metrics.f1,
        metrics.auc
    );
    Ok(())
}
