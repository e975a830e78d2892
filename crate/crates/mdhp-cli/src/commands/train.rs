use super::data::{build_training_set, load_dump, load_windows};
use crate::{CliError, PipelineConfig};
use mdhp_lstm::{save_checkpoint, train, write_trace_csv};
use std::path::Path;

pub fn run(
    data: &Path,
    dump: &Path,
    checkpoint: &Path,
    trace: Option<&Path>,
    config: Option<&Path>,
    seed: Option<u64>,
    epochs: Option<usize>,
) -> Result<(), CliError> {
    let cfg = PipelineConfig::load(config)?;
    let mut tcfg = cfg.train.clone();
    tcfg.hawkes_tspan = cfg.solver.standardize_max - cfg.solver.standardize_min;
    if let Some(s) = seed {
        tcfg.seed_base = s;
    }
    if let Some(e) = epochs {
        tcfg.max_epoch = e;
    }

    let records = load_windows(data)?;
    let dumps = load_dump(dump)?;
    if let Some(first) = dumps.first() {
        tcfg.model.mdhp_dims = first.dims;
    }
    let (set, skipped) = build_training_set(&records, &dumps, tcfg.hawkes_tspan)?;
    if skipped > 0 {
        eprintln!("skipped {skipped} windows without parameter estimates");
    }

    let outcome = train(&set, &tcfg)?;
    save_checkpoint(checkpoint, &outcome.model, &tcfg)?;
    if let Some(p) = trace {
        write_trace_csv(p, &outcome.trace)?;
    }

    let last = outcome.trace.last().expect("at least one epoch");
    let best_val = outcome
        .trace
        .iter()
        .map(|s| s.val_acc)
        .fold(f64::MIN, f64::max);
    println!(
        "trained {} epochs on {} train / {} val windows",
        outcome.trace.len(),
        set.train.len(),
        set.val.len()
    );
    println!(
        "final: train_loss {:.4} train_acc {:.4} val_acc {:.4} (best val_acc {:.4})",
        last.train_loss, last.train_acc, last.val_acc, best_val
    );
    println!("checkpoint: {}", checkpoint.display());
    Ok(())
}
