use super::data::{dataset_file, load_windows, resolve_dims};
use crate::{CliError, PipelineConfig};
use gds_solver::{batch_estimate, write_dump, DumpRecord};
use hawkes_core::EventSequences;
use std::io::BufWriter;
use std::path::Path;
use traffic_gen::{window_from_record, window_to_events};

pub fn run(
    data: &Path,
    out: &Path,
    config: Option<&Path>,
    workers: Option<usize>,
    dims: Option<usize>,
    report_path: Option<&Path>,
) -> Result<(), CliError> {
    let cfg = PipelineConfig::load(config)?;
    let workers = workers.or(cfg.workers).unwrap_or(1).max(1);
    let records = load_windows(data)?;
    let dims = resolve_dims(data, dims);

    let mut ids = Vec::with_capacity(records.len());
    let mut labels = Vec::with_capacity(records.len());
    let mut windows: Vec<EventSequences> = Vec::with_capacity(records.len());
    for rec in &records {
        let w = window_from_record(rec)?;
        windows.push(window_to_events(&w, dims)?);
        ids.push(rec.window_id);
        labels.push(rec.label);
    }

    let batch = batch_estimate(&windows, &cfg.solver, workers)?;

    let mut dump = Vec::new();
    let mut failed = 0usize;
    for (k, result) in batch.results.iter().enumerate() {
        match result {
            Ok(r) => dump.push(DumpRecord::from_result(
                ids[k],
                r,
                Some(labels[k].as_str().to_string()),
            )),
            Err(e) => {
                failed += 1;
                eprintln!("window {}: {e}", ids[k]);
            }
        }
    }
    let file = std::fs::File::create(out)
        .map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    write_dump(BufWriter::new(file), &dump)?;

    let r = &batch.report;
    println!("estimated {} of {} windows from {}", dump.len(), records.len(), dataset_file(data).display());
    if failed > 0 {
        println!("skipped {failed} windows (estimation errors above)");
    }
    println!(
        "{:>4} {:>10} {:>10} {:>12} {:>11}",
        "Dim", "Max-T-Len", "Min-T-Len", "Window-Cost", "Throughput"
    );
    println!(
        "{:>4} {:>10} {:>10} {:>12.4} {:>11.4}",
        r.dims, r.max_t_len, r.min_t_len, r.window_cost, r.throughput
    );

    if let Some(p) = report_path {
        let json = serde_json::to_string_pretty(r)?;
        std::fs::write(p, json).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}
