use crate::{CliError, PipelineConfig};
use std::path::Path;
use traffic_gen::{build_dataset, DatasetSpec};

pub fn run(
    out: &Path,
    config: Option<&Path>,
    seed: Option<u64>,
    count: Option<usize>,
    dims: Option<usize>,
    scenario: Option<u8>,
) -> Result<(), CliError> {
    let cfg = PipelineConfig::load(config)?;
    let dims = dims.unwrap_or(cfg.gen.dims);
    let count = count.unwrap_or(cfg.gen.windows_per_scenario);
    let master_seed = seed.or(cfg.master_seed).unwrap_or(42);

    let mut spec = DatasetSpec::standard(dims, count, master_seed);
    if let Some(periods) = &cfg.gen.periods {
        if periods.len() != dims {
            return Err(CliError::Config(format!(
                "config lists {} periods but dims is {dims}",
                periods.len()
            )));
        }
        for (e, &p) in spec.profile.ecus.iter_mut().zip(periods) {
            e.period = p;
        }
    }
    if let Some(j) = cfg.gen.jitter {
        spec.profile.jitter = j;
    }
    if let Some(rows) = &cfg.gen.scenarios {
        spec.scenarios = rows.clone();
    }
    if let Some(id) = scenario {
        spec.scenarios.retain(|r| r.id == id);
        if spec.scenarios.is_empty() {
            return Err(CliError::Config(format!(
                "scenario {id} is not one of the 9 rows (0..=8)"
            )));
        }
    }
    let manifest = build_dataset(&spec, out)?;

    println!("wrote {} + manifest.json", out.join("dataset.jsonl").display());
    println!("{:<4} {:>6} {:>6} {:>10} {:>8} {:>7}", "ID", "Train", "Val", "Attk-Rate", "IP-Ctrl", "Sample");
    for row in &manifest.rows {
        println!(
            "{:<4} {:>6} {:>6} {:>10} {:>8} {:>7}",
            format!("{:02}", row.id),
            row.train,
            row.val,
            row.attk_rate,
            row.ip_ctrl,
            row.sample
        );
    }
    Ok(())
}
