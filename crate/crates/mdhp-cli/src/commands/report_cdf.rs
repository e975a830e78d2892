use super::data::load_dump;
use crate::stats::{empirical_cdf, ks_two_sample};
use crate::CliError;
use gds_solver::DumpRecord;
use serde::Serialize;
use std::path::Path;

#[derive(Debug, Serialize)]
struct ParamCdf {
    normal: Vec<(f64, f64)>,
    attack: Vec<(f64, f64)>,
    ks: f64,
}

#[derive(Debug, Serialize)]
struct CdfReport {
    dim_pair: (usize, usize),
    windows_normal: usize,
    windows_attack: usize,
    alpha: ParamCdf,
    beta: ParamCdf,
    theta: ParamCdf,
    /// KS on all α̂ entries pooled across the matrix.
    pooled_alpha_ks: f64,
}

fn param_cdf(normal: Vec<f64>, attack: Vec<f64>) -> ParamCdf {
    let ks = ks_two_sample(&normal, &attack);
    ParamCdf {
        normal: empirical_cdf(&normal),
        attack: empirical_cdf(&attack),
        ks,
    }
}

pub fn run(dump_path: &Path, (i, j): (usize, usize), out: &Path) -> Result<(), CliError> {
    let dump = load_dump(dump_path)?;
    if dump.is_empty() {
        return Err(CliError::Config("parameter dump is empty".into()));
    }
    let dims = dump[0].dims;
    if i >= dims || j >= dims {
        return Err(CliError::Config(format!(
            "dim pair ({i}, {j}) out of range for dims = {dims}"
        )));
    }

    let mut normal: Vec<&DumpRecord> = Vec::new();
    let mut attack: Vec<&DumpRecord> = Vec::new();
    for rec in &dump {
        if rec.dims != dims {
            return Err(CliError::Config("dump mixes dimension counts".into()));
        }
        match rec.label.as_deref() {
            Some("normal") => normal.push(rec),
            Some("attack") => attack.push(rec),
            Some(other) => {
                return Err(CliError::Config(format!("unknown label {other:?} in dump")))
            }
            None => return Err(CliError::Config("dump records carry no labels".into())),
        }
    }
    if normal.is_empty() || attack.is_empty() {
        return Err(CliError::Config(
            "dump contains a single label; CDF comparison needs both".into(),
        ));
    }

    let entry = i * dims + j;
    let pick = |recs: &[&DumpRecord], f: &dyn Fn(&DumpRecord) -> f64| -> Vec<f64> {
        recs.iter().map(|r| f(r)).collect()
    };
    let alpha = param_cdf(
        pick(&normal, &|r| r.alpha[entry]),
        pick(&attack, &|r| r.alpha[entry]),
    );
    let beta = param_cdf(
        pick(&normal, &|r| r.beta[entry]),
        pick(&attack, &|r| r.beta[entry]),
    );
    let theta = param_cdf(
        pick(&normal, &|r| r.theta[i]),
        pick(&attack, &|r| r.theta[i]),
    );

    let pooled = |recs: &[&DumpRecord]| -> Vec<f64> {
        recs.iter().flat_map(|r| r.alpha.iter().copied()).collect()
    };
    let pooled_alpha_ks = ks_two_sample(&pooled(&normal), &pooled(&attack));

    let report = CdfReport {
        dim_pair: (i, j),
        windows_normal: normal.len(),
        windows_attack: attack.len(),
        alpha,
        beta,
        theta,
        pooled_alpha_ks,
    };
    let json = serde_json::to_string_pretty(&report)?;
    std::fs::write(out, json).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;

    println!(
        "dim ({i},{j}): KS alpha {:.3}, beta {:.3}, theta {:.3}; pooled alpha {:.3}",
        report.alpha.ks, report.beta.ks, report.theta.ks, report.pooled_alpha_ks
    );
    Ok(())
}
