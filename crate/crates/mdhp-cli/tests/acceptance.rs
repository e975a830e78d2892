//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `--nocapture` to see them). Tests serialize on a mutex so the
//! timing-bound criteria are not skewed by parallel load.

use gds_solver::{batch_estimate, estimate, DumpRecord, SolverConfig};
use hawkes_core::{
    gamma_closed_form, grad_log_likelihood, log_likelihood, log_likelihood_naive, EventSequences,
    MdhpParams, PaddedEvents,
};
use mdhp_cli::stats::{ks_one_sample, ks_p_value, ks_two_sample};
use mdhp_lstm::{
    cell_backward, cell_forward, cell_forward_tape, train, CellWeights, Example, HawkesFeatures,
    TrainConfig, TrainingSet,
};
use ndarray::Array1;
use point_sim::{simulate_mdhp, SimConfig};
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::{Mutex, OnceLock};
use std::time::Instant;
use traffic_gen::{
    read_dataset, sample_drp_with_rng, sample_nd, sample_npp, window_from_record, Label,
    RateStrategy, Split, WindowRecord, CANDIDATE_RATE,
};

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn mdhp_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mdhp"))
}

fn run_ok(cmd: &mut Command) {
    let out = cmd.output().expect("spawn mdhp");
    assert!(
        out.status.success(),
        "command failed: {:?}\nstdout: {}\nstderr: {}",
        cmd,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn random_instance(
    rng: &mut ChaCha12Rng,
    max_dims: usize,
    max_events: usize,
) -> (MdhpParams, EventSequences) {
    let dims = rng.random_range(1..=max_dims);
    let mut times = Vec::with_capacity(dims);
    for _ in 0..dims {
        let n = rng.random_range(0..=max_events);
        let mut ts: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        ts.sort_by(f64::total_cmp);
        times.push(ts);
    }
    let events = EventSequences::new(times, 1.0).unwrap();
    let params = MdhpParams::new(
        dims,
        (0..dims * dims).map(|_| rng.random_range(0.0..1.0)).collect(),
        (0..dims * dims).map(|_| rng.random_range(0.5..3.0)).collect(),
        (0..dims).map(|_| rng.random_range(0.1..2.0)).collect(),
    )
    .unwrap();
    (params, events)
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

// ---------------------------------------------------------------- 1

#[test]
fn criterion_01_likelihood_oracle_equivalence() {
    let _guard = serial();
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (params, events) = random_instance(&mut rng, 4, 30);
        let pe = PaddedEvents::build(&events);
        let fast = log_likelihood(&params, &pe, events.t_span()).unwrap();
        let naive = log_likelihood_naive(&params, &events).unwrap();
        let rel = (fast - naive).abs() / naive.abs().max(1.0);
        worst = worst.max(rel);
        assert!(rel <= 1e-9, "relative error {rel}");
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 10.0, "oracle comparison took {secs:.1} s");
    println!(
        "criterion 01 PASS: optimized vs naive lnL on 100 instances, worst rel {worst:.2e}, {secs:.2} s"
    );
}

// ---------------------------------------------------------------- 2

/// Adaptive trapezoid of Σ_i ∫ λ_i over [0, T], split at event times, with
/// the excitation state carried recursively between segments.
fn quadrature_total_intensity(params: &MdhpParams, events: &EventSequences) -> f64 {
    let dims = params.dims();
    let t_span = events.t_span();
    let mut merged: Vec<(f64, usize)> = Vec::new();
    for j in 0..dims {
        for &t in events.times(j) {
            merged.push((t, j));
        }
    }
    merged.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut bounds = vec![0.0];
    bounds.extend(merged.iter().map(|&(t, _)| t).filter(|&t| t < t_span));
    bounds.push(t_span);
    bounds.dedup();

    let mut excite = vec![0.0; dims * dims];
    let mut next_event = 0usize;
    let mut total = 0.0;
    for w in bounds.windows(2) {
        let (s, e) = (w[0], w[1]);
        while next_event < merged.len() && merged[next_event].0 <= s {
            let j = merged[next_event].1;
            for i in 0..dims {
                excite[i * dims + j] += 1.0;
            }
            next_event += 1;
        }
        if e > s {
            let f = |u: f64| -> f64 {
                let mut sum = 0.0;
                for i in 0..dims {
                    let mut lam = params.theta(i);
                    for j in 0..dims {
                        lam += params.alpha(i, j)
                            * excite[i * dims + j]
                            * (-params.beta(i, j) * (u - s)).exp();
                    }
                    sum += lam;
                }
                sum
            };
            let trapezoid = |n: usize| -> f64 {
                let h = (e - s) / n as f64;
                let mut acc = 0.5 * (f(s) + f(e));
                for k in 1..n {
                    acc += f(s + h * k as f64);
                }
                acc * h
            };
            let mut n = 128;
            let mut prev = trapezoid(n);
            loop {
                n *= 2;
                let cur = trapezoid(n);
                if (cur - prev).abs() <= 1e-12 * cur.abs().max(1.0) || n >= 1 << 18 {
                    prev = cur;
                    break;
                }
                prev = cur;
            }
            total += prev;
            for i in 0..dims {
                for j in 0..dims {
                    excite[i * dims + j] *= (-params.beta(i, j) * (e - s)).exp();
                }
            }
        }
    }
    total
}

#[test]
fn criterion_02_gamma_closed_form_vs_quadrature() {
    let _guard = serial();
    let mut rng = ChaCha12Rng::seed_from_u64(202);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let dims = 2;
        let mut times = Vec::new();
        for _ in 0..dims {
            let n = rng.random_range(1..=20);
            let mut ts: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
            ts.sort_by(f64::total_cmp);
            times.push(ts);
        }
        let events = EventSequences::new(times, 1.0).unwrap();
        let params = MdhpParams::new(
            dims,
            (0..4).map(|_| rng.random_range(0.0..1.0)).collect(),
            (0..4).map(|_| rng.random_range(0.5..3.0)).collect(),
            (0..2).map(|_| rng.random_range(0.1..2.0)).collect(),
        )
        .unwrap();
        let gamma = gamma_closed_form(&params, &events).unwrap();
        let quad = quadrature_total_intensity(&params, &events);
        let rel = (gamma - quad).abs() / quad.abs().max(1.0);
        worst = worst.max(rel);
        assert!(rel <= 1e-6, "relative error {rel}");
    }
    println!("criterion 02 PASS: closed-form compensator vs quadrature on 50 instances, worst rel {worst:.2e}");
}

// ---------------------------------------------------------------- 3

#[test]
fn criterion_03_analytic_gradients_vs_finite_differences() {
    let _guard = serial();
    let h = 1e-5;
    let mut rng = ChaCha12Rng::seed_from_u64(303);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (params, events) = random_instance(&mut rng, 3, 12);
        let dims = params.dims();
        let pe = PaddedEvents::build(&events);
        let t_span = events.t_span();
        let grad = grad_log_likelihood(&params, &pe, t_span).unwrap();

        let eval = |alpha: &[f64], beta: &[f64], theta: &[f64]| -> f64 {
            let p = MdhpParams::new(dims, alpha.to_vec(), beta.to_vec(), theta.to_vec()).unwrap();
            log_likelihood(&p, &pe, t_span).unwrap()
        };
        let a0 = params.alpha_flat().to_vec();
        let b0 = params.beta_flat().to_vec();
        let t0 = params.theta_flat().to_vec();
        let mut check = |analytic: f64, fd: f64, what: &str| {
            let err = (analytic - fd).abs();
            let denom = analytic.abs().max(fd.abs()).max(1e-3);
            worst = worst.max(err / denom);
            assert!(
                err <= 1e-4 * denom,
                "{what}: analytic {analytic} vs fd {fd}"
            );
        };
        for k in 0..dims * dims {
            let mut ap = a0.clone();
            let mut am = a0.clone();
            ap[k] += h;
            am[k] = (am[k] - h).max(0.0);
            let fd = (eval(&ap, &b0, &t0) - eval(&am, &b0, &t0)) / (ap[k] - am[k]);
            check(grad.d_alpha[k], fd, "d_alpha");
            let mut bp = b0.clone();
            let mut bm = b0.clone();
            bp[k] += h;
            bm[k] -= h;
            let fd = (eval(&a0, &bp, &t0) - eval(&a0, &bm, &t0)) / (2.0 * h);
            check(grad.d_beta[k], fd, "d_beta");
        }
        for k in 0..dims {
            let mut tp = t0.clone();
            let mut tm = t0.clone();
            tp[k] += h;
            tm[k] -= h;
            let fd = (eval(&a0, &b0, &tp) - eval(&a0, &b0, &tm)) / (2.0 * h);
            check(grad.d_theta[k], fd, "d_theta");
        }
    }

    // Poisson score identity: α = 0 ⇒ d_theta = n/θ − T exactly
    let events = EventSequences::new(vec![vec![0.05, 0.3, 0.31, 0.7, 0.95]], 2.0).unwrap();
    let params = MdhpParams::new(1, vec![0.0], vec![1.0], vec![0.37]).unwrap();
    let pe = PaddedEvents::build(&events);
    let g = grad_log_likelihood(&params, &pe, 2.0).unwrap();
    let expected = 5.0 / 0.37 - 2.0;
    assert!(
        (g.d_theta[0] - expected).abs() <= 1e-10,
        "poisson score {} vs {expected}",
        g.d_theta[0]
    );
    println!(
        "criterion 03 PASS: gradients vs central differences on 50 instances (worst rel {worst:.2e}); Poisson score exact"
    );
}

// ---------------------------------------------------------------- 4

#[test]
fn criterion_04_parameter_recovery() {
    let _guard = serial();
    let start = Instant::now();
    let truth = MdhpParams::constant(2, 0.6, 1.5, 0.2).unwrap();
    let t_span = 200.0;
    let cfg = SolverConfig {
        max_epochs: 1200,
        patience: 20,
        standardize_max: t_span,
        ..SolverConfig::default()
    };
    let mut err_a = Vec::new();
    let mut err_b = Vec::new();
    let mut err_t = Vec::new();
    for seed in 0..20u64 {
        let events = simulate_mdhp(&SimConfig::new(truth.clone(), t_span, 90 + seed)).unwrap();
        let r = estimate(&events, &cfg).unwrap();
        let s = r.time_scale;
        for v in r.params.alpha_flat() {
            err_a.push((v * s - 0.6).abs() / 0.6);
        }
        for v in r.params.beta_flat() {
            err_b.push((v * s - 1.5).abs() / 1.5);
        }
        for v in r.params.theta_flat() {
            err_t.push((v * s - 0.2).abs() / 0.2);
        }
    }
    let (ma, mb, mt) = (median(&mut err_a), median(&mut err_b), median(&mut err_t));
    let secs = start.elapsed().as_secs_f64();
    assert!(ma <= 0.30, "median alpha error {ma:.3}");
    assert!(mb <= 0.30, "median beta error {mb:.3}");
    assert!(mt <= 0.30, "median theta error {mt:.3}");
    assert!(secs < 300.0, "recovery took {secs:.1} s");
    println!(
        "criterion 04 PASS: 20-seed recovery medians α {ma:.3} β {mb:.3} θ {mt:.3} (≤ 0.30), {secs:.1} s"
    );
}

// ---------------------------------------------------------------- 5

fn rate_strategies() -> Vec<RateStrategy> {
    vec![
        RateStrategy::Pla { a: 2.0, b: 2.0 },
        RateStrategy::Dea {
            w1: 0.4,
            w2: 0.6,
            alpha1: 2.0,
            alpha2: 2.0,
            gamma: 3.0,
            t1: 0.5,
        },
        RateStrategy::Asa {
            c: 2.0,
            gamma: 5.0,
            t0: 0.5,
        },
        RateStrategy::Dam {
            w: 0.5,
            alpha1: 3.0,
            alpha2: 3.0,
        },
    ]
}

fn quartile_masses<F: Fn(f64) -> f64>(g: &F) -> [f64; 4] {
    let mut masses = [0.0; 4];
    for (q, m) in masses.iter_mut().enumerate() {
        let (a, b) = (q as f64 * 0.25, (q + 1) as f64 * 0.25);
        let n = 4096;
        let h = (b - a) / n as f64;
        let mut acc = 0.5 * (g(a) + g(b));
        for k in 1..n {
            acc += g(a + h * k as f64);
        }
        *m = acc * h;
    }
    let total: f64 = masses.iter().sum();
    masses.map(|v| v / total)
}

fn chi_square_p(observed: &[f64; 4], expected: &[f64; 4]) -> f64 {
    let x2: f64 = observed
        .iter()
        .zip(expected)
        .map(|(o, e)| (o - e).powi(2) / e)
        .sum();
    1.0 - ChiSquared::new(3.0).unwrap().cdf(x2)
}

fn bin_counts(times: &[f64]) -> [f64; 4] {
    let mut o = [0.0; 4];
    for &t in times {
        o[((t * 4.0) as usize).min(3)] += 1.0;
    }
    o
}

#[test]
fn criterion_05_sampler_statistics() {
    let _guard = serial();
    let seeds = 200u64;

    for strategy in rate_strategies() {
        let g = |t: f64| strategy.rate(t);
        let g_max = strategy.grid_max(0.0, 1.0);
        let p = quartile_masses(&g);
        for sampler in ["NPP", "ND"] {
            let mut observed = [0.0; 4];
            let mut total = 0.0;
            for s in 0..seeds {
                let times = match sampler {
                    "NPP" => sample_npp(0.0, 1.0, g, g_max, 51_000 + s),
                    _ => sample_nd(0.0, 1.0, g, g_max, 52_000 + s),
                };
                let o = bin_counts(&times);
                for q in 0..4 {
                    observed[q] += o[q];
                }
                total += times.len() as f64;
            }
            let expected = p.map(|pq| pq * total);
            let p_value = chi_square_p(&observed, &expected);
            assert!(
                p_value > 0.01,
                "{sampler}/{}: chi-square p = {p_value:.4}",
                strategy.name()
            );
        }
    }

    // DRP draws its own intensity per seed
    let mut observed = [0.0; 4];
    let mut expected = [0.0; 4];
    for s in 0..seeds {
        let mut rng = ChaCha12Rng::seed_from_u64(53_000 + s);
        let (intensity, times) = sample_drp_with_rng(0.0, 1.0, &mut rng);
        let o = bin_counts(&times);
        let p = quartile_masses(&|t| intensity.eval(t));
        let n = times.len() as f64;
        for q in 0..4 {
            observed[q] += o[q];
            expected[q] += p[q] * n;
        }
    }
    let p_value = chi_square_p(&observed, &expected);
    assert!(p_value > 0.01, "DRP: chi-square p = {p_value:.4}");

    // constant-rate NPP count ~ Poisson(512)
    let const_seeds = 200u64;
    let total: usize = (0..const_seeds)
        .map(|s| sample_npp(0.0, 1.0, |_| 1.0, 1.0, 54_000 + s).len())
        .sum();
    let mean = total as f64 / const_seeds as f64;
    let sigma = (CANDIDATE_RATE / const_seeds as f64).sqrt();
    assert!(
        (mean - CANDIDATE_RATE).abs() <= 4.0 * sigma,
        "constant-rate NPP mean {mean} vs {CANDIDATE_RATE} ± {}",
        4.0 * sigma
    );
    println!(
        "criterion 05 PASS: quartile χ² p > 0.01 for NPP/ND × 4 strategies + DRP; constant-rate NPP mean {mean:.1} within 4σ of {CANDIDATE_RATE}"
    );
}

// ---------------------------------------------------------------- 6

#[test]
fn criterion_06_point_sim_time_rescaling() {
    let _guard = serial();
    let params = MdhpParams::constant(2, 0.5, 2.0, 0.4).unwrap();
    let t_span = 150.0;
    let dims = 2;
    let mut residuals = Vec::new();
    for seed in 0..20u64 {
        let events = simulate_mdhp(&SimConfig::new(params.clone(), t_span, 600 + seed)).unwrap();
        // compensator Λ_i(t) = θ_i t + Σ_j (α_ij/β_ij) Σ_{b: t_jb < t} (1 − e^{−β_ij (t − t_jb)})
        let compensator = |i: usize, t: f64| -> f64 {
            let mut lam = params.theta(i) * t;
            for j in 0..dims {
                let (a, b) = (params.alpha(i, j), params.beta(i, j));
                for &t_jb in events.times(j) {
                    if t_jb >= t {
                        break;
                    }
                    lam += a / b * (1.0 - (-b * (t - t_jb)).exp());
                }
            }
            lam
        };
        for i in 0..dims {
            let mut prev = 0.0;
            for &t in events.times(i) {
                let cur = compensator(i, t);
                residuals.push(cur - prev);
                prev = cur;
            }
        }
    }
    let d = ks_one_sample(&residuals, |x| 1.0 - (-x).exp());
    let p = ks_p_value(d, residuals.len());
    assert!(
        p > 0.01,
        "KS p = {p:.4} (D = {d:.4}, n = {})",
        residuals.len()
    );
    println!(
        "criterion 06 PASS: time-rescaling residuals vs Exp(1), n = {}, KS D = {d:.4}, p = {p:.3}",
        residuals.len()
    );
}

// ---------------------------------------------------------------- 7 + 8c fixture

struct PipelineFixture {
    _dir: tempfile::TempDir,
    data_dir: PathBuf,
    dump_path: PathBuf,
    pooled_alpha_ks: f64,
}

static PIPELINE: OnceLock<PipelineFixture> = OnceLock::new();

fn separable_pipeline() -> &'static PipelineFixture {
    PIPELINE.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let data_dir = dir.path().join("data");
        let dump_path = dir.path().join("dump.jsonl");
        let cdf_path = dir.path().join("cdf.json");
        let config_path = dir.path().join("config.json");
        // two same-period ECUs; PLA attack row; short-gap-scale solver
        std::fs::write(
            &config_path,
            r#"{
  "gen": {
    "dims": 2,
    "periods": [0.012, 0.012],
    "scenarios": [
      {"id": 0, "rate": {"strategy": "pla", "a": 2.0, "b": 0.5},
       "ip": {"strategy": "pla", "a": 16.0, "b": 2.0}, "sampler": "NPP"}
    ]
  },
  "solver": {"init_beta": 128.0, "learning_rate": 0.1, "max_epochs": 300,
             "patience": 300, "tol_rel": 0.0}
}"#,
        )
        .unwrap();
        run_ok(mdhp_bin().args([
            "gen",
            "--out",
            data_dir.to_str().unwrap(),
            "--config",
            config_path.to_str().unwrap(),
            "--count",
            "200",
            "--seed",
            "2024",
        ]));
        run_ok(mdhp_bin().args([
            "estimate",
            "--data",
            data_dir.to_str().unwrap(),
            "--out",
            dump_path.to_str().unwrap(),
            "--config",
            config_path.to_str().unwrap(),
        ]));
        run_ok(mdhp_bin().args([
            "report-cdf",
            "--dump",
            dump_path.to_str().unwrap(),
            "--dim-pair",
            "1,1",
            "--out",
            cdf_path.to_str().unwrap(),
        ]));
        let report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&cdf_path).unwrap()).unwrap();
        let pooled_alpha_ks = report["pooled_alpha_ks"].as_f64().unwrap();
        PipelineFixture {
            _dir: dir,
            data_dir,
            dump_path,
            pooled_alpha_ks,
        }
    })
}

#[test]
fn criterion_07_parameter_separability() {
    let _guard = serial();
    let fixture = separable_pipeline();

    // cross-check the reported statistic against a direct computation
    let dump = {
        let file = std::fs::File::open(&fixture.dump_path).unwrap();
        gds_solver::read_dump(std::io::BufReader::new(file)).unwrap()
    };
    let pool = |label: &str| -> Vec<f64> {
        dump.iter()
            .filter(|r| r.label.as_deref() == Some(label))
            .flat_map(|r| r.alpha.iter().copied())
            .collect()
    };
    let (normal, attack) = (pool("normal"), pool("attack"));
    assert_eq!(normal.len(), 100 * 4);
    assert_eq!(attack.len(), 100 * 4);
    let ks = ks_two_sample(&normal, &attack);
    assert!((ks - fixture.pooled_alpha_ks).abs() < 1e-12);
    assert!(
        ks >= 0.3,
        "pooled α̂ KS {ks:.3} below 0.3 on the 200-window set"
    );
    println!(
        "criterion 07 PASS: pooled α̂ two-sample KS = {ks:.3} (≥ 0.3) on 100 normal / 100 attack windows"
    );
}

// ---------------------------------------------------------------- 8

#[test]
fn criterion_08a_unit_gate_reduces_to_standard_lstm() {
    let _guard = serial();
    let mut rng = ChaCha12Rng::seed_from_u64(808);
    let (input, hidden) = (4, 3);
    for _ in 0..20 {
        let w = CellWeights::init(input, hidden, 1, hidden, &mut rng);
        let x = Array1::from_shape_fn(input, |_| rng.random_range(-1.0..1.0));
        let h0 = Array1::from_shape_fn(hidden, |_| rng.random_range(-1.0..1.0));
        let c0 = Array1::from_shape_fn(hidden, |_| rng.random_range(-1.0..1.0));
        let ones = Array1::ones(hidden);
        let (h, c, _) = cell_forward(&x, &h0, &c0, &ones, &w).unwrap();

        // independent standard-LSTM reference step
        let sigmoid = |v: f64| 1.0 / (1.0 + (-v).exp());
        for k in 0..hidden {
            let mut a = [w.b_i[k], w.b_f[k], w.b_c[k], w.b_o[k]];
            for j in 0..input {
                a[0] += w.w_i[(k, j)] * x[j];
                a[1] += w.w_f[(k, j)] * x[j];
                a[2] += w.w_c[(k, j)] * x[j];
                a[3] += w.w_o[(k, j)] * x[j];
            }
            for j in 0..hidden {
                a[0] += w.u_i[(k, j)] * h0[j];
                a[1] += w.u_f[(k, j)] * h0[j];
                a[2] += w.u_c[(k, j)] * h0[j];
                a[3] += w.u_o[(k, j)] * h0[j];
            }
            let c_ref = sigmoid(a[1]) * c0[k] + sigmoid(a[0]) * a[2].tanh();
            let h_ref = sigmoid(a[3]) * c_ref.tanh();
            assert!((c[k] - c_ref).abs() <= 1e-12);
            assert!((h[k] - h_ref).abs() <= 1e-12);
        }
    }
    println!("criterion 08a PASS: hks = 1 matches a standard LSTM step to 1e-12 on 20 random cells");
}

#[test]
fn criterion_08b_cell_backward_vs_finite_differences() {
    let _guard = serial();
    let mut rng = ChaCha12Rng::seed_from_u64(818);
    let (input, hidden, output) = (3, 4, 2);
    let h_fd = 1e-5;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let w = CellWeights::init(input, hidden, 1, output, &mut rng);
        let x = Array1::from_shape_fn(input, |_| rng.random_range(-1.0..1.0));
        let h0 = Array1::from_shape_fn(hidden, |_| rng.random_range(-0.8..0.8));
        let c0 = Array1::from_shape_fn(hidden, |_| rng.random_range(-0.8..0.8));
        let hks = Array1::from_shape_fn(hidden, |_| rng.random_range(-0.9..0.9));
        let g_h = Array1::from_shape_fn(hidden, |_| rng.random_range(-1.0..1.0));
        let g_c = Array1::from_shape_fn(hidden, |_| rng.random_range(-1.0..1.0));
        let g_y = Array1::from_shape_fn(output, |_| rng.random_range(-1.0..1.0));

        let loss = |wp: &CellWeights| -> f64 {
            let (h, c, y) = cell_forward(&x, &h0, &c0, &hks, wp).unwrap();
            g_h.dot(&h) + g_c.dot(&c) + g_y.dot(&y)
        };
        let (tape, _) = cell_forward_tape(&x, &h0, &c0, &hks, &w).unwrap();
        let grads = cell_backward(&tape, &w, &g_h, &g_c, &g_y).unwrap();

        // spot-check a pseudo-random subset of parameters per instance
        for _ in 0..12 {
            let pick = rng.random_range(0..9);
            let (r, cx) = (
                rng.random_range(0..hidden),
                rng.random_range(0..input.max(hidden)),
            );
            let (analytic, fd) = match pick {
                0 => fd_pair(&w, &grads.weights, &loss, h_fd, |cw| &mut cw.w_i, r, cx % input),
                1 => fd_pair(&w, &grads.weights, &loss, h_fd, |cw| &mut cw.w_f, r, cx % input),
                2 => fd_pair(&w, &grads.weights, &loss, h_fd, |cw| &mut cw.w_c, r, cx % input),
                3 => fd_pair(&w, &grads.weights, &loss, h_fd, |cw| &mut cw.w_o, r, cx % input),
                4 => fd_pair(&w, &grads.weights, &loss, h_fd, |cw| &mut cw.u_i, r, cx % hidden),
                5 => fd_pair(&w, &grads.weights, &loss, h_fd, |cw| &mut cw.u_f, r, cx % hidden),
                6 => fd_pair(&w, &grads.weights, &loss, h_fd, |cw| &mut cw.u_c, r, cx % hidden),
                7 => fd_pair(&w, &grads.weights, &loss, h_fd, |cw| &mut cw.u_o, r, cx % hidden),
                _ => fd_pair(
                    &w,
                    &grads.weights,
                    &loss,
                    h_fd,
                    |cw| &mut cw.w_y,
                    r % output,
                    cx % hidden,
                ),
            };
            let err = (analytic - fd).abs();
            let denom = analytic.abs().max(fd.abs()).max(1e-3);
            worst = worst.max(err / denom);
            assert!(err <= 1e-4 * denom, "analytic {analytic} vs fd {fd}");
        }
    }
    println!(
        "criterion 08b PASS: manual cell backward vs central differences on 50 instances, worst rel {worst:.2e}"
    );
}

fn fd_pair(
    w: &CellWeights,
    grads: &CellWeights,
    loss: &dyn Fn(&CellWeights) -> f64,
    h: f64,
    field: fn(&mut CellWeights) -> &mut ndarray::Array2<f64>,
    r: usize,
    c: usize,
) -> (f64, f64) {
    let mut wp = w.clone();
    let mut wm = w.clone();
    field(&mut wp)[(r, c)] += h;
    field(&mut wm)[(r, c)] -= h;
    let fd = (loss(&wp) - loss(&wm)) / (2.0 * h);
    let mut probe = w.clone();
    let g = {
        let gm = field(&mut probe);
        let dim = gm.dim();
        // map the same field on the gradient struct
        let mut gclone = grads.clone();
        let gm2 = field(&mut gclone);
        assert_eq!(gm2.dim(), dim);
        gm2[(r, c)]
    };
    (g, fd)
}

fn pipeline_examples(
    records: &[WindowRecord],
    dump: &[DumpRecord],
    split: Split,
) -> Vec<Example> {
    use std::collections::HashMap;
    let by_id: HashMap<u64, &DumpRecord> = dump.iter().map(|d| (d.window_id, d)).collect();
    records
        .iter()
        .filter(|r| r.split == split)
        .filter_map(|rec| {
            let d = by_id.get(&rec.window_id)?;
            let window = window_from_record(rec).unwrap();
            let hawkes =
                HawkesFeatures::new(d.alpha.clone(), d.beta.clone(), d.theta.clone()).unwrap();
            Some(Example {
                features: mdhp_lstm::window_features(&window),
                hawkes,
                label: usize::from(rec.label == Label::Attack),
            })
        })
        .collect()
}

#[test]
fn criterion_08c_training_on_separable_set_and_label_shuffle_control() {
    let _guard = serial();
    let fixture = separable_pipeline();
    let records = read_dataset(&fixture.data_dir.join("dataset.jsonl")).unwrap();
    let dump = {
        let file = std::fs::File::open(&fixture.dump_path).unwrap();
        gds_solver::read_dump(std::io::BufReader::new(file)).unwrap()
    };
    let mut set = TrainingSet {
        train: pipeline_examples(&records, &dump, Split::Train),
        val: pipeline_examples(&records, &dump, Split::Val),
    };
    assert_eq!(set.train.len(), 160);
    assert_eq!(set.val.len(), 40);

    let cfg = TrainConfig {
        model: mdhp_lstm::ModelConfig {
            mdhp_dims: 2,
            ..mdhp_lstm::ModelConfig::default()
        },
        ..TrainConfig::default()
    };
    assert_eq!(cfg.max_epoch, 50);
    assert_eq!(cfg.learning_rate, 5e-5);
    assert_eq!(cfg.weight_decay, 5e-5);
    assert_eq!(cfg.seed(), 1024);

    let outcome = train(&set, &cfg).unwrap();
    let best_val = outcome
        .trace
        .iter()
        .map(|s| s.val_acc)
        .fold(f64::MIN, f64::max);
    assert!(
        best_val >= 0.95,
        "best validation accuracy {best_val:.3} under 0.95"
    );

    // shuffled-label control: no signal may survive
    let mut rng = ChaCha12Rng::seed_from_u64(828);
    let mut labels: Vec<usize> = set
        .train
        .iter()
        .chain(set.val.iter())
        .map(|e| e.label)
        .collect();
    labels.shuffle(&mut rng);
    for (e, l) in set
        .train
        .iter_mut()
        .chain(set.val.iter_mut())
        .zip(labels)
    {
        e.label = l;
    }
    let control = train(&set, &cfg).unwrap();
    let control_best = control
        .trace
        .iter()
        .map(|s| s.val_acc)
        .fold(f64::MIN, f64::max);
    assert!(
        control_best <= 0.6,
        "shuffled-label control reached {control_best:.3}"
    );
    println!(
        "criterion 08c PASS: best val accuracy {best_val:.3} (≥ 0.95) within 50 epochs; shuffled-label control best {control_best:.3} (≤ 0.6)"
    );
}

// ---------------------------------------------------------------- 9

#[test]
fn criterion_09_batch_estimation_smoke() {
    let _guard = serial();
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(909);
    let windows: Vec<EventSequences> = (0..100)
        .map(|_| {
            let times: Vec<Vec<f64>> = (0..10)
                .map(|_| {
                    let n = rng.random_range(50..=100);
                    let mut ts: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
                    ts.sort_by(f64::total_cmp);
                    ts
                })
                .collect();
            EventSequences::new(times, 1.0).unwrap()
        })
        .collect();
    let out = batch_estimate(&windows, &SolverConfig::default(), 1).unwrap();
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 120.0, "batch took {secs:.1} s");
    assert_eq!(out.results.len(), 100);
    assert!(out.results.iter().all(|r| r.is_ok()));
    let r = &out.report;
    assert_eq!(r.dims, 10);
    assert!(r.max_t_len <= 100 && r.min_t_len >= 50);
    assert!(r.window_cost > 0.0 && r.throughput > 0.0);
    println!(
        "criterion 09 PASS: 100 windows (D=10) in {secs:.1} s; report Dim={} Max-T-Len={} Min-T-Len={} Window-Cost={:.4} Throughput={:.1}",
        r.dims, r.max_t_len, r.min_t_len, r.window_cost, r.throughput
    );
}

// ---------------------------------------------------------------- 10

fn run_pipeline(root: &Path, seed: &str) -> (Vec<u8>, Vec<serde_json::Value>, Vec<u8>) {
    let data = root.join("data");
    let dump = root.join("dump.jsonl");
    let ckpt = root.join("model.ckpt");
    let metrics = root.join("metrics.json");
    run_ok(mdhp_bin().args([
        "gen",
        "--out",
        data.to_str().unwrap(),
        "--seed",
        seed,
        "--count",
        "20",
        "--dims",
        "2",
        "--scenario",
        "0",
    ]));
    run_ok(mdhp_bin().args([
        "estimate",
        "--data",
        data.to_str().unwrap(),
        "--out",
        dump.to_str().unwrap(),
        "--workers",
        "1",
    ]));
    run_ok(mdhp_bin().args([
        "train",
        "--data",
        data.to_str().unwrap(),
        "--dump",
        dump.to_str().unwrap(),
        "--checkpoint",
        ckpt.to_str().unwrap(),
        "--epochs",
        "5",
    ]));
    run_ok(mdhp_bin().args([
        "eval",
        "--data",
        data.to_str().unwrap(),
        "--dump",
        dump.to_str().unwrap(),
        "--checkpoint",
        ckpt.to_str().unwrap(),
        "--out",
        metrics.to_str().unwrap(),
    ]));

    let dataset_bytes = std::fs::read(data.join("dataset.jsonl")).unwrap();
    // parameter dump with the wall-clock field stripped
    let dump_values: Vec<serde_json::Value> = std::fs::read_to_string(&dump)
        .unwrap()
        .lines()
        .map(|l| {
            let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
            v.as_object_mut().unwrap().remove("wall_seconds");
            v
        })
        .collect();
    let metrics_bytes = std::fs::read(metrics).unwrap();
    (dataset_bytes, dump_values, metrics_bytes)
}

#[test]
fn criterion_10_end_to_end_determinism() {
    let _guard = serial();
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let a = run_pipeline(dir_a.path(), "777");
    let b = run_pipeline(dir_b.path(), "777");
    assert_eq!(a.0, b.0, "dataset bytes differ");
    assert_eq!(a.1, b.1, "parameter dumps differ (wall-clock excluded)");
    assert_eq!(a.2, b.2, "metric reports differ");

    // a different master seed must actually change the data
    let dir_c = tempfile::tempdir().unwrap();
    let c = run_pipeline(dir_c.path(), "778");
    assert_ne!(a.0, c.0);
    println!(
        "criterion 10 PASS: gen → estimate → train → eval twice with one seed: identical dataset, dumps and metrics; different seed diverges"
    );
}
