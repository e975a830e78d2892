use crate::{HawkesFeatures, LstmError, Model, ModelConfig, Result};
use ndarray::Array2;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

/// One training example: scaled message features, window-level Hawkes
/// features and the class (0 = normal, 1 = attack).
#[derive(Debug, Clone)]
pub struct Example {
    pub features: Array2<f64>,
    pub hawkes: HawkesFeatures,
    pub label: usize,
}

#[derive(Debug, Clone, Default)]
pub struct TrainingSet {
    pub train: Vec<Example>,
    pub val: Vec<Example>,
}

/// Training hyperparameters: 50 epochs of decoupled-weight-decay adaptive
/// moments at learning rate 5e-5 and weight decay 5e-5, seeded as
/// `1024 + rank`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub max_epoch: usize,
    pub learning_rate: f64,
    pub weight_decay: f64,
    pub batch_size: usize,
    pub seed_base: u64,
    pub rank: u64,
    /// Standardized window length used when forming `β·T_span` features;
    /// recorded so evaluation preprocesses identically.
    pub hawkes_tspan: f64,
    pub model: ModelConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            max_epoch: 50,
            learning_rate: 5e-5,
            weight_decay: 5e-5,
            batch_size: 8,
            seed_base: 1024,
            rank: 0,
            hawkes_tspan: 1.0,
            model: ModelConfig::default(),
        }
    }
}

impl TrainConfig {
    pub fn seed(&self) -> u64 {
        self.seed_base + self.rank
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_epoch == 0 || self.batch_size == 0 {
            return Err(LstmError::InvalidConfig(
                "max_epoch and batch_size must be >= 1".into(),
            ));
        }
        if !(self.learning_rate > 0.0) || self.weight_decay < 0.0 {
            return Err(LstmError::InvalidConfig(
                "learning_rate must be > 0 and weight_decay >= 0".into(),
            ));
        }
        self.model.validate()
    }
}

/// Per-epoch accuracy/loss trace entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub train_acc: f64,
    pub val_loss: f64,
    pub val_acc: f64,
}

#[derive(Debug)]
pub struct TrainOutcome {
    pub model: Model,
    pub trace: Vec<EpochStats>,
}

/// Decoupled-weight-decay adaptive-moment minimizer over the flattened
/// parameter vector.
struct AdamW {
    m: Vec<f64>,
    v: Vec<f64>,
    step: u64,
    lr: f64,
    wd: f64,
}

impl AdamW {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(n: usize, lr: f64, wd: f64) -> Self {
        Self {
            m: vec![0.0; n],
            v: vec![0.0; n],
            step: 0,
            lr,
            wd,
        }
    }

    fn step(&mut self, params: &mut [f64], grads: &[f64]) {
        self.step += 1;
        let bc1 = 1.0 - Self::BETA1.powi(self.step as i32);
        let bc2 = 1.0 - Self::BETA2.powi(self.step as i32);
        for k in 0..params.len() {
            self.m[k] = Self::BETA1 * self.m[k] + (1.0 - Self::BETA1) * grads[k];
            self.v[k] = Self::BETA2 * self.v[k] + (1.0 - Self::BETA2) * grads[k] * grads[k];
            let m_hat = self.m[k] / bc1;
            let v_hat = self.v[k] / bc2;
            params[k] -= self.lr * m_hat / (v_hat.sqrt() + Self::EPS);
            params[k] -= self.lr * self.wd * params[k];
        }
    }
}

/// Softmax cross-entropy; returns `(loss, d_logits)`.
fn cross_entropy(logits: [f64; 2], label: usize) -> (f64, [f64; 2]) {
    let m = logits[0].max(logits[1]);
    let e0 = (logits[0] - m).exp();
    let e1 = (logits[1] - m).exp();
    let z = e0 + e1;
    let p = [e0 / z, e1 / z];
    let loss = -(p[label].max(1e-300)).ln();
    let mut d = [p[0], p[1]];
    d[label] -= 1.0;
    (loss, d)
}

/// Trains the classifier with cross-entropy, recording train/val accuracy
/// and loss per epoch. Deterministic for a fixed `(data, cfg)`.
pub fn train(data: &TrainingSet, cfg: &TrainConfig) -> Result<TrainOutcome> {
    cfg.validate()?;
    if data.train.is_empty() || data.val.is_empty() {
        return Err(LstmError::EmptyDataset);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed());
    let mut model = Model::init(&cfg.model, rng.next_u64())?;
    let mut opt = AdamW::new(model.param_count(), cfg.learning_rate, cfg.weight_decay);

    let mut trace = Vec::with_capacity(cfg.max_epoch);
    let mut flat = model.flatten();
    let mut order: Vec<usize> = (0..data.train.len()).collect();

    for epoch in 1..=cfg.max_epoch {
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        let mut correct = 0usize;
        for batch in order.chunks(cfg.batch_size) {
            let mut grads = model.zeros_like();
            for &idx in batch {
                let ex = &data.train[idx];
                let tape = model.forward_tape(&ex.features, &ex.hawkes)?;
                let (loss, mut d_logits) = cross_entropy(tape.logits, ex.label);
                loss_sum += loss;
                let pred = usize::from(tape.logits[1] > tape.logits[0]);
                correct += usize::from(pred == ex.label);
                let scale = 1.0 / batch.len() as f64;
                d_logits[0] *= scale;
                d_logits[1] *= scale;
                model.backward(&tape, &ex.hawkes, d_logits, &mut grads)?;
            }
            let grad_flat = grads.flatten();
            opt.step(&mut flat, &grad_flat);
            model.set_from_flat(&flat)?;
        }
        let train_loss = loss_sum / data.train.len() as f64;
        if !train_loss.is_finite() {
            return Err(LstmError::NanLoss { epoch });
        }
        let train_acc = correct as f64 / data.train.len() as f64;

        let (val_loss, val_acc) = evaluate_split(&model, &data.val)?;
        trace.push(EpochStats {
            epoch,
            train_loss,
            train_acc,
            val_loss,
            val_acc,
        });
    }
    Ok(TrainOutcome { model, trace })
}

fn evaluate_split(model: &Model, examples: &[Example]) -> Result<(f64, f64)> {
    let mut loss_sum = 0.0;
    let mut correct = 0usize;
    for ex in examples {
        let logits = model.forward(&ex.features, &ex.hawkes)?;
        let (loss, _) = cross_entropy(logits, ex.label);
        loss_sum += loss;
        let pred = usize::from(logits[1] > logits[0]);
        correct += usize::from(pred == ex.label);
    }
    Ok((
        loss_sum / examples.len() as f64,
        correct as f64 / examples.len() as f64,
    ))
}

/// Writes the per-epoch trace as a plot-ready CSV.
pub fn write_trace_csv(path: &Path, trace: &[EpochStats]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "epoch,train_loss,train_acc,val_loss,val_acc")?;
    for s in trace {
        writeln!(
            f,
            "{},{:.6},{:.6},{:.6},{:.6}",
            s.epoch, s.train_loss, s.train_acc, s.val_loss, s.val_acc
        )?;
    }
    Ok(())
}
