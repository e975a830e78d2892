use crate::{Example, LstmError, Model, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

/// Binary metrics with ROC points `(fpr, tpr)` obtained by sweeping the
/// logit-difference threshold.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub auc: f64,
    pub roc: Vec<(f64, f64)>,
    pub confusion: ConfusionCounts,
}

/// Evaluates the classifier on labeled examples. Attack (label 1) is the
/// positive class; the score is `logit_attack − logit_normal`.
pub fn evaluate(model: &Model, examples: &[Example]) -> Result<Metrics> {
    if examples.is_empty() {
        return Err(LstmError::EmptyDataset);
    }
    let positives = examples.iter().filter(|e| e.label == 1).count();
    if positives == 0 || positives == examples.len() {
        return Err(LstmError::SingleClassDataset);
    }

    let mut scored: Vec<(f64, usize)> = Vec::with_capacity(examples.len());
    for ex in examples {
        let logits = model.forward(&ex.features, &ex.hawkes)?;
        scored.push((logits[1] - logits[0], ex.label));
    }
    Ok(metrics_from_scores(&scored))
}

/// Metrics from `(score, label)` pairs; separated out so tests can
/// cross-check against a brute-force tally.
pub(crate) fn metrics_from_scores(scored: &[(f64, usize)]) -> Metrics {
    let n = scored.len();
    let positives = scored.iter().filter(|(_, l)| *l == 1).count();
    let negatives = n - positives;

    let mut confusion = ConfusionCounts {
        tp: 0,
        fp: 0,
        tn: 0,
        fn_: 0,
    };
    for &(score, label) in scored {
        match (score > 0.0, label == 1) {
            (true, true) => confusion.tp += 1,
            (true, false) => confusion.fp += 1,
            (false, false) => confusion.tn += 1,
            (false, true) => confusion.fn_ += 1,
        }
    }
    let accuracy = (confusion.tp + confusion.tn) as f64 / n as f64;
    let precision = if confusion.tp + confusion.fp > 0 {
        confusion.tp as f64 / (confusion.tp + confusion.fp) as f64
    } else {
        0.0
    };
    let recall = if positives > 0 {
        confusion.tp as f64 / positives as f64
    } else {
        0.0
    };
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };

    // ROC: descending score, one point per distinct threshold
    let mut sorted: Vec<(f64, usize)> = scored.to_vec();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut roc = vec![(0.0, 0.0)];
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut auc = 0.0;
    let mut prev = (0.0f64, 0.0f64);
    let mut k = 0;
    while k < sorted.len() {
        let threshold = sorted[k].0;
        while k < sorted.len() && sorted[k].0 == threshold {
            if sorted[k].1 == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            k += 1;
        }
        let point = (fp as f64 / negatives as f64, tp as f64 / positives as f64);
        auc += (point.0 - prev.0) * (point.1 + prev.1) / 2.0;
        roc.push(point);
        prev = point;
    }
    if prev != (1.0, 1.0) {
        auc += (1.0 - prev.0) * (1.0 + prev.1) / 2.0;
        roc.push((1.0, 1.0));
    }

    Metrics {
        accuracy,
        precision,
        recall,
        f1,
        auc,
        roc,
        confusion,
    }
}
