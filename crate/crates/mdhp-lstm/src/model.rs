use crate::cell::{
    cell_backward, cell_forward_tape, hawkes_gate, hawkes_gate_backward, outer_add, xavier,
    CellTape, CellWeights,
};
use crate::{HawkesFeatures, LstmError, Result, MESSAGE_FEATURES};
use ndarray::{Array1, Array2};
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use traffic_gen::{Window, WINDOW_LEN};

/// Network shape. Defaults are desk-scale: a 16-wide sequence-mapping
/// stage, two stacked 32-wide gated cells and a 32-wide head.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelConfig {
    pub input_dim: usize,
    pub smb_dim: usize,
    pub hidden: usize,
    pub layers: usize,
    pub head_hidden: usize,
    /// MDHP dimension count of the Hawkes features.
    pub mdhp_dims: usize,
    /// Reserved position for a residual self-attention block; must stay
    /// disabled.
    pub rsab_enabled: bool,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            input_dim: MESSAGE_FEATURES,
            smb_dim: 16,
            hidden: 32,
            layers: 2,
            head_hidden: 32,
            mdhp_dims: 3,
            rsab_enabled: false,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rsab_enabled {
            return Err(LstmError::RsabUnavailable);
        }
        if self.layers == 0 || self.hidden == 0 || self.smb_dim == 0 || self.mdhp_dims == 0 {
            return Err(LstmError::InvalidConfig(
                "layers, hidden, smb_dim and mdhp_dims must be nonzero".into(),
            ));
        }
        Ok(())
    }
}

/// The classifier: sequence-mapping affine, stacked gated cells, mean
/// pooling and a two-layer head producing `[normal, attack]` logits.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub cfg: ModelConfig,
    pub smb_w: Array2<f64>,
    pub smb_b: Array1<f64>,
    pub cells: Vec<CellWeights>,
    pub head_w1: Array2<f64>,
    pub head_b1: Array1<f64>,
    pub head_w2: Array2<f64>,
    pub head_b2: Array1<f64>,
}

impl Model {
    pub fn zeros(cfg: &ModelConfig) -> Result<Self> {
        cfg.validate()?;
        let cells = (0..cfg.layers)
            .map(|layer| {
                let input = if layer == 0 { cfg.smb_dim } else { cfg.hidden };
                CellWeights::zeros(input, cfg.hidden, cfg.mdhp_dims, cfg.hidden)
            })
            .collect();
        Ok(Self {
            cfg: cfg.clone(),
            smb_w: Array2::zeros((cfg.smb_dim, cfg.input_dim)),
            smb_b: Array1::zeros(cfg.smb_dim),
            cells,
            head_w1: Array2::zeros((cfg.head_hidden, cfg.hidden)),
            head_b1: Array1::zeros(cfg.head_hidden),
            head_w2: Array2::zeros((2, cfg.head_hidden)),
            head_b2: Array1::zeros(2),
        })
    }

    /// Seeded random initialization.
    pub fn init(cfg: &ModelConfig, seed: u64) -> Result<Self> {
        let mut model = Self::zeros(cfg)?;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        xavier(&mut model.smb_w, &mut rng);
        for layer in 0..cfg.layers {
            let input = if layer == 0 { cfg.smb_dim } else { cfg.hidden };
            model.cells[layer] = CellWeights::init(input, cfg.hidden, cfg.mdhp_dims, cfg.hidden, &mut rng);
        }
        xavier(&mut model.head_w1, &mut rng);
        xavier(&mut model.head_w2, &mut rng);
        Ok(model)
    }

    pub fn zeros_like(&self) -> Self {
        let mut z = self.clone();
        z.for_each_tensor_mut(&mut |mut t| t.fill(0.0));
        z
    }

    pub(crate) fn for_each_tensor(&self, f: &mut impl FnMut(ndarray::ArrayViewD<'_, f64>)) {
        f(self.smb_w.view().into_dyn());
        f(self.smb_b.view().into_dyn());
        for c in &self.cells {
            c.for_each_tensor(f);
        }
        f(self.head_w1.view().into_dyn());
        f(self.head_b1.view().into_dyn());
        f(self.head_w2.view().into_dyn());
        f(self.head_b2.view().into_dyn());
    }

    pub(crate) fn for_each_tensor_mut(
        &mut self,
        f: &mut impl FnMut(ndarray::ArrayViewMutD<'_, f64>),
    ) {
        f(self.smb_w.view_mut().into_dyn());
        f(self.smb_b.view_mut().into_dyn());
        for c in &mut self.cells {
            c.for_each_tensor_mut(f);
        }
        f(self.head_w1.view_mut().into_dyn());
        f(self.head_b1.view_mut().into_dyn());
        f(self.head_w2.view_mut().into_dyn());
        f(self.head_b2.view_mut().into_dyn());
    }

    pub fn param_count(&self) -> usize {
        let mut n = 0;
        self.for_each_tensor(&mut |t| n += t.len());
        n
    }

    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        self.for_each_tensor(&mut |t| out.extend(t.iter()));
        out
    }

    pub fn set_from_flat(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.param_count() {
            return Err(LstmError::ShapeMismatch(format!(
                "flat parameter vector has {} entries, model needs {}",
                flat.len(),
                self.param_count()
            )));
        }
        let mut cursor = 0;
        self.for_each_tensor_mut(&mut |mut t| {
            for v in t.iter_mut() {
                *v = flat[cursor];
                cursor += 1;
            }
        });
        Ok(())
    }

    /// Forward pass over a `T×input_dim` feature matrix; returns the two
    /// class logits.
    pub fn forward(&self, feats: &Array2<f64>, hf: &HawkesFeatures) -> Result<[f64; 2]> {
        Ok(self.forward_tape(feats, hf)?.logits)
    }

    /// Forward pass that stores everything the backward pass needs.
    pub fn forward_tape(&self, feats: &Array2<f64>, hf: &HawkesFeatures) -> Result<ForwardTape> {
        if feats.ncols() != self.cfg.input_dim {
            return Err(LstmError::ShapeMismatch(format!(
                "features have {} columns, model expects {}",
                feats.ncols(),
                self.cfg.input_dim
            )));
        }
        let steps = feats.nrows();
        if steps == 0 {
            return Err(LstmError::ShapeMismatch("empty sequence".into()));
        }
        let hidden = self.cfg.hidden;

        // sequence-mapping stage
        let mut smb_out = Vec::with_capacity(steps);
        for t in 0..steps {
            let row = feats.row(t).to_owned();
            smb_out.push((self.smb_w.dot(&row) + &self.smb_b).mapv(f64::tanh));
        }

        // per-layer Hawkes gates, constant over time
        let gates: Vec<Array1<f64>> = self
            .cells
            .iter()
            .map(|c| hawkes_gate(hf, c))
            .collect::<Result<_>>()?;

        let mut tapes: Vec<Vec<CellTape>> = Vec::with_capacity(self.cfg.layers);
        let mut layer_input = smb_out.clone();
        for (layer, cell) in self.cells.iter().enumerate() {
            let mut h = Array1::zeros(hidden);
            let mut c = Array1::zeros(hidden);
            let mut layer_tapes = Vec::with_capacity(steps);
            let mut next_input = Vec::with_capacity(steps);
            for x in &layer_input {
                let (tape, _y) = cell_forward_tape(x, &h, &c, &gates[layer], cell)?;
                h = tape.h.clone();
                c = tape.c.clone();
                next_input.push(tape.h.clone());
                layer_tapes.push(tape);
            }
            tapes.push(layer_tapes);
            layer_input = next_input;
        }

        // mean-pool the last layer's hidden states
        let mut pool = Array1::zeros(hidden);
        for tape in tapes.last().expect("layers >= 1") {
            pool += &tape.h;
        }
        pool /= steps as f64;

        let head_pre = self.head_w1.dot(&pool) + &self.head_b1;
        let head_act = head_pre.mapv(|v| v.max(0.0));
        let logits_arr = self.head_w2.dot(&head_act) + &self.head_b2;
        let logits = [logits_arr[0], logits_arr[1]];
        if !logits[0].is_finite() || !logits[1].is_finite() {
            return Err(LstmError::ShapeMismatch("non-finite logits".into()));
        }
        Ok(ForwardTape {
            feats: feats.clone(),
            smb_out,
            gates,
            tapes,
            pool,
            head_pre,
            head_act,
            logits,
        })
    }

    /// Accumulates the gradients of `d_logits` into `grads` (a
    /// [`Model::zeros_like`] accumulator) by backpropagation through time.
    pub fn backward(
        &self,
        tape: &ForwardTape,
        hf: &HawkesFeatures,
        d_logits: [f64; 2],
        grads: &mut Model,
    ) -> Result<()> {
        let steps = tape.smb_out.len();
        let hidden = self.cfg.hidden;
        let dl = Array1::from(vec![d_logits[0], d_logits[1]]);

        // head
        outer_add(&mut grads.head_w2, &dl, &tape.head_act);
        grads.head_b2 += &dl;
        let mut d_act = self.head_w2.t().dot(&dl);
        for (v, &pre) in d_act.iter_mut().zip(tape.head_pre.iter()) {
            if pre <= 0.0 {
                *v = 0.0;
            }
        }
        outer_add(&mut grads.head_w1, &d_act, &tape.pool);
        grads.head_b1 += &d_act;
        let d_pool = self.head_w1.t().dot(&d_act);

        // mean pooling spreads the gradient uniformly over time
        let mut d_h_layer: Vec<Array1<f64>> = vec![Array1::zeros(hidden); steps];
        for dh in d_h_layer.iter_mut() {
            *dh += &(&d_pool / steps as f64);
        }

        // BPTT, top layer down
        for layer in (0..self.cfg.layers).rev() {
            let cell = &self.cells[layer];
            let mut d_h_next = Array1::zeros(hidden);
            let mut d_c_next = Array1::zeros(hidden);
            let mut d_hks_total = Array1::zeros(hidden);
            let d_y = Array1::zeros(hidden);
            let mut d_below: Vec<Array1<f64>> = Vec::with_capacity(steps);
            for t in (0..steps).rev() {
                let d_h = &d_h_layer[t] + &d_h_next;
                let g = cell_backward(&tape.tapes[layer][t], cell, &d_h, &d_c_next, &d_y)?;
                add_cell_grads(&mut grads.cells[layer], &g.weights);
                d_h_next = g.d_h_prev;
                d_c_next = g.d_c_prev;
                d_hks_total += &g.d_hks;
                d_below.push(g.d_x);
            }
            d_below.reverse();
            hawkes_gate_backward(hf, &tape.gates[layer], &d_hks_total, &mut grads.cells[layer]);
            d_h_layer = d_below;
        }

        // sequence-mapping stage
        for t in 0..steps {
            let d_pre = &d_h_layer[t] * tape.smb_out[t].mapv(|v| 1.0 - v * v);
            let row = tape.feats.row(t).to_owned();
            outer_add(&mut grads.smb_w, &d_pre, &row);
            grads.smb_b += &d_pre;
        }
        Ok(())
    }
}

fn add_cell_grads(acc: &mut CellWeights, delta: &CellWeights) {
    acc.w_i += &delta.w_i;
    acc.w_f += &delta.w_f;
    acc.w_c += &delta.w_c;
    acc.w_o += &delta.w_o;
    acc.u_i += &delta.u_i;
    acc.u_f += &delta.u_f;
    acc.u_c += &delta.u_c;
    acc.u_o += &delta.u_o;
    acc.b_i += &delta.b_i;
    acc.b_f += &delta.b_f;
    acc.b_c += &delta.b_c;
    acc.b_o += &delta.b_o;
    acc.hks_a += &delta.hks_a;
    acc.hks_b += &delta.hks_b;
    acc.hks_c += &delta.hks_c;
    acc.w_y += &delta.w_y;
}

/// Saved forward state of one window.
#[derive(Debug, Clone)]
pub struct ForwardTape {
    pub feats: Array2<f64>,
    pub smb_out: Vec<Array1<f64>>,
    pub gates: Vec<Array1<f64>>,
    pub tapes: Vec<Vec<CellTape>>,
    pub pool: Array1<f64>,
    pub head_pre: Array1<f64>,
    pub head_act: Array1<f64>,
    pub logits: [f64; 2],
}

/// Classifies one window given its precomputed Hawkes features.
pub fn network_forward(w: &Window, hf: &HawkesFeatures, model: &Model) -> Result<[f64; 2]> {
    if w.messages().len() != WINDOW_LEN {
        return Err(LstmError::WindowLength {
            got: w.messages().len(),
            expected: WINDOW_LEN,
        });
    }
    let feats = crate::features::window_features(w);
    model.forward(&feats, hf)
}
