use crate::{HawkesFeatures, LstmError, Result};
use ndarray::{Array1, Array2};
use rand::Rng;

#[inline]
fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// All weights of one Hawkes-gated cell. `w_*` map the input, `u_*` the
/// previous hidden state; `hks_a`/`hks_b`/`hks_c` map the MDHP features
/// (`D²`, `D²`, `D` wide) into the gate space; `w_y` is the cell output
/// map.
#[derive(Debug, Clone, PartialEq)]
pub struct CellWeights {
    pub w_i: Array2<f64>,
    pub w_f: Array2<f64>,
    pub w_c: Array2<f64>,
    pub w_o: Array2<f64>,
    pub u_i: Array2<f64>,
    pub u_f: Array2<f64>,
    pub u_c: Array2<f64>,
    pub u_o: Array2<f64>,
    pub b_i: Array1<f64>,
    pub b_f: Array1<f64>,
    pub b_c: Array1<f64>,
    pub b_o: Array1<f64>,
    pub hks_a: Array2<f64>,
    pub hks_b: Array2<f64>,
    pub hks_c: Array2<f64>,
    pub w_y: Array2<f64>,
}

impl CellWeights {
    /// Zero-initialized weights.
    pub fn zeros(input: usize, hidden: usize, mdhp_dims: usize, output: usize) -> Self {
        let d2 = mdhp_dims * mdhp_dims;
        Self {
            w_i: Array2::zeros((hidden, input)),
            w_f: Array2::zeros((hidden, input)),
            w_c: Array2::zeros((hidden, input)),
            w_o: Array2::zeros((hidden, input)),
            u_i: Array2::zeros((hidden, hidden)),
            u_f: Array2::zeros((hidden, hidden)),
            u_c: Array2::zeros((hidden, hidden)),
            u_o: Array2::zeros((hidden, hidden)),
            b_i: Array1::zeros(hidden),
            b_f: Array1::zeros(hidden),
            b_c: Array1::zeros(hidden),
            b_o: Array1::zeros(hidden),
            hks_a: Array2::zeros((hidden, d2)),
            hks_b: Array2::zeros((hidden, d2)),
            hks_c: Array2::zeros((hidden, mdhp_dims)),
            w_y: Array2::zeros((output, hidden)),
        }
    }

    /// Xavier-uniform initialization; the forget-gate bias starts at 1.
    pub fn init<R: Rng>(
        input: usize,
        hidden: usize,
        mdhp_dims: usize,
        output: usize,
        rng: &mut R,
    ) -> Self {
        let mut w = Self::zeros(input, hidden, mdhp_dims, output);
        for m in [
            &mut w.w_i, &mut w.w_f, &mut w.w_c, &mut w.w_o, &mut w.u_i, &mut w.u_f, &mut w.u_c,
            &mut w.u_o, &mut w.hks_a, &mut w.hks_b, &mut w.hks_c, &mut w.w_y,
        ] {
            xavier(m, rng);
        }
        w.b_f.fill(1.0);
        w
    }

    /// Zero weights with the same shapes as `other`; gradient accumulator.
    pub fn zeros_like(other: &Self) -> Self {
        let mut z = other.clone();
        z.for_each_tensor_mut(&mut |mut t| t.fill(0.0));
        z
    }

    pub fn hidden(&self) -> usize {
        self.w_i.nrows()
    }

    pub fn input(&self) -> usize {
        self.w_i.ncols()
    }

    pub(crate) fn for_each_tensor(&self, f: &mut impl FnMut(ndarray::ArrayViewD<'_, f64>)) {
        for m in [
            &self.w_i, &self.w_f, &self.w_c, &self.w_o, &self.u_i, &self.u_f, &self.u_c,
            &self.u_o, &self.hks_a, &self.hks_b, &self.hks_c, &self.w_y,
        ] {
            f(m.view().into_dyn());
        }
        for v in [&self.b_i, &self.b_f, &self.b_c, &self.b_o] {
            f(v.view().into_dyn());
        }
    }

    pub(crate) fn for_each_tensor_mut(
        &mut self,
        f: &mut impl FnMut(ndarray::ArrayViewMutD<'_, f64>),
    ) {
        for m in [
            &mut self.w_i, &mut self.w_f, &mut self.w_c, &mut self.w_o, &mut self.u_i,
            &mut self.u_f, &mut self.u_c, &mut self.u_o, &mut self.hks_a, &mut self.hks_b,
            &mut self.hks_c, &mut self.w_y,
        ] {
            f(m.view_mut().into_dyn());
        }
        for v in [&mut self.b_i, &mut self.b_f, &mut self.b_c, &mut self.b_o] {
            f(v.view_mut().into_dyn());
        }
    }
}

pub(crate) fn xavier<R: Rng>(m: &mut Array2<f64>, rng: &mut R) {
    let limit = (6.0 / (m.nrows() + m.ncols()) as f64).sqrt();
    for v in m.iter_mut() {
        *v = rng.random_range(-limit..limit);
    }
}

/// The Hawkes gate `hks = tanh(A·α − B·(β·T_span) + C·θ)`, computed once
/// per window and reused at every time step.
pub fn hawkes_gate(hf: &HawkesFeatures, w: &CellWeights) -> Result<Array1<f64>> {
    let d = hf.dims();
    if w.hks_a.ncols() != d * d || w.hks_c.ncols() != d {
        return Err(LstmError::ShapeMismatch(format!(
            "gate maps expect D={}, features have D={d}",
            (w.hks_c.ncols()),
        )));
    }
    let z = w.hks_a.dot(&hf.alpha_flat) - w.hks_b.dot(&hf.beta_tspan_flat)
        + w.hks_c.dot(&hf.theta);
    Ok(z.mapv(f64::tanh))
}

/// Saved forward intermediates for one step.
#[derive(Debug, Clone)]
pub struct CellTape {
    pub x: Array1<f64>,
    pub h_prev: Array1<f64>,
    pub c_prev: Array1<f64>,
    pub hks: Array1<f64>,
    pub gate_i: Array1<f64>,
    pub gate_f: Array1<f64>,
    pub gate_o: Array1<f64>,
    pub c_tilde: Array1<f64>,
    pub inner: Array1<f64>,
    pub c: Array1<f64>,
    pub tanh_c: Array1<f64>,
    pub h: Array1<f64>,
}

/// One gated step; returns `(h, c, y)`.
pub fn cell_forward(
    x: &Array1<f64>,
    h_prev: &Array1<f64>,
    c_prev: &Array1<f64>,
    hks: &Array1<f64>,
    w: &CellWeights,
) -> Result<(Array1<f64>, Array1<f64>, Array1<f64>)> {
    let (tape, y) = cell_forward_tape(x, h_prev, c_prev, hks, w)?;
    Ok((tape.h, tape.c, y))
}

/// [`cell_forward`] that also returns the tape needed for the backward
/// pass.
pub fn cell_forward_tape(
    x: &Array1<f64>,
    h_prev: &Array1<f64>,
    c_prev: &Array1<f64>,
    hks: &Array1<f64>,
    w: &CellWeights,
) -> Result<(CellTape, Array1<f64>)> {
    let hidden = w.hidden();
    if x.len() != w.input()
        || h_prev.len() != hidden
        || c_prev.len() != hidden
        || hks.len() != hidden
    {
        return Err(LstmError::ShapeMismatch(format!(
            "cell expects input {} / hidden {hidden}, got x {} h {} c {} hks {}",
            w.input(),
            x.len(),
            h_prev.len(),
            c_prev.len(),
            hks.len()
        )));
    }
    let gate_i = (w.w_i.dot(x) + w.u_i.dot(h_prev) + &w.b_i).mapv(sigmoid);
    let gate_f = (w.w_f.dot(x) + w.u_f.dot(h_prev) + &w.b_f).mapv(sigmoid);
    let c_tilde = (w.w_c.dot(x) + w.u_c.dot(h_prev) + &w.b_c).mapv(f64::tanh);
    let gate_o = (w.w_o.dot(x) + w.u_o.dot(h_prev) + &w.b_o).mapv(sigmoid);
    let inner = &gate_f * c_prev + &gate_i * &c_tilde;
    let c = hks * &inner;
    let tanh_c = c.mapv(f64::tanh);
    let h = &gate_o * &tanh_c;
    let y = w.w_y.dot(&h);
    Ok((
        CellTape {
            x: x.clone(),
            h_prev: h_prev.clone(),
            c_prev: c_prev.clone(),
            hks: hks.clone(),
            gate_i,
            gate_f,
            gate_o,
            c_tilde,
            inner,
            c,
            tanh_c,
            h,
        },
        y,
    ))
}

/// Gradients produced by one backward step: weight gradients plus the
/// gradients flowing to the step inputs.
#[derive(Debug, Clone)]
pub struct CellGrads {
    pub weights: CellWeights,
    pub d_x: Array1<f64>,
    pub d_h_prev: Array1<f64>,
    pub d_c_prev: Array1<f64>,
    pub d_hks: Array1<f64>,
}

/// Exact reverse-mode step. `d_h`, `d_c`, `d_y` are the upstream gradients
/// w.r.t. this step's `h`, `c` and `y`. The Hawkes-gate maps (`hks_a` …)
/// receive no gradient here; accumulate `d_hks` across steps and push it
/// through [`hawkes_gate`] once per window.
pub fn cell_backward(
    tape: &CellTape,
    w: &CellWeights,
    d_h: &Array1<f64>,
    d_c: &Array1<f64>,
    d_y: &Array1<f64>,
) -> Result<CellGrads> {
    let mut grads = CellWeights::zeros_like(w);

    // y = W_y h
    let d_h_total = d_h + &w.w_y.t().dot(d_y);
    outer_add(&mut grads.w_y, d_y, &tape.h);

    // h = o ⊙ tanh(c)
    let d_o = &d_h_total * &tape.tanh_c;
    let d_tanh_c = &d_h_total * &tape.gate_o;
    let d_c_total = d_c + &(d_tanh_c * tape.tanh_c.mapv(|t| 1.0 - t * t));

    // c = hks ⊙ inner
    let d_hks = &d_c_total * &tape.inner;
    let d_inner = &d_c_total * &tape.hks;

    // inner = f ⊙ c_prev + i ⊙ c̃
    let d_f = &d_inner * &tape.c_prev;
    let d_c_prev = &d_inner * &tape.gate_f;
    let d_i = &d_inner * &tape.c_tilde;
    let d_c_tilde = &d_inner * &tape.gate_i;

    // pre-activation gradients
    let da_i = d_i * tape.gate_i.mapv(|v| v * (1.0 - v));
    let da_f = d_f * tape.gate_f.mapv(|v| v * (1.0 - v));
    let da_o = d_o * tape.gate_o.mapv(|v| v * (1.0 - v));
    let da_c = d_c_tilde * tape.c_tilde.mapv(|v| 1.0 - v * v);

    let mut d_x = Array1::zeros(tape.x.len());
    let mut d_h_prev = Array1::zeros(tape.h_prev.len());
    for (da, wm, um, gw, gu, gb) in [
        (&da_i, &w.w_i, &w.u_i, &mut grads.w_i, &mut grads.u_i, &mut grads.b_i),
        (&da_f, &w.w_f, &w.u_f, &mut grads.w_f, &mut grads.u_f, &mut grads.b_f),
        (&da_c, &w.w_c, &w.u_c, &mut grads.w_c, &mut grads.u_c, &mut grads.b_c),
        (&da_o, &w.w_o, &w.u_o, &mut grads.w_o, &mut grads.u_o, &mut grads.b_o),
    ] {
        outer_add(gw, da, &tape.x);
        outer_add(gu, da, &tape.h_prev);
        *gb += da;
        d_x += &wm.t().dot(da);
        d_h_prev += &um.t().dot(da);
    }

    Ok(CellGrads {
        weights: grads,
        d_x,
        d_h_prev,
        d_c_prev,
        d_hks,
    })
}

/// `m += a ⊗ b` without a temporary.
pub(crate) fn outer_add(m: &mut Array2<f64>, a: &Array1<f64>, b: &Array1<f64>) {
    for (r, &av) in a.iter().enumerate() {
        if av == 0.0 {
            continue;
        }
        let mut row = m.row_mut(r);
        for (cell, &bv) in row.iter_mut().zip(b.iter()) {
            *cell += av * bv;
        }
    }
}

/// Backward through the Hawkes gate: given `Σ_t d_hks`, accumulates the
/// gradients of the gate maps.
pub(crate) fn hawkes_gate_backward(
    hf: &HawkesFeatures,
    hks: &Array1<f64>,
    d_hks_total: &Array1<f64>,
    grads: &mut CellWeights,
) {
    let dz = d_hks_total * hks.mapv(|v| 1.0 - v * v);
    outer_add(&mut grads.hks_a, &dz, &hf.alpha_flat);
    let neg_dz = dz.mapv(|v| -v);
    outer_add(&mut grads.hks_b, &neg_dz, &hf.beta_tspan_flat);
    outer_add(&mut grads.hks_c, &dz, &hf.theta);
}
