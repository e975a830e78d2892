use crate::EventSequences;

/// Rectangularized event data plus the precomputed pairwise-difference
/// tensor used by the optimized log-likelihood.
///
/// Every dimension is padded to the length of the longest one
/// (`max_len`) and stacked into a `D×max_len` matrix. Padded slots hold
/// `t_span`, which makes their compensator contribution `e^0 - 1 = 0`
/// vanish identically; correctness of the event-sum term never relies on the
/// padding value, only on the masks.
///
/// `tmpt[i][a][j][b] = padded[i][a] - padded[j][b]` is the 4-D difference
/// tensor; `pair_mask` is true exactly where both positions are real events
/// and the difference is strictly positive. Because each dimension is
/// strictly ascending, for fixed `(i, a, j)` the admissible `b` form a prefix
/// of row `j`; the prefix lengths are cached so the likelihood kernels can
/// walk valid pairs without testing the mask element-wise.
#[derive(Debug, Clone)]
pub struct PaddedEvents {
    dims: usize,
    max_len: usize,
    t_span: f64,
    lens: Vec<usize>,
    padded: Vec<f64>,
    mask: Vec<bool>,
    tmpt: Vec<f64>,
    pair_mask: Vec<bool>,
    pair_lens: Vec<u32>,
}

impl PaddedEvents {
    /// Pads, stacks and precomputes the difference tensor for `events`.
    pub fn build(events: &EventSequences) -> Self {
        let dims = events.dims();
        let max_len = events.max_len();
        let t_span = events.t_span();
        let lens: Vec<usize> = (0..dims).map(|i| events.times(i).len()).collect();

        let mut padded = vec![t_span; dims * max_len];
        let mut mask = vec![false; dims * max_len];
        for i in 0..dims {
            for (k, &t) in events.times(i).iter().enumerate() {
                padded[i * max_len + k] = t;
                mask[i * max_len + k] = true;
            }
        }

        let n4 = dims * max_len * dims * max_len;
        let mut tmpt = vec![0.0; n4];
        let mut pair_mask = vec![false; n4];
        let mut pair_lens = vec![0u32; dims * max_len * dims];
        for i in 0..dims {
            for a in 0..max_len {
                let t_ia = padded[i * max_len + a];
                let valid_a = a < lens[i];
                for j in 0..dims {
                    let base = ((i * max_len + a) * dims + j) * max_len;
                    let mut cutoff = 0u32;
                    for b in 0..max_len {
                        let t_jb = padded[j * max_len + b];
                        tmpt[base + b] = t_ia - t_jb;
                        let ok = valid_a && b < lens[j] && t_ia - t_jb > 0.0;
                        pair_mask[base + b] = ok;
                        if ok {
                            // prefix property: valid b are contiguous from 0
                            debug_assert_eq!(cutoff as usize, b);
                            cutoff = b as u32 + 1;
                        }
                    }
                    pair_lens[(i * max_len + a) * dims + j] = cutoff;
                }
            }
        }

        Self {
            dims,
            max_len,
            t_span,
            lens,
            padded,
            mask,
            tmpt,
            pair_mask,
            pair_lens,
        }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    /// Length of the longest dimension (`maxTimeLen`).
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn t_span(&self) -> f64 {
        self.t_span
    }

    /// Real event count of dimension `i`.
    pub fn len(&self, i: usize) -> usize {
        self.lens[i]
    }

    pub fn is_empty(&self) -> bool {
        self.lens.iter().all(|&l| l == 0)
    }

    pub fn total_events(&self) -> usize {
        self.lens.iter().sum()
    }

    /// Padded timestamp at `(i, k)`; `t_span` where masked out.
    #[inline]
    pub fn padded(&self, i: usize, k: usize) -> f64 {
        self.padded[i * self.max_len + k]
    }

    /// Whether slot `(i, k)` holds a real event.
    #[inline]
    pub fn is_valid(&self, i: usize, k: usize) -> bool {
        self.mask[i * self.max_len + k]
    }

    /// `tmpt[i][a][j][b]`.
    #[inline]
    pub fn tmpt(&self, i: usize, a: usize, j: usize, b: usize) -> f64 {
        self.tmpt[((i * self.max_len + a) * self.dims + j) * self.max_len + b]
    }

    /// `pair_mask[i][a][j][b]`.
    #[inline]
    pub fn pair_mask(&self, i: usize, a: usize, j: usize, b: usize) -> bool {
        self.pair_mask[((i * self.max_len + a) * self.dims + j) * self.max_len + b]
    }

    /// Number of admissible `b` (a prefix of row `j`) for `(i, a, j)`.
    #[inline]
    pub(crate) fn pair_len(&self, i: usize, a: usize, j: usize) -> usize {
        self.pair_lens[(i * self.max_len + a) * self.dims + j] as usize
    }

    /// Contiguous `tmpt` row for `(i, a, j)`, all `b` positions.
    #[inline]
    pub(crate) fn tmpt_row(&self, i: usize, a: usize, j: usize) -> &[f64] {
        let base = ((i * self.max_len + a) * self.dims + j) * self.max_len;
        &self.tmpt[base..base + self.max_len]
    }
}
