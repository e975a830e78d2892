use crate::{HawkesError, Result};

/// Per-dimension event timestamps over a common observation window.
///
/// One list per dimension (ECU), each strictly ascending, every timestamp in
/// `[0, t_span]`. Lists may be empty. Coincident timestamps within a single
/// dimension are perturbed by +1 ulp at ingestion so strict ascent holds;
/// ties across dimensions are allowed (the strict `T_j^k < t` comparison in
/// the intensity resolves them).
#[derive(Debug, Clone, PartialEq)]
pub struct EventSequences {
    times: Vec<Vec<f64>>,
    t_span: f64,
}

impl EventSequences {
    /// Builds event sequences, validating and normalizing the input.
    ///
    /// Within each dimension the timestamps must be non-decreasing; exact
    /// ties are bumped by one ulp. A timestamp that is strictly smaller than
    /// its predecessor, non-finite, negative or beyond `t_span` is rejected.
    pub fn new(times: Vec<Vec<f64>>, t_span: f64) -> Result<Self> {
        if times.is_empty() {
            return Err(HawkesError::InvalidEvents(
                "at least one dimension is required".into(),
            ));
        }
        if !t_span.is_finite() || t_span <= 0.0 {
            return Err(HawkesError::InvalidEvents(format!(
                "t_span must be positive and finite, got {t_span}"
            )));
        }
        let mut times = times;
        for (dim, seq) in times.iter_mut().enumerate() {
            let mut prev_raw = f64::NEG_INFINITY;
            let mut prev_stored = f64::NEG_INFINITY;
            for t in seq.iter_mut() {
                if !t.is_finite() || *t < 0.0 {
                    return Err(HawkesError::InvalidEvents(format!(
                        "dimension {dim}: timestamp {t} is not in [0, t_span]"
                    )));
                }
                if *t < prev_raw {
                    return Err(HawkesError::InvalidEvents(format!(
                        "dimension {dim}: timestamps not ascending ({t} after {prev_raw})"
                    )));
                }
                prev_raw = *t;
                // cascading +1 ulp bump keeps runs of ties strictly ascending
                if *t <= prev_stored {
                    *t = prev_stored.next_up();
                }
                if *t > t_span {
                    return Err(HawkesError::InvalidEvents(format!(
                        "dimension {dim}: timestamp {t} exceeds t_span {t_span}"
                    )));
                }
                prev_stored = *t;
            }
        }
        Ok(Self { times, t_span })
    }

    /// Number of dimensions `D`.
    pub fn dims(&self) -> usize {
        self.times.len()
    }

    /// Observation-window length.
    pub fn t_span(&self) -> f64 {
        self.t_span
    }

    /// Timestamps of one dimension.
    pub fn times(&self, dim: usize) -> &[f64] {
        &self.times[dim]
    }

    /// All per-dimension timestamp slices.
    pub fn all_times(&self) -> &[Vec<f64>] {
        &self.times
    }

    /// Total event count across dimensions.
    pub fn total_events(&self) -> usize {
        self.times.iter().map(Vec::len).sum()
    }

    /// Length of the longest dimension.
    pub fn max_len(&self) -> usize {
        self.times.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Smallest per-dimension event count.
    pub fn min_len(&self) -> usize {
        self.times.iter().map(Vec::len).min().unwrap_or(0)
    }
}
