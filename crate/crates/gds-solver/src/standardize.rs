use crate::{Result, SolverError};
use hawkes_core::{EventSequences, PaddedEvents};

/// Affine rescaling `T' = (T − min(T)) / (max(T) − min(T)) · (max − min) + min`
/// using the global extrema over all dimensions jointly. The output window
/// length is `max`.
///
/// Errors on an all-empty input and on a degenerate range (all timestamps
/// identical), in which case estimation for the window should be skipped.
pub fn standardize(events: &EventSequences, min: f64, max: f64) -> Result<EventSequences> {
    Ok(standardize_with_scale(events, min, max)?.0)
}

/// [`standardize`] plus the scale factor (standardized units per input
/// unit) needed to convert rate-like estimates back to input units.
pub fn standardize_with_scale(
    events: &EventSequences,
    min: f64,
    max: f64,
) -> Result<(EventSequences, f64)> {
    if !(max > min) {
        return Err(SolverError::InvalidConfig(
            "standardize target max must exceed min".into(),
        ));
    }
    if min < 0.0 {
        return Err(SolverError::InvalidConfig(
            "standardize target min must be >= 0".into(),
        ));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for dim in events.all_times() {
        for &t in dim {
            lo = lo.min(t);
            hi = hi.max(t);
        }
    }
    if events.total_events() == 0 {
        return Err(SolverError::EmptyEvents);
    }
    // ingestion bumps within-dimension ties by 1 ulp, so "all timestamps
    // identical" shows up as a range of a few ulps rather than exactly zero
    if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
        return Err(SolverError::DegenerateTimeRange { at: lo });
    }
    let scale = (max - min) / (hi - lo);
    let times = events
        .all_times()
        .iter()
        .map(|dim| {
            dim.iter()
                .map(|&t| ((t - lo) * scale + min).min(max))
                .collect()
        })
        .collect();
    let out = EventSequences::new(times, max)?;
    Ok((out, scale))
}

/// Pads every dimension to the longest one and precomputes the 4-D
/// difference tensor and pair mask — the one-off work that is independent of
/// the gradient-descent iterations.
pub fn pad_and_stack(events: &EventSequences) -> PaddedEvents {
    PaddedEvents::build(events)
}
