use thiserror::Error;

/// Errors from MDHP type construction and likelihood evaluation.
#[derive(Debug, Clone, Error)]
pub enum HawkesError {
    #[error("dimension mismatch: params have {params} dims, events have {events}")]
    DimensionMismatch { params: usize, events: usize },

    #[error("dimension index {index} out of range (dims = {dims})")]
    DimensionOutOfRange { index: usize, dims: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid event data: {0}")]
    InvalidEvents(String),

    #[error("t_span mismatch: padded events were built with t_span = {padded}, got {given}")]
    TSpanMismatch { padded: f64, given: f64 },

    /// A non-finite value surfaced where a finite one was required. During
    /// optimization this signals divergent parameters to the caller.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}
