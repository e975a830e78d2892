use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrafficError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("dataset generation stalled: {0}")]
    GenerationStalled(String),

    #[error("dataset I/O: {0}")]
    Io(String),

    #[error(transparent)]
    Hawkes(#[from] hawkes_core::HawkesError),

    #[error(transparent)]
    Sim(#[from] point_sim::SimError),
}
