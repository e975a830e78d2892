//! A Hawkes-gated LSTM classifier for message windows.
//!
//! The cell augments the standard LSTM with a multiplicative state derived
//! from estimated MDHP parameters:
//!
//! ```text
//! i   = σ(W_i x + U_i h_prev + b_i)          f, o analogous
//! hks = tanh(A·α − B·(β·T_span) + C·θ)       constant within a window
//! c̃   = tanh(W_c x + U_c h_prev + b_c)
//! c   = hks ∗ (f ∗ c_prev + i ∗ c̃)
//! h   = o ∗ tanh(c)
//! y   = W_y h
//! ```
//!
//! With `hks ≡ 1` the cell reduces exactly to a standard LSTM step. Forward
//! and backward passes are written out by hand (no autodiff); the backward
//! path is validated against central finite differences.
//!
//! The classifier maps each message's ten header fields plus timestamp
//! through an affine+tanh sequence-mapping stage, runs stacked gated cells,
//! mean-pools the hidden states over time and applies a two-layer head for
//! the normal/attack logits. Training uses decoupled-weight-decay adaptive
//! moments with deterministic seeding.

mod cell;
mod checkpoint;
mod error;
mod eval;
mod features;
mod model;
mod train;

pub use cell::{
    cell_backward, cell_forward, cell_forward_tape, hawkes_gate, CellGrads, CellTape, CellWeights,
};
pub use checkpoint::{load_checkpoint, save_checkpoint, CheckpointManifest};
pub use error::LstmError;
pub use eval::{evaluate, ConfusionCounts, Metrics};
pub use features::{window_features, HawkesFeatures, MESSAGE_FEATURES};
pub use model::{network_forward, Model, ModelConfig};
pub use train::{
    train, write_trace_csv, EpochStats, Example, TrainConfig, TrainOutcome, TrainingSet,
};

pub type Result<T> = std::result::Result<T, LstmError>;
