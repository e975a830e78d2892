//! Multi-dimensional Hawkes process (MDHP) core.
//!
//! An MDHP over `D` dimensions (one per traffic source / ECU) has conditional
//! intensity
//!
//! ```text
//! λ_i(t) = θ_i + Σ_j Σ_{k: T_j^k < t} α_ij · exp(-β_ij (t - T_j^k))
//! ```
//!
//! with a `D×D` excitation matrix `α`, a `D×D` decay matrix `β` and a
//! baseline vector `θ`. This crate holds the domain types plus the numerical
//! kernels everything else builds on:
//!
//! - [`intensity_at`]: direct evaluation of the intensity above;
//! - [`log_likelihood_naive`]: nested-loop log-likelihood, kept as the
//!   correctness oracle;
//! - [`log_likelihood`] / [`log_likelihood_with_grad`]: the padded/masked
//!   formulation operating on a precomputed pairwise-difference tensor
//!   ([`PaddedEvents`]), suitable for iterative estimation;
//! - [`gamma_closed_form`]: the compensator integral in closed form;
//! - [`grad_log_likelihood`]: analytic partial derivatives w.r.t. `α`, `β`, `θ`.
//!
//! All types are immutable after construction and every function is pure, so
//! shared inputs can be used from multiple threads freely.

mod error;
mod events;
mod likelihood;
mod padded;
mod params;

pub use error::HawkesError;
pub use events::EventSequences;
pub use likelihood::{
    gamma_closed_form, grad_log_likelihood, intensity_at, log_likelihood, log_likelihood_naive,
    log_likelihood_with_grad, MdhpGradient, EXP_CLAMP_MAX, LN_ARG_FLOOR,
};
pub use padded::PaddedEvents;
pub use params::MdhpParams;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, HawkesError>;
