//! SOME/IP-like traffic generation with time-exciting attack injection.
//!
//! Benign traffic comes from per-ECU jittered periodic schedules (or an MDHP
//! model); attacks follow one of four rate strategies — power-law
//! acceleration (PLA), delayed escalation (DEA), adaptive stealth (ASA) and
//! the mixed dynamic-adjustment form (DAM) — paired row-by-row with an
//! IP-control function that governs how many source addresses the attacker
//! commands over time. Injection times are drawn by thinning with one of
//! three samplers (nonhomogeneous Poisson, normal-gap, double-random
//! Poisson) and accepted with probability `g(t)/g_max`.
//!
//! [`build_dataset`] combines the nine standard scenario rows into a labeled
//! window dataset (128 messages per window, 8:2 train/val split, equal
//! normal/attack proportions) with a sidecar manifest. All randomness is
//! derived from a master seed through named streams, so output is
//! byte-reproducible.

mod benign;
mod dataset;
mod error;
mod inject;
mod message;
mod sampler;
mod scenario;
pub mod seed;

pub use benign::{gen_normal_stream, gen_normal_window, BenignModel, BenignProfile, EcuProfile};
pub use dataset::{
    build_dataset, read_dataset, standard_rows, window_from_record, window_to_record,
    DatasetManifest, DatasetSpec, ManifestRow, ScenarioRow, Split, WindowRecord,
};
pub use error::TrafficError;
pub use inject::{inject_attack, inject_span, InjectOutcome};
pub use message::{window_to_events, Label, Message, Window, SERVICE_ID_BASE, WINDOW_LEN};
pub use sampler::{
    sample_drp, sample_drp_with_rng, sample_nd, sample_nd_with_rng, sample_npp,
    sample_npp_with_rng, DrpIntensity, CANDIDATE_RATE,
};
pub use scenario::{attack_rate, ip_count, AttackScenario, IpStrategy, RateStrategy, SamplerKind};

pub type Result<T> = std::result::Result<T, TrafficError>;
