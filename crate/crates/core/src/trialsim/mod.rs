//! Discrete-event simulation of single-arm trials with delayed confirmation.
//!
//! Time is measured in days from the first accrual window opening. Accrual
//! pauses while each interim look waits for its data and resumes after a
//! `Continue` verdict.

mod cache;
mod design;
mod engine;
mod participant;
mod policy;

pub use cache::{PredictiveCache, SuperiorityCache};
pub use design::{TimelineConfig, TrialDesign, DAYS_PER_MONTH, DAYS_PER_WEEK};
pub use engine::{
    derive_seed, operating_characteristics, operating_characteristics_cached, simulate_trial,
    simulate_trial_cached, trial_rng, OperatingCharacteristics, TrialResult,
};
pub use participant::{enroll_uniform, simulate_participant, ParticipantRecord};
pub use policy::{decision_ready_day, snapshot, Policy};
