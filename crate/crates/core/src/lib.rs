//! Bayesian predictive-probability monitoring for single-arm trials with a
//! binary endpoint whose responses need a confirmation visit.
//!
//! Pending outcomes are folded into a beta quasi-posterior with weight `w`
//! ([`gbayes`]), interim looks use the beta-binomial predictive probability of
//! final success ([`decision`]), and [`trialsim`] simulates whole trials under
//! three interim data policies. [`calibrate`] tunes `(λ, θ_U)` by grid search
//! and [`inference`] summarises the posterior of `p_E - p_S`.

pub mod betacore;
pub mod bivariate;
pub mod calibrate;
pub mod decision;
mod error;
pub mod gbayes;
pub mod inference;
pub mod trialsim;

pub use betacore::BetaParams;
pub use bivariate::{JointBernoulli, ScenarioTruth};
pub use decision::{InterimVerdict, Thresholds};
pub use error::{Error, Result};
pub use gbayes::{InterimSnapshot, OutcomeFlag, SnapshotCounts, Weight};
pub use trialsim::{OperatingCharacteristics, Policy, TimelineConfig, TrialDesign, TrialResult};
