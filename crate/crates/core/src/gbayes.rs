//! Generalized-Bayes quasi-posterior that discounts pending outcomes by a weight `w`.
//!
//! Each participant contributes `x` (response seen by the decision time) and
//! `gamma` (outcome ascertained). Ascertained outcomes count fully; pending
//! ones count `w`. With a beta prior the update stays in the beta family.

use serde::{Deserialize, Serialize};

use crate::betacore::BetaParams;
use crate::error::{config, domain, Result};

/// Weight applied to outcomes that are not yet ascertained; strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Weight(f64);

impl Weight {
    pub fn new(w: f64) -> Result<Self> {
        if !(w > 0.0 && w < 1.0) {
            return Err(config(format!(
                "weight w must lie in the open interval (0, 1), got {w}"
            )));
        }
        Ok(Self(w))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Weight {
    type Error = crate::Error;
    fn try_from(w: f64) -> Result<Self> {
        Self::new(w)
    }
}

impl From<Weight> for f64 {
    fn from(w: Weight) -> f64 {
        w.0
    }
}

/// One participant's state at a decision time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OutcomeFlag {
    /// Response observed by the decision time.
    pub x: bool,
    /// Outcome ascertained (confirmed or definitively negative).
    pub gamma: bool,
}

impl OutcomeFlag {
    pub const CONFIRMED_RESPONSE: Self = Self {
        x: true,
        gamma: true,
    };
    pub const PENDING_RESPONSE: Self = Self {
        x: true,
        gamma: false,
    };
    pub const CONFIRMED_NON_RESPONSE: Self = Self {
        x: false,
        gamma: true,
    };
    pub const PENDING_NON_RESPONSE: Self = Self {
        x: false,
        gamma: false,
    };
}

/// Tallies of the four participant states.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotCounts {
    pub confirmed_responses: u32,
    pub pending_responses: u32,
    pub confirmed_non_responses: u32,
    pub pending_non_responses: u32,
}

impl SnapshotCounts {
    pub fn total(&self) -> u32 {
        self.confirmed_responses
            + self.pending_responses
            + self.confirmed_non_responses
            + self.pending_non_responses
    }

    pub fn confirmed(&self) -> u32 {
        self.confirmed_responses + self.confirmed_non_responses
    }

    pub fn pending(&self) -> u32 {
        self.pending_responses + self.pending_non_responses
    }

    /// Weighted response and non-response totals `(Σ γx + w(1-γ)x, Σ γ(1-x) + w(1-γ)(1-x))`.
    pub fn weighted(&self, w: Weight) -> (f64, f64) {
        let w = w.get();
        (
            self.confirmed_responses as f64 + w * self.pending_responses as f64,
            self.confirmed_non_responses as f64 + w * self.pending_non_responses as f64,
        )
    }
}

/// Ordered per-participant flags at an interim look.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterimSnapshot {
    pub flags: Vec<OutcomeFlag>,
}

impl InterimSnapshot {
    pub fn new(flags: Vec<OutcomeFlag>) -> Self {
        Self { flags }
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn push(&mut self, flag: OutcomeFlag) {
        self.flags.push(flag);
    }

    pub fn counts(&self) -> SnapshotCounts {
        let mut c = SnapshotCounts::default();
        for f in &self.flags {
            match (f.x, f.gamma) {
                (true, true) => c.confirmed_responses += 1,
                (true, false) => c.pending_responses += 1,
                (false, true) => c.confirmed_non_responses += 1,
                (false, false) => c.pending_non_responses += 1,
            }
        }
        c
    }
}

impl FromIterator<OutcomeFlag> for InterimSnapshot {
    fn from_iter<I: IntoIterator<Item = OutcomeFlag>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Negative log pseudo-likelihood of the snapshot at response rate `p`.
pub fn loss(p: f64, data: &InterimSnapshot, w: Weight) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("loss requires p in (0, 1), got {p}")));
    }
    let (resp, non_resp) = data.counts().weighted(w);
    let mut l = 0.0;
    if resp != 0.0 {
        l -= resp * p.ln();
    }
    if non_resp != 0.0 {
        l -= non_resp * (-p).ln_1p();
    }
    Ok(l)
}

/// Beta quasi-posterior from counts.
pub fn quasi_posterior_counts(prior: BetaParams, counts: &SnapshotCounts, w: Weight) -> BetaParams {
    let (resp, non_resp) = counts.weighted(w);
    prior.updated(resp, non_resp)
}

/// Beta quasi-posterior `(α*, β*)` for the snapshot.
pub fn quasi_posterior(prior: BetaParams, data: &InterimSnapshot, w: Weight) -> BetaParams {
    quasi_posterior_counts(prior, &data.counts(), w)
}
