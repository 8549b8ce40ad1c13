use std::sync::Arc;

use dashmap::DashMap;

use crate::betacore::BetaParams;
use crate::decision::{predictive_probability_with, superiority_prob};
use crate::error::Result;

/// Memoized `Pr(p_E > p_S)` against a fixed comparator `p_S ~ Beta(s)`.
///
/// Simulated trials revisit the same handful of (quasi-)posterior shapes, so
/// batches share one table. Entries are pure functions of their keys; which
/// thread fills an entry first never changes the stored value.
#[derive(Debug)]
pub struct SuperiorityCache {
    s: BetaParams,
    map: DashMap<(u64, u64), f64>,
}

impl SuperiorityCache {
    pub fn new(s: BetaParams) -> Self {
        Self {
            s,
            map: DashMap::new(),
        }
    }

    pub fn comparator(&self) -> BetaParams {
        self.s
    }

    pub fn prob(&self, e: BetaParams) -> Result<f64> {
        let key = e.bits();
        if let Some(v) = self.map.get(&key) {
            return Ok(*v);
        }
        let v = superiority_prob(e, self.s)?;
        self.map.insert(key, v);
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Memoized predictive probability for one `(s, λ)` pair.
#[derive(Debug)]
pub struct PredictiveCache {
    sup: Arc<SuperiorityCache>,
    lambda: f64,
    map: DashMap<(u64, u64, u64), f64>,
}

impl PredictiveCache {
    pub fn new(s: BetaParams, lambda: f64) -> Self {
        Self::shared(Arc::new(SuperiorityCache::new(s)), lambda)
    }

    /// Shares the superiority table across several thresholds.
    pub fn shared(sup: Arc<SuperiorityCache>, lambda: f64) -> Self {
        Self {
            sup,
            lambda,
            map: DashMap::new(),
        }
    }

    pub fn comparator(&self) -> BetaParams {
        self.sup.comparator()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn predictive_probability(&self, e_star: BetaParams, m: u64) -> Result<f64> {
        let (a, b) = e_star.bits();
        let key = (a, b, m);
        if let Some(v) = self.map.get(&key) {
            return Ok(*v);
        }
        let v = predictive_probability_with(e_star, m, self.lambda, |e| self.sup.prob(e))?;
        self.map.insert(key, v);
        Ok(v)
    }

    /// End-of-trial rule `Pr(p_E > p_S) > λ`.
    pub fn final_decision(&self, e_final: BetaParams) -> Result<bool> {
        Ok(self.sup.prob(e_final)? > self.lambda)
    }
}
