//! Superiority probability, predictive probability, and go/no-go rules.
//!
//! All comparisons are strict: success needs `Pr(p_E > p_S) > λ`, efficacy
//! stopping needs `PP > θ_U`, futility stopping needs `PP < θ_L`. Future
//! responses enter the posterior with full weight.

use serde::{Deserialize, Serialize};

use crate::betacore::{
    beta_pdf, beta_sf, integrate_unit, ln_beta_binomial_pmf, BetaParams, DEFAULT_TOL,
};
use crate::error::{config, domain, Error, Result};

/// Posterior success threshold and the two predictive-probability boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub lambda: f64,
    pub theta_l: f64,
    pub theta_u: f64,
}

impl Thresholds {
    pub fn new(lambda: f64, theta_l: f64, theta_u: f64) -> Result<Self> {
        let th = Self {
            lambda,
            theta_l,
            theta_u,
        };
        th.validate()?;
        Ok(th)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(config(format!(
                "lambda must lie in (0, 1), got {}",
                self.lambda
            )));
        }
        if !(self.theta_l >= 0.0 && self.theta_l < self.theta_u && self.theta_u <= 1.0) {
            return Err(config(format!(
                "thresholds must satisfy 0 <= theta_l < theta_u <= 1, got theta_l = {}, theta_u = {}",
                self.theta_l, self.theta_u
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InterimVerdict {
    StopFutility,
    StopEfficacy,
    Continue,
}

/// `Pr(p_E > p_S)` for independent `p_E ~ Beta(e)` and `p_S ~ Beta(s)`.
pub fn superiority_prob(e: BetaParams, s: BetaParams) -> Result<f64> {
    if e == s {
        // exchangeable continuous pair
        return Ok(0.5);
    }
    let mut bad = None;
    let v = integrate_unit(
        |p| match (beta_sf(p, e), beta_pdf(p, s)) {
            (Ok(tail), Ok(dens)) => tail * dens,
            (Err(err), _) | (_, Err(err)) => {
                bad.get_or_insert(err);
                0.0
            }
        },
        DEFAULT_TOL,
    )?;
    if let Some(err) = bad {
        return Err(err);
    }
    Ok(v.clamp(0.0, 1.0))
}

fn check_future(y: u64, m: u64) -> Result<()> {
    if y > m {
        return Err(domain(format!(
            "future responses y = {y} exceed future size m = {m}"
        )));
    }
    Ok(())
}

/// Superiority probability after `y` responses among `m` further participants.
pub fn superiority_prob_given_y(e_star: BetaParams, y: u64, m: u64, s: BetaParams) -> Result<f64> {
    check_future(y, m)?;
    superiority_prob(e_star.updated(y as f64, (m - y) as f64), s)
}

/// [`min_success_threshold`] with a caller-supplied superiority evaluator
/// (used to memoize across simulated trials).
pub fn min_success_threshold_with<F>(
    e_star: BetaParams,
    m: u64,
    lambda: f64,
    mut superiority: F,
) -> Result<u64>
where
    F: FnMut(BetaParams) -> Result<f64>,
{
    let mut probes: Vec<(u64, f64)> = Vec::new();
    let (mut lo, mut hi) = (0u64, m + 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let pr = superiority(e_star.updated(mid as f64, (m - mid) as f64))?;
        probes.push((mid, pr));
        if pr > lambda {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    probes.sort_unstable_by_key(|&(y, _)| y);
    if probes.windows(2).any(|w| w[1].1 < w[0].1 - 1e-9) {
        return Err(Error::Integrity(format!(
            "superiority probability is not monotone in y: {probes:?}"
        )));
    }
    Ok(lo)
}

/// Smallest `y` in `0..=m` whose updated superiority probability exceeds `λ`, or `m + 1`.
pub fn min_success_threshold(
    e_star: BetaParams,
    m: u64,
    s: BetaParams,
    lambda: f64,
) -> Result<u64> {
    min_success_threshold_with(e_star, m, lambda, |e| superiority_prob(e, s))
}

/// Beta-binomial mass of `{y >= threshold}` over `0..=m`.
pub fn upper_tail_mass(e_star: BetaParams, m: u64, threshold: u64) -> f64 {
    if threshold == 0 {
        return 1.0;
    }
    if threshold > m {
        return 0.0;
    }
    let tail: f64 = (threshold..=m)
        .map(|y| ln_beta_binomial_pmf(y, m, e_star).exp())
        .sum();
    tail.clamp(0.0, 1.0)
}

pub fn predictive_probability_with<F>(
    e_star: BetaParams,
    m: u64,
    lambda: f64,
    superiority: F,
) -> Result<f64>
where
    F: FnMut(BetaParams) -> Result<f64>,
{
    let threshold = min_success_threshold_with(e_star, m, lambda, superiority)?;
    Ok(upper_tail_mass(e_star, m, threshold))
}

/// Probability, under the beta-binomial law of the `m` outstanding outcomes,
/// that the end-of-trial superiority criterion will be met.
pub fn predictive_probability(
    e_star: BetaParams,
    s: BetaParams,
    m: u64,
    lambda: f64,
) -> Result<f64> {
    predictive_probability_with(e_star, m, lambda, |e| superiority_prob(e, s))
}

pub fn interim_decision(pp: f64, th: &Thresholds) -> InterimVerdict {
    if pp < th.theta_l {
        InterimVerdict::StopFutility
    } else if pp > th.theta_u {
        InterimVerdict::StopEfficacy
    } else {
        InterimVerdict::Continue
    }
}

/// End-of-trial declaration: `Pr(p_E > p_S) > λ`.
pub fn final_decision(e_final: BetaParams, s: BetaParams, lambda: f64) -> Result<bool> {
    Ok(superiority_prob(e_final, s)? > lambda)
}
