//! Correlated pairs of binary outcomes (best response, best objective response).
//!
//! The joint law is fixed by the two marginal rates and their Pearson
//! correlation: `p11 = ρ √(π₁(1-π₁)π₂(1-π₂)) + π₁π₂`, the other cells follow
//! from the margins.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};

const CELL_TOL: f64 = 1e-12;

/// Cell probabilities `p_{u1 u2}` of a bivariate Bernoulli law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointBernoulli {
    pub p00: f64,
    pub p10: f64,
    pub p01: f64,
    pub p11: f64,
}

/// True best response rate, best objective response rate, and their correlation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioTruth {
    pub p_br: f64,
    pub p_bor: f64,
    pub rho: f64,
}

impl ScenarioTruth {
    pub fn new(p_br: f64, p_bor: f64, rho: f64) -> Result<Self> {
        let s = Self { p_br, p_bor, rho };
        joint_from_marginals(&s)?;
        Ok(s)
    }

    /// Admissible correlation interval for the scenario's marginals.
    pub fn rho_bounds(&self) -> (f64, f64) {
        rho_bounds(self.p_br, self.p_bor)
    }
}

fn rho_bounds(p1: f64, p2: f64) -> (f64, f64) {
    let sd = (p1 * (1.0 - p1) * p2 * (1.0 - p2)).sqrt();
    if sd == 0.0 {
        return (-1.0, 1.0);
    }
    let lo = ((p1 + p2 - 1.0).max(0.0) - p1 * p2) / sd;
    let hi = (p1.min(p2) - p1 * p2) / sd;
    (lo.max(-1.0), hi.min(1.0))
}

impl JointBernoulli {
    pub fn new(p00: f64, p10: f64, p01: f64, p11: f64) -> Result<Self> {
        let j = Self { p00, p10, p01, p11 };
        let cells = [p00, p10, p01, p11];
        if cells.iter().any(|c| !(0.0..=1.0).contains(c))
            || (cells.iter().sum::<f64>() - 1.0).abs() > CELL_TOL
        {
            return Err(config(format!(
                "joint Bernoulli cells must lie in [0, 1] and sum to one, got {cells:?}"
            )));
        }
        Ok(j)
    }

    pub fn mean_first(&self) -> f64 {
        self.p10 + self.p11
    }

    pub fn mean_second(&self) -> f64 {
        self.p01 + self.p11
    }

    pub fn covariance(&self) -> f64 {
        self.p11 - self.mean_first() * self.mean_second()
    }

    /// Pearson correlation; zero when either margin is degenerate.
    pub fn correlation(&self) -> f64 {
        let (p1, p2) = (self.mean_first(), self.mean_second());
        let sd = (p1 * (1.0 - p1) * p2 * (1.0 - p2)).sqrt();
        if sd == 0.0 {
            0.0
        } else {
            self.covariance() / sd
        }
    }
}

/// Builds the joint law, failing when `ρ` is outside the attainable range.
pub fn joint_from_marginals(s: &ScenarioTruth) -> Result<JointBernoulli> {
    let ScenarioTruth {
        p_br: p1,
        p_bor: p2,
        rho,
    } = *s;
    if !(0.0..=1.0).contains(&p1) || !(0.0..=1.0).contains(&p2) {
        return Err(config(format!(
            "marginal rates must lie in [0, 1], got ({p1}, {p2})"
        )));
    }
    if !(-1.0..=1.0).contains(&rho) {
        return Err(config(format!(
            "correlation must lie in [-1, 1], got {rho}"
        )));
    }
    let var = p1 * (1.0 - p1) * p2 * (1.0 - p2);
    let rho_term = if var == 0.0 {
        if rho != 0.0 {
            log::warn!("degenerate marginal ({p1}, {p2}): correlation {rho} ignored");
        }
        0.0
    } else {
        rho * var.sqrt()
    };
    let p11 = rho_term + p1 * p2;
    let p10 = p1 - p11;
    let p01 = p2 - p11;
    let p00 = 1.0 - p1 - p2 + p11;
    let cells = [p00, p10, p01, p11];
    if cells
        .iter()
        .any(|&c| !(-CELL_TOL..=1.0 + CELL_TOL).contains(&c))
    {
        let (lo, hi) = rho_bounds(p1, p2);
        return Err(Error::Infeasible {
            rho,
            p1,
            p2,
            lo,
            hi,
        });
    }
    let [p00, p10, p01, p11] = cells.map(|c| c.clamp(0.0, 1.0));
    Ok(JointBernoulli { p00, p10, p01, p11 })
}

/// One draw `(u1, u2)` from the four-cell law.
pub fn sample_pair<R: Rng + ?Sized>(j: &JointBernoulli, rng: &mut R) -> (bool, bool) {
    let u: f64 = rng.random();
    if u < j.p11 {
        (true, true)
    } else if u < j.p11 + j.p10 {
        (true, false)
    } else if u < j.p11 + j.p10 + j.p01 {
        (false, true)
    } else {
        (false, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn truth(p1: f64, p2: f64, rho: f64) -> ScenarioTruth {
        ScenarioTruth {
            p_br: p1,
            p_bor: p2,
            rho,
        }
    }

    #[test]
    fn independence() {
        let j = joint_from_marginals(&truth(0.5, 0.5, 0.0)).unwrap();
        assert_eq!((j.p00, j.p10, j.p01, j.p11), (0.25, 0.25, 0.25, 0.25));
    }

    #[test]
    fn correlated_cells() {
        let j = joint_from_marginals(&truth(0.7, 0.4, 0.5)).unwrap();
        let p11 = 0.28 + 0.5 * (0.21f64 * 0.24).sqrt();
        assert!((j.p11 - p11).abs() < 1e-15);
        assert!((j.p11 - 0.392_250).abs() < 5e-7);
        assert!((j.p10 - 0.307_750).abs() < 5e-7);
        assert!((j.p01 - 0.007_750).abs() < 5e-7);
        assert!((j.p00 - 0.292_250).abs() < 5e-7);
        assert!((j.correlation() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn perfect_correlation() {
        let j = joint_from_marginals(&truth(0.2, 0.2, 1.0)).unwrap();
        assert!((j.p00 - 0.8).abs() < 1e-15);
        assert_eq!(j.p10, 0.0);
        assert_eq!(j.p01, 0.0);
        assert!((j.p11 - 0.2).abs() < 1e-15);
    }

    #[test]
    fn infeasible_correlation_names_interval() {
        match joint_from_marginals(&truth(0.9, 0.1, 0.9)) {
            Err(Error::Infeasible { lo, hi, .. }) => {
                assert!((hi - 1.0 / 9.0).abs() < 1e-12);
                assert!((lo + 1.0).abs() < 1e-12);
            }
            other => panic!("expected infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_margins() {
        let j = joint_from_marginals(&truth(1.0, 1.0, 0.7)).unwrap();
        assert_eq!(j.p11, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            assert_eq!(sample_pair(&j, &mut rng), (true, true));
        }
        let j = joint_from_marginals(&truth(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(j.p00, 1.0);
    }

    #[test]
    fn rejects_out_of_range_inputs() {
        assert!(joint_from_marginals(&truth(1.2, 0.5, 0.0)).is_err());
        assert!(joint_from_marginals(&truth(0.5, 0.5, 1.5)).is_err());
        assert!(JointBernoulli::new(0.5, 0.5, 0.5, 0.0).is_err());
    }
}
