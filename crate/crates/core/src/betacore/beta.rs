//! Beta density, regularized incomplete beta, and the beta-binomial mass function.

use serde::{Deserialize, Serialize};

use super::special::{ln_beta_unchecked, ln_binomial};
use crate::error::{domain, Result};

const CF_MAX_ITERS: usize = 20_000;
const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;

/// Shape pair of a beta distribution (prior, posterior, or quasi-posterior).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaParams {
    pub alpha: f64,
    pub beta: f64,
}

impl BetaParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && beta.is_finite() && beta > 0.0) {
            return Err(domain(format!(
                "beta shapes must be positive and finite, got ({alpha}, {beta})"
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    /// Shapes after observing `successes` out of `successes + failures` further trials.
    pub fn updated(&self, successes: f64, failures: f64) -> Self {
        Self {
            alpha: self.alpha + successes,
            beta: self.beta + failures,
        }
    }

    pub(crate) fn bits(&self) -> (u64, u64) {
        (self.alpha.to_bits(), self.beta.to_bits())
    }
}

fn check_unit(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("x must lie in [0, 1], got {x}")));
    }
    Ok(())
}

/// Log density; `+inf` where the density diverges at an endpoint.
pub fn ln_beta_pdf(x: f64, p: BetaParams) -> Result<f64> {
    check_unit(x)?;
    let BetaParams { alpha, beta } = p;
    let edge = |shape: f64, other: f64| {
        if shape < 1.0 {
            f64::INFINITY
        } else if shape > 1.0 {
            f64::NEG_INFINITY
        } else {
            -ln_beta_unchecked(1.0, other)
        }
    };
    if x == 0.0 {
        return Ok(edge(alpha, beta));
    }
    if x == 1.0 {
        return Ok(edge(beta, alpha));
    }
    Ok((alpha - 1.0) * x.ln() + (beta - 1.0) * (-x).ln_1p() - ln_beta_unchecked(alpha, beta))
}

pub fn beta_pdf(x: f64, p: BetaParams) -> Result<f64> {
    ln_beta_pdf(x, p).map(f64::exp)
}

/// Modified Lentz evaluation of the incomplete-beta continued fraction.
fn incbeta_cf(x: f64, a: f64, b: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITERS {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// `I_x(a, b)` for `x` on the near side of the mean, where the fraction converges fast.
fn incbeta_lower(x: f64, a: f64, b: f64) -> f64 {
    let ln_front = a * x.ln() + b * (-x).ln_1p() - ln_beta_unchecked(a, b);
    (ln_front.exp() * incbeta_cf(x, a, b) / a).clamp(0.0, 1.0)
}

/// Returns `(I_x(a, b), 1 - I_x(a, b))`, each computed from the better-conditioned side.
fn incbeta_pair(x: f64, p: BetaParams) -> (f64, f64) {
    let BetaParams { alpha: a, beta: b } = p;
    if x <= 0.0 {
        return (0.0, 1.0);
    }
    if x >= 1.0 {
        return (1.0, 0.0);
    }
    if x > a / (a + b) {
        let upper = incbeta_lower(1.0 - x, b, a);
        (1.0 - upper, upper)
    } else {
        let lower = incbeta_lower(x, a, b);
        (lower, 1.0 - lower)
    }
}

/// Regularized incomplete beta `I_x(α, β)`.
pub fn beta_cdf(x: f64, p: BetaParams) -> Result<f64> {
    check_unit(x)?;
    Ok(incbeta_pair(x, p).0)
}

/// Upper tail `1 - I_x(α, β)`, accurate when it is small.
pub fn beta_sf(x: f64, p: BetaParams) -> Result<f64> {
    check_unit(x)?;
    Ok(incbeta_pair(x, p).1)
}

/// Beta-binomial probability of `y` successes in `m` future trials.
pub fn beta_binomial_pmf(y: u64, m: u64, p: BetaParams) -> Result<f64> {
    if y > m {
        return Err(domain(format!(
            "beta-binomial support is 0..={m}, got y = {y}"
        )));
    }
    Ok(ln_beta_binomial_pmf(y, m, p).exp())
}

pub(crate) fn ln_beta_binomial_pmf(y: u64, m: u64, p: BetaParams) -> f64 {
    let yf = y as f64;
    let rest = (m - y) as f64;
    ln_binomial(m, y) + ln_beta_unchecked(p.alpha + yf, p.beta + rest)
        - ln_beta_unchecked(p.alpha, p.beta)
}
