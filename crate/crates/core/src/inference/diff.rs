//! Posterior of `p_D = p_E - p_S` for independent beta-distributed rates.

use serde::{Deserialize, Serialize};

use super::appell::ln_appell_f1_near_one;
use crate::betacore::{integrate, ln_beta_unchecked, BetaParams, QuadOptions};
use crate::error::{domain, Error, Result};

const MASS_TOL: f64 = 1e-6;
const QUAD_TOL: f64 = 1e-11;
const BISECT_TOL: f64 = 1e-10;

/// Final `(α*_E, β*_E)` and comparator `(α_S, β_S)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffPosterior {
    pub e: BetaParams,
    pub s: BetaParams,
}

impl DiffPosterior {
    pub fn new(e: BetaParams, s: BetaParams) -> Result<Self> {
        BetaParams::new(e.alpha, e.beta)?;
        BetaParams::new(s.alpha, s.beta)?;
        Ok(Self { e, s })
    }

    /// `E[p_E] - E[p_S]`.
    pub fn closed_form_mean(&self) -> f64 {
        self.e.mean() - self.s.mean()
    }

    fn ln_norm(&self) -> f64 {
        ln_beta_unchecked(self.e.alpha, self.e.beta) + ln_beta_unchecked(self.s.alpha, self.s.beta)
    }
}

/// `k ln x` with `0 · ln 0 = 0`.
fn xlogy(k: f64, x: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * x.ln()
    }
}

/// Density of `p_D` at `pd ∈ [-1, 1]`.
pub fn diff_density(pd: f64, post: &DiffPosterior) -> Result<f64> {
    if !(-1.0..=1.0).contains(&pd) {
        return Err(domain(format!("p_D must lie in [-1, 1], got {pd}")));
    }
    let BetaParams {
        alpha: ae,
        beta: be,
    } = post.e;
    let BetaParams {
        alpha: a_s,
        beta: bs,
    } = post.s;
    let total = ae + a_s + be + bs - 2.0;

    let ln_f = if pd > 0.0 {
        ln_beta_unchecked(a_s, be)
            + xlogy(be + bs - 1.0, pd)
            + xlogy(a_s + be - 1.0, 1.0 - pd)
            + ln_appell_f1_near_one(
                be,
                total,
                1.0 - ae,
                be + a_s,
                (1.0 - pd, pd),
                (1.0 - pd * pd, pd * pd),
            )?
    } else if pd < 0.0 {
        ln_beta_unchecked(ae, bs)
            + xlogy(be + bs - 1.0, -pd)
            + xlogy(ae + bs - 1.0, 1.0 + pd)
            + ln_appell_f1_near_one(
                bs,
                1.0 - a_s,
                total,
                ae + bs,
                (1.0 - pd * pd, pd * pd),
                (1.0 + pd, -pd),
            )?
    } else {
        if !(ae + a_s > 1.0 && be + bs > 1.0) {
            return Err(domain(
                "density at p_D = 0 needs alpha_E + alpha_S > 1 and beta_E + beta_S > 1",
            ));
        }
        ln_beta_unchecked(ae + a_s - 1.0, be + bs - 1.0)
    };
    Ok((ln_f - post.ln_norm()).exp())
}

fn quad_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: QUAD_TOL,
        rel_tol: 0.0,
        max_intervals: 4000,
    }
}

/// `∫_lo^hi g(pd) f(pd) dpd`, split at zero so the point `p_D = 0` is never evaluated.
fn integrate_weighted<G: Fn(f64) -> f64>(
    post: &DiffPosterior,
    lo: f64,
    hi: f64,
    g: G,
) -> Result<f64> {
    let mut total = 0.0;
    let mut pieces = Vec::with_capacity(2);
    if lo < 0.0 {
        pieces.push((lo, hi.min(0.0)));
    }
    if hi > 0.0 {
        pieces.push((lo.max(0.0), hi));
    }
    for (a, b) in pieces {
        if a >= b {
            continue;
        }
        let mut bad = None;
        let est = integrate(
            |x| match diff_density(x, post) {
                Ok(f) => g(x) * f,
                Err(e) => {
                    bad.get_or_insert(e);
                    0.0
                }
            },
            a,
            b,
            quad_opts(),
        )?;
        if let Some(e) = bad {
            return Err(e);
        }
        total += est.value;
    }
    Ok(total)
}

/// Total probability mass of the density over `[-1, 1]`.
pub fn diff_total_mass(post: &DiffPosterior) -> Result<f64> {
    integrate_weighted(post, -1.0, 1.0, |_| 1.0)
}

/// `Pr(p_D <= x)`.
pub fn diff_cdf(x: f64, post: &DiffPosterior) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(domain(format!("p_D must lie in [-1, 1], got {x}")));
    }
    integrate_weighted(post, -1.0, x, |_| 1.0)
}

/// Posterior mean of `p_D` by integrating the density.
pub fn diff_mean(post: &DiffPosterior) -> Result<f64> {
    integrate_weighted(post, -1.0, 1.0, |x| x)
}

fn check_mass(post: &DiffPosterior) -> Result<()> {
    let mass = diff_total_mass(post)?;
    if (mass - 1.0).abs() > MASS_TOL {
        return Err(Error::Integrity(format!(
            "density integrates to {mass}, not 1"
        )));
    }
    Ok(())
}

/// Bisection for the point where `tail(x)` crosses `target`; `tail` must be monotone.
fn bisect_tail<F: Fn(f64) -> Result<f64>>(tail: F, target: f64, increasing: bool) -> Result<f64> {
    let (mut lo, mut hi) = (-1.0_f64, 1.0_f64);
    let mut seen: Vec<(f64, f64)> = Vec::new();
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        let v = tail(mid)?;
        seen.push((mid, v));
        let below = if increasing { v < target } else { v > target };
        if below {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    seen.sort_by(|a, b| a.0.total_cmp(&b.0));
    let broken = seen.windows(2).any(|w| {
        if increasing {
            w[1].1 < w[0].1 - MASS_TOL
        } else {
            w[1].1 > w[0].1 + MASS_TOL
        }
    });
    if broken {
        return Err(Error::Integrity(
            "tail probability is not monotone in p_D".into(),
        ));
    }
    Ok(0.5 * (lo + hi))
}

/// Equal-tail credible interval at `level`.
pub fn diff_credible_interval(post: &DiffPosterior, level: f64) -> Result<(f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(domain(format!(
            "credible level must lie in (0, 1), got {level}"
        )));
    }
    check_mass(post)?;
    let tail = 0.5 * (1.0 - level);
    let lower = bisect_tail(|x| integrate_weighted(post, -1.0, x, |_| 1.0), tail, true)?;
    let upper = bisect_tail(|x| integrate_weighted(post, x, 1.0, |_| 1.0), tail, false)?;
    if lower.is_nan() || upper.is_nan() || lower >= upper {
        return Err(Error::Integrity(format!(
            "degenerate interval [{lower}, {upper}]"
        )));
    }
    Ok((lower, upper))
}

/// Density on `points` equally spaced abscissae spanning `[-1, 1]`.
///
/// Where the density diverges at `p_D = 0` the grid carries `+inf`.
pub fn density_grid(post: &DiffPosterior, points: usize) -> Result<Vec<(f64, f64)>> {
    if points < 2 {
        return Err(domain("density grid needs at least two points"));
    }
    let step = 2.0 / (points - 1) as f64;
    (0..points)
        .map(|i| {
            let pd = if i == points - 1 {
                1.0
            } else {
                -1.0 + i as f64 * step
            };
            match diff_density(pd, post) {
                Ok(f) => Ok((pd, f)),
                Err(_) if pd == 0.0 => Ok((pd, f64::INFINITY)),
                Err(e) => Err(e),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn post(ae: f64, be: f64, a_s: f64, bs: f64) -> DiffPosterior {
        DiffPosterior::new(
            BetaParams::new(ae, be).unwrap(),
            BetaParams::new(a_s, bs).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn boundary_zeros() {
        let p = post(18.5, 22.5, 20.0, 80.0);
        assert_eq!(diff_density(1.0, &p).unwrap(), 0.0);
        assert_eq!(diff_density(-1.0, &p).unwrap(), 0.0);
        assert!(diff_density(1.5, &p).is_err());
    }

    #[test]
    fn symmetric_case() {
        let p = post(2.0, 2.0, 2.0, 2.0);
        for i in 1..50 {
            let x = i as f64 / 50.0;
            let (l, r) = (diff_density(-x, &p).unwrap(), diff_density(x, &p).unwrap());
            assert!((l - r).abs() < 1e-9, "x = {x}: {l} vs {r}");
        }
        assert!(diff_mean(&p).unwrap().abs() < 1e-9);
    }

    #[test]
    fn zero_branch_is_the_limit() {
        let p = post(3.0, 4.0, 2.5, 5.0);
        let at_zero = diff_density(0.0, &p).unwrap();
        let right = diff_density(1e-7, &p).unwrap();
        let left = diff_density(-1e-7, &p).unwrap();
        assert!((at_zero - right).abs() < 1e-5 * at_zero);
        assert!((at_zero - left).abs() < 1e-5 * at_zero);
    }

    #[test]
    fn zero_branch_conditions() {
        let p = post(0.3, 0.4, 0.5, 0.5);
        assert!(diff_density(0.0, &p).is_err());
    }

    #[test]
    fn uniform_minus_uniform_is_triangular() {
        let p = post(1.0, 1.0, 1.0, 1.0);
        for &x in &[-0.9, -0.5, -0.1, 0.2, 0.6, 0.95] {
            let f = diff_density(x, &p).unwrap();
            assert!((f - (1.0 - f64::abs(x))).abs() < 1e-10, "x = {x}: {f}");
        }
    }

    #[test]
    fn mean_of_simple_case() {
        let p = post(2.0, 1.0, 1.0, 1.0);
        assert!((diff_mean(&p).unwrap() - 1.0 / 6.0).abs() < 1e-8);
    }

    #[test]
    fn grid_shape() {
        let p = post(2.0, 3.0, 4.0, 5.0);
        let g = density_grid(&p, 5).unwrap();
        assert_eq!(
            g.iter().map(|x| x.0).collect::<Vec<_>>(),
            vec![-1.0, -0.5, 0.0, 0.5, 1.0]
        );
        assert!(g.iter().all(|x| x.1.is_finite() && x.1 >= 0.0));
        assert!(density_grid(&p, 1).is_err());
    }

    #[test]
    fn interval_rejects_bad_level() {
        let p = post(2.0, 3.0, 4.0, 5.0);
        assert!(diff_credible_interval(&p, 1.0).is_err());
        assert!(diff_credible_interval(&p, 0.0).is_err());
    }
}
