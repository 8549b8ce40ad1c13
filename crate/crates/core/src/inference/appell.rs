//! Appell's F1 through its Euler-type integral representation.
//!
//! `F1(a, b1, b2; c; x1, x2) = Γ(c) / (Γ(a) Γ(c-a)) ∫₀¹ u^{a-1} (1-u)^{c-a-1} (1-u x1)^{-b1} (1-u x2)^{-b2} du`
//!
//! The unit interval is split at ½. On a half whose endpoint factor is
//! singular (exponent below zero) the power substitution `u = v^{1/a}` (or
//! `1-u = v^{1/(c-a)}`) absorbs the singularity exactly. The integrand is
//! evaluated in log space and rescaled by its largest probed value, which keeps
//! large `b` exponents from overflowing.

use crate::betacore::{integrate, ln_beta_unchecked, QuadOptions};
use crate::error::{domain, Error, Result};

const REL_TOL: f64 = 1e-10;
const PROBE_DEPTH: i32 = 60;
const PROBE_GRID: usize = 64;

#[derive(Debug, Clone, Copy)]
struct F1Args {
    a: f64,
    b1: f64,
    b2: f64,
    c: f64,
    x1: f64,
    x2: f64,
    /// `1 - x1` and `1 - x2`, supplied exactly when the caller knows them.
    y1: f64,
    y2: f64,
}

/// `k ln(1 - u x)` with the `k = 0` term dropped regardless of `x`.
fn pow_term(k: f64, u: f64, x: f64) -> f64 {
    if k == 0.0 || x == 0.0 {
        0.0
    } else {
        k * (-u * x).ln_1p()
    }
}

impl F1Args {
    fn validate(&self) -> Result<()> {
        let all = [self.a, self.b1, self.b2, self.c, self.x1, self.x2];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(domain(format!(
                "appell_f1 arguments must be finite, got {all:?}"
            )));
        }
        if !(self.a > 0.0 && self.c - self.a > 0.0) {
            return Err(domain(format!(
                "appell_f1 integral needs a > 0 and c - a > 0, got a = {}, c = {}",
                self.a, self.c
            )));
        }
        for (b, x) in [(self.b1, self.x1), (self.b2, self.x2)] {
            let ok = b == 0.0 || x < 1.0 || (x == 1.0 && b < 0.0);
            if !ok {
                return Err(domain(format!(
                    "appell_f1 integrand is unbounded for b = {b}, x = {x}"
                )));
            }
        }
        Ok(())
    }

    fn ln_tail(&self, u: f64) -> f64 {
        -(pow_term(self.b1, u, self.x1) + pow_term(self.b2, u, self.x2))
    }

    /// [`Self::ln_tail`] at `u = 1 - s`, using `1 - u x = y + s x` to avoid cancellation.
    fn ln_tail_right(&self, s: f64) -> f64 {
        let term = |k: f64, x: f64, y: f64| {
            if k == 0.0 || x == 0.0 {
                0.0
            } else {
                k * (y + s * x).ln()
            }
        };
        -(term(self.b1, self.x1, self.y1) + term(self.b2, self.x2, self.y2))
    }

    /// Log integrand on `[0, ½]`, possibly after `u = v^{1/a}`.
    fn ln_left(&self, v: f64) -> f64 {
        let k = self.c - self.a - 1.0;
        if self.a < 1.0 {
            let u = v.powf(1.0 / self.a);
            k * (-u).ln_1p() + self.ln_tail(u)
        } else {
            let u = v;
            let head = if self.a == 1.0 {
                0.0
            } else {
                (self.a - 1.0) * u.ln()
            };
            head + k * (-u).ln_1p() + self.ln_tail(u)
        }
    }

    /// Scales in `s = 1 - u` where a factor `(1 - u x)^{-b}` with `x` near 1
    /// turns from flat to steep; the peak sits near `s ≈ 1 - x`.
    fn right_knees(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (b, x, y) in [(self.b1, self.x1, self.y1), (self.b2, self.x2, self.y2)] {
            if b > 0.0 && x > 0.5 && y > 0.0 {
                out.extend((-3..=3).map(|j| y * 10f64.powi(j)).filter(|&s| s < 0.5));
            }
        }
        out
    }

    /// Log integrand on `[½, 1]` written in `s = 1 - u`, possibly after `s = v^{1/(c-a)}`.
    fn ln_right(&self, v: f64) -> f64 {
        let ca = self.c - self.a;
        let (s, head) = if ca < 1.0 {
            (v.powf(1.0 / ca), 0.0)
        } else {
            let h = if ca == 1.0 { 0.0 } else { (ca - 1.0) * v.ln() };
            (v, h)
        };
        head + (self.a - 1.0) * (-s).ln_1p() + self.ln_tail_right(s)
    }
}

/// `ln ∫₀^L exp(f(v)) dv` with `f` rescaled by its largest probed value.
///
/// `breaks` are interior points where the integrand may change scale
/// abruptly; each sub-interval is integrated separately so narrow peaks are
/// never stepped over.
fn ln_integral<F: Fn(f64) -> f64>(f: F, upper: f64, breaks: &[f64]) -> Result<f64> {
    let mut probes: Vec<f64> = (1..PROBE_GRID)
        .map(|j| upper * j as f64 / PROBE_GRID as f64)
        .collect();
    for k in 1..=PROBE_DEPTH {
        let h = upper * 2f64.powi(-k);
        probes.push(h);
        probes.push(upper - h);
    }
    probes.extend_from_slice(breaks);
    let shift = probes
        .iter()
        .map(|&v| f(v))
        .filter(|l| l.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    if !shift.is_finite() {
        return Err(domain("appell_f1 integrand vanishes at every probe"));
    }
    let mut edges: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&b| b > 0.0 && b < upper)
        .collect();
    edges.push(0.0);
    edges.push(upper);
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let g = |v: f64| (f(v) - shift).exp();

    // a rough pass sizes the absolute tolerance so negligible pieces stop early
    let rough_opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-4,
        max_intervals: 200,
    };
    let mut rough = 0.0;
    for w in edges.windows(2) {
        rough += match integrate(g, w[0], w[1], rough_opts) {
            Ok(est) => est.value,
            Err(Error::Accuracy { estimate, .. }) => estimate,
            Err(e) => return Err(e),
        };
    }
    let pieces = (edges.len() - 1) as f64;
    let opts = QuadOptions {
        abs_tol: REL_TOL * 0.1 * rough / pieces,
        rel_tol: REL_TOL,
        max_intervals: 4000,
    };
    let mut total = 0.0;
    for w in edges.windows(2) {
        total += integrate(g, w[0], w[1], opts)?.value;
    }
    Ok(shift + total.ln())
}

fn log_add(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Natural log of `F1(a, b1, b2; c; x1, x2)`; the integrand is positive so F1 > 0.
pub fn ln_appell_f1(a: f64, b1: f64, b2: f64, c: f64, x1: f64, x2: f64) -> Result<f64> {
    ln_appell_f1_near_one(a, b1, b2, c, (x1, 1.0 - x1), (x2, 1.0 - x2))
}

/// [`ln_appell_f1`] with each argument given as `(x, 1 - x)`, so arguments
/// within rounding of 1 keep their full relative precision.
pub(crate) fn ln_appell_f1_near_one(
    a: f64,
    b1: f64,
    b2: f64,
    c: f64,
    (x1, y1): (f64, f64),
    (x2, y2): (f64, f64),
) -> Result<f64> {
    let args = F1Args {
        a,
        b1,
        b2,
        c,
        x1,
        x2,
        y1,
        y2,
    };
    args.validate()?;
    let ca = c - a;

    let left = if a < 1.0 {
        ln_integral(|v| args.ln_left(v), 0.5f64.powf(a), &[])? - a.ln()
    } else {
        ln_integral(|v| args.ln_left(v), 0.5, &[])?
    };
    let knees = args.right_knees();
    let right = if ca < 1.0 {
        let knees: Vec<f64> = knees.iter().map(|s| s.powf(ca)).collect();
        ln_integral(|v| args.ln_right(v), 0.5f64.powf(ca), &knees)? - ca.ln()
    } else {
        ln_integral(|v| args.ln_right(v), 0.5, &knees)?
    };
    Ok(log_add(left, right) - ln_beta_unchecked(a, ca))
}

/// Appell's F1 for `a > 0`, `c - a > 0` and arguments keeping the integrand finite.
pub fn appell_f1(a: f64, b1: f64, b2: f64, c: f64, x1: f64, x2: f64) -> Result<f64> {
    ln_appell_f1(a, b1, b2, c, x1, x2).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_arguments_give_one() {
        for (a, c) in [(0.3, 0.8), (1.0, 2.0), (2.5, 7.0), (18.5, 40.0), (0.7, 1.2)] {
            let v = appell_f1(a, 3.0, -2.0, c, 0.0, 0.0).unwrap();
            assert!((v - 1.0).abs() < 1e-10, "a = {a}, c = {c}: {v}");
        }
    }

    #[test]
    fn reduces_to_log_series() {
        // 2F1(1, 1; 2; x) = -ln(1 - x) / x
        let v = appell_f1(1.0, 1.0, 0.0, 2.0, 0.5, 0.9).unwrap();
        assert!((v - 2.0 * std::f64::consts::LN_2).abs() < 1e-12);
        let v = appell_f1(1.0, 0.0, 1.0, 2.0, 123.0, -0.5).unwrap();
        assert!((v - 1.5f64.ln() / 0.5).abs() < 1e-12);
    }

    #[test]
    fn argument_swap_symmetry() {
        let v1 = appell_f1(1.7, 2.0, 0.5, 3.1, 0.3, -0.4).unwrap();
        let v2 = appell_f1(1.7, 0.5, 2.0, 3.1, -0.4, 0.3).unwrap();
        assert!((v1 - v2).abs() < 1e-12 * v1.abs());
    }

    #[test]
    fn domain_checks() {
        assert!(appell_f1(0.0, 1.0, 1.0, 2.0, 0.1, 0.1).is_err());
        assert!(appell_f1(2.0, 1.0, 1.0, 2.0, 0.1, 0.1).is_err());
        assert!(appell_f1(1.0, 1.0, 1.0, 2.0, 1.0, 0.1).is_err());
        assert!(appell_f1(1.0, 1.0, 1.0, 2.0, 1.5, 0.1).is_err());
        assert!(appell_f1(1.0, f64::NAN, 1.0, 2.0, 0.5, 0.1).is_err());
        assert!(appell_f1(1.0, -1.0, 1.0, 3.0, 1.0, 0.1).is_ok());
    }

    #[test]
    fn large_exponent_does_not_overflow() {
        let v = ln_appell_f1(22.5, 139.0, -17.5, 42.5, 1.0 - 1e-4, 1.0 - 1e-8).unwrap();
        assert!(v.is_finite());
    }
}
