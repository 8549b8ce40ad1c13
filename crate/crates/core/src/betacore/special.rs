//! Log-gamma and log-beta with Stirling-series tails.
//!
//! `ln_gamma` shifts small arguments up to the asymptotic region and uses the
//! Stirling correction there. `ln_beta` follows the classic three-regime split
//! so that the large-argument terms cancel analytically instead of numerically.

use crate::error::{domain, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const STIRLING_CUTOFF: f64 = 10.0;

// B_{2k} / (2k (2k - 1)), k = 1..8
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `ln Γ(x) - [(x - ½) ln x - x + ln √(2π)]` for `x >= 10`.
fn stirling_correction(x: f64) -> f64 {
    debug_assert!(x >= STIRLING_CUTOFF);
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in STIRLING_COEFFS.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x >= STIRLING_CUTOFF {
        return (x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_correction(x);
    }
    // Γ(x) = Γ(x + k) / (x (x+1) ... (x+k-1))
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < STIRLING_CUTOFF {
        prod *= shifted;
        shifted += 1.0;
    }
    ln_gamma_unchecked(shifted) - prod.ln()
}

/// Natural log of the gamma function for positive finite arguments.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(domain(format!(
            "ln_gamma requires a positive finite argument, got {x}"
        )));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_beta_unchecked(a: f64, b: f64) -> f64 {
    let (p, q) = if a < b { (a, b) } else { (b, a) };
    let sum = p + q;
    if p >= STIRLING_CUTOFF {
        let corr = stirling_correction(p) + stirling_correction(q) - stirling_correction(sum);
        -0.5 * q.ln() + LN_SQRT_2PI + corr + (p - 0.5) * (p / sum).ln() + q * (-p / sum).ln_1p()
    } else if q >= STIRLING_CUTOFF {
        let corr = stirling_correction(q) - stirling_correction(sum);
        ln_gamma_unchecked(p) + corr + p - p * sum.ln() + (q - 0.5) * (-p / sum).ln_1p()
    } else {
        ln_gamma_unchecked(p) + ln_gamma_unchecked(q) - ln_gamma_unchecked(sum)
    }
}

/// `ln B(a, b)` for positive finite shapes.
pub fn log_beta_fn(a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && a > 0.0 && b.is_finite() && b > 0.0) {
        return Err(domain(format!(
            "log_beta_fn requires positive finite shapes, got ({a}, {b})"
        )));
    }
    Ok(ln_beta_unchecked(a, b))
}

/// `ln C(n, k)` through the beta function, valid for non-integer arguments too.
pub(crate) fn ln_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    if k == 0 || k == n {
        return 0.0;
    }
    let n = n as f64;
    let k = k as f64;
    -(n + 1.0).ln() - ln_beta_unchecked(k + 1.0, n - k + 1.0)
}
