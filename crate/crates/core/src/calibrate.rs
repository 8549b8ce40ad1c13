//! Grid search over `(λ, θ_U)` for type I error and power.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bivariate::ScenarioTruth;
use crate::decision::Thresholds;
use crate::error::{config, Result};
use crate::trialsim::{
    derive_seed, operating_characteristics_cached, Policy, PredictiveCache, SuperiorityCache,
    TrialDesign,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationGrid {
    pub lambdas: Vec<f64>,
    pub theta_us: Vec<f64>,
    pub alpha_max: f64,
    pub power_min: f64,
    pub n_sims: u64,
    pub seed: u64,
}

impl CalibrationGrid {
    /// `{0.65, 0.70, ..., 0.90}` on both axes with the usual 5% / 80% targets.
    pub fn standard(n_sims: u64, seed: u64) -> Self {
        let axis: Vec<f64> = (0..6).map(|i| (65 + 5 * i) as f64 / 100.0).collect();
        Self {
            lambdas: axis.clone(),
            theta_us: axis,
            alpha_max: 0.05,
            power_min: 0.80,
            n_sims,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, axis) in [("lambdas", &self.lambdas), ("theta_us", &self.theta_us)] {
            if axis.is_empty() {
                return Err(config(format!("calibration.{name} must not be empty")));
            }
            if axis.iter().any(|v| !(*v > 0.0 && *v < 1.0)) {
                return Err(config(format!(
                    "calibration.{name} entries must lie in (0, 1)"
                )));
            }
            if axis.windows(2).any(|w| w[0] >= w[1]) {
                return Err(config(format!(
                    "calibration.{name} must be strictly increasing"
                )));
            }
        }
        for (name, v) in [("alpha_max", self.alpha_max), ("power_min", self.power_min)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(config(format!(
                    "calibration.{name} must lie in (0, 1), got {v}"
                )));
            }
        }
        if self.n_sims == 0 {
            return Err(config("calibration.n_sims must be at least 1"));
        }
        Ok(())
    }
}

/// Type I error and power tables; rows follow `theta_us`, columns follow `lambdas`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub lambdas: Vec<f64>,
    pub theta_us: Vec<f64>,
    pub type1: Vec<Vec<f64>>,
    pub power: Vec<Vec<f64>>,
    pub admissible: Vec<Vec<bool>>,
    /// Power-maximal admissible `(λ, θ_U)`.
    pub selected: Option<(f64, f64)>,
    /// Whether the selected cell's power strictly exceeds `power_min`.
    pub meets_power: bool,
    pub diagnostic: Option<String>,
}

/// `type1 <= alpha_max`, cell by cell.
pub fn admissible_mask(type1: &[Vec<f64>], alpha_max: f64) -> Vec<Vec<bool>> {
    type1
        .iter()
        .map(|row| row.iter().map(|&t| t <= alpha_max).collect())
        .collect()
}

/// Index `(row, col)` of the admissible cell with the largest power.
/// Ties go to the larger λ, then the larger θ_U.
pub fn select_cell(power: &[Vec<f64>], admissible: &[Vec<bool>]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (r, row) in power.iter().enumerate() {
        for (c, &p) in row.iter().enumerate() {
            if !admissible[r][c] {
                continue;
            }
            best = match best {
                None => Some((r, c)),
                Some((br, bc)) => {
                    let bp = power[br][bc];
                    if p > bp || (p == bp && (c > bc || (c == bc && r > br))) {
                        Some((r, c))
                    } else {
                        Some((br, bc))
                    }
                }
            };
        }
    }
    best
}

pub fn calibrate(
    template: &TrialDesign,
    null_s: &ScenarioTruth,
    alt_s: &ScenarioTruth,
    g: &CalibrationGrid,
) -> Result<CalibrationResult> {
    g.validate()?;
    template.validate()?;
    let cols = g.lambdas.len();
    let rows = g.theta_us.len();

    let sup = Arc::new(SuperiorityCache::new(template.prior_s));
    let caches: HashMap<u64, PredictiveCache> = g
        .lambdas
        .iter()
        .map(|&l| (l.to_bits(), PredictiveCache::shared(Arc::clone(&sup), l)))
        .collect();

    let cells: Vec<(f64, f64)> = (0..rows * cols)
        .into_par_iter()
        .map(|idx| {
            let (r, c) = (idx / cols, idx % cols);
            let mut d = *template;
            d.thresholds =
                Thresholds::new(g.lambdas[c], template.thresholds.theta_l, g.theta_us[r])?;
            let cache = &caches[&g.lambdas[c].to_bits()];
            let cell_seed = derive_seed(g.seed, idx as u64);
            let null = operating_characteristics_cached(
                &d,
                null_s,
                Policy::Proposed,
                g.n_sims,
                derive_seed(cell_seed, 0),
                cache,
            )?;
            let alt = operating_characteristics_cached(
                &d,
                alt_s,
                Policy::Proposed,
                g.n_sims,
                derive_seed(cell_seed, 1),
                cache,
            )?;
            Ok((null.prn, alt.prn))
        })
        .collect::<Result<_>>()?;

    let type1: Vec<Vec<f64>> = cells
        .chunks(cols)
        .map(|row| row.iter().map(|c| c.0).collect())
        .collect();
    let power: Vec<Vec<f64>> = cells
        .chunks(cols)
        .map(|row| row.iter().map(|c| c.1).collect())
        .collect();
    let admissible = admissible_mask(&type1, g.alpha_max);
    let pick = select_cell(&power, &admissible);
    let (selected, meets_power, diagnostic) = match pick {
        Some((r, c)) => (
            Some((g.lambdas[c], g.theta_us[r])),
            power[r][c] > g.power_min,
            None,
        ),
        None => (
            None,
            false,
            Some(format!(
                "no (lambda, theta_u) cell keeps the type I error at or below {}",
                g.alpha_max
            )),
        ),
    };
    Ok(CalibrationResult {
        lambdas: g.lambdas.clone(),
        theta_us: g.theta_us.clone(),
        type1,
        power,
        admissible,
        selected,
        meets_power,
        diagnostic,
    })
}
