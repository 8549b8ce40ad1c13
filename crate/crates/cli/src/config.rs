//! Strict TOML run configuration.

use std::path::Path;

use serde::Deserialize;

use ppmon_core::calibrate::CalibrationGrid;
use ppmon_core::{
    BetaParams, Policy, ScenarioTruth, Thresholds, TimelineConfig, TrialDesign, Weight,
};

use crate::error::CliError;

/// Configuration shipped with the binary; reproduces the reference design.
pub const DEFAULT_CONFIG: &str = include_str!("../configs/default.toml");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default)]
    pub design: DesignSection,
    #[serde(default)]
    pub timeline: TimelineConfig,
    #[serde(default)]
    pub scenarios: Vec<ScenarioSection>,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub calibration: CalibrationSection,
    #[serde(default)]
    pub diffdist: DiffdistSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DesignSection {
    pub n_min: u32,
    pub n_max: u32,
    pub cohort: u32,
    pub lambda: f64,
    pub theta_l: f64,
    pub theta_u: f64,
    pub w: f64,
    pub prior_e: [f64; 2],
    pub prior_s: [f64; 2],
}

impl Default for DesignSection {
    fn default() -> Self {
        let d = TrialDesign::default();
        Self {
            n_min: d.n_min,
            n_max: d.n_max,
            cohort: d.cohort,
            lambda: d.thresholds.lambda,
            theta_l: d.thresholds.theta_l,
            theta_u: d.thresholds.theta_u,
            w: d.w.get(),
            prior_e: [d.prior_e.alpha, d.prior_e.beta],
            prior_s: [d.prior_s.alpha, d.prior_s.beta],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub name: String,
    pub p_br: f64,
    pub p_bor: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub n_sims: u64,
    pub seed: u64,
    pub policies: Vec<String>,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            n_sims: 10_000,
            seed: 2024,
            policies: Policy::ALL.iter().map(|p| p.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruthSection {
    pub p_br: f64,
    pub p_bor: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationSection {
    pub lambdas: Vec<f64>,
    pub theta_us: Vec<f64>,
    pub alpha_max: f64,
    pub power_min: f64,
    pub null: TruthSection,
    pub alternative: TruthSection,
}

impl Default for CalibrationSection {
    fn default() -> Self {
        let g = CalibrationGrid::standard(1, 0);
        Self {
            lambdas: g.lambdas,
            theta_us: g.theta_us,
            alpha_max: g.alpha_max,
            power_min: g.power_min,
            null: TruthSection {
                p_br: 0.2,
                p_bor: 0.2,
                rho: 0.5,
            },
            alternative: TruthSection {
                p_br: 0.7,
                p_bor: 0.5,
                rho: 0.5,
            },
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiffdistSection {
    /// Posterior of the experimental rate.
    pub e: [f64; 2],
    /// Comparator law; the design's `prior_s` when absent.
    pub s: Option<[f64; 2]>,
    pub points: usize,
    pub level: f64,
}

impl Default for DiffdistSection {
    fn default() -> Self {
        Self {
            e: [18.5, 22.5],
            s: None,
            points: 401,
            level: 0.95,
        }
    }
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub design: TrialDesign,
    pub scenarios: Vec<(String, ScenarioTruth)>,
    pub policies: Vec<Policy>,
    pub n_sims: u64,
    pub seed: u64,
    pub calibration: CalibrationSection,
    pub diffdist: DiffdistSection,
}

fn reason(e: ppmon_core::Error) -> String {
    match e {
        ppmon_core::Error::Config(m) => m,
        other => other.to_string(),
    }
}

fn beta_params(name: &str, v: [f64; 2]) -> Result<BetaParams, CliError> {
    BetaParams::new(v[0], v[1]).map_err(|e| CliError::Config(format!("{name}: {}", reason(e))))
}

fn truth(name: &str, p_br: f64, p_bor: f64, rho: f64) -> Result<ScenarioTruth, CliError> {
    ScenarioTruth::new(p_br, p_bor, rho)
        .map_err(|e| CliError::Config(format!("{name}: {}", reason(e))))
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        raw.validate()
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// The loaded file, or the bundled default when no path is given.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            Some(p) => Self::from_path(p),
            None => Self::from_toml(DEFAULT_CONFIG),
        }
    }

    pub fn null_truth(&self) -> Result<ScenarioTruth, CliError> {
        let t = &self.calibration.null;
        truth("calibration.null", t.p_br, t.p_bor, t.rho)
    }

    pub fn alt_truth(&self) -> Result<ScenarioTruth, CliError> {
        let t = &self.calibration.alternative;
        truth("calibration.alternative", t.p_br, t.p_bor, t.rho)
    }

    pub fn grid(&self) -> CalibrationGrid {
        CalibrationGrid {
            lambdas: self.calibration.lambdas.clone(),
            theta_us: self.calibration.theta_us.clone(),
            alpha_max: self.calibration.alpha_max,
            power_min: self.calibration.power_min,
            n_sims: self.n_sims,
            seed: self.seed,
        }
    }

    pub fn diff_comparator(&self) -> Result<BetaParams, CliError> {
        match self.diffdist.s {
            Some(s) => beta_params("diffdist.s", s),
            None => Ok(self.design.prior_s),
        }
    }
}

impl RawConfig {
    fn validate(self) -> Result<RunConfig, CliError> {
        let d = &self.design;
        let thresholds = Thresholds::new(d.lambda, d.theta_l, d.theta_u)
            .map_err(|e| CliError::Config(format!("design: {}", reason(e))))?;
        let w =
            Weight::new(d.w).map_err(|e| CliError::Config(format!("design.w: {}", reason(e))))?;
        let design = TrialDesign {
            n_min: d.n_min,
            n_max: d.n_max,
            cohort: d.cohort,
            thresholds,
            w,
            prior_e: beta_params("design.prior_e", d.prior_e)?,
            prior_s: beta_params("design.prior_s", d.prior_s)?,
            timeline: self.timeline,
        };
        design.validate().map_err(|e| CliError::Config(reason(e)))?;

        let mut scenarios = Vec::with_capacity(self.scenarios.len());
        for s in &self.scenarios {
            let t = truth(&format!("scenario {}", s.name), s.p_br, s.p_bor, s.rho)?;
            scenarios.push((s.name.clone(), t));
        }
        let policies = self
            .run
            .policies
            .iter()
            .map(|p| {
                p.parse::<Policy>()
                    .map_err(|e| CliError::Config(format!("run.policies: {}", reason(e))))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if policies.is_empty() {
            return Err(CliError::Config("run.policies must not be empty".into()));
        }
        if self.run.n_sims == 0 {
            return Err(CliError::Config("run.n_sims must be at least 1".into()));
        }

        let cfg = RunConfig {
            design,
            scenarios,
            policies,
            n_sims: self.run.n_sims,
            seed: self.run.seed,
            calibration: self.calibration,
            diffdist: self.diffdist,
        };
        cfg.null_truth()?;
        cfg.alt_truth()?;
        cfg.grid()
            .validate()
            .map_err(|e| CliError::Config(reason(e)))?;
        beta_params("diffdist.e", cfg.diffdist.e)?;
        cfg.diff_comparator()?;
        if cfg.diffdist.points < 2 {
            return Err(CliError::Config(
                "diffdist.points must be at least 2".into(),
            ));
        }
        if !(cfg.diffdist.level > 0.0 && cfg.diffdist.level < 1.0) {
            return Err(CliError::Config(format!(
                "diffdist.level must lie in (0, 1), got {}",
                cfg.diffdist.level
            )));
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_default_matches_reference_design() {
        let cfg = RunConfig::load(None).unwrap();
        assert_eq!(cfg.design, TrialDesign::default());
        assert_eq!(cfg.scenarios.len(), 6);
        assert_eq!(cfg.policies, Policy::ALL.to_vec());
        assert_eq!(cfg.n_sims, 10_000);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::from_toml("[design]\nn_mni = 3\n").unwrap_err();
        assert!(matches!(err, CliError::Config(_)), "{err}");
        let err = RunConfig::from_toml("[extra]\n").unwrap_err();
        assert!(matches!(err, CliError::Config(_)));
    }

    #[test]
    fn weight_outside_unit_interval_names_the_constraint() {
        let err = RunConfig::from_toml("[design]\nw = 1.2\n").unwrap_err();
        assert!(err.to_string().contains("(0, 1)"), "{err}");
    }

    #[test]
    fn infeasible_correlation_is_a_configuration_error() {
        let text = "[[scenarios]]\nname = \"x\"\np_br = 0.9\np_bor = 0.1\nrho = 0.9\n";
        assert!(matches!(
            RunConfig::from_toml(text),
            Err(CliError::Config(_))
        ));
    }
}
