use serde::{Deserialize, Serialize};

use crate::betacore::BetaParams;
use crate::decision::Thresholds;
use crate::error::{config, Result};
use crate::gbayes::Weight;

pub const DAYS_PER_WEEK: f64 = 7.0;
pub const DAYS_PER_MONTH: f64 = 30.4375;

/// Accrual windows, assessment schedule, and the confirmation-delay law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimelineConfig {
    /// Window over which the first `n_min` participants enroll.
    pub ramp_up_days: f64,
    /// Window over which each later cohort enrolls.
    pub cohort_accrual_days: f64,
    pub assess_interval_days: f64,
    /// Last assessment at which a first (unconfirmed) response can appear.
    pub response_window_assessments: u32,
    pub confirm_mean_days: f64,
    pub confirm_sd_days: f64,
    pub min_confirm_gap_days: f64,
}

impl Default for TimelineConfig {
    fn default() -> Self {
        Self {
            ramp_up_days: 15.0 * DAYS_PER_MONTH,
            cohort_accrual_days: 3.0 * DAYS_PER_MONTH,
            assess_interval_days: 8.0 * DAYS_PER_WEEK,
            response_window_assessments: 4,
            confirm_mean_days: 33.75,
            confirm_sd_days: 47.57,
            min_confirm_gap_days: 4.0 * DAYS_PER_WEEK,
        }
    }
}

impl TimelineConfig {
    pub fn validate(&self) -> Result<()> {
        let durations = [
            ("ramp_up_days", self.ramp_up_days),
            ("cohort_accrual_days", self.cohort_accrual_days),
            ("assess_interval_days", self.assess_interval_days),
            ("confirm_sd_days", self.confirm_sd_days),
            ("min_confirm_gap_days", self.min_confirm_gap_days),
        ];
        for (name, v) in durations {
            if !(v.is_finite() && v > 0.0) {
                return Err(config(format!(
                    "timeline.{name} must be a positive duration, got {v}"
                )));
            }
        }
        if !self.confirm_mean_days.is_finite() {
            return Err(config("timeline.confirm_mean_days must be finite"));
        }
        if self.response_window_assessments < 1 {
            return Err(config(
                "timeline.response_window_assessments must be at least 1",
            ));
        }
        Ok(())
    }

    /// Number of visits after a first response at which confirmation is first possible.
    pub(crate) fn confirm_gap_visits(&self) -> u32 {
        ((self.min_confirm_gap_days / self.assess_interval_days).ceil() as u32).max(1)
    }
}

/// Fixed design of a monitored single-arm trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialDesign {
    pub n_min: u32,
    pub n_max: u32,
    pub cohort: u32,
    pub thresholds: Thresholds,
    pub w: Weight,
    pub prior_e: BetaParams,
    pub prior_s: BetaParams,
    pub timeline: TimelineConfig,
}

impl Default for TrialDesign {
    fn default() -> Self {
        Self {
            n_min: 15,
            n_max: 40,
            cohort: 5,
            thresholds: Thresholds {
                lambda: 0.8,
                theta_l: 0.0,
                theta_u: 0.8,
            },
            w: Weight::new(0.5).expect("0.5 is a valid weight"),
            prior_e: BetaParams {
                alpha: 0.5,
                beta: 0.5,
            },
            prior_s: BetaParams {
                alpha: 20.0,
                beta: 80.0,
            },
            timeline: TimelineConfig::default(),
        }
    }
}

impl TrialDesign {
    pub fn validate(&self) -> Result<()> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(config(format!(
                "design requires 0 < n_min <= n_max, got n_min = {}, n_max = {}",
                self.n_min, self.n_max
            )));
        }
        if self.cohort == 0 {
            return Err(config("design.cohort must be at least 1"));
        }
        if !(self.n_max - self.n_min).is_multiple_of(self.cohort) {
            return Err(config(format!(
                "n_max - n_min = {} is not a multiple of the cohort size {}",
                self.n_max - self.n_min,
                self.cohort
            )));
        }
        self.thresholds.validate()?;
        Weight::new(self.w.get())?;
        BetaParams::new(self.prior_e.alpha, self.prior_e.beta)
            .map_err(|e| config(format!("prior_e: {e}")))?;
        BetaParams::new(self.prior_s.alpha, self.prior_s.beta)
            .map_err(|e| config(format!("prior_s: {e}")))?;
        self.timeline.validate()
    }

    /// Sample sizes at which interim or final analyses occur.
    pub fn looks(&self) -> impl Iterator<Item = u32> + '_ {
        (self.n_min..=self.n_max).step_by(self.cohort as usize)
    }
}
