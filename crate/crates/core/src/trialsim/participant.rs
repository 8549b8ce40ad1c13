use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::design::TimelineConfig;
use crate::bivariate::{sample_pair, JointBernoulli};

/// Event times of one simulated participant.
///
/// Every event day lies on the participant's assessment grid
/// `enroll_day + k * assess_interval_days`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticipantRecord {
    pub enroll_day: f64,
    /// Best response (any response, confirmed or not).
    pub br: bool,
    /// Best objective response (confirmed).
    pub bor: bool,
    /// Visit at which a response is first seen.
    pub surrogate_day: Option<f64>,
    /// Visit at which the response is confirmed.
    pub confirm_day: Option<f64>,
    /// Day from which the final confirmed status is known.
    pub ascertain_day: f64,
}

impl ParticipantRecord {
    /// True when a response has been seen but its confirmation visit failed.
    pub fn unconfirmed_responder(&self) -> bool {
        self.surrogate_day.is_some() && !self.bor
    }
}

/// Sorted uniform enrollment days for `n` participants over `[start, start + window]`.
pub fn enroll_uniform<R: Rng + ?Sized>(n: u32, start: f64, window: f64, rng: &mut R) -> Vec<f64> {
    let mut u: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    u.sort_by(f64::total_cmp);
    u.into_iter().map(|x| start + window * x).collect()
}

pub fn simulate_participant<R: Rng + ?Sized>(
    joint: &JointBernoulli,
    enroll_day: f64,
    cfg: &TimelineConfig,
    rng: &mut R,
) -> ParticipantRecord {
    let (br, bor) = sample_pair(joint, rng);
    let interval = cfg.assess_interval_days;
    let visit = |k: u32| enroll_day + k as f64 * interval;
    let window = cfg.response_window_assessments;

    if !br && !bor {
        return ParticipantRecord {
            enroll_day,
            br,
            bor,
            surrogate_day: None,
            confirm_day: None,
            ascertain_day: visit(window),
        };
    }

    let mut surrogate_visit = rng.random_range(1..=window);
    if !bor {
        let resolved = surrogate_visit + cfg.confirm_gap_visits();
        return ParticipantRecord {
            enroll_day,
            br,
            bor,
            surrogate_day: Some(visit(surrogate_visit)),
            confirm_day: None,
            ascertain_day: visit(resolved),
        };
    }

    let normal = Normal::new(cfg.confirm_mean_days, cfg.confirm_sd_days).expect("validated sd");
    let delay = normal.sample(rng).max(cfg.min_confirm_gap_days);
    let visits_after = ((delay / interval).ceil() as u32).max(cfg.confirm_gap_visits());
    let confirm_visit = surrogate_visit + visits_after;
    if !br {
        // a confirmed response implies a first response one visit earlier
        surrogate_visit = confirm_visit - 1;
    }
    ParticipantRecord {
        enroll_day,
        br,
        bor,
        surrogate_day: Some(visit(surrogate_visit)),
        confirm_day: Some(visit(confirm_visit)),
        ascertain_day: visit(confirm_visit),
    }
}
