use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::design::TimelineConfig;
use super::participant::ParticipantRecord;
use crate::error::{config, Error};
use crate::gbayes::{InterimSnapshot, OutcomeFlag};

/// Assessments every enrolled participant must complete before a fast look.
const MATURITY_ASSESSMENTS: f64 = 2.0;

/// How interim data are timed and interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    /// Look after two assessments; pending outcomes enter with weight `w`.
    Proposed,
    /// Wait until every enrolled outcome is ascertained.
    PerformanceOriented,
    /// Look after two assessments; unconfirmed responders count as non-responders.
    ExpeditionOriented,
}

impl Policy {
    pub const ALL: [Policy; 3] = [
        Policy::Proposed,
        Policy::PerformanceOriented,
        Policy::ExpeditionOriented,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Policy::Proposed => "proposed",
            Policy::PerformanceOriented => "performance",
            Policy::ExpeditionOriented => "expedition",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "proposed" => Ok(Policy::Proposed),
            "performance" | "performance-oriented" => Ok(Policy::PerformanceOriented),
            "expedition" | "expedition-oriented" => Ok(Policy::ExpeditionOriented),
            other => Err(config(format!(
                "unknown policy '{other}' (expected proposed, performance, or expedition)"
            ))),
        }
    }
}

/// Earliest day at which the policy's interim look can be taken.
pub fn decision_ready_day(
    records: &[ParticipantRecord],
    policy: Policy,
    cfg: &TimelineConfig,
) -> f64 {
    debug_assert!(!records.is_empty());
    let ready = |r: &ParticipantRecord| match policy {
        Policy::Proposed | Policy::ExpeditionOriented => {
            r.enroll_day + MATURITY_ASSESSMENTS * cfg.assess_interval_days
        }
        Policy::PerformanceOriented => r.ascertain_day,
    };
    records.iter().map(ready).fold(f64::NEG_INFINITY, f64::max)
}

fn proposed_flag(r: &ParticipantRecord, t: f64) -> OutcomeFlag {
    let resolved = r.ascertain_day <= t;
    match r.surrogate_day {
        Some(seen) if seen <= t => {
            if r.bor {
                OutcomeFlag {
                    x: true,
                    gamma: r.confirm_day.is_some_and(|c| c <= t),
                }
            } else if resolved {
                OutcomeFlag::CONFIRMED_NON_RESPONSE
            } else {
                OutcomeFlag::PENDING_RESPONSE
            }
        }
        _ => OutcomeFlag {
            x: false,
            gamma: resolved,
        },
    }
}

/// Per-participant `(x, γ)` flags as seen by `policy` at day `t`.
pub fn snapshot(records: &[ParticipantRecord], t: f64, policy: Policy) -> InterimSnapshot {
    records
        .iter()
        .map(|r| match policy {
            Policy::Proposed => proposed_flag(r, t),
            Policy::ExpeditionOriented => OutcomeFlag {
                x: r.confirm_day.is_some_and(|c| c <= t),
                gamma: true,
            },
            Policy::PerformanceOriented => OutcomeFlag {
                x: r.bor,
                gamma: true,
            },
        })
        .collect()
}
