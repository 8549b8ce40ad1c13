use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cache::PredictiveCache;
use super::design::TrialDesign;
use super::participant::{enroll_uniform, simulate_participant, ParticipantRecord};
use super::policy::{decision_ready_day, snapshot, Policy};
use crate::bivariate::{joint_from_marginals, JointBernoulli, ScenarioTruth};
use crate::decision::{interim_decision, InterimVerdict};
use crate::error::{config, Result};
use crate::gbayes::quasi_posterior_counts;

/// Outcome of one simulated trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub stopped_early: bool,
    pub rejected_null: bool,
    pub sample_size: u32,
    /// Day of the analysis that ended the trial.
    pub duration_days: f64,
}

/// PET, PRN, ASS and ASD over a batch of simulated trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingCharacteristics {
    pub n_sims: u64,
    /// Proportion of early terminations.
    pub pet: f64,
    /// Proportion of trials rejecting the null.
    pub prn: f64,
    /// Average sample size.
    pub ass: f64,
    /// Average study duration in days.
    pub asd: f64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for job `index` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(1)))
}

/// Independent random stream for trial `index`; depends only on `(seed, index)`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn check_cache(d: &TrialDesign, cache: &PredictiveCache) -> Result<()> {
    if cache.comparator() != d.prior_s || cache.lambda() != d.thresholds.lambda {
        return Err(config(
            "predictive cache was built for a different comparator prior or lambda",
        ));
    }
    Ok(())
}

fn run_trial<R: Rng + ?Sized>(
    d: &TrialDesign,
    joint: &JointBernoulli,
    policy: Policy,
    rng: &mut R,
    cache: &PredictiveCache,
) -> Result<TrialResult> {
    let cfg = &d.timeline;
    let mut records: Vec<ParticipantRecord> = Vec::with_capacity(d.n_max as usize);
    let mut window_start = 0.0;
    let mut window = cfg.ramp_up_days;
    let mut batch = d.n_min;

    loop {
        for day in enroll_uniform(batch, window_start, window, rng) {
            records.push(simulate_participant(joint, day, cfg, rng));
        }
        let n = records.len() as u32;
        let t = decision_ready_day(&records, policy, cfg);
        let counts = snapshot(&records, t, policy).counts();
        let e_star = quasi_posterior_counts(d.prior_e, &counts, d.w);

        if n >= d.n_max {
            return Ok(TrialResult {
                stopped_early: false,
                rejected_null: cache.final_decision(e_star)?,
                sample_size: n,
                duration_days: t,
            });
        }

        let pp = cache.predictive_probability(e_star, (d.n_max - n) as u64)?;
        match interim_decision(pp, &d.thresholds) {
            InterimVerdict::StopEfficacy | InterimVerdict::StopFutility => {
                return Ok(TrialResult {
                    stopped_early: true,
                    rejected_null: pp > d.thresholds.theta_u,
                    sample_size: n,
                    duration_days: t,
                });
            }
            InterimVerdict::Continue => {
                // accrual resumes once the look is done
                window_start = t;
                window = cfg.cohort_accrual_days;
                batch = d.cohort;
            }
        }
    }
}

/// Runs one trial using a shared predictive-probability table.
pub fn simulate_trial_cached<R: Rng + ?Sized>(
    d: &TrialDesign,
    s: &ScenarioTruth,
    policy: Policy,
    rng: &mut R,
    cache: &PredictiveCache,
) -> Result<TrialResult> {
    d.validate()?;
    check_cache(d, cache)?;
    let joint = joint_from_marginals(s)?;
    run_trial(d, &joint, policy, rng, cache)
}

/// Simulates one trial through its look sequence until a stop or `n_max`.
pub fn simulate_trial<R: Rng + ?Sized>(
    d: &TrialDesign,
    s: &ScenarioTruth,
    policy: Policy,
    rng: &mut R,
) -> Result<TrialResult> {
    let cache = PredictiveCache::new(d.prior_s, d.thresholds.lambda);
    simulate_trial_cached(d, s, policy, rng, &cache)
}

/// [`operating_characteristics`] reusing an existing table.
pub fn operating_characteristics_cached(
    d: &TrialDesign,
    s: &ScenarioTruth,
    policy: Policy,
    n_sims: u64,
    seed: u64,
    cache: &PredictiveCache,
) -> Result<OperatingCharacteristics> {
    if n_sims == 0 {
        return Err(config("n_sims must be at least 1"));
    }
    d.validate()?;
    check_cache(d, cache)?;
    let joint = joint_from_marginals(s)?;

    let results: Vec<TrialResult> = (0..n_sims)
        .into_par_iter()
        .map(|i| run_trial(d, &joint, policy, &mut trial_rng(seed, i), cache))
        .collect::<Result<_>>()?;

    // fixed-order reduction keeps the output independent of thread count
    let n = n_sims as f64;
    let stopped = results.iter().filter(|r| r.stopped_early).count() as f64;
    let rejected = results.iter().filter(|r| r.rejected_null).count() as f64;
    let size: u64 = results.iter().map(|r| r.sample_size as u64).sum();
    let duration: f64 = results.iter().map(|r| r.duration_days).sum();
    Ok(OperatingCharacteristics {
        n_sims,
        pet: stopped / n,
        prn: rejected / n,
        ass: size as f64 / n,
        asd: duration / n,
    })
}

/// Aggregates `n_sims` independent trials; trial `i` uses stream `(seed, i)`.
pub fn operating_characteristics(
    d: &TrialDesign,
    s: &ScenarioTruth,
    policy: Policy,
    n_sims: u64,
    seed: u64,
) -> Result<OperatingCharacteristics> {
    let cache = PredictiveCache::new(d.prior_s, d.thresholds.lambda);
    operating_characteristics_cached(d, s, policy, n_sims, seed, &cache)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn truth(p1: f64, p2: f64, rho: f64) -> ScenarioTruth {
        ScenarioTruth {
            p_br: p1,
            p_bor: p2,
            rho,
        }
    }

    #[test]
    fn sure_responders_stop_at_first_look() {
        let d = TrialDesign::default();
        for policy in Policy::ALL {
            let r =
                simulate_trial(&d, &truth(1.0, 1.0, 0.0), policy, &mut trial_rng(11, 0)).unwrap();
            assert!(r.stopped_early, "{policy}");
            assert!(r.rejected_null);
            assert_eq!(r.sample_size, d.n_min);
        }
    }

    #[test]
    fn sure_non_responders_run_to_n_max() {
        let d = TrialDesign::default();
        for policy in Policy::ALL {
            let r =
                simulate_trial(&d, &truth(0.0, 0.0, 0.0), policy, &mut trial_rng(12, 0)).unwrap();
            assert!(!r.stopped_early);
            assert!(!r.rejected_null);
            assert_eq!(r.sample_size, d.n_max);
        }
    }

    #[test]
    fn single_trial_batch_is_binary() {
        let d = TrialDesign::default();
        let oc =
            operating_characteristics(&d, &truth(0.7, 0.5, 0.5), Policy::Proposed, 1, 99).unwrap();
        assert!(oc.pet == 0.0 || oc.pet == 1.0);
        assert!(oc.prn == 0.0 || oc.prn == 1.0);
    }

    #[test]
    fn seeds_are_spread() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
        assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
    }

    #[test]
    fn mismatched_cache_is_rejected() {
        let d = TrialDesign::default();
        let cache = PredictiveCache::new(d.prior_s, 0.65);
        assert!(operating_characteristics_cached(
            &d,
            &truth(0.5, 0.5, 0.0),
            Policy::Proposed,
            5,
            1,
            &cache
        )
        .is_err());
    }

    #[test]
    fn infeasible_scenario_is_rejected() {
        let d = TrialDesign::default();
        assert!(
            operating_characteristics(&d, &truth(0.9, 0.1, 0.9), Policy::Proposed, 5, 1).is_err()
        );
    }
}
