#![allow(clippy::excessive_precision)]

use ppmon_core::betacore::{beta_binomial_pmf, BetaParams};
use ppmon_core::decision::{
    final_decision, interim_decision, min_success_threshold, predictive_probability,
    superiority_prob, superiority_prob_given_y,
};
use ppmon_core::{InterimVerdict, Thresholds};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};

fn bp(a: f64, b: f64) -> BetaParams {
    BetaParams::new(a, b).unwrap()
}

/// Direct sum over every future outcome.
fn enumerated_pp(e: BetaParams, s: BetaParams, m: u64, lambda: f64) -> f64 {
    (0..=m)
        .filter(|&y| superiority_prob_given_y(e, y, m, s).unwrap() > lambda)
        .map(|y| beta_binomial_pmf(y, m, e).unwrap())
        .sum()
}

#[test]
fn superiority_matches_high_precision_quadrature() {
    // mpmath, 40 digits
    let s = bp(20.0, 80.0);
    let cases = [
        ((18.5, 22.5), 0.99852994367381890658),
        ((3.5, 12.5), 0.53245197416663977906),
        ((10.5, 30.5), 0.75849020990427969805),
        ((4.5, 5.0), 0.96030925011417656378),
        ((0.5, 0.5), 0.70602357222991691826),
    ];
    for ((a, b), want) in cases {
        let got = superiority_prob(bp(a, b), s).unwrap();
        assert!((got - want).abs() < 1e-9, "({a}, {b}): {got} vs {want}");
    }
    let got = superiority_prob(bp(2.0, 1.0), bp(1.0, 1.0)).unwrap();
    assert!((got - 2.0 / 3.0).abs() < 1e-10);
}

#[test]
fn superiority_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let n = 1_000_000;
    for (e, s) in [
        ((3.5, 12.5), (20.0, 80.0)),
        ((1.2, 0.7), (2.0, 3.0)),
        ((30.0, 10.0), (25.0, 12.0)),
    ] {
        let de = Beta::new(e.0, e.1).unwrap();
        let ds = Beta::new(s.0, s.1).unwrap();
        let hits = (0..n)
            .filter(|_| de.sample(&mut rng) > ds.sample(&mut rng))
            .count();
        let phat = hits as f64 / n as f64;
        let se = (phat * (1.0 - phat) / n as f64).sqrt();
        let got = superiority_prob(bp(e.0, e.1), bp(s.0, s.1)).unwrap();
        assert!(
            (got - phat).abs() < 4.0 * se,
            "{e:?} vs {s:?}: {got} vs {phat}"
        );
    }
}

#[test]
fn identical_laws_give_one_half() {
    let p = bp(3.3, 7.1);
    assert_eq!(superiority_prob(p, p).unwrap(), 0.5);
    assert!(!final_decision(p, p, 0.5).unwrap());
}

#[test]
fn decision_rules_are_strict() {
    let th = Thresholds::new(0.8, 0.1, 0.8).unwrap();
    assert_eq!(interim_decision(0.8, &th), InterimVerdict::Continue);
    assert_eq!(interim_decision(0.1, &th), InterimVerdict::Continue);
    assert_eq!(
        interim_decision(0.8000001, &th),
        InterimVerdict::StopEfficacy
    );
    assert_eq!(
        interim_decision(0.0999999, &th),
        InterimVerdict::StopFutility
    );
    let off = Thresholds::new(0.8, 0.0, 0.8).unwrap();
    assert_eq!(interim_decision(0.0, &off), InterimVerdict::Continue);
}

#[test]
fn nothing_left_to_enroll_gives_an_indicator() {
    let s = bp(20.0, 80.0);
    assert_eq!(
        predictive_probability(bp(18.5, 22.5), s, 0, 0.8).unwrap(),
        1.0
    );
    assert_eq!(
        predictive_probability(bp(4.5, 36.5), s, 0, 0.8).unwrap(),
        0.0
    );
    assert_eq!(
        predictive_probability(bp(4.5, 36.5), s, 10, 1e-12).unwrap(),
        1.0
    );
}

#[test]
fn no_responses_never_trigger_efficacy() {
    let pp = predictive_probability(bp(0.5, 15.5), bp(20.0, 80.0), 25, 0.8).unwrap();
    assert!(pp < 0.8, "{pp}");
}

#[test]
fn reference_threshold_at_the_final_analysis() {
    // 11 of 40 is the first count whose posterior clears 0.8 against Beta(20, 80)
    let y = min_success_threshold(bp(0.5, 0.5), 40, bp(20.0, 80.0), 0.8).unwrap();
    assert_eq!(y, 11);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn threshold_pp_equals_enumeration(
        a in 0.3f64..25.0, b in 0.3f64..25.0, m in 0u64..=60, lambda in 0.05f64..0.99,
        sa in 1.0f64..40.0, sb in 1.0f64..120.0,
    ) {
        let (e, s) = (bp(a, b), bp(sa, sb));
        let fast = predictive_probability(e, s, m, lambda).unwrap();
        let slow = enumerated_pp(e, s, m, lambda);
        prop_assert!((fast - slow).abs() <= 1e-12, "{} vs {}", fast, slow);
    }

    #[test]
    fn threshold_matches_linear_scan(a in 0.3f64..20.0, b in 0.3f64..20.0, m in 0u64..=40, lambda in 0.05f64..0.99) {
        let s = bp(20.0, 80.0);
        let e = bp(a, b);
        let scan = (0..=m).find(|&y| superiority_prob_given_y(e, y, m, s).unwrap() > lambda).unwrap_or(m + 1);
        prop_assert_eq!(min_success_threshold(e, m, s, lambda).unwrap(), scan);
    }

    #[test]
    fn pp_is_a_probability_and_falls_with_lambda(
        a in 0.3f64..20.0, b in 0.3f64..20.0, m in 0u64..=40, l1 in 0.05f64..0.95, dl in 0.0f64..0.5,
    ) {
        let s = bp(20.0, 80.0);
        let e = bp(a, b);
        let l2 = (l1 + dl).min(0.999);
        let p1 = predictive_probability(e, s, m, l1).unwrap();
        let p2 = predictive_probability(e, s, m, l2).unwrap();
        prop_assert!((0.0..=1.0).contains(&p1));
        prop_assert!(p2 <= p1 + 1e-12);
    }

    #[test]
    fn an_extra_response_never_lowers_pp(a in 0.3f64..20.0, b in 0.3f64..20.0, m in 1u64..=40, lambda in 0.05f64..0.99) {
        let s = bp(20.0, 80.0);
        let base = predictive_probability(bp(a, b), s, m, lambda).unwrap();
        let more = predictive_probability(bp(a + 1.0, b), s, m, lambda).unwrap();
        prop_assert!(more >= base - 1e-12, "{} < {}", more, base);
    }

    #[test]
    fn superiority_is_antisymmetric(a in 0.5f64..30.0, b in 0.5f64..30.0, c in 0.5f64..30.0, d in 0.5f64..30.0) {
        let x = superiority_prob(bp(a, b), bp(c, d)).unwrap();
        let y = superiority_prob(bp(c, d), bp(a, b)).unwrap();
        prop_assert!((x + y - 1.0).abs() < 1e-8);
    }
}
