#![allow(clippy::excessive_precision)]

use ppmon_core::betacore::BetaParams;
use ppmon_core::inference::{
    appell_f1, diff_cdf, diff_credible_interval, diff_density, diff_mean, diff_total_mass,
    DiffPosterior,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta as BetaDist, Distribution};
use statrs::distribution::{Beta, Continuous};

fn post(ae: f64, be: f64, a_s: f64, bs: f64) -> DiffPosterior {
    DiffPosterior::new(
        BetaParams::new(ae, be).unwrap(),
        BetaParams::new(a_s, bs).unwrap(),
    )
    .unwrap()
}

/// Density of `p_E - p_S` by direct convolution with composite Simpson's rule.
fn convolution(d: f64, e: (f64, f64), s: (f64, f64)) -> f64 {
    let fe = Beta::new(e.0, e.1).unwrap();
    let fs = Beta::new(s.0, s.1).unwrap();
    let (lo, hi) = (f64::max(0.0, -d), f64::min(1.0, 1.0 - d));
    let n = 20_000;
    let h = (hi - lo) / n as f64;
    let g = |x: f64| fe.pdf(x + d) * fs.pdf(x);
    let mut acc = g(lo) + g(hi);
    for i in 1..n {
        acc += g(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// Gauss hypergeometric series, summed until terms vanish.
fn hyp2f1_series(a: f64, b: f64, c: f64, x: f64) -> f64 {
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 0..10_000 {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

#[test]
fn appell_reference_values() {
    // mpmath appellf1, 40 digits
    let v = appell_f1(2.0, 1.0, 1.0, 4.0, 0.3, 0.6).unwrap();
    assert!((v - 1.7874194599327019379).abs() < 1e-10, "{v}");
    let v = appell_f1(0.7, 1.3, -0.4, 2.1, 0.45, -0.8).unwrap();
    assert!((v - 1.4199241042873842975).abs() < 1e-10, "{v}");
}

#[test]
fn reference_posterior_summary() {
    let p = post(18.5, 22.5, 20.0, 80.0);
    let mean = diff_mean(&p).unwrap();
    assert!((mean - 0.25121951219512195122).abs() < 1e-9, "{mean}");
    let (lo, hi) = diff_credible_interval(&p, 0.95).unwrap();
    // quantiles from mpmath root finding on the convolution cdf
    assert!((lo - 0.0828496261047489).abs() < 1e-7, "{lo}");
    assert!((hi - 0.420803007292172).abs() < 1e-7, "{hi}");
    assert!((diff_total_mass(&p).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn reference_density_values() {
    let p = post(18.5, 22.5, 20.0, 80.0);
    let cases = [
        (-0.1, 0.00061419721265869626776),
        (0.0, 0.05983672359561150619),
        (0.1, 1.0187596389349230608),
        (0.25, 4.5647056634509481294),
        (0.4, 1.074086488719632731),
        (0.6, 0.0007245442683354054763),
    ];
    for (d, want) in cases {
        let got = diff_density(d, &p).unwrap();
        assert!(
            (got - want).abs() <= 1e-8 * want.max(1e-3),
            "pd = {d}: {got} vs {want}"
        );
    }
}

#[test]
fn density_is_continuous_through_zero() {
    let p = post(18.5, 22.5, 20.0, 80.0);
    let at_zero = 0.05983672359561150619;
    for d in [1e-6, 1e-9, 1e-12, 1e-15] {
        for x in [d, -d] {
            let got = diff_density(x, &p).unwrap();
            // the slope near zero is about 2.2, so the gap must shrink linearly
            assert!((got - at_zero).abs() < 5.0 * d + 1e-11, "pd = {x}: {got}");
        }
    }
}

#[test]
fn density_matches_convolution_on_a_grid() {
    for (e, s) in [
        ((18.5, 22.5), (20.0, 80.0)),
        ((3.0, 4.0), (2.5, 6.0)),
        ((7.0, 2.0), (2.0, 7.0)),
    ] {
        let p = post(e.0, e.1, s.0, s.1);
        for i in 1..80 {
            let d = -1.0 + i as f64 * 0.025;
            if d.abs() < 1e-12 {
                continue;
            }
            let want = convolution(d, e, s);
            let got = diff_density(d, &p).unwrap();
            if want > 0.05 {
                assert!(
                    ((got - want) / want).abs() < 1e-6,
                    "{e:?} {s:?} pd = {d}: {got} vs {want}"
                );
            } else {
                assert!(
                    (got - want).abs() < 1e-6,
                    "{e:?} {s:?} pd = {d}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn cdf_matches_monte_carlo() {
    let p = post(18.5, 22.5, 20.0, 80.0);
    let de = BetaDist::new(18.5, 22.5).unwrap();
    let ds = BetaDist::new(20.0, 80.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 400_000;
    let mut draws: Vec<f64> = (0..n)
        .map(|_| de.sample(&mut rng) - ds.sample(&mut rng))
        .collect();
    draws.sort_by(f64::total_cmp);
    let mut ks = 0.0f64;
    for i in 0..=200 {
        let x = -0.15 + i as f64 * 0.0035;
        let emp = draws.partition_point(|&d| d <= x) as f64 / n as f64;
        ks = ks.max((emp - diff_cdf(x, &p).unwrap()).abs());
    }
    assert!(ks < 0.004, "{ks}");
}

#[test]
fn symmetric_case_is_centred() {
    let p = post(4.0, 6.0, 4.0, 6.0);
    assert!(diff_mean(&p).unwrap().abs() < 1e-10);
    let (lo, hi) = diff_credible_interval(&p, 0.9).unwrap();
    assert!((lo + hi).abs() < 1e-7, "{lo} {hi}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn f1_with_one_vanishing_argument_is_gauss(a in 0.2f64..4.0, ca in 0.2f64..4.0, b1 in -2.0f64..3.0, b2 in -2.0f64..3.0, x in -0.9f64..0.9) {
        let c = a + ca;
        let v = appell_f1(a, b1, b2, c, x, 0.0).unwrap();
        let want = hyp2f1_series(a, b1, c, x);
        prop_assert!((v - want).abs() <= 1e-9 * want.abs().max(1.0), "{} vs {}", v, want);
    }

    #[test]
    fn f1_is_symmetric_in_its_argument_pairs(a in 0.2f64..4.0, ca in 0.2f64..4.0, b1 in -2.0f64..3.0, b2 in -2.0f64..3.0, x1 in -0.9f64..0.9, x2 in -0.9f64..0.9) {
        let c = a + ca;
        let u = appell_f1(a, b1, b2, c, x1, x2).unwrap();
        let v = appell_f1(a, b2, b1, c, x2, x1).unwrap();
        prop_assert!((u - v).abs() <= 1e-10 * u.abs().max(1.0));
    }

    #[test]
    fn mean_matches_closed_form(ae in 0.6f64..40.0, be in 0.6f64..40.0, a_s in 0.6f64..40.0, bs in 0.6f64..80.0) {
        let p = post(ae, be, a_s, bs);
        prop_assert!((diff_mean(&p).unwrap() - p.closed_form_mean()).abs() < 1e-7);
    }
}
