use bridgq::prior::special::digamma;
use bridgq::prior::{fit_beta_mle, log_likelihood, sample_beta, BetaParams, SHAPE_MAX, SHAPE_MIN};
use bridgq::problem::normalize_features;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Beta, Continuous};
use statrs::function::beta::ln_beta;

/// Log-likelihood through an independent density implementation.
fn oracle_ll(data: &[f64], a: f64, b: f64) -> f64 {
    let d = Beta::new(a, b).unwrap();
    data.iter().map(|&x| d.ln_pdf(x)).sum()
}

fn log_grid(k: usize) -> Vec<f64> {
    let (lo, hi) = (SHAPE_MIN.ln(), SHAPE_MAX.ln());
    (0..k).map(|i| (lo + (hi - lo) * i as f64 / (k - 1) as f64).exp()).collect()
}

fn arb_data() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.02f64..0.98, 3..30)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fit_is_permutation_invariant(data in arb_data(), seed in any::<u64>()) {
        let mut shuffled = data.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let a = fit_beta_mle(&normalize_features(&data).unwrap());
        let b = fit_beta_mle(&normalize_features(&shuffled).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn fit_dominates_log_grid(data in arb_data()) {
        let f = normalize_features(&data).unwrap();
        let p = fit_beta_mle(&f);
        prop_assume!(!p.fallback_used);
        let best = oracle_ll(f.values(), p.alpha, p.beta);
        let grid = log_grid(50);
        for &a in &grid {
            for &b in &grid {
                let ll = oracle_ll(f.values(), a, b);
                prop_assert!(best >= ll - 1e-6, "grid ({}, {}) beats fit ({}, {}): {} > {}", a, b, p.alpha, p.beta, ll, best);
            }
        }
    }

    #[test]
    fn fit_beats_uniform(data in arb_data()) {
        let f = normalize_features(&data).unwrap();
        let p = fit_beta_mle(&f);
        prop_assert!(log_likelihood(f.values(), &p).unwrap() >= log_likelihood(f.values(), &BetaParams::new(1.0, 1.0)).unwrap() - 1e-12);
    }

    #[test]
    fn log_likelihood_matches_independent_density(data in arb_data(), a in 0.05f64..50.0, b in 0.05f64..50.0) {
        let ours = log_likelihood(&data, &BetaParams::new(a, b)).unwrap();
        let theirs = oracle_ll(&data, a, b);
        prop_assert!((ours - theirs).abs() <= 1e-9 * (1.0 + theirs.abs()));
    }

    #[test]
    fn sampling_is_deterministic(a in 0.1f64..20.0, b in 0.1f64..20.0, seed in any::<u64>()) {
        let p = BetaParams::new(a, b);
        let x = sample_beta(&p, 50, &mut ChaCha8Rng::seed_from_u64(seed));
        let y = sample_beta(&p, 50, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(&x, &y);
        prop_assert!(x.iter().all(|v| *v > 0.0 && *v < 1.0));
    }
}

fn check_moments(p: BetaParams, seed: u64) {
    let n = 100_000;
    let xs = sample_beta(&p, n, &mut ChaCha8Rng::seed_from_u64(seed));
    let nf = n as f64;
    let mean = xs.iter().sum::<f64>() / nf;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / nf;
    let se_mean = (p.variance() / nf).sqrt();
    let se_var = ((m4 - var * var) / nf).sqrt();
    assert!((mean - p.mean()).abs() <= 3.0 * se_mean, "{p:?}: mean {mean} vs {}", p.mean());
    assert!((var - p.variance()).abs() <= 3.0 * se_var, "{p:?}: var {var} vs {}", p.variance());
}

#[test]
fn sample_moments_within_three_standard_errors() {
    check_moments(BetaParams::new(1.0, 1.0), 1);
    check_moments(BetaParams::new(2.0, 5.0), 2);
    let fitted = fit_beta_mle(&normalize_features(&[0.7, 0.3, 0.9, 0.5, 0.35, 0.15, 0.45, 0.25]).unwrap());
    check_moments(fitted, 3);
    check_moments(BetaParams::new(0.3, 0.4), 4);
}

#[test]
fn sample_means_of_known_priors() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let u = sample_beta(&BetaParams::new(1.0, 1.0), 100_000, &mut rng);
    assert!((u.iter().sum::<f64>() / 1e5 - 0.5).abs() < 0.01);
    let b = sample_beta(&BetaParams::new(2.0, 5.0), 100_000, &mut rng);
    assert!((b.iter().sum::<f64>() / 1e5 - 2.0 / 7.0).abs() < 0.01);
    assert!(sample_beta(&BetaParams::new(2.0, 5.0), 0, &mut rng).is_empty());
}

#[test]
fn constant_features_fall_back_to_uniform() {
    let p = fit_beta_mle(&normalize_features(&[0.5, 0.5, 0.5]).unwrap());
    assert_eq!((p.alpha, p.beta, p.fallback_used), (1.0, 1.0, true));
}

#[test]
fn closed_form_likelihoods() {
    assert!(log_likelihood(&[0.5], &BetaParams::new(1.0, 1.0)).unwrap().abs() < 1e-14);
    assert!((log_likelihood(&[0.5], &BetaParams::new(2.0, 2.0)).unwrap() - 1.5f64.ln()).abs() < 1e-12);
    assert!(log_likelihood(&[1.0], &BetaParams::new(2.0, 2.0)).is_err());
}

/// Coarse-to-fine grid search for the maximiser of the log-likelihood,
/// written through sufficient statistics and an independent `ln_beta`.
fn grid_argmax(data: &[f64]) -> (f64, f64) {
    let n = data.len() as f64;
    let s1: f64 = data.iter().map(|x| x.ln()).sum();
    let s2: f64 = data.iter().map(|x| (1.0 - x).ln()).sum();
    let ll = |a: f64, b: f64| (a - 1.0) * s1 + (b - 1.0) * s2 - n * ln_beta(a, b);
    let (mut la, mut ha, mut lb, mut hb) = (SHAPE_MIN.ln(), SHAPE_MAX.ln(), SHAPE_MIN.ln(), SHAPE_MAX.ln());
    let mut best = (0.0, 0.0);
    for _ in 0..8 {
        let k = 21;
        let mut top = f64::NEG_INFINITY;
        for i in 0..k {
            for j in 0..k {
                let a = (la + (ha - la) * i as f64 / (k - 1) as f64).exp();
                let b = (lb + (hb - lb) * j as f64 / (k - 1) as f64).exp();
                let v = ll(a, b);
                if v > top {
                    top = v;
                    best = (a, b);
                }
            }
        }
        let (wa, wb) = ((ha - la) / 10.0, (hb - lb) / 10.0);
        (la, ha) = (best.0.ln() - wa, best.0.ln() + wa);
        (lb, hb) = (best.1.ln() - wb, best.1.ln() + wb);
    }
    best
}

#[test]
fn fit_agrees_with_grid_search_on_large_sample() {
    let xs = sample_beta(&BetaParams::new(2.0, 5.0), 10_000, &mut ChaCha8Rng::seed_from_u64(2024));
    let f = normalize_features(&xs).unwrap();
    let p = fit_beta_mle(&f);
    let (ga, gb) = grid_argmax(f.values());
    assert!((p.alpha - ga).abs() / ga < 1e-3, "{} vs {}", p.alpha, ga);
    assert!((p.beta - gb).abs() / gb < 1e-3, "{} vs {}", p.beta, gb);
    assert!((1.8..=2.2).contains(&p.alpha) && (4.5..=5.5).contains(&p.beta));
}

#[test]
fn digamma_recurrence() {
    let mut x = 0.01;
    while x <= 100.0 {
        assert!((digamma(x + 1.0) - digamma(x) - 1.0 / x).abs() < 1e-12, "x = {x}");
        x += 0.37;
    }
}
