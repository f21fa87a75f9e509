use rand::Rng;
use rand_distr::{Binomial, Distribution, Gamma};

use rootexp::expansion::{bisect, expand_estimator, expansion_via_inverse};
use rootexp::models::{
    expfam_score_model, ou_estimate, ou_eta_model, ou_simulate, ou_theta_model, ExpFamilyModel, OUSpec, SampleSummary,
};
use rootexp::montecarlo::stream_rng;
use rootexp::{ExpansionResult, ProfileKind, Scale, ScoreModel};

fn assert_routes_agree(model: &ScoreModel, s: &Scale, p: usize) {
    let a = expand_estimator(model, s, p, None).unwrap();
    let b = expansion_via_inverse(model, s, p).unwrap();
    for k in 1..=p {
        let scale = a.alpha_s[k].abs().max(1e-300);
        assert!(
            (a.alpha_s[k] - b.alpha_s[k]).abs() <= 1e-9 * scale.max(a.alpha_s[1].abs()),
            "k={k}: {} vs {}",
            a.alpha_s[k],
            b.alpha_s[k]
        );
    }
}

#[test]
fn score_roots_match_closed_forms() {
    let mut rng = stream_rng(31, 0);
    let exp = ExpFamilyModel::exponential();
    for _ in 0..50 {
        let theta = rng.random_range(0.5..3.0);
        let n = rng.random_range(5_u64..2000);
        let t = Gamma::new(n as f64, 1.0 / (n as f64 * theta)).unwrap().sample(&mut rng);
        let m = expfam_score_model(&exp, &SampleSummary::new(n, t).unwrap(), theta, ProfileKind::UpFlat);
        let s = Scale::n(n);
        let root = bisect(|x| m.value(&s, x), 0.05 / t, 20.0 / t).unwrap();
        assert!((root - 1.0 / t).abs() <= 1e-10 * (1.0 / t));
    }
    for trials in [1_u64, 4] {
        let bin = ExpFamilyModel::binomial(trials).unwrap();
        for _ in 0..50 {
            let theta = rng.random_range(0.1..0.9);
            let n = rng.random_range(10_u64..2000);
            let x: u64 = (0..n).map(|_| Binomial::new(trials, theta).unwrap().sample(&mut rng)).sum();
            let t_bar = x as f64 / n as f64;
            if t_bar <= 0.0 || t_bar >= trials as f64 {
                continue;
            }
            let m = expfam_score_model(&bin, &SampleSummary::new(n, t_bar).unwrap(), theta, ProfileKind::UpFlat);
            let s = Scale::n(n);
            let root = bisect(|y| m.value(&s, y), 1e-9, 1.0 - 1e-9).unwrap();
            assert!((root - t_bar / trials as f64).abs() <= 1e-10);
        }
    }
    let spec = OUSpec::new(1.0, 1.0, 0.5, 1000).unwrap();
    for seed in 0..20 {
        let path = ou_simulate(&spec, seed).unwrap();
        let m = ou_eta_model(&spec, &path);
        let s = Scale::with_dt(1000, 0.5);
        let root = bisect(|y| m.value(&s, y), -2.0, 2.0).unwrap();
        assert!((root - ou_estimate(&path, 0.5).unwrap().eta_hat).abs() <= 1e-10);
    }
}

#[test]
fn upflat_routes_agree_on_bundled_models() {
    let exp = ExpFamilyModel::exponential();
    let s = SampleSummary::new(80, 0.43).unwrap();
    assert_routes_agree(&expfam_score_model(&exp, &s, 2.0, ProfileKind::UpFlat), &s.scale(), 5);

    for (trials, theta, t_bar) in [(1_u64, 0.3, 0.34), (3, 0.6, 1.71), (2, 0.5, 1.1)] {
        let bin = ExpFamilyModel::binomial(trials).unwrap();
        let s = SampleSummary::new(150, t_bar).unwrap();
        assert_routes_agree(&expfam_score_model(&bin, &s, theta, ProfileKind::UpFlat), &s.scale(), 5);
    }

    let spec = OUSpec::new(1.0, 1.0, 0.5, 500).unwrap();
    let path = ou_simulate(&spec, 4).unwrap();
    let s = Scale::with_dt(500, 0.5);
    assert_routes_agree(&ou_theta_model(&spec, &path), &s, 5);
    assert_routes_agree(&ou_eta_model(&spec, &path), &s, 5);
}

#[test]
fn theta_p_recomputes_bit_for_bit() {
    let bin = ExpFamilyModel::binomial(3).unwrap();
    let s = SampleSummary::new(90, 1.2).unwrap();
    let r: ExpansionResult =
        expand_estimator(&expfam_score_model(&bin, &s, 0.45, ProfileKind::UpFlat), &s.scale(), 6, None).unwrap();
    assert_eq!(r.recompute_theta_p_s().to_bits(), r.theta_p_s.to_bits());
}
