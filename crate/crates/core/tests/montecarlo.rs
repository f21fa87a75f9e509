use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use rootexp::montecarlo::{
    analytic_nonlinearity_ks, exponential_ks_experiment, ks_vs_cdf, mc_error, normal_cdf, stream_rng,
    EmpiricalDistribution,
};

#[test]
fn table_at_n_10() {
    let t = exponential_ks_experiment(1.0, &[10], 100_000, 3).unwrap();
    let r = &t.rows[0];
    assert!(r.delta1 - r.delta2 > 3.0 * r.mc_error, "{r:?}");
    let exact = analytic_nonlinearity_ks(1.0, 10).unwrap();
    assert!((r.delta3 - exact).abs() <= 2.0 * r.mc_error, "{} vs {exact}", r.delta3);
}

#[test]
fn triangle_inequality_on_every_row() {
    let t = exponential_ks_experiment(0.7, &[3, 8, 30, 200], 20_000, 21).unwrap();
    for r in &t.rows {
        assert!(r.delta1 <= r.delta2 + r.delta3 + 2e-3);
        for d in [r.delta1, r.delta2, r.delta3] {
            assert!((0.0..=1.0).contains(&d));
        }
    }
}

#[test]
fn rows_depend_only_on_position_and_n() {
    let a = exponential_ks_experiment(1.0, &[5, 50], 5_000, 8).unwrap();
    let b = exponential_ks_experiment(1.0, &[5], 5_000, 8).unwrap();
    assert_eq!(a.rows[0], b.rows[0]);
}

// The transformed Gaussian -θG/(1 + G/√n), with the excluded events at +∞,
// sampled 10⁷ times against the analytic distance.
#[test]
fn analytic_distance_matches_large_monte_carlo() {
    let (theta, n) = (1.0_f64, 10_u64);
    let m = 10_000_000;
    let chunks = 16;
    let sqrt_n = (n as f64).sqrt();
    let samples: Vec<f64> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = stream_rng(1234, c as u64);
            (0..m / chunks)
                .map(move |_| {
                    let g: f64 = StandardNormal.sample(&mut rng);
                    if g > -sqrt_n {
                        -theta * g / (1.0 + g / sqrt_n)
                    } else {
                        f64::INFINITY
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let emp = EmpiricalDistribution::new(samples).unwrap();
    let mc = ks_vs_cdf(&emp, |x| normal_cdf(x / theta)).unwrap();
    let exact = analytic_nonlinearity_ks(theta, n).unwrap();
    assert!((mc - exact).abs() <= 3.0 * mc_error(m), "{mc} vs {exact}");
}
