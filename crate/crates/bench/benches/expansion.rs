use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rootexp::expansion::{expand_estimator, expansion_via_inverse};
use rootexp::models::{expfam_score_model, ExpFamilyModel, SampleSummary};
use rootexp::montecarlo::exponential_ks_experiment;
use rootexp::related::{upflat_sequence, upflat_symbolic, upflat_via_inversion, zigzag_sequence, zigzag_symbolic};
use rootexp::{ProfileKind, TruncatedSeries};

fn delta() -> TruncatedSeries {
    TruncatedSeries::new(vec![0.3, -1.2, 0.7, -0.4, 1.1, 0.2, -0.9, 0.5, 0.1]).unwrap()
}

fn recursions(c: &mut Criterion) {
    let d = delta();
    c.bench_function("upflat_sequence p=8", |b| b.iter(|| upflat_sequence(black_box(&d), 8).unwrap()));
    c.bench_function("upflat_via_inversion p=8", |b| b.iter(|| upflat_via_inversion(black_box(&d), 8).unwrap()));
    c.bench_function("zigzag_sequence p=8", |b| b.iter(|| zigzag_sequence(black_box(&d), 8).unwrap()));
}

fn symbolic(c: &mut Criterion) {
    let mut g = c.benchmark_group("symbolic");
    g.sample_size(20);
    for p in [5, 8] {
        g.bench_function(format!("upflat p={p}"), |b| b.iter(|| upflat_symbolic(black_box(p)).unwrap()));
        g.bench_function(format!("zigzag p={p}"), |b| b.iter(|| zigzag_symbolic(black_box(p)).unwrap()));
    }
    g.finish();
}

fn estimators(c: &mut Criterion) {
    let model = ExpFamilyModel::binomial(3).unwrap();
    let summary = SampleSummary::new(200, 1.3).unwrap();
    let score = expfam_score_model(&model, &summary, 0.4, ProfileKind::UpFlat);
    let s = summary.scale();
    c.bench_function("expand_estimator binomial p=6", |b| {
        b.iter(|| expand_estimator(black_box(&score), &s, 6, None).unwrap())
    });
    c.bench_function("expansion_via_inverse binomial p=6", |b| {
        b.iter(|| expansion_via_inverse(black_box(&score), &s, 6).unwrap())
    });
}

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("monte_carlo");
    g.sample_size(10);
    g.bench_function("ks table m=1e4", |b| {
        b.iter(|| exponential_ks_experiment(1.0, black_box(&[5, 10, 20, 50, 100]), 10_000, 7).unwrap())
    });
    g.finish();
}

criterion_group!(benches, recursions, symbolic, estimators, monte_carlo);
criterion_main!(benches);
