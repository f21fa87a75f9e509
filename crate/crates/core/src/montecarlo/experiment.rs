//! Kolmogorov-Smirnov study of the exponential-model MLE.
//!
//! For each sample size `n` the experiment compares three laws:
//! the centred MLE `ε(n) = √n(1/T_n - θ)`, its Gaussian limit `θG`, and the
//! deterministic transform `√n H(G/√n)` with `H(x) = -θx/(1+x)`.

use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{ks_two_sample, normal_cdf, stream_rng, EmpiricalDistribution};

/// Default number of Monte Carlo draws per row.
pub const DEFAULT_M: usize = 100_000;

/// Scale of the Monte Carlo error for `m` draws: `1.63/√m`.
pub fn mc_error(m: usize) -> f64 {
    1.63 / (m as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSRow {
    pub n: u64,
    /// Distance between `ε(n)` and `θG`.
    pub delta1: f64,
    /// Distance between `ε(n)` and `√n H(G/√n)`.
    pub delta2: f64,
    /// Distance between `√n H(G/√n)` and `θG`.
    pub delta3: f64,
    pub mc_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSTable {
    pub rows: Vec<KSRow>,
}

impl KSTable {
    pub const CSV_HEADER: &'static str = "n,delta1,delta2,delta3,mc_error";

    /// CSV text with 17 significant digits per float.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                r.n, r.delta1, r.delta2, r.delta3, r.mc_error
            ));
        }
        out
    }
}

/// `√n H(G/√n) = -θG/(1 + G/√n)`; the excluded events `G <= -√n` map to `+∞`.
fn transformed_gaussian(theta: f64, g: f64, sqrt_n: f64) -> f64 {
    let x = g / sqrt_n;
    if x > -1.0 {
        -theta * g / (1.0 + x)
    } else {
        f64::INFINITY
    }
}

fn experiment_row(theta: f64, n: u64, m: usize, seed: u64, row: u64) -> Result<KSRow> {
    let sqrt_n = (n as f64).sqrt();
    let gamma = Gamma::new(n as f64, 1.0 / (n as f64 * theta)).map_err(|e| Error::Domain(format!("gamma law: {e}")))?;
    let mut rng_t = stream_rng(seed, 2 * row);
    let mut rng_g = stream_rng(seed, 2 * row + 1);
    let eps: Vec<f64> = (0..m)
        .map(|_| {
            let t: f64 = gamma.sample(&mut rng_t);
            sqrt_n * (1.0 / t - theta)
        })
        .collect();
    let g: Vec<f64> = (0..m).map(|_| StandardNormal.sample(&mut rng_g)).collect();
    let lin: Vec<f64> = g.iter().map(|x| theta * x).collect();
    let nonlin: Vec<f64> = g.iter().map(|x| transformed_gaussian(theta, *x, sqrt_n)).collect();

    let eps = EmpiricalDistribution::new(eps)?;
    let lin = EmpiricalDistribution::new(lin)?;
    let nonlin = EmpiricalDistribution::new(nonlin)?;
    Ok(KSRow {
        n,
        delta1: ks_two_sample(&eps, &lin),
        delta2: ks_two_sample(&eps, &nonlin),
        delta3: ks_two_sample(&nonlin, &lin),
        mc_error: mc_error(m),
    })
}

/// Runs one row per entry of `n_list`. Row `i` draws `T_n` from stream `2i`
/// and the Gaussians from stream `2i+1` of `seed`, so the table only depends
/// on the arguments. `T_n` is sampled as `Gamma(n, 1/(nθ))`, the law of the
/// mean of `n` exponential variables with rate `θ`.
pub fn exponential_ks_experiment(theta: f64, n_list: &[u64], m: usize, seed: u64) -> Result<KSTable> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::Domain(format!("θ must be positive, got {theta}")));
    }
    if m == 0 {
        return Err(Error::Empty("Monte Carlo sample"));
    }
    if n_list.contains(&0) {
        return Err(Error::OutOfRange("sample sizes must be positive".into()));
    }
    if m < 10_000 {
        log::warn!("m = {m} draws give a Monte Carlo error of {:.3}", mc_error(m));
    }
    let rows = n_list
        .par_iter()
        .enumerate()
        .map(|(i, n)| experiment_row(theta, *n, m, seed, i as u64))
        .collect::<Result<Vec<_>>>()?;
    Ok(KSTable { rows })
}

const GRID: usize = 4096;
const REFINE: usize = 257;

/// `sup_x |P(√n H(G/√n) <= x) - Φ(x/θ)|` for a standard Gaussian `G`.
///
/// `P(√n H(G/√n) <= x) = Φ(x/(θ + x/√n))` for `x > -θ√n` and `0` below; the
/// mass of the excluded events sits at `+∞`, so the limit `Φ(-√n)` at the
/// right end is also a candidate. The supremum is searched on a grid over
/// `±8θ` followed by two local refinements.
pub fn analytic_nonlinearity_ks(theta: f64, n: u64) -> Result<f64> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::Domain(format!("θ must be positive, got {theta}")));
    }
    if n == 0 {
        return Err(Error::OutOfRange("sample size must be positive".into()));
    }
    let sqrt_n = (n as f64).sqrt();
    let gap = |x: f64| {
        let fh = if x > -theta * sqrt_n { normal_cdf(x / (theta + x / sqrt_n)) } else { 0.0 };
        (fh - normal_cdf(x / theta)).abs()
    };
    let search = |lo: f64, hi: f64, points: usize| {
        let step = (hi - lo) / (points - 1) as f64;
        let mut best = (lo, gap(lo));
        for i in 1..points {
            let x = lo + step * i as f64;
            let v = gap(x);
            if v > best.1 {
                best = (x, v);
            }
        }
        (best, step)
    };
    let ((mut x, mut v), mut step) = search(-8.0 * theta, 8.0 * theta, GRID);
    for _ in 0..2 {
        let ((x2, v2), s2) = search(x - step, x + step, REFINE);
        if v2 >= v {
            x = x2;
            v = v2;
        }
        step = s2;
    }
    Ok(v.max(normal_cdf(-sqrt_n)))
}
