use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted sample. Infinite values are allowed and sort to the ends; NaN is rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Empty("sample"));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::NonFinite("sample value"));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Fraction of samples `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.samples.partition_point(|s| *s <= x) as f64 / self.samples.len() as f64
    }
}

/// `sup_x |F_a(x) - F_b(x)|`, evaluated at every sample point in one merge pass.
pub fn ks_two_sample(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> f64 {
    let (xa, xb) = (&a.samples, &b.samples);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0_f64;
    while i < xa.len() && j < xb.len() {
        let x = if xa[i] <= xb[j] { xa[i] } else { xb[j] };
        while i < xa.len() && xa[i] == x {
            i += 1;
        }
        while j < xb.len() && xb[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// `max_i max(i/m - F(x_i), F(x_i) - (i-1)/m)` over the sorted sample.
///
/// Errors if `cdf` leaves `[0, 1]` or decreases along the sample.
pub fn ks_vs_cdf(a: &EmpiricalDistribution, cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let m = a.samples.len() as f64;
    let mut d = 0.0_f64;
    let mut prev = f64::NEG_INFINITY;
    for (idx, x) in a.samples.iter().enumerate() {
        let f = cdf(*x);
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::Precondition(format!("cdf value {f} at {x} outside [0, 1]")));
        }
        if f < prev {
            return Err(Error::Precondition(format!("cdf decreases at {x}")));
        }
        prev = f;
        let i = (idx + 1) as f64;
        d = d.max(i / m - f).max(f - (i - 1.0) / m);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ed(v: &[f64]) -> EmpiricalDistribution {
        EmpiricalDistribution::new(v.to_vec()).unwrap()
    }

    #[test]
    fn trivial_distances() {
        let a = ed(&[0.3, -1.0, 2.0, 2.0]);
        assert_eq!(ks_two_sample(&a, &a), 0.0);
        assert_eq!(ks_two_sample(&ed(&[0.0]), &ed(&[1.0])), 1.0);
        assert!(EmpiricalDistribution::new(vec![]).is_err());
        assert!(EmpiricalDistribution::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn ties_across_samples() {
        let a = ed(&[1.0, 2.0]);
        let b = ed(&[1.0, 1.0]);
        assert_eq!(ks_two_sample(&a, &b), 0.5);
        assert_eq!(ks_two_sample(&b, &a), 0.5);
    }

    #[test]
    fn infinite_values_are_ordered() {
        let a = ed(&[f64::INFINITY, 0.0]);
        let b = ed(&[0.0, 1.0]);
        assert_eq!(ks_two_sample(&a, &b), 0.5);
        assert_eq!(a.cdf(1e300), 0.5);
    }

    #[test]
    fn one_sample_median() {
        let d = ks_vs_cdf(&ed(&[0.0]), |x| if x < 0.0 { 0.0 } else { 0.5 + x.min(0.5) }).unwrap();
        assert_eq!(d, 0.5);
    }

    #[test]
    fn gaussian_samples_within_critical_values() {
        use rand_distr::{Distribution, StandardNormal};

        use crate::montecarlo::{normal_cdf, stream_rng};

        let draw = |stream| {
            let mut rng = stream_rng(99, stream);
            ed(&(0..100_000).map(|_| StandardNormal.sample(&mut rng)).collect::<Vec<f64>>())
        };
        let (a, b) = (draw(0), draw(1));
        // two-sample 99% critical value 1.63·√(2/m) ≈ 0.0073
        assert!(ks_two_sample(&a, &b) < 0.01);
        // one-sample 99% critical value 1.63/√m
        assert!(ks_vs_cdf(&a, normal_cdf).unwrap() < 0.0061);
    }

    #[test]
    fn one_sample_matches_brute_force() {
        use rand::Rng;

        let mut rng = crate::montecarlo::stream_rng(5, 0);
        let u: Vec<f64> = (0..300).map(|_| rng.random::<f64>()).collect();
        let a = ed(&u);
        // sup over x of |F_m(x) - x|, probing both sides of every jump
        let m = u.len() as f64;
        let mut brute = 0.0_f64;
        for x in &u {
            let below = u.iter().filter(|y| *y < x).count() as f64 / m;
            let at = u.iter().filter(|y| *y <= x).count() as f64 / m;
            brute = brute.max((at - x).abs()).max((below - x).abs());
        }
        assert!((ks_vs_cdf(&a, |x| x.clamp(0.0, 1.0)).unwrap() - brute).abs() < 1e-15);
    }

    #[test]
    fn one_sample_rejects_bad_cdf() {
        let a = ed(&[0.1, 0.2, 0.3]);
        assert!(ks_vs_cdf(&a, |x| 1.0 - x).is_err());
        assert!(ks_vs_cdf(&a, |x| 2.0 * x + 1.0).is_err());
    }
}
