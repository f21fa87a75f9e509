//! One-parameter exponential families `exp(w(θ) T(x) - A(θ)) h(x)`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{delta_from_coefs, Interval, Scale, Score, ScoreModel, GRID_POINTS};
use crate::related::{upflat_sequence, ProfileKind};
use crate::series::{inverse_function_derivatives, leibniz, reciprocal_derivatives, TruncatedSeries};
use crate::smooth::{Affine, ScaledLog, SmoothFn};

type StatFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Natural parameter `w`, log-partition `A` and statistic `T`.
#[derive(Clone)]
pub struct ExpFamilyModel {
    w: Arc<dyn SmoothFn>,
    a: Arc<dyn SmoothFn>,
    stat: Arc<StatFn>,
    domain: Interval,
}

impl fmt::Debug for ExpFamilyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExpFamilyModel").field("domain", &self.domain).finish_non_exhaustive()
    }
}

/// `w(θ) = log(θ/(1-θ))`.
#[derive(Debug, Clone, Copy)]
struct Logit;

impl SmoothFn for Logit {
    fn derivative(&self, x: f64, k: usize) -> f64 {
        if k == 0 {
            return (x / (1.0 - x)).ln();
        }
        // (-1)^{k-1}(k-1)!/θ^k + (k-1)!/(1-θ)^k
        let fact: f64 = (1..k).map(|j| j as f64).product();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        fact * (sign / x.powi(k as i32) + 1.0 / (1.0 - x).powi(k as i32))
    }
}

/// `A(θ) = -N log(1-θ)`.
#[derive(Debug, Clone, Copy)]
struct BinomialLogPartition {
    trials: f64,
}

impl SmoothFn for BinomialLogPartition {
    fn derivative(&self, x: f64, k: usize) -> f64 {
        if k == 0 {
            return -self.trials * (1.0 - x).ln();
        }
        let fact: f64 = (1..k).map(|j| j as f64).product();
        self.trials * fact / (1.0 - x).powi(k as i32)
    }
}

impl ExpFamilyModel {
    pub fn new(
        w: Arc<dyn SmoothFn>,
        a: Arc<dyn SmoothFn>,
        stat: impl Fn(f64) -> f64 + Send + Sync + 'static,
        domain: Interval,
    ) -> Self {
        Self { w, a, stat: Arc::new(stat), domain }
    }

    /// Exponential law with rate `θ`: `w = -θ`, `A = -log θ`, `T(x) = x`.
    pub fn exponential() -> Self {
        Self::new(
            Arc::new(Affine { intercept: 0.0, slope: -1.0 }),
            Arc::new(ScaledLog { scale: -1.0 }),
            |x| x,
            Interval { lo: 0.0, hi: f64::INFINITY },
        )
    }

    /// Binomial law with `trials` trials and success probability `θ`.
    pub fn binomial(trials: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::OutOfRange("number of trials must be positive".into()));
        }
        Ok(Self::new(
            Arc::new(Logit),
            Arc::new(BinomialLogPartition { trials: trials as f64 }),
            |x| x,
            Interval { lo: 0.0, hi: 1.0 },
        ))
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    fn check_theta(&self, theta: f64) -> Result<()> {
        if theta > self.domain.lo && theta < self.domain.hi {
            Ok(())
        } else {
            Err(Error::Domain(format!("θ = {theta} outside ({}, {})", self.domain.lo, self.domain.hi)))
        }
    }

    /// The natural parameter `w` as a smooth function.
    pub fn natural_parameter(&self) -> Arc<dyn SmoothFn> {
        self.w.clone()
    }

    pub fn w(&self, theta: f64, k: usize) -> f64 {
        self.w.derivative(theta, k)
    }

    pub fn a(&self, theta: f64, k: usize) -> f64 {
        self.a.derivative(theta, k)
    }

    pub fn statistic(&self, x: f64) -> f64 {
        (self.stat)(x)
    }

    /// `D^j μ(θ)` for `j = 0..=k`, where `μ = D_w A = A'/w'` is the mean of `T`.
    pub fn mean_derivatives(&self, theta: f64, k: usize) -> Result<Vec<f64>> {
        self.check_theta(theta)?;
        let wp: Vec<f64> = (0..=k).map(|j| self.w(theta, j + 1)).collect();
        let ap: Vec<f64> = (0..=k).map(|j| self.a(theta, j + 1)).collect();
        let r = reciprocal_derivatives(&wp, k)?;
        Ok((0..=k).map(|j| leibniz(&ap, &r, j)).collect())
    }

    /// `D_w A(θ)`, the mean of `T`.
    pub fn mean(&self, theta: f64) -> Result<f64> {
        Ok(self.mean_derivatives(theta, 0)?[0])
    }

    /// `D_w² A(θ) = μ'(θ)/w'(θ)`, the variance of `T`.
    pub fn variance(&self, theta: f64) -> Result<f64> {
        let mu = self.mean_derivatives(theta, 1)?;
        Ok(mu[1] / self.w(theta, 1))
    }

    /// Checks `w' != 0` and positive Fisher information on a grid over `interval`.
    pub fn validate(&self, interval: &Interval) -> Result<()> {
        for theta in interval.grid(GRID_POINTS) {
            if self.w(theta, 1) == 0.0 {
                return Err(Error::Domain(format!("w'(θ) vanishes at θ = {theta}")));
            }
            fisher_info(self, theta)?;
        }
        Ok(())
    }

    /// Sample mean of `T` over `data`.
    pub fn summarize(&self, data: &[f64], theta: Option<f64>) -> Result<SampleSummary> {
        if data.is_empty() {
            return Err(Error::Empty("sample"));
        }
        let t_bar = data.iter().map(|x| self.statistic(*x)).sum::<f64>() / data.len() as f64;
        let s = SampleSummary::new(data.len() as u64, t_bar)?;
        match theta {
            Some(th) => s.with_theta(self, th),
            None => Ok(s),
        }
    }
}

/// Sample size, mean statistic and (when the true parameter is known) the
/// standardized statistic `G_n = √n (T_n - D_w A(θ)) / √(D_w² A(θ))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub n: u64,
    pub t_bar: f64,
    pub g_n: Option<f64>,
}

impl SampleSummary {
    pub fn new(n: u64, t_bar: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("sample size must be positive".into()));
        }
        if !t_bar.is_finite() {
            return Err(Error::NonFinite("mean statistic"));
        }
        Ok(Self { n, t_bar, g_n: None })
    }

    pub fn with_theta(mut self, model: &ExpFamilyModel, theta: f64) -> Result<Self> {
        let mean = model.mean(theta)?;
        let var = model.variance(theta)?;
        self.g_n = Some((self.n as f64).sqrt() * (self.t_bar - mean) / var.sqrt());
        Ok(self)
    }

    /// The summary whose standardized statistic at `theta` equals `g`.
    pub fn from_g(model: &ExpFamilyModel, theta: f64, n: u64, g: f64) -> Result<Self> {
        let mean = model.mean(theta)?;
        let var = model.variance(theta)?;
        let t_bar = mean + g * var.sqrt() / (n as f64).sqrt();
        Ok(Self { g_n: Some(g), ..Self::new(n, t_bar)? })
    }

    pub fn scale(&self) -> Scale {
        Scale::n(self.n)
    }
}

/// `D^k F(n, θ) = n (w^{(k+1)}(θ) T_n - A^{(k+1)}(θ))`, where `F` is the score.
pub fn expfam_score(model: &ExpFamilyModel, summary: &SampleSummary, theta: f64, k: usize) -> Result<f64> {
    model.check_theta(theta)?;
    let n = summary.n as f64;
    Ok(n * (model.w(theta, k + 1) * summary.t_bar - model.a(theta, k + 1)))
}

/// `I(θ) = D_w² A(θ) · w'(θ)²`.
pub fn fisher_info(model: &ExpFamilyModel, theta: f64) -> Result<f64> {
    let w1 = model.w(theta, 1);
    let i = model.variance(theta)? * w1 * w1;
    if !(i > 0.0 && i.is_finite()) {
        return Err(Error::Domain(format!("Fisher information {i} is not positive at θ = {theta}")));
    }
    Ok(i)
}

/// The score of an exponential family for a fixed sample.
#[derive(Debug, Clone)]
pub struct ExpFamilyScore {
    pub model: ExpFamilyModel,
    pub summary: SampleSummary,
}

impl Score for ExpFamilyScore {
    fn value(&self, _s: &Scale, theta: f64) -> f64 {
        expfam_score(&self.model, &self.summary, theta, 0).unwrap_or(f64::NAN)
    }

    fn derivative(&self, _s: &Scale, theta: f64, k: usize) -> Option<f64> {
        Some(expfam_score(&self.model, &self.summary, theta, k).unwrap_or(f64::NAN))
    }
}

/// Score model with rate `1/√n`, anchored at `theta0`; evaluate it at `summary.scale()`.
pub fn expfam_score_model(
    model: &ExpFamilyModel,
    summary: &SampleSummary,
    theta0: f64,
    profile: ProfileKind,
) -> ScoreModel {
    let score = ExpFamilyScore { model: model.clone(), summary: *summary };
    ScoreModel::new(theta0, Arc::new(score), profile).with_domain(model.domain)
}

/// Up-flat limit coefficients `α_0 = 0, α_1(∞), ..., α_p(∞)` at true parameter
/// `theta` and Gaussian limit `g`, from `⟨F⟩_0 = w'(θ)√Var·g` and
/// `⟨F⟩_k = w^{(k+1)}(θ)μ(θ) - A^{(k+1)}(θ)`.
pub fn expfam_limit_alpha(model: &ExpFamilyModel, theta: f64, g: f64, p: usize) -> Result<Vec<f64>> {
    let mean = model.mean(theta)?;
    let sd = model.variance(theta)?.sqrt();
    let at_mean = SampleSummary::new(1, mean)?;
    let mut coef = vec![model.w(theta, 1) * sd * g];
    for k in 1..=p {
        coef.push(expfam_score(model, &at_mean, theta, k)?);
    }
    let delta = delta_from_coefs(&coef)?;
    Ok(upflat_sequence(&TruncatedSeries::new(delta)?, p)?.into_alpha())
}

/// Coefficients `ω_0 = 0, ω_1, ..., ω_p` with `θ_p(n) = θ_0 + Σ ω_k (G_n/√n)^k`:
/// `ω_k = D^k(μ^{-1})(μ(θ_0)) / k! · (D_w² A(θ_0))^{k/2}`.
///
/// Computed as the compositional inverse of the Taylor polynomial of `μ`.
pub fn natural_scale_expansion(model: &ExpFamilyModel, theta0: f64, p: usize) -> Result<Vec<f64>> {
    let mu = model.mean_derivatives(theta0, p)?;
    let mut taylor = vec![0.0; p + 1];
    let mut fact = 1.0;
    for k in 1..=p {
        fact *= k as f64;
        taylor[k] = mu[k] / fact;
    }
    let inv = TruncatedSeries::new(taylor)?
        .inverse_composition()
        .map_err(|e| Error::NotInvertible(format!("mean function at θ = {theta0}: {e}")))?;
    let sd = (mu[1] / model.w(theta0, 1)).sqrt();
    let mut omega = vec![0.0; p + 1];
    let mut power = 1.0;
    for k in 1..=p {
        power *= sd;
        omega[k] = inv.coeff(k) * power;
    }
    Ok(omega)
}

/// Same coefficients as [`natural_scale_expansion`], from the derivatives of
/// the inverse mean function computed by Faà di Bruno.
pub fn natural_scale_expansion_direct(model: &ExpFamilyModel, theta0: f64, p: usize) -> Result<Vec<f64>> {
    let mu = model.mean_derivatives(theta0, p)?;
    let h = inverse_function_derivatives(&mu[1..], p)
        .map_err(|e| Error::NotInvertible(format!("mean function at θ = {theta0}: {e}")))?;
    let sd = (mu[1] / model.w(theta0, 1)).sqrt();
    let mut omega = vec![0.0; p + 1];
    let mut fact = 1.0;
    let mut power = 1.0;
    for k in 1..=p {
        fact *= k as f64;
        power *= sd;
        omega[k] = h[k - 1] / fact * power;
    }
    Ok(omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::bisect;

    #[test]
    fn exponential_score_and_information() {
        let m = ExpFamilyModel::exponential();
        let s = SampleSummary::new(50, 0.4).unwrap();
        // F(n, θ) = n(1/θ - T_n)
        assert!((expfam_score(&m, &s, 2.0, 0).unwrap() - 50.0 * (0.5 - 0.4)).abs() < 1e-12);
        assert!(expfam_score(&m, &s, 2.5, 0).unwrap().abs() < 1e-12);
        assert_eq!(fisher_info(&m, 2.0).unwrap(), 0.25);
        assert!(expfam_score(&m, &s, -1.0, 0).is_err());
    }

    #[test]
    fn binomial_information_and_root() {
        let m = ExpFamilyModel::binomial(1).unwrap();
        assert!((fisher_info(&m, 0.5).unwrap() - 4.0).abs() < 1e-12);
        let m3 = ExpFamilyModel::binomial(3).unwrap();
        assert!((fisher_info(&m3, 0.2).unwrap() - 3.0 / 0.16).abs() < 1e-10);
        let s = SampleSummary::new(40, 1.2).unwrap();
        let root = bisect(|t| expfam_score(&m3, &s, t, 0).unwrap(), 0.01, 0.99).unwrap();
        assert!((root - 0.4).abs() < 1e-12);
    }

    #[test]
    fn standardized_statistic() {
        let m = ExpFamilyModel::exponential();
        // G_n = √n(θ T_n - 1)
        let s = SampleSummary::new(100, 0.6).unwrap().with_theta(&m, 2.0).unwrap();
        assert!((s.g_n.unwrap() - 2.0).abs() < 1e-12);
        let back = SampleSummary::from_g(&m, 2.0, 100, 2.0).unwrap();
        assert!((back.t_bar - 0.6).abs() < 1e-15);
        let data = [0.5, 0.7];
        assert_eq!(m.summarize(&data, None).unwrap().t_bar, 0.6);
    }

    #[test]
    fn root_invariant_under_joint_scaling() {
        let lambda = 2.5;
        let base = ExpFamilyModel::exponential();
        let scaled = ExpFamilyModel::new(
            Arc::new(Affine { intercept: 0.0, slope: -lambda }),
            Arc::new(ScaledLog { scale: -lambda }),
            |x| x,
            Interval { lo: 0.0, hi: f64::INFINITY },
        );
        let s = SampleSummary::new(30, 0.8).unwrap();
        let f = |m: &ExpFamilyModel| bisect(|t| expfam_score(m, &s, t, 0).unwrap(), 0.1, 10.0).unwrap();
        assert!((f(&base) - f(&scaled)).abs() < 1e-12);
    }

    #[test]
    fn natural_scale_routes_agree() {
        let m = ExpFamilyModel::exponential();
        let a = natural_scale_expansion(&m, 2.0, 5).unwrap();
        let b = natural_scale_expansion_direct(&m, 2.0, 5).unwrap();
        for k in 1..=5 {
            // geometric coefficients θ(-1)^k
            let expected = 2.0 * (-1.0_f64).powi(k as i32);
            assert!((a[k] - expected).abs() < 1e-9 * expected.abs(), "k={k}");
            assert!((a[k] - b[k]).abs() < 1e-9 * expected.abs(), "k={k}");
        }
    }

    // F/w' = n(T_n - μ(θ)) has data-free derivatives, so α_k(n) = G_n^k ω_k
    #[test]
    fn natural_scale_coefficients_after_dividing_by_w_prime() {
        use crate::expansion::{expand_estimator, rescale_score};

        let m = ExpFamilyModel::exponential();
        let (theta, n) = (1.5, 250);
        let s = SampleSummary::new(n, 0.71).unwrap().with_theta(&m, theta).unwrap();
        let g = s.g_n.unwrap();
        let model = expfam_score_model(&m, &s, theta, ProfileKind::UpFlat);
        let natural = rescale_score(&model, m.natural_parameter()).unwrap();
        let r = expand_estimator(&natural, &s.scale(), 5, None).unwrap();
        let omega = natural_scale_expansion(&m, theta, 5).unwrap();
        for k in 1..=5 {
            let expected = g.powi(k as i32) * omega[k];
            assert!((r.alpha_s[k] - expected).abs() < 1e-9 * expected.abs().max(1.0), "k={k}");
        }
    }

    #[test]
    fn binomial_natural_scale_is_linear() {
        for trials in [1, 4] {
            let m = ExpFamilyModel::binomial(trials).unwrap();
            for theta in [0.1, 0.37, 0.5, 0.9] {
                let w = natural_scale_expansion(&m, theta, 4).unwrap();
                let expected = (theta * (1.0 - theta) / trials as f64).sqrt();
                assert!((w[1] - expected).abs() < 1e-12);
                assert!(w[2..].iter().all(|x| x.abs() < 1e-10), "{w:?}");
            }
        }
    }

    #[test]
    fn validation_on_grid() {
        let m = ExpFamilyModel::binomial(2).unwrap();
        assert!(m.validate(&Interval::new(0.05, 0.95).unwrap()).is_ok());
        assert!(m.validate(&Interval::new(0.05, 1.0).unwrap()).is_err());
    }
}
