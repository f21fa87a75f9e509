//! Estimator expansions for score models.
//!
//! A [`ScoreModel`] wraps a family `F(s, θ)` of score functions indexed by a
//! [`Scale`] `s`, an anchor `θ_0`, a rate `φ(s)` and a rate profile. The
//! engine normalizes derivatives at `θ_0` into `⟨F⟩_k(s) = φ(s)^{β_k} D^kF(s, θ_0)`,
//! solves for the related sequence and assembles
//! `θ_p(s) = θ_0 + Σ α_k(s) φ(s)^k`.

pub mod fd;
mod remainder;
mod transform;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::related::{perturb_sequence, solve_related, upflat_via_inversion, BetaProfile, ProfileKind};
use crate::series::{factorials, TruncatedSeries, LINEAR_COEFF_THRESHOLD};

pub use remainder::{remainder_bound, RemainderReport, GRID_POINTS};
pub use transform::{pullback, reparametrize, rescale_score, PullbackScore, RescaledScore};

/// Index of a member of the model family: a sample size, optionally with an observation step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scale {
    pub n: u64,
    pub dt: Option<f64>,
}

impl Scale {
    pub fn n(n: u64) -> Self {
        Self { n, dt: None }
    }

    pub fn with_dt(n: u64, dt: f64) -> Self {
        Self { n, dt: Some(dt) }
    }
}

/// Closed interval `[lo, hi]`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::Precondition(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn unbounded() -> Self {
        Self { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// `points` equally spaced nodes including both ends (`points >= 2`).
    pub fn grid(&self, points: usize) -> Vec<f64> {
        let step = (self.hi - self.lo) / (points - 1) as f64;
        (0..points).map(|i| if i + 1 == points { self.hi } else { self.lo + step * i as f64 }).collect()
    }
}

/// A family of score functions `θ ↦ F(s, θ)`.
pub trait Score: Send + Sync {
    fn value(&self, s: &Scale, theta: f64) -> f64;

    /// Analytic `D^k F(s, θ)`; `None` selects the finite-difference fallback.
    fn derivative(&self, _s: &Scale, _theta: f64, _k: usize) -> Option<f64> {
        None
    }
}

/// `D^k F(s, θ)`, analytic when the score provides it, finite differences otherwise.
pub fn score_derivative(score: &dyn Score, s: &Scale, theta: f64, k: usize) -> f64 {
    if k == 0 {
        return score.value(s, theta);
    }
    match score.derivative(s, theta, k) {
        Some(d) => d,
        None => fd::derivative(&|t| score.value(s, t), theta, k),
    }
}

type ValueFn = dyn Fn(&Scale, f64) -> f64 + Send + Sync;
type DerivFn = dyn Fn(&Scale, f64, usize) -> f64 + Send + Sync;

/// A score given by closures.
#[derive(Clone)]
pub struct ClosureScore {
    value: Arc<ValueFn>,
    deriv: Option<Arc<DerivFn>>,
}

impl ClosureScore {
    pub fn new(value: impl Fn(&Scale, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { value: Arc::new(value), deriv: None }
    }

    pub fn with_derivative(mut self, deriv: impl Fn(&Scale, f64, usize) -> f64 + Send + Sync + 'static) -> Self {
        self.deriv = Some(Arc::new(deriv));
        self
    }
}

impl Score for ClosureScore {
    fn value(&self, s: &Scale, theta: f64) -> f64 {
        (self.value)(s, theta)
    }

    fn derivative(&self, s: &Scale, theta: f64, k: usize) -> Option<f64> {
        self.deriv.as_ref().map(|d| d(s, theta, k))
    }
}

/// `F(θ) = Σ_j d_j (θ - c)^j / j!`, the same for every scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialScore {
    pub center: f64,
    /// `d_j`, the `j`-th derivative at `center`.
    pub derivs: Vec<f64>,
}

impl Score for PolynomialScore {
    fn value(&self, _s: &Scale, theta: f64) -> f64 {
        self.derivative(_s, theta, 0).expect("analytic")
    }

    fn derivative(&self, _s: &Scale, theta: f64, k: usize) -> Option<f64> {
        let x = theta - self.center;
        let mut acc = 0.0;
        let mut fact = 1.0;
        for (i, d) in self.derivs.iter().skip(k).enumerate() {
            if i > 0 {
                fact *= i as f64;
            }
            acc += d * x.powi(i as i32) / fact;
        }
        Some(acc)
    }
}

type RateFn = dyn Fn(&Scale) -> f64 + Send + Sync;

/// `φ(s) = 1/√n`.
pub fn inv_sqrt_n(s: &Scale) -> f64 {
    1.0 / (s.n as f64).sqrt()
}

/// A score family with anchor, rate and profile.
#[derive(Clone)]
pub struct ScoreModel {
    theta0: f64,
    score: Arc<dyn Score>,
    rate: Arc<RateFn>,
    profile: ProfileKind,
    domain: Interval,
}

impl fmt::Debug for ScoreModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScoreModel")
            .field("theta0", &self.theta0)
            .field("profile", &self.profile)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl ScoreModel {
    /// Model with rate `1/√n` and an unbounded domain.
    pub fn new(theta0: f64, score: Arc<dyn Score>, profile: ProfileKind) -> Self {
        Self { theta0, score, rate: Arc::new(inv_sqrt_n), profile, domain: Interval::unbounded() }
    }

    pub fn with_rate(mut self, rate: impl Fn(&Scale) -> f64 + Send + Sync + 'static) -> Self {
        self.rate = Arc::new(rate);
        self
    }

    pub fn with_domain(mut self, domain: Interval) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_theta0(mut self, theta0: f64) -> Self {
        self.theta0 = theta0;
        self
    }

    pub fn with_profile(mut self, profile: ProfileKind) -> Self {
        self.profile = profile;
        self
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn profile(&self) -> ProfileKind {
        self.profile
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn score(&self) -> &Arc<dyn Score> {
        &self.score
    }

    pub fn rate(&self, s: &Scale) -> Result<f64> {
        let phi = (self.rate)(s);
        if !(phi > 0.0 && phi.is_finite()) {
            return Err(Error::Domain(format!("rate must be positive and finite, got {phi}")));
        }
        Ok(phi)
    }

    pub fn value(&self, s: &Scale, theta: f64) -> f64 {
        self.score.value(s, theta)
    }

    /// `D^k F(s, θ)` with the finite-difference fallback.
    pub fn derivative(&self, s: &Scale, theta: f64, k: usize) -> Result<f64> {
        if !self.domain.contains(theta) {
            return Err(Error::Domain(format!("θ = {theta} outside the model domain")));
        }
        let d = score_derivative(self.score.as_ref(), s, theta, k);
        if !d.is_finite() {
            return Err(Error::NonFinite("score derivative"));
        }
        Ok(d)
    }

    pub fn beta_profile(&self, p: usize) -> Result<BetaProfile> {
        BetaProfile::of_kind(self.profile, p)
    }

    /// `⟨F⟩_0(s), ..., ⟨F⟩_p(s)`.
    pub fn coefs(&self, s: &Scale, p: usize) -> Result<Vec<f64>> {
        let beta = self.beta_profile(p)?;
        (0..=p).map(|k| coef_extract(self, s, k, &beta)).collect()
    }
}

/// `⟨F⟩_k(s) = φ(s)^{β_k} D^k F(s, θ_0)`.
pub fn coef_extract(model: &ScoreModel, s: &Scale, k: usize, beta: &BetaProfile) -> Result<f64> {
    if k > beta.p() + 1 {
        return Err(Error::OutOfRange(format!("coefficient index {k} beyond the profile")));
    }
    let phi = model.rate(s)?;
    let d = model.derivative(s, model.theta0, k)?;
    Ok(phi.powi(beta.beta_at(k) as i32) * d)
}

/// `δ_k = -⟨F⟩_k / (k! ⟨F⟩_1)`.
pub fn delta_from_coefs(coef: &[f64]) -> Result<Vec<f64>> {
    if coef.len() < 2 {
        return Err(Error::OutOfRange("need at least <F>_0 and <F>_1".into()));
    }
    let scale = coef.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
    let c1 = coef[1];
    if !(c1.abs() >= LINEAR_COEFF_THRESHOLD * scale) {
        return Err(Error::Singular { what: "<F>_1", value: c1 });
    }
    let fact = factorials(coef.len() - 1);
    Ok(coef.iter().zip(&fact).map(|(c, f)| -c / (f * c1)).collect())
}

/// `θ_0 + Σ_{k>=1} α_k φ^k`, accumulated in increasing `k`.
pub fn assemble(theta0: f64, alpha: &[f64], phi: f64) -> f64 {
    let mut acc = theta0;
    let mut power = 1.0;
    for a in alpha.iter().skip(1) {
        power *= phi;
        acc += a * power;
    }
    acc
}

/// True when some term of order `k >= 2` outweighs the first-order term.
///
/// [`ExpansionResult::boundary_layer`] applies it to both `α(s)` and, when
/// given, the limit coefficients.
pub fn boundary_layer(alpha: &[f64], phi: f64) -> bool {
    if alpha.len() < 3 {
        return false;
    }
    let lead = alpha[1].abs() * phi;
    let mut power = phi;
    alpha.iter().skip(2).any(|a| {
        power *= phi;
        a.abs() * power > lead
    })
}

/// Everything the engine reports for one scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionResult {
    pub p: usize,
    pub profile: ProfileKind,
    pub theta0: f64,
    pub phi: f64,
    pub coef: Vec<f64>,
    pub delta: Vec<f64>,
    pub alpha_s: Vec<f64>,
    pub alpha_lim: Option<Vec<f64>>,
    pub theta_p_s: f64,
    pub theta_p_inf: Option<f64>,
    pub remainder: Option<RemainderReport>,
    pub boundary_layer: bool,
}

impl ExpansionResult {
    fn build(
        p: usize,
        profile: ProfileKind,
        theta0: f64,
        phi: f64,
        coef: Vec<f64>,
        delta: Vec<f64>,
        alpha_s: Vec<f64>,
        alpha_lim: Option<&[f64]>,
    ) -> Result<Self> {
        let alpha_lim = match alpha_lim {
            Some(a) if a.len() != p + 1 => {
                return Err(Error::OrderMismatch { left: a.len().saturating_sub(1), right: p })
            }
            Some(a) => Some(a.to_vec()),
            None => None,
        };
        let theta_p_s = assemble(theta0, &alpha_s, phi);
        let theta_p_inf = alpha_lim.as_ref().map(|a| assemble(theta0, a, phi));
        let boundary_layer =
            boundary_layer(&alpha_s, phi) || alpha_lim.as_ref().is_some_and(|a| boundary_layer(a, phi));
        if boundary_layer {
            log::warn!("higher-order terms dominate the first-order term; the expansion may be unreliable");
        }
        Ok(Self {
            p,
            profile,
            theta0,
            phi,
            coef,
            delta,
            alpha_s,
            alpha_lim,
            theta_p_s,
            theta_p_inf,
            remainder: None,
            boundary_layer,
        })
    }

    /// Recomputes `θ_p(s)` from the stored coefficients.
    pub fn recompute_theta_p_s(&self) -> f64 {
        assemble(self.theta0, &self.alpha_s, self.phi)
    }
}

/// Expansion `θ_p(s)` of the root of `F(s, ·)` near `θ_0`, and `θ_p(s, ∞)`
/// when limit coefficients are supplied.
pub fn expand_estimator(model: &ScoreModel, s: &Scale, p: usize, alpha_lim: Option<&[f64]>) -> Result<ExpansionResult> {
    let beta = model.beta_profile(p)?;
    let phi = model.rate(s)?;
    let coef = model.coefs(s, p)?;
    let delta = delta_from_coefs(&coef)?;
    let seq = solve_related(&TruncatedSeries::new(delta.clone())?, &beta)?;
    ExpansionResult::build(p, model.profile, model.theta0, phi, coef, delta, seq.into_alpha(), alpha_lim)
}

/// Same as [`expand_estimator`] with `⟨F⟩_0` replaced by `⟨F⟩_0 - λ_0`.
pub fn expand_perturbed(model: &ScoreModel, s: &Scale, p: usize, lambda0: f64) -> Result<ExpansionResult> {
    let beta = model.beta_profile(p)?;
    let phi = model.rate(s)?;
    let coef = model.coefs(s, p)?;
    let fact = factorials(p);
    let taylor: Vec<f64> = coef.iter().zip(&fact).map(|(c, f)| c / f).collect();
    let seq = perturb_sequence(&TruncatedSeries::new(taylor)?, lambda0, p, &beta)?;
    let mut shifted = coef.clone();
    shifted[0] -= lambda0;
    let delta = delta_from_coefs(&shifted)?;
    ExpansionResult::build(p, model.profile, model.theta0, phi, coef, delta, seq.into_alpha(), None)
}

/// Half-width of the window around `θ_0` on which [`expansion_via_inverse`]
/// checks monotonicity, relative to `max(1, |θ_0|)`.
pub const MONOTONE_WINDOW: f64 = 0.5;

/// Up-flat expansion through the compositional inverse of the Taylor
/// polynomial of `F(s, ·)` at `θ_0`.
///
/// Fails if `F(s, ·)` is not strictly monotone on a grid over
/// `[θ_0 - r, θ_0 + r] ∩ domain` (domain endpoints excluded), with `r = MONOTONE_WINDOW · max(1, |θ_0|)`.
pub fn expansion_via_inverse(model: &ScoreModel, s: &Scale, p: usize) -> Result<ExpansionResult> {
    let theta0 = model.theta0;
    let r = MONOTONE_WINDOW * theta0.abs().max(1.0);
    let window = Interval { lo: theta0 - r, hi: theta0 + r }
        .intersect(&model.domain)
        .ok_or_else(|| Error::Domain("anchor outside the model domain".into()))?;
    check_monotone(model, s, &window)?;

    let phi = model.rate(s)?;
    let beta = BetaProfile::up_flat(p)?;
    let raw: Vec<f64> = (0..=p).map(|k| model.derivative(s, theta0, k)).collect::<Result<_>>()?;
    let d1 = raw[1];
    if d1 == 0.0 {
        return Err(Error::Singular { what: "DF", value: d1 });
    }
    let fact = factorials(p);
    let mut delta: Vec<f64> = raw.iter().zip(&fact).map(|(d, f)| -d / (f * d1)).collect();
    delta[0] = -raw[0] / (phi * d1);
    let seq = upflat_via_inversion(&TruncatedSeries::new(delta.clone())?, p)?;
    let coef: Vec<f64> = raw.iter().enumerate().map(|(k, d)| phi.powi(beta.beta_at(k) as i32) * d).collect();
    ExpansionResult::build(p, ProfileKind::UpFlat, theta0, phi, coef, delta, seq.into_alpha(), None)
}

fn check_monotone(model: &ScoreModel, s: &Scale, window: &Interval) -> Result<()> {
    if window.lo == window.hi {
        return Ok(());
    }
    // open domain: an endpoint shared with the domain boundary is not evaluated
    let values: Vec<f64> = window
        .grid(GRID_POINTS)
        .into_iter()
        .filter(|t| *t != model.domain.lo && *t != model.domain.hi)
        .map(|t| model.value(s, t))
        .collect();
    let inc = values.windows(2).all(|w| w[1] > w[0]);
    let dec = values.windows(2).all(|w| w[1] < w[0]);
    if inc || dec {
        Ok(())
    } else {
        Err(Error::NotInvertible(format!("score is not monotone on [{}, {}]", window.lo, window.hi)))
    }
}

/// Root of `f` on `[lo, hi]` by bisection; `f(lo)` and `f(hi)` must differ in sign.
pub fn bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::Precondition(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..2000 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    // F(n, θ) = n(1/θ - T) with analytic derivatives.
    fn exponential(theta: f64, t: f64) -> ScoreModel {
        let score = ClosureScore::new(move |s, th| s.n as f64 * (1.0 / th - t)).with_derivative(move |s, th, k| {
            let n = s.n as f64;
            if k == 0 {
                return n * (1.0 / th - t);
            }
            let fact: f64 = (1..=k).map(|j| j as f64).product();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            n * sign * fact / th.powi(k as i32 + 1)
        });
        ScoreModel::new(theta, Arc::new(score), ProfileKind::UpFlat)
            .with_domain(Interval::new(1e-9, f64::INFINITY).unwrap())
    }

    fn exponential_fd(theta: f64, t: f64) -> ScoreModel {
        let score = ClosureScore::new(move |s, th| s.n as f64 * (1.0 / th - t));
        ScoreModel::new(theta, Arc::new(score), ProfileKind::UpFlat)
    }

    #[test]
    fn exponential_worked_value() {
        let m = exponential(2.0, 0.6);
        let r = expand_estimator(&m, &Scale::n(100), 3, None).unwrap();
        assert!((r.theta_p_s - 1.664).abs() < 1e-12, "{}", r.theta_p_s);
        assert_eq!(r.alpha_s[0], 0.0);
        assert_eq!(r.theta_p_s, r.recompute_theta_p_s());
    }

    #[test]
    fn newton_step_at_order_one() {
        let m = exponential(2.0, 0.6);
        let s = Scale::n(100);
        let r = expand_estimator(&m, &s, 1, None).unwrap();
        let c = m.coefs(&s, 1).unwrap();
        assert_eq!(r.alpha_s[1], -c[0] / c[1]);
        assert_eq!(r.theta_p_s, 2.0 + r.alpha_s[1] * 0.1);
    }

    #[test]
    fn exponential_coefficients() {
        let m = exponential(2.0, 0.6);
        let s = Scale::n(100);
        let c = m.coefs(&s, 4).unwrap();
        // <F>_0 = √n(1/θ - T) and <F>_k = (-1)^k k!/θ^{k+1}
        assert!((c[0] - 10.0 * (0.5 - 0.6)).abs() < 1e-12);
        for (k, ck) in c.iter().enumerate().skip(1) {
            let fact: f64 = (1..=k).map(|j| j as f64).product();
            let exp = (-1.0_f64).powi(k as i32) * fact / 2.0_f64.powi(k as i32 + 1);
            assert!((ck - exp).abs() < 1e-12 * exp.abs());
        }
        let d = delta_from_coefs(&c).unwrap();
        assert_eq!(d[1], -1.0);
        for (k, dk) in d.iter().enumerate().skip(1) {
            let exp = (-1.0_f64).powi(k as i32) / 2.0_f64.powi(k as i32 - 1);
            assert!((dk - exp).abs() < 1e-14);
        }
    }

    #[test]
    fn delta_identity_and_singularity() {
        let c = [0.3, -1.7, 2.2, 0.4];
        let d = delta_from_coefs(&c).unwrap();
        let fact = [1.0, 1.0, 2.0, 6.0];
        for k in 0..4 {
            assert!((fact[k] * d[k] * c[1] + c[k]).abs() < 1e-14);
        }
        assert!(matches!(delta_from_coefs(&[1.0, 0.0, 1.0]), Err(Error::Singular { .. })));
    }

    #[test]
    fn finite_difference_fallback_matches_analytic() {
        let a = exponential(2.0, 0.6);
        let b = exponential_fd(2.0, 0.6);
        let s = Scale::n(100);
        let beta = BetaProfile::up_flat(3).unwrap();
        for k in 0..=3 {
            let x = coef_extract(&a, &s, k, &beta).unwrap();
            let y = coef_extract(&b, &s, k, &beta).unwrap();
            assert!(((x - y) / x).abs() < 1e-6, "k={k}: {x} vs {y}");
        }
    }

    #[test]
    fn inversion_route_agrees() {
        let m = exponential(2.0, 0.57);
        let s = Scale::n(50);
        let a = expand_estimator(&m, &s, 5, None).unwrap();
        let b = expansion_via_inverse(&m, &s, 5).unwrap();
        for k in 1..=5 {
            assert!(((a.alpha_s[k] - b.alpha_s[k]) / a.alpha_s[k]).abs() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn affine_score_terminates() {
        let c = 0.8;
        let score = PolynomialScore { center: 0.0, derivs: vec![-c, 1.0] };
        let m = ScoreModel::new(0.5, Arc::new(score), ProfileKind::UpFlat);
        let s = Scale::n(25);
        let r = expansion_via_inverse(&m, &s, 4).unwrap();
        assert!(r.alpha_s[2..].iter().all(|a| a.abs() < 1e-15));
        assert!((r.theta_p_s - c).abs() < 1e-15);
    }

    #[test]
    fn non_monotone_score_is_rejected() {
        let score = PolynomialScore { center: 0.0, derivs: vec![-0.1, 0.0, 2.0] };
        let m = ScoreModel::new(0.1, Arc::new(score), ProfileKind::UpFlat);
        assert!(matches!(expansion_via_inverse(&m, &Scale::n(4), 3), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn expansion_tracks_bisection_root() {
        let (theta, t) = (2.0, 0.53);
        let m = exponential(theta, t);
        for p in 1..=3 {
            let s = Scale::n(400);
            let r = expand_estimator(&m, &s, p, None).unwrap();
            let root = bisect(|th| m.value(&s, th), 0.5, 5.0).unwrap();
            assert!((root - 1.0 / t).abs() < 1e-12);
            let g = 20.0 * (theta * t - 1.0);
            let tail = theta * (g / 20.0).abs().powi(p as i32 + 1) / (1.0 + g / 20.0);
            assert!(((r.theta_p_s - root).abs() - tail).abs() < 1e-12);
        }
    }

    #[test]
    fn limit_coefficients() {
        let m = exponential(2.0, 0.6);
        let lim = [0.0, 1.0, 0.5];
        let r = expand_estimator(&m, &Scale::n(100), 2, Some(&lim)).unwrap();
        assert_eq!(r.theta_p_inf, Some(2.0 + 0.1 + 0.005));
        assert!(expand_estimator(&m, &Scale::n(100), 2, Some(&[0.0, 1.0])).is_err());
    }

    #[test]
    fn perturbed_expansion_hook() {
        let m = exponential(2.0, 0.6);
        let s = Scale::n(100);
        let base = expand_estimator(&m, &s, 3, None).unwrap();
        let same = expand_perturbed(&m, &s, 3, 0.0).unwrap();
        for k in 0..=3 {
            assert!((base.alpha_s[k] - same.alpha_s[k]).abs() <= 1e-12 * base.alpha_s[k].abs());
        }
        let c0 = base.coef[0];
        let killed = expand_perturbed(&m, &s, 3, c0).unwrap();
        assert_eq!(killed.theta_p_s, 2.0);
    }

    #[test]
    fn boundary_layer_criterion() {
        assert!(!boundary_layer(&[0.0, 1.0, 1.0], 0.1));
        assert!(boundary_layer(&[0.0, 0.01, 5.0], 0.1));
        assert!(!boundary_layer(&[0.0, 1.0], 0.9));
    }

    #[test]
    fn zigzag_profile_model() {
        let score = PolynomialScore { center: 0.0, derivs: vec![0.3, -1.0, 0.4, 0.2, 0.1] };
        let m = ScoreModel::new(0.0, Arc::new(score), ProfileKind::ZigZag);
        let r = expand_estimator(&m, &Scale::n(16), 3, None).unwrap();
        assert_eq!(r.alpha_s[2], 0.0);
        let custom = m.clone().with_profile(ProfileKind::Custom);
        assert!(matches!(expand_estimator(&custom, &Scale::n(16), 3, None), Err(Error::UnsupportedProfile(_))));
    }

    #[test]
    fn bisect_basics() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((r - 2.0_f64.sqrt()).abs() < 1e-15);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0).is_err());
    }
}
