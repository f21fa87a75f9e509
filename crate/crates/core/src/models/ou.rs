//! Drift estimation for a discretely observed Ornstein-Uhlenbeck process
//! `dX = -θ X dt + σ dB`.

use std::sync::Arc;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{Interval, Scale, Score, ScoreModel};
use crate::montecarlo::stream_rng;
use crate::related::ProfileKind;
use crate::smooth::{ScaledLog, SmoothFn};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OUSpec {
    pub theta: f64,
    pub sigma: f64,
    pub dt: f64,
    pub n: usize,
}

impl OUSpec {
    pub fn new(theta: f64, sigma: f64, dt: f64, n: usize) -> Result<Self> {
        let spec = Self { theta, sigma, dt, n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("theta", self.theta), ("sigma", self.sigma), ("dt", self.dt)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        if self.n == 0 {
            return Err(Error::OutOfRange("number of steps must be positive".into()));
        }
        Ok(())
    }

    /// Variance `σ²/(2θ)` of the invariant law.
    pub fn stationary_variance(&self) -> f64 {
        self.sigma * self.sigma / (2.0 * self.theta)
    }

    /// `η = e^{-θΔ}`.
    pub fn eta(&self) -> f64 {
        (-self.theta * self.dt).exp()
    }
}

/// Path `X_0, ..., X_n` from the exact Gaussian transition, started in the invariant law.
///
/// Uses stream 0 of `seed`.
pub fn ou_simulate(spec: &OUSpec, seed: u64) -> Result<Vec<f64>> {
    ou_simulate_stream(spec, seed, 0)
}

/// [`ou_simulate`] on an explicit stream, for independent parallel paths.
pub fn ou_simulate_stream(spec: &OUSpec, seed: u64, stream: u64) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut rng = stream_rng(seed, stream);
    let rho = spec.eta();
    let innov_sd = (spec.stationary_variance() * (1.0 - rho * rho)).sqrt();
    let mut path = Vec::with_capacity(spec.n + 1);
    let z: f64 = StandardNormal.sample(&mut rng);
    path.push(spec.stationary_variance().sqrt() * z);
    for i in 0..spec.n {
        let z: f64 = StandardNormal.sample(&mut rng);
        path.push(path[i] * rho + innov_sd * z);
    }
    Ok(path)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OUEstimate {
    /// `Σ X_{i-1} X_i / Σ X_{i-1}²`.
    pub eta_hat: f64,
    /// `-log(η̂)/Δ`.
    pub theta_hat: f64,
}

fn sums(path: &[f64]) -> (f64, f64) {
    path.windows(2).fold((0.0, 0.0), |(c, s), w| (c + w[0] * w[1], s + w[0] * w[0]))
}

pub fn ou_estimate(path: &[f64], dt: f64) -> Result<OUEstimate> {
    if path.len() < 2 {
        return Err(Error::Empty("path increments"));
    }
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("dt must be positive, got {dt}")));
    }
    let (cross, sq) = sums(path);
    if !(sq > 0.0) {
        return Err(Error::Domain("Σ X_{i-1}² vanishes".into()));
    }
    let eta_hat = cross / sq;
    if !(eta_hat > 0.0) {
        return Err(Error::Domain(format!("η̂ = {eta_hat} is not positive; log undefined")));
    }
    Ok(OUEstimate { eta_hat, theta_hat: -eta_hat.ln() / dt })
}

/// `F_n(θ) = Σ -X_{i-1}(X_i - X_{i-1} e^{-Δθ}) / σ²`.
#[derive(Debug, Clone)]
pub struct OuThetaScore {
    cross: f64,
    sq: f64,
    dt: f64,
    sigma2: f64,
}

impl OuThetaScore {
    pub fn new(path: &[f64], dt: f64, sigma: f64) -> Self {
        let (cross, sq) = sums(path);
        Self { cross, sq, dt, sigma2: sigma * sigma }
    }
}

impl Score for OuThetaScore {
    fn value(&self, _s: &Scale, theta: f64) -> f64 {
        (-self.cross + self.sq * (-self.dt * theta).exp()) / self.sigma2
    }

    fn derivative(&self, s: &Scale, theta: f64, k: usize) -> Option<f64> {
        if k == 0 {
            return Some(self.value(s, theta));
        }
        // D^k F = Σ X_{i-1}² (-Δ)^k e^{-Δθ} / σ²
        Some(self.sq * (-self.dt).powi(k as i32) * (-self.dt * theta).exp() / self.sigma2)
    }
}

/// `F†_n(η) = Σ -X_{i-1}(X_i - X_{i-1} η) / σ²`, affine in `η`.
#[derive(Debug, Clone)]
pub struct OuEtaScore {
    cross: f64,
    sq: f64,
    sigma2: f64,
}

impl OuEtaScore {
    pub fn new(path: &[f64], sigma: f64) -> Self {
        let (cross, sq) = sums(path);
        Self { cross, sq, sigma2: sigma * sigma }
    }
}

impl Score for OuEtaScore {
    fn value(&self, _s: &Scale, eta: f64) -> f64 {
        (-self.cross + self.sq * eta) / self.sigma2
    }

    fn derivative(&self, s: &Scale, eta: f64, k: usize) -> Option<f64> {
        Some(match k {
            0 => self.value(s, eta),
            1 => self.sq / self.sigma2,
            _ => 0.0,
        })
    }
}

/// Up-flat model in `θ` anchored at `spec.theta`; evaluate at `Scale::with_dt(n, dt)`.
pub fn ou_theta_model(spec: &OUSpec, path: &[f64]) -> ScoreModel {
    ScoreModel::new(spec.theta, Arc::new(OuThetaScore::new(path, spec.dt, spec.sigma)), ProfileKind::UpFlat)
        .with_domain(Interval { lo: 0.0, hi: f64::INFINITY })
}

/// Up-flat model in `η = e^{-Δθ}` anchored at `e^{-Δθ_0}`.
pub fn ou_eta_model(spec: &OUSpec, path: &[f64]) -> ScoreModel {
    ScoreModel::new(spec.eta(), Arc::new(OuEtaScore::new(path, spec.sigma)), ProfileKind::UpFlat)
        .with_domain(Interval { lo: 0.0, hi: f64::INFINITY })
}

/// `Ψ(η) = -log(η)/Δ`, mapping `η` back to `θ`.
pub fn ou_psi(dt: f64) -> Arc<dyn SmoothFn> {
    Arc::new(ScaledLog { scale: -1.0 / dt })
}

/// `Φ(θ) = e^{-Δθ}`.
pub fn ou_phi(dt: f64) -> Arc<dyn SmoothFn> {
    Arc::new(crate::smooth::ScaledExp { scale: 1.0, rate: -dt })
}
