//! Changes of variable and changes of scale.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::related::RelatedSequence;
use crate::series::{
    faa_di_bruno, factorials, leibniz, reciprocal_derivatives, TruncatedSeries, LINEAR_COEFF_THRESHOLD,
};
use crate::smooth::SmoothFn;

use super::{score_derivative, Scale, Score, ScoreModel};

/// Pushes an expansion in `η` forward through `Ψ`.
///
/// `psi_derivs[m-1]` is `D^mΨ(η_0)` for `m = 1..p`; the result holds the
/// coefficients of `Ψ(η_0 + Σ α†_k x^k) - Ψ(η_0)` up to degree `p`.
pub fn reparametrize(alpha_dag: &RelatedSequence, psi_derivs: &[f64], p: usize) -> Result<RelatedSequence> {
    if alpha_dag.order() != p {
        return Err(Error::OrderMismatch { left: alpha_dag.order(), right: p });
    }
    if psi_derivs.len() < p {
        return Err(Error::OutOfRange(format!(
            "need {p} derivatives of the change of variable, got {}",
            psi_derivs.len()
        )));
    }
    let fact = factorials(p);
    let mut taylor = vec![0.0; p + 1];
    for m in 1..=p {
        taylor[m] = psi_derivs[m - 1] / fact[m];
    }
    let outer = TruncatedSeries::new(taylor)?;
    let inner = TruncatedSeries::new(alpha_dag.alpha().to_vec())?;
    let pushed = outer.compose(&inner)?;
    RelatedSequence::new(pushed.into_coeffs(), alpha_dag.profile().clone())
}

/// `F†(s, η) = F(s, Ψ(η))`.
pub struct PullbackScore {
    inner: Arc<dyn Score>,
    psi: Arc<dyn SmoothFn>,
}

impl Score for PullbackScore {
    fn value(&self, s: &Scale, eta: f64) -> f64 {
        self.inner.value(s, self.psi.value(eta))
    }

    fn derivative(&self, s: &Scale, eta: f64, k: usize) -> Option<f64> {
        let theta = self.psi.value(eta);
        let f: Vec<f64> = (1..=k).map(|m| score_derivative(self.inner.as_ref(), s, theta, m)).collect();
        let g = self.psi.derivatives(eta, k);
        faa_di_bruno(&f, &g, k).ok()
    }
}

/// The model `F∘Ψ` anchored at `η_0`, with the same rate and profile.
///
/// The domain is left unbounded; narrow it with [`ScoreModel::with_domain`].
pub fn pullback(model: &ScoreModel, psi: Arc<dyn SmoothFn>, eta0: f64) -> ScoreModel {
    let score = PullbackScore { inner: model.score.clone(), psi };
    ScoreModel {
        theta0: eta0,
        score: Arc::new(score),
        rate: model.rate.clone(),
        profile: model.profile,
        domain: super::Interval::unbounded(),
    }
}

/// `F̌(s, θ) = F(s, θ) / Φ'(θ)`.
pub struct RescaledScore {
    inner: Arc<dyn Score>,
    phi: Arc<dyn SmoothFn>,
}

impl Score for RescaledScore {
    fn value(&self, s: &Scale, theta: f64) -> f64 {
        self.inner.value(s, theta) / self.phi.derivative(theta, 1)
    }

    fn derivative(&self, s: &Scale, theta: f64, k: usize) -> Option<f64> {
        let y: Vec<f64> = (0..=k).map(|i| self.phi.derivative(theta, i + 1)).collect();
        let r = reciprocal_derivatives(&y, k).ok()?;
        let f: Vec<f64> = (0..=k).map(|j| score_derivative(self.inner.as_ref(), s, theta, j)).collect();
        Some(leibniz(&f, &r, k))
    }
}

/// Divides the score by `Φ'`, which leaves its roots unchanged.
pub fn rescale_score(model: &ScoreModel, phi: Arc<dyn SmoothFn>) -> Result<ScoreModel> {
    let d = phi.derivative(model.theta0, 1);
    let scale = phi.derivative(model.theta0, 0).abs().max(1.0);
    if !(d.abs() >= LINEAR_COEFF_THRESHOLD * scale) {
        return Err(Error::Singular { what: "derivative of the scale change", value: d });
    }
    let score = RescaledScore { inner: model.score.clone(), phi };
    Ok(ScoreModel {
        theta0: model.theta0,
        score: Arc::new(score),
        rate: model.rate.clone(),
        profile: model.profile,
        domain: model.domain,
    })
}
