//! Closed forms for the exponential and binomial families.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{expand_estimator, ExpansionResult};
use crate::related::ProfileKind;

use super::expfam::{expfam_limit_alpha, expfam_score_model, ExpFamilyModel, SampleSummary};

/// Exact root of the exponential-model score written through `x = G_n/√n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentialClosedForms {
    /// `H(x) = -θx/(1+x)`.
    pub h: f64,
    /// `𝓗(x) = θ/(1+x)`.
    pub script_h: f64,
    /// The MLE `θ_∞(n) = θ/(1 + G_n/√n) = 1/T_n`.
    pub theta_inf: f64,
}

pub fn exponential_closed_forms(theta: f64, g: f64, n: u64) -> Result<ExponentialClosedForms> {
    if n == 0 {
        return Err(Error::OutOfRange("sample size must be positive".into()));
    }
    let x = g / (n as f64).sqrt();
    if x <= -1.0 {
        return Err(Error::Domain(format!("G_n = {g} falls in the excluded event G_n <= -√n")));
    }
    let script_h = theta / (1.0 + x);
    Ok(ExponentialClosedForms { h: -theta * x / (1.0 + x), script_h, theta_inf: script_h })
}

/// `θ Σ_{k=0..p} (-G_n/√n)^k`.
pub fn exponential_theta_p(theta: f64, g: f64, n: u64, p: usize) -> f64 {
    let x = -g / (n as f64).sqrt();
    let mut acc = 0.0;
    let mut power = 1.0;
    for _ in 0..=p {
        acc += power;
        power *= x;
    }
    theta * acc
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinomialExpansions {
    pub theta2_inf: f64,
    pub theta3_inf: f64,
}

/// Second and third order expansions of the binomial MLE with Gaussian limit `g`.
pub fn binomial_expansions(theta: f64, trials: u64, n: u64, g: f64) -> Result<BinomialExpansions> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("θ = {theta} outside (0, 1)")));
    }
    if trials == 0 || n == 0 {
        return Err(Error::OutOfRange("sizes must be positive".into()));
    }
    let (nn, big_n) = (n as f64, trials as f64);
    let v = theta * (1.0 - theta);
    let theta2_inf = theta + g * v.sqrt() / (nn * big_n).sqrt() + g * g / nn * (1.0 - 2.0 * theta) / big_n;
    let theta3_inf =
        theta2_inf + g.powi(3) / (nn * big_n).powf(1.5) * (1.0 - 5.0 * theta + 5.0 * theta * theta) / v.sqrt();
    Ok(BinomialExpansions { theta2_inf, theta3_inf })
}

/// Up-flat limit coefficients of the binomial MLE; see [`expfam_limit_alpha`].
pub fn binomial_limit_alpha(theta: f64, trials: u64, g: f64, p: usize) -> Result<Vec<f64>> {
    expfam_limit_alpha(&ExpFamilyModel::binomial(trials)?, theta, g, p)
}

/// Zig-zag expansion of the binomial MLE anchored at `θ_0 = 1/2`.
pub fn binomial_phase_transition(n: u64, trials: u64, t_bar: f64, p: usize) -> Result<ExpansionResult> {
    let model = ExpFamilyModel::binomial(trials)?;
    let summary = SampleSummary::new(n, t_bar)?.with_theta(&model, 0.5)?;
    let score = expfam_score_model(&model, &summary, 0.5, ProfileKind::ZigZag);
    expand_estimator(&score, &summary.scale(), p, None)
}
