//! Finite-scale bound on the distance between the root and its expansion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{ExpansionResult, Interval, Scale, ScoreModel};

/// Number of grid points used for suprema and infima over `U`.
pub const GRID_POINTS: usize = 101;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemainderReport {
    /// Bound on `|θ(s) - θ_p(s)|`.
    pub bound: f64,
    /// The constant `K(s)`.
    pub k_const: f64,
    /// Lower bound on `φ^{β_1}|DF|` over `U` that was used.
    pub c: f64,
    /// True when `c` came from the grid rather than from the caller.
    pub c_estimated: bool,
    /// `Σ |α_k(s)|`.
    pub sum_abs_alpha: f64,
    /// `θ_0` and `θ_p(s)` both lie in `U`.
    pub anchors_in_u: bool,
    /// `θ_0 + Σ |α_k| φ^k` lies in `U`.
    pub reach_in_u: bool,
}

/// `K(s) · max{S, S^{p+1}} · φ(s)^{p+1}` with `S = Σ|α_k(s)|` and
///
/// ```text
/// K(s) = [ Σ_{m<=p, β_m+1<=β⋆} φ^{β_1-β⋆} |⟨F⟩_m| + Σ_{m=2..p+1} sup_U φ^{β_1} |D^m F| ] / c
/// ```
///
/// Suprema are taken on a [`GRID_POINTS`] grid over `U`. When `c` is `None`
/// it defaults to the grid minimum of `φ^{β_1}|DF|`, which is only a
/// heuristic lower bound.
pub fn remainder_bound(
    model: &ScoreModel,
    s: &Scale,
    result: &ExpansionResult,
    u: &Interval,
    c: Option<f64>,
) -> Result<RemainderReport> {
    if !u.is_bounded() {
        return Err(Error::InvalidBound("U must be bounded".into()));
    }
    let p = result.p;
    let beta = model.beta_profile(p)?;
    let phi = model.rate(s)?;
    let beta1 = beta.beta_at(1) as i32;
    let beta_star = beta.beta_star();
    let grid = u.grid(GRID_POINTS);

    let (c, c_estimated) = match c {
        Some(c) if !(c > 0.0) => {
            return Err(Error::InvalidBound(format!("c must be positive, got {c}")));
        }
        Some(c) => (c, false),
        None => {
            let mut min = f64::INFINITY;
            for w in &grid {
                min = min.min(phi.powi(beta1) * model.derivative(s, *w, 1)?.abs());
            }
            if !(min > 0.0) {
                return Err(Error::InvalidBound("DF vanishes on the grid over U".into()));
            }
            log::warn!("remainder bound uses a grid estimate c = {min:e}; it is not a certified lower bound");
            (min, true)
        }
    };

    let mut numer = 0.0;
    for m in 1..=p {
        if beta.beta_at(m) + 1 <= beta_star {
            numer += phi.powi(beta1 - beta_star as i32) * result.coef[m].abs();
        }
    }
    for m in 2..=p + 1 {
        let mut sup = 0.0_f64;
        for w in &grid {
            sup = sup.max(model.derivative(s, *w, m)?.abs());
        }
        numer += phi.powi(beta1) * sup;
    }
    let k_const = numer / c;

    let sum_abs_alpha: f64 = result.alpha_s.iter().skip(1).map(|a| a.abs()).sum();
    let bound = if sum_abs_alpha == 0.0 {
        0.0
    } else {
        k_const * sum_abs_alpha.max(sum_abs_alpha.powi(p as i32 + 1)) * phi.powi(p as i32 + 1)
    };

    let reach: f64 = {
        let mut power = 1.0;
        result
            .alpha_s
            .iter()
            .skip(1)
            .map(|a| {
                power *= phi;
                a.abs() * power
            })
            .sum()
    };
    let anchors_in_u = u.contains(result.theta0) && u.contains(result.theta_p_s);
    let reach_in_u = u.contains(result.theta0 + reach);
    if !anchors_in_u {
        log::warn!("θ_0 or θ_p(s) lies outside U; the bound does not apply");
    }
    Ok(RemainderReport { bound, k_const, c, c_estimated, sum_abs_alpha, anchors_in_u, reach_in_u })
}
