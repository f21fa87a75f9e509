//! Rate profiles and related coefficient sequences.
//!
//! Given normalized Taylor coefficients `δ_0..δ_p` of a score and a rate
//! profile `β`, a related sequence `α_1..α_p` cancels every power of `z` in
//!
//! ```text
//! δ_0 z^{-β_0} + Σ_{m=1..p} δ_m Σ_{k_1+..+k_m < γ_m} α_{k_1}..α_{k_m} z^{k_1+..+k_m-β_m}.
//! ```
//!
//! Closed recursions exist for the up-flat profile `(1,2,2,..)` and the
//! zig-zag profile `(1,2,1,2,..)`. For any other profile only the residual
//! can be checked.

mod symbolic;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Coeff, PowerTable, TruncatedSeries};

pub use symbolic::{upflat_symbolic, zigzag_symbolic, MAX_SYMBOLIC_ORDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    UpFlat,
    ZigZag,
    Custom,
}

impl std::str::FromStr for ProfileKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "upflat" | "up-flat" => Ok(Self::UpFlat),
            "zigzag" | "zig-zag" => Ok(Self::ZigZag),
            other => Err(Error::UnsupportedProfile(other.to_string())),
        }
    }
}

/// The exponents `β_0..β_{p+1}` with the derived `β⋆` and `γ_1..γ_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaProfile {
    beta: Vec<i64>,
    beta_star: i64,
    gamma: Vec<i64>,
    kind: ProfileKind,
}

impl BetaProfile {
    /// Builds a profile of order `p = beta.len() - 2`; needs `p >= 1`.
    pub fn new(beta: Vec<i64>) -> Result<Self> {
        if beta.len() < 3 {
            return Err(Error::OutOfRange(format!(
                "a rate profile needs at least 3 entries (p >= 1), got {}",
                beta.len()
            )));
        }
        let p = beta.len() - 2;
        let beta_star = *beta[2..].iter().max().expect("non-empty");
        let gamma = (1..=p).map(|m| p as i64 + 1 + (beta[m] - beta_star).min(0)).collect();
        let kind = if beta == up_flat_values(p) {
            ProfileKind::UpFlat
        } else if beta == zigzag_values(p) {
            ProfileKind::ZigZag
        } else {
            ProfileKind::Custom
        };
        Ok(Self { beta, beta_star, gamma, kind })
    }

    pub fn up_flat(p: usize) -> Result<Self> {
        Self::new(up_flat_values(p))
    }

    pub fn zigzag(p: usize) -> Result<Self> {
        Self::new(zigzag_values(p))
    }

    pub fn of_kind(kind: ProfileKind, p: usize) -> Result<Self> {
        match kind {
            ProfileKind::UpFlat => Self::up_flat(p),
            ProfileKind::ZigZag => Self::zigzag(p),
            ProfileKind::Custom => Err(Error::UnsupportedProfile("a custom profile needs explicit exponents".into())),
        }
    }

    pub fn p(&self) -> usize {
        self.beta.len() - 2
    }

    pub fn beta(&self) -> &[i64] {
        &self.beta
    }

    pub fn beta_at(&self, k: usize) -> i64 {
        self.beta[k]
    }

    pub fn beta_star(&self) -> i64 {
        self.beta_star
    }

    /// `γ_m` for `1 <= m <= p`.
    pub fn gamma(&self, m: usize) -> i64 {
        self.gamma[m - 1]
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    /// The same profile with every exponent moved by `shift`.
    pub fn shifted(&self, shift: i64) -> Self {
        Self::new(self.beta.iter().map(|b| b + shift).collect()).expect("same length")
    }
}

fn up_flat_values(p: usize) -> Vec<i64> {
    let mut v = vec![2; p + 2];
    v[0] = 1;
    v
}

fn zigzag_values(p: usize) -> Vec<i64> {
    (0..p + 2).map(|k| if k % 2 == 0 { 1 } else { 2 }).collect()
}

/// Coefficients `α_0 = 0, α_1, ..., α_p` tied to the profile they solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelatedSequence {
    alpha: Vec<f64>,
    profile: BetaProfile,
}

impl RelatedSequence {
    /// Wraps caller-provided coefficients. `alpha[0]` must be zero and the
    /// length must match the profile order.
    pub fn new(alpha: Vec<f64>, profile: BetaProfile) -> Result<Self> {
        if alpha.len() != profile.p() + 1 {
            return Err(Error::OrderMismatch { left: alpha.len().saturating_sub(1), right: profile.p() });
        }
        if alpha[0] != 0.0 {
            return Err(Error::Precondition(format!("alpha_0 must be 0, got {}", alpha[0])));
        }
        Ok(Self { alpha, profile })
    }

    pub fn order(&self) -> usize {
        self.alpha.len() - 1
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn profile(&self) -> &BetaProfile {
        &self.profile
    }

    pub fn into_alpha(self) -> Vec<f64> {
        self.alpha
    }

    /// `Σ_{k=1..p} α_k x^k`.
    pub fn eval(&self, x: f64) -> f64 {
        self.alpha.iter().rev().fold(0.0, |acc, a| acc * x + a)
    }
}

/// The up-flat recursion on normalized coefficients `dhat[k] = -δ_k/δ_1`.
///
/// Entry `dhat[1]` is ignored. Shared by the numeric and symbolic paths.
pub(crate) fn upflat_recursion<T: Coeff>(dhat: &[T], p: usize) -> Vec<T> {
    let zero = dhat[0].zero_like();
    let mut table = PowerTable::new(&zero, p, p);
    let mut alpha = vec![zero.clone(); p + 1];
    if p == 0 {
        return alpha;
    }
    alpha[1] = dhat[0].clone();
    table.set_linear(1, alpha[1].clone());
    for q in 2..=p {
        table.fill_higher(q);
        let mut acc = zero.clone();
        for m in 2..=q {
            acc = acc + dhat[m].clone() * table.get(m, q).clone();
        }
        alpha[q] = acc.clone();
        table.set_linear(q, acc);
    }
    alpha
}

/// The zig-zag recursion: even coefficients vanish, odd ones collect the
/// even-power terms one degree lower.
pub(crate) fn zigzag_recursion<T: Coeff>(dhat: &[T], p: usize) -> Vec<T> {
    let zero = dhat[0].zero_like();
    let mut table = PowerTable::new(&zero, p, p);
    let mut alpha = vec![zero.clone(); p + 1];
    if p == 0 {
        return alpha;
    }
    alpha[1] = dhat[0].clone();
    table.set_linear(1, alpha[1].clone());
    for q in 2..=p {
        table.fill_higher(q);
        if q % 2 == 0 {
            continue;
        }
        let mut acc = zero.clone();
        for m in (2..q).step_by(2) {
            acc = acc + dhat[m].clone() * table.get(m, q - 1).clone();
        }
        for m in (3..=q).step_by(2) {
            acc = acc + dhat[m].clone() * table.get(m, q).clone();
        }
        alpha[q] = acc.clone();
        table.set_linear(q, acc);
    }
    alpha
}

fn normalized(delta: &TruncatedSeries, p: usize) -> Result<Vec<f64>> {
    if delta.order() < p {
        return Err(Error::OrderMismatch { left: delta.order(), right: p });
    }
    if p == 0 {
        return Err(Error::OutOfRange("expansion order must be at least 1".into()));
    }
    let d = delta.project(p)?;
    let d1 = d.check_linear_pivot("delta_1")?;
    Ok(d.coeffs().iter().map(|c| -c / d1).collect())
}

/// Unique up-flat related sequence of order `p`.
pub fn upflat_sequence(delta: &TruncatedSeries, p: usize) -> Result<RelatedSequence> {
    let dhat = normalized(delta, p)?;
    let alpha = upflat_recursion(&dhat, p);
    RelatedSequence::new(alpha, BetaProfile::up_flat(p)?)
}

/// Unique zig-zag related sequence of order `p`.
pub fn zigzag_sequence(delta: &TruncatedSeries, p: usize) -> Result<RelatedSequence> {
    let dhat = normalized(delta, p)?;
    let alpha = zigzag_recursion(&dhat, p);
    RelatedSequence::new(alpha, BetaProfile::zigzag(p)?)
}

/// Solves for a named profile.
pub fn solve_related(delta: &TruncatedSeries, profile: &BetaProfile) -> Result<RelatedSequence> {
    match profile.kind() {
        ProfileKind::UpFlat => upflat_sequence(delta, profile.p()),
        ProfileKind::ZigZag => zigzag_sequence(delta, profile.p()),
        ProfileKind::Custom => Err(Error::UnsupportedProfile(format!(
            "no solver for profile {:?}; only residual checking is available",
            profile.beta()
        ))),
    }
}

/// Up-flat sequence through the compositional inverse of `Σ_{k>=1} δ_k z^k`:
/// `α_k = (-δ_0)^k [z^k] f^{-1}`.
pub fn upflat_via_inversion(delta: &TruncatedSeries, p: usize) -> Result<RelatedSequence> {
    if delta.order() < p {
        return Err(Error::OrderMismatch { left: delta.order(), right: p });
    }
    if p == 0 {
        return Err(Error::OutOfRange("expansion order must be at least 1".into()));
    }
    let d = delta.project(p)?;
    let mut f = d.coeffs().to_vec();
    let seed = -f[0];
    f[0] = 0.0;
    let g = TruncatedSeries::new(f)?.inverse_composition()?;
    let mut alpha = vec![0.0; p + 1];
    let mut power = 1.0;
    for k in 1..=p {
        power *= seed;
        alpha[k] = g.coeff(k) * power;
    }
    RelatedSequence::new(alpha, BetaProfile::up_flat(p)?)
}

/// Result of evaluating the defining residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// Largest absolute coefficient over all powers of `z`.
    pub residual: f64,
    /// Largest, over powers of `z`, sum of absolute values of the contributions.
    pub scale: f64,
    /// Residual coefficient per power of `z`.
    pub by_power: BTreeMap<i64, f64>,
}

impl ResidualReport {
    /// `residual <= rel_tol * scale` (a zero residual always passes).
    pub fn is_related(&self, rel_tol: f64) -> bool {
        self.residual <= rel_tol * self.scale
    }
}

/// Evaluates the defining residual of `alpha` against `delta` under `beta`.
///
/// Works for any profile; `alpha` must have order `beta.p()` and `delta`
/// order at least `beta.p()`.
pub fn check_related(alpha: &[f64], delta: &TruncatedSeries, beta: &BetaProfile) -> Result<ResidualReport> {
    let p = beta.p();
    if alpha.len() != p + 1 {
        return Err(Error::OrderMismatch { left: alpha.len().saturating_sub(1), right: p });
    }
    if delta.order() < p {
        return Err(Error::OrderMismatch { left: delta.order(), right: p });
    }
    let mut a = alpha.to_vec();
    a[0] = 0.0;
    let abs: Vec<f64> = a.iter().map(|x| x.abs()).collect();
    let table = PowerTable::from_series(&a, p);
    let abs_table = PowerTable::from_series(&abs, p);

    let mut by_power: BTreeMap<i64, f64> = BTreeMap::new();
    let mut mass: BTreeMap<i64, f64> = BTreeMap::new();
    let d0 = delta.coeff(0);
    *by_power.entry(-beta.beta_at(0)).or_default() += d0;
    *mass.entry(-beta.beta_at(0)).or_default() += d0.abs();
    for m in 1..=p {
        let dm = delta.coeff(m);
        let upper = beta.gamma(m);
        // total degree q ranges over m..γ_m-1; γ_m <= p+1 keeps q <= p
        for q in m..=p {
            if (q as i64) >= upper {
                break;
            }
            let power = q as i64 - beta.beta_at(m);
            *by_power.entry(power).or_default() += dm * table.get(m, q);
            *mass.entry(power).or_default() += dm.abs() * abs_table.get(m, q);
        }
    }
    let residual = by_power.values().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let scale = mass.values().fold(0.0_f64, |acc, v| acc.max(*v));
    Ok(ResidualReport { residual, scale, by_power })
}

/// Solves with the constant term shifted: `⟨F⟩_0` becomes `⟨F⟩_0 - λ_0`.
///
/// `coefs[k]` holds `⟨F⟩_k / k!`; any common scalar factor is harmless
/// because the related sequence only depends on ratios.
pub fn perturb_sequence(
    coefs: &TruncatedSeries,
    lambda0: f64,
    p: usize,
    beta: &BetaProfile,
) -> Result<RelatedSequence> {
    if beta.p() != p {
        return Err(Error::OrderMismatch { left: beta.p(), right: p });
    }
    let mut c = coefs.coeffs().to_vec();
    c[0] -= lambda0;
    solve_related(&TruncatedSeries::new(c)?, beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(c: &[f64]) -> TruncatedSeries {
        TruncatedSeries::new(c.to_vec()).unwrap()
    }

    #[test]
    fn profiles() {
        let up = BetaProfile::up_flat(3).unwrap();
        assert_eq!(up.beta(), &[1, 2, 2, 2, 2]);
        assert_eq!(up.beta_star(), 2);
        assert_eq!((1..=3).map(|m| up.gamma(m)).collect::<Vec<_>>(), vec![4, 4, 4]);
        let zz = BetaProfile::zigzag(3).unwrap();
        assert_eq!(zz.beta(), &[1, 2, 1, 2, 1]);
        assert_eq!((1..=3).map(|m| zz.gamma(m)).collect::<Vec<_>>(), vec![4, 3, 4]);
        assert_eq!(zz.kind(), ProfileKind::ZigZag);
        let zz1 = BetaProfile::zigzag(1).unwrap();
        assert_eq!(zz1.beta_star(), 1);
        assert_eq!(zz1.gamma(1), 2);
        assert!(BetaProfile::new(vec![1, 2]).is_err());
        assert_eq!(BetaProfile::new(vec![0, 1, 1, 2]).unwrap().kind(), ProfileKind::Custom);
    }

    #[test]
    fn upflat_zero_seed() {
        let s = upflat_sequence(&ts(&[0.0, -1.0, 0.3, 0.7]), 3).unwrap();
        assert!(s.alpha().iter().all(|a| *a == 0.0));
    }

    #[test]
    fn upflat_table_instance() {
        let s = upflat_sequence(&ts(&[1.0, -1.0, 1.0, 0.0, 0.0, 0.0]), 5).unwrap();
        assert_eq!(s.alpha(), &[0.0, 1.0, 1.0, 2.0, 5.0, 14.0]);
    }

    #[test]
    fn upflat_self_inverse_example() {
        let theta: f64 = 2.0;
        let d0 = 0.3;
        let mut c = vec![d0];
        for k in 1..=5 {
            c.push((-1.0_f64).powi(k) / theta.powi(k - 1));
        }
        let s = upflat_sequence(&ts(&c), 5).unwrap();
        for k in 1..=5 {
            let expected = d0.powi(k as i32) / theta.powi(k as i32 - 1);
            assert!((s.alpha()[k] - expected).abs() < 1e-15, "k={k}");
        }
        assert!((s.alpha()[2] - 0.045).abs() < 1e-15);
        assert!((s.alpha()[3] - 0.00675).abs() < 1e-15);
    }

    #[test]
    fn zigzag_table_instance() {
        // δ_1 = -1 so δ̂_k = δ_k
        let s = zigzag_sequence(&ts(&[1.0, -1.0, 1.0, 1.0, 0.0, 0.0]), 5).unwrap();
        assert_eq!(s.alpha(), &[0.0, 1.0, 0.0, 2.0, 0.0, 10.0]);
    }

    #[test]
    fn zigzag_even_terms_vanish() {
        let s = zigzag_sequence(&ts(&[0.4, 1.3, -0.2, 0.9, 0.5, -1.1, 0.7]), 6).unwrap();
        for k in (2..=6).step_by(2) {
            assert_eq!(s.alpha()[k], 0.0);
        }
        let z = zigzag_sequence(&ts(&[0.0, 1.3, -0.2, 0.9]), 3).unwrap();
        assert!(z.alpha().iter().all(|a| *a == 0.0));
    }

    #[test]
    fn singular_linear_term() {
        let err = upflat_sequence(&ts(&[1.0, 1e-15, 1.0]), 2).unwrap_err();
        assert!(matches!(err, Error::Singular { .. }));
        assert!(zigzag_sequence(&ts(&[1.0, 0.0, 1.0]), 2).is_err());
    }

    #[test]
    fn inversion_route_matches_recursion() {
        let delta = ts(&[1.0, -1.0, 1.0, 0.0, 0.0, 0.0]);
        let a = upflat_sequence(&delta, 5).unwrap();
        let b = upflat_via_inversion(&delta, 5).unwrap();
        for k in 0..=5 {
            assert!((a.alpha()[k] - b.alpha()[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn inversion_route_log_example() {
        // ψ = exp: δ_k = -1/k! for k >= 1 and δ_0 = ψ(0)/ψ'(0) = 1,
        // so α_k are the Taylor coefficients of log(1+x).
        let mut c = vec![1.0];
        let mut fact = 1.0;
        for k in 1..=6 {
            fact *= k as f64;
            c.push(-1.0 / fact);
        }
        let s = upflat_via_inversion(&ts(&c), 6).unwrap();
        for k in 1..=6 {
            let expected = if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            assert!((s.alpha()[k] - expected).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn inversion_route_identity() {
        let s = upflat_via_inversion(&ts(&[1.0, 1.0, 0.0]), 2).unwrap();
        assert_eq!(s.alpha(), &[0.0, -1.0, 0.0]);
    }

    #[test]
    fn residual_of_solvers() {
        let delta = ts(&[0.4, 1.3, -0.2, 0.9, 0.5, -1.1]);
        let up = upflat_sequence(&delta, 5).unwrap();
        let r = check_related(up.alpha(), &delta, up.profile()).unwrap();
        assert!(r.is_related(1e-10), "{r:?}");
        let zz = zigzag_sequence(&delta, 5).unwrap();
        let r = check_related(zz.alpha(), &delta, zz.profile()).unwrap();
        assert!(r.is_related(1e-10), "{r:?}");
        // the up-flat answer does not solve the zig-zag system
        let r = check_related(up.alpha(), &delta, zz.profile()).unwrap();
        assert!(!r.is_related(1e-10));
    }

    // With β = (0,1,1,2) the bounds are γ_1 = γ_2 = 2, so the quadratic
    // term never enters and the system reduces to δ_0 + δ_1 α_1 = 0.
    // α_2 is left free.
    #[test]
    fn non_uniqueness_profile() {
        let beta = BetaProfile::new(vec![0, 1, 1, 2]).unwrap();
        assert_eq!((beta.gamma(1), beta.gamma(2)), (2, 2));
        let delta = ts(&[0.5, -1.0, 3.0]);
        for a2 in [0.0, 1.0, -7.5] {
            let r = check_related(&[0.0, 0.5, a2], &delta, &beta).unwrap();
            assert_eq!(r.residual, 0.0);
        }
        let r = check_related(&[0.0, 0.4, 0.0], &delta, &beta).unwrap();
        assert!((r.residual - 0.1).abs() < 1e-15);
        assert!(!r.is_related(1e-10));
        assert!(solve_related(&delta, &beta).is_err());
    }

    #[test]
    fn perturbation() {
        let coefs = ts(&[0.4, 1.3, -0.2, 0.9]);
        let beta = BetaProfile::up_flat(3).unwrap();
        let base = upflat_sequence(&coefs, 3).unwrap();
        assert_eq!(perturb_sequence(&coefs, 0.0, 3, &beta).unwrap(), base);
        let killed = perturb_sequence(&coefs, 0.4, 3, &beta).unwrap();
        assert!(killed.alpha().iter().all(|a| *a == 0.0));
        let mut prev = f64::INFINITY;
        for l in [1e-1, 1e-3, 1e-6] {
            let s = perturb_sequence(&coefs, l, 3, &beta).unwrap();
            let gap = s.alpha().iter().zip(base.alpha()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(gap < prev);
            prev = gap;
        }
        assert!(prev < 1e-5);
    }

    #[test]
    fn scale_invariance() {
        let delta = ts(&[0.4, 1.3, -0.2, 0.9, 0.5]);
        let a = upflat_sequence(&delta, 4).unwrap();
        let b = upflat_sequence(&delta.scale(-3.7), 4).unwrap();
        for k in 0..=4 {
            assert!((a.alpha()[k] - b.alpha()[k]).abs() <= 1e-13 * a.alpha()[k].abs().max(1.0));
        }
    }

    #[test]
    fn shift_invariance_of_verdict() {
        let delta = ts(&[0.4, 1.3, -0.2, 0.9, 0.5]);
        let a = zigzag_sequence(&delta, 4).unwrap();
        for shift in [-3, 1, 5] {
            let r = check_related(a.alpha(), &delta, &a.profile().shifted(shift)).unwrap();
            assert!(r.is_related(1e-10));
        }
    }
}
