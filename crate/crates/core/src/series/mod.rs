//! Truncated power series in one indeterminate.
//!
//! A [`TruncatedSeries`] of order `p` stores the coefficients of
//! `d_0 + d_1 z + ... + d_p z^p`; every product is implicitly projected back
//! onto degree `p`. Composition, compositional inversion, the scrambling map
//! and the Faà di Bruno formula are built on top of this ring.

mod multipoly;

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use multipoly::{MultiPoly, Rational};

/// Relative threshold under which a linear coefficient is treated as zero.
pub const LINEAR_COEFF_THRESHOLD: f64 = 1e-12;

/// Minimal ring interface shared by the numeric (`f64`) and symbolic
/// ([`MultiPoly`]) coefficient paths.
pub trait Coeff: Clone + Add<Output = Self> + Mul<Output = Self> {
    /// The additive identity of the ring `self` lives in.
    fn zero_like(&self) -> Self;
}

impl Coeff for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
}

/// Table of `[z^q] A(z)^m` for a series `A` without constant term.
///
/// Filled one degree at a time so that a recursion which determines `a_q`
/// from lower coefficients can interleave with it: the entries for `m >= 2`
/// at degree `q` only involve `a_1..a_{q-1}`.
#[derive(Debug, Clone)]
pub(crate) struct PowerTable<T> {
    linear: Vec<T>,
    // pow[m][q] for m = 1..=max_power, q = 0..=order
    pow: Vec<Vec<T>>,
}

impl<T: Coeff> PowerTable<T> {
    pub(crate) fn new(zero: &T, max_power: usize, order: usize) -> Self {
        let z = zero.zero_like();
        Self { linear: vec![z.clone(); order + 1], pow: vec![vec![z; order + 1]; max_power + 1] }
    }

    fn max_power(&self) -> usize {
        self.pow.len() - 1
    }

    /// Fills `[z^q] A^m` for `2 <= m <= min(q, max_power)`.
    pub(crate) fn fill_higher(&mut self, q: usize) {
        let top = q.min(self.max_power());
        for m in 2..=top {
            let mut acc = self.linear[0].zero_like();
            // j is the degree taken from the extra factor A; the remaining
            // m-1 factors need degree at least m-1.
            for j in 1..=(q + 1 - m) {
                acc = acc + self.linear[j].clone() * self.pow[m - 1][q - j].clone();
            }
            self.pow[m][q] = acc;
        }
    }

    /// Records `a_q`, which is also `[z^q] A^1`.
    pub(crate) fn set_linear(&mut self, q: usize, value: T) {
        self.linear[q] = value.clone();
        if self.max_power() >= 1 {
            self.pow[1][q] = value;
        }
    }

    pub(crate) fn get(&self, m: usize, q: usize) -> &T {
        &self.pow[m][q]
    }

    /// Builds the full table for known coefficients `a[0..=order]` (`a[0]` must be zero).
    pub(crate) fn from_series(a: &[T], max_power: usize) -> Self {
        let order = a.len() - 1;
        let mut table = Self::new(&a[0], max_power, order);
        for q in 1..=order {
            table.set_linear(q, a[q].clone());
            table.fill_higher(q);
        }
        table
    }
}

/// A polynomial `d_0 + d_1 z + ... + d_p z^p` viewed in the ring truncated at degree `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    coeffs: Vec<f64>,
}

impl TruncatedSeries {
    /// Builds a series from `coeffs[k]`, the coefficient of `z^k`. The order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Empty("series coefficients"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("series coefficient"));
        }
        Ok(Self { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![0.0; order + 1] }
    }

    /// The series `z` (or `0` when `order == 0`).
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = 1.0;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    fn check_same_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { coeffs })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Cauchy product truncated at the common order.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let p = self.order();
        let mut out = vec![0.0; p + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in other.coeffs[..=p - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Drops every coefficient above degree `q`; the result has order `q`.
    pub fn project(&self, q: usize) -> Result<Self> {
        if q > self.order() {
            return Err(Error::OutOfRange(format!("projection degree {q} exceeds series order {}", self.order())));
        }
        Ok(Self { coeffs: self.coeffs[..=q].to_vec() })
    }

    /// Evaluates the polynomial at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// Truncated composition `self ∘ inner`.
    ///
    /// `inner` must have no constant term, otherwise truncation would not
    /// commute with composition. Uses Horner's scheme in the truncated ring.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_same_order(inner)?;
        if inner.coeffs[0] != 0.0 {
            return Err(Error::Precondition(format!(
                "inner series of a composition must vanish at 0, got {}",
                inner.coeffs[0]
            )));
        }
        let p = self.order();
        let mut acc = Self::zero(p);
        acc.coeffs[0] = self.coeffs[p];
        for k in (0..p).rev() {
            acc = acc.mul_unchecked(inner);
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    /// Multiplicative inverse `1/self`, which requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 == 0.0 {
            return Err(Error::Singular { what: "constant term", value: a0 });
        }
        let p = self.order();
        let mut b = vec![0.0; p + 1];
        b[0] = 1.0 / a0;
        for k in 1..=p {
            let s: f64 = (1..=k).map(|j| self.coeffs[j] * b[k - j]).sum();
            b[k] = -s / a0;
        }
        Ok(Self { coeffs: b })
    }

    /// Checks that the linear coefficient is usable as a pivot.
    pub(crate) fn check_linear_pivot(&self, what: &'static str) -> Result<f64> {
        let scale = self.coeffs.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
        let d1 = self.coeff(1);
        if self.order() < 1 || d1.abs() < LINEAR_COEFF_THRESHOLD * scale {
            return Err(Error::Singular { what, value: d1 });
        }
        Ok(d1)
    }

    /// Truncated compositional inverse `g` with `self ∘ g = z + O(z^{p+1})`.
    ///
    /// Computed with the Lagrange inversion formula
    /// `g_n = (1/n) [w^{n-1}] (w / f(w))^n`.
    pub fn inverse_composition(&self) -> Result<Self> {
        if self.coeffs[0] != 0.0 {
            return Err(Error::Precondition(format!("compositional inverse needs f(0) = 0, got {}", self.coeffs[0])));
        }
        self.check_linear_pivot("linear coefficient")?;
        let p = self.order();
        let mut g = Self::zero(p);
        if p == 0 {
            return Ok(g);
        }
        // h(w) = f(w) / w, truncated at degree p - 1.
        let h = Self { coeffs: self.coeffs[1..].to_vec() };
        let phi = h.reciprocal()?;
        let mut power = Self::zero(p - 1);
        power.coeffs[0] = 1.0;
        for n in 1..=p {
            power = power.mul_unchecked(&phi);
            g.coeffs[n] = power.coeffs[n - 1] / n as f64;
        }
        Ok(g)
    }

    /// The scrambling map `Σ d_k z^k ↦ Σ d_k z^{k - β_k}`.
    ///
    /// `beta` must cover indices `0..=order`; extra entries are ignored.
    /// Coefficients landing on the same power are summed.
    pub fn scramble(&self, beta: &[i64]) -> Result<LaurentMap> {
        if beta.len() < self.coeffs.len() {
            return Err(Error::OutOfRange(format!(
                "rate profile has {} entries, series needs {}",
                beta.len(),
                self.coeffs.len()
            )));
        }
        let mut out = LaurentMap::default();
        for (k, (d, b)) in self.coeffs.iter().zip(beta).enumerate() {
            out.add_term(k as i64 - b, *d);
        }
        Ok(out)
    }
}

/// A finite Laurent polynomial with canonical (zero-free) storage.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LaurentMap {
    terms: BTreeMap<i64, f64>,
}

impl LaurentMap {
    pub fn add_term(&mut self, power: i64, value: f64) {
        let entry = self.terms.entry(power).or_insert(0.0);
        *entry += value;
        if *entry == 0.0 {
            self.terms.remove(&power);
        }
    }

    pub fn get(&self, power: i64) -> f64 {
        self.terms.get(&power).copied().unwrap_or(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing order of power.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub(crate) fn factorials(n: usize) -> Vec<f64> {
    (0..=n).map(factorial).collect()
}

/// `D^l (f∘g)(x)` from `f_derivs[m-1] = D^m f(g(x))` and `g_derivs[k-1] = D^k g(x)`.
pub fn faa_di_bruno(f_derivs: &[f64], g_derivs: &[f64], l: usize) -> Result<f64> {
    if l == 0 {
        return Err(Error::OutOfRange("derivative order must be at least 1".into()));
    }
    if f_derivs.len() < l || g_derivs.len() < l {
        return Err(Error::OutOfRange(format!(
            "order {l} needs {l} derivatives of each function, got {} and {}",
            f_derivs.len(),
            g_derivs.len()
        )));
    }
    let fact = factorials(l);
    let mut taylor = vec![0.0; l + 1];
    for k in 1..=l {
        taylor[k] = g_derivs[k - 1] / fact[k];
    }
    let table = PowerTable::from_series(&taylor, l);
    let sum: f64 = (1..=l).map(|m| f_derivs[m - 1] / fact[m] * table.get(m, l)).sum();
    Ok(fact[l] * sum)
}

/// `D^j (1/y)` for `j = 0..=k`, from `y_derivs[i] = D^i y` (`i = 0..=k`).
pub fn reciprocal_derivatives(y_derivs: &[f64], k: usize) -> Result<Vec<f64>> {
    if y_derivs.len() < k + 1 {
        return Err(Error::OutOfRange(format!("need {} derivatives, got {}", k + 1, y_derivs.len())));
    }
    let y = y_derivs[0];
    if y == 0.0 {
        return Err(Error::Singular { what: "reciprocal base", value: y });
    }
    let mut out = vec![1.0 / y];
    if k == 0 {
        return Ok(out);
    }
    // u(y) = 1/y has u^{(m)}(y) = (-1)^m m! / y^{m+1}
    let fact = factorials(k);
    let u: Vec<f64> = (1..=k).map(|m| if m % 2 == 0 { 1.0 } else { -1.0 } * fact[m] / y.powi(m as i32 + 1)).collect();
    for j in 1..=k {
        out.push(faa_di_bruno(&u, &y_derivs[1..], j)?);
    }
    Ok(out)
}

/// `D^k (f g)` by the Leibniz rule from `f[i] = D^i f` and `g[i] = D^i g`.
pub fn leibniz(f: &[f64], g: &[f64], k: usize) -> f64 {
    let mut binom = 1.0;
    let mut acc = 0.0;
    for j in 0..=k {
        if j > 0 {
            binom = binom * (k + 1 - j) as f64 / j as f64;
        }
        acc += binom * f[j] * g[k - j];
    }
    acc
}

/// `[h'(y_0), ..., h^{(p)}(y_0)]` for the local inverse `h` of `f` at `y_0 = f(x_0)`,
/// from `f_derivs[k-1] = D^k f(x_0)`.
///
/// Solves `D^k (h∘f) = [k = 1]` degree by degree through Faà di Bruno.
pub fn inverse_function_derivatives(f_derivs: &[f64], p: usize) -> Result<Vec<f64>> {
    if f_derivs.len() < p {
        return Err(Error::OutOfRange(format!("need {p} derivatives, got {}", f_derivs.len())));
    }
    if p == 0 {
        return Ok(Vec::new());
    }
    let d1 = f_derivs[0];
    let scale = f_derivs[..p].iter().fold(1.0_f64, |m, c| m.max(c.abs()));
    if d1.abs() < LINEAR_COEFF_THRESHOLD * scale {
        return Err(Error::Singular { what: "first derivative", value: d1 });
    }
    let fact = factorials(p);
    let mut taylor = vec![0.0; p + 1];
    for k in 1..=p {
        taylor[k] = f_derivs[k - 1] / fact[k];
    }
    let table = PowerTable::from_series(&taylor, p);
    // Bell polynomial B_{k,m} = k!/m! [z^k] (Σ f^{(j)} z^j / j!)^m
    let bell = |k: usize, m: usize| fact[k] / fact[m] * table.get(m, k);
    let mut h = vec![0.0; p + 1];
    h[1] = 1.0 / d1;
    for k in 2..=p {
        let s: f64 = (1..k).map(|m| h[m] * bell(k, m)).sum();
        h[k] = -s / bell(k, k);
    }
    Ok(h[1..].to_vec())
}
