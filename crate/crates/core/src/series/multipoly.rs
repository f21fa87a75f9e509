//! Multivariate polynomials with exact rational coefficients.
//!
//! Variables are the normalized coefficients `δ̂_0, ..., δ̂_{n-1}`; the
//! [`Display`](fmt::Display) output uses that naming.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Coeff;

pub type Rational = BigRational;

/// Sparse polynomial: monomial exponent vector (length `nvars`) to nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(BigInt::from(c)))
    }

    /// The indeterminate `δ̂_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging repeats.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length must equal nvars");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the monomial with the given exponents (zero if absent).
    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    /// Evaluates at a point in floating point.
    pub fn eval(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.nvars, "need one value per variable");
        self.terms
            .iter()
            .map(|(e, c)| {
                let mono: f64 = e.iter().zip(values).map(|(k, x)| x.powi(*k as i32)).product();
                c.to_f64().unwrap_or(f64::NAN) * mono
            })
            .sum()
    }

    /// Evaluates at a rational point exactly.
    pub fn eval_exact(&self, values: &[Rational]) -> Rational {
        assert_eq!(values.len(), self.nvars, "need one value per variable");
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, x) in e.iter().zip(values) {
                t *= num_traits::pow(x.clone(), *k as usize);
            }
            acc += t;
        }
        acc
    }

    /// Splits into `(power of var, cofactor)` pairs, highest power first.
    /// The cofactors do not involve `var`.
    pub fn collect_by(&self, var: usize) -> Vec<(u32, MultiPoly)> {
        let mut groups: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = std::mem::replace(&mut rest[var], 0);
            groups.entry(k).or_insert_with(|| Self::zero(self.nvars)).add_term(rest, c.clone());
        }
        groups.into_iter().rev().collect()
    }

    /// Display form grouped by powers of `δ̂_var`, e.g. `(δ̂₅+3δ̂₃²)δ̂₀⁵+2δ̂₂²δ̂₀³`.
    pub fn format_grouped(&self, var: usize) -> String {
        let groups = self.collect_by(var);
        if groups.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, cof) in groups {
            let factor = if k == 0 { String::new() } else { format_var(var, k) };
            let piece = if cof.num_terms() == 1 {
                let (e, c) = cof.terms.iter().next().expect("one term");
                let is_const = e.iter().all(|x| *x == 0);
                if is_const && k > 0 {
                    format!("{}{}", coeff_prefix(c), factor)
                } else {
                    format!("{}{}", format_term(e, c), factor)
                }
            } else {
                format!("({}){}", cof, factor)
            };
            push_signed(&mut out, &piece);
        }
        out
    }

    fn sorted_terms(&self) -> Vec<(&Vec<u32>, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        // total degree ascending, then lower-index variables first
        v.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            da.cmp(&db).then_with(|| b.0.cmp(a.0))
        });
        v
    }
}

const SUBSCRIPTS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
const SUPERSCRIPTS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

fn digits(n: usize, table: &[char; 10]) -> String {
    n.to_string().bytes().map(|b| table[(b - b'0') as usize]).collect()
}

fn format_var(i: usize, k: u32) -> String {
    let mut s = format!("δ̂{}", digits(i, &SUBSCRIPTS));
    if k > 1 {
        s.push_str(&digits(k as usize, &SUPERSCRIPTS));
    }
    s
}

fn format_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

// Coefficient written in front of a non-constant monomial: `1` and `-1` collapse.
fn coeff_prefix(c: &Rational) -> String {
    if c.is_one() {
        String::new()
    } else if (-c).is_one() {
        "-".to_string()
    } else {
        format_rational(c)
    }
}

fn format_term(e: &[u32], c: &Rational) -> String {
    let mono: String = e.iter().enumerate().filter(|(_, k)| **k > 0).map(|(i, k)| format_var(i, *k)).collect();
    if mono.is_empty() {
        format_rational(c)
    } else {
        format!("{}{}", coeff_prefix(c), mono)
    }
}

fn push_signed(out: &mut String, piece: &str) {
    if !out.is_empty() && !piece.starts_with('-') {
        out.push('+');
    }
    out.push_str(piece);
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (e, c) in self.sorted_terms() {
            push_signed(&mut out, &format_term(e, c));
        }
        f.write_str(&out)
    }
}

fn check_nvars(a: &MultiPoly, b: &MultiPoly) {
    assert_eq!(a.nvars, b.nvars, "polynomials over different variable sets");
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        check_nvars(self, rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        Self { nvars: self.nvars, terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs.clone())
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    // exponents add under multiplication
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        check_nvars(self, rhs);
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Coeff for MultiPoly {
    fn zero_like(&self) -> Self {
        Self::zero(self.nvars)
    }
}

impl MultiPoly {
    /// True when every coefficient is positive.
    pub fn all_coeffs_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }
}
