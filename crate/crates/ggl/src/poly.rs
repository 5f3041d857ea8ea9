//! Sparse multivariate Laurent polynomials with exact coefficients.
//!
//! Invariants:
//! - no stored coefficient is zero;
//! - every exponent vector has length `nvars`;
//! - coefficients are in canonical form for `ring`.
//!
//! Monomials are ordered graded-lexicographically (total degree first, then
//! lexicographic with the first variable most significant). Printing and
//! serialization list terms from the largest monomial down.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GglError, Result};
use crate::ring::{coef_to_string, parse_coef, Coef, CoefficientRing};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn zero(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    ring: CoefficientRing,
    nvars: usize,
    terms: BTreeMap<Monomial, Coef>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked ring operation on two polynomials.
pub fn arith(a: &LaurentPoly, b: &LaurentPoly, op: ArithOp) -> Result<LaurentPoly> {
    a.compatible(b)?;
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    })
}

impl LaurentPoly {
    pub fn zero(ring: CoefficientRing, nvars: usize) -> Self {
        LaurentPoly { ring, nvars, terms: BTreeMap::new() }
    }

    pub fn one(ring: CoefficientRing, nvars: usize) -> Self {
        Self::constant(ring, nvars, ring.from_i64(1))
    }

    pub fn constant(ring: CoefficientRing, nvars: usize, c: Coef) -> Self {
        Self::monomial(ring, Monomial::zero(nvars), c)
    }

    pub fn from_i64(ring: CoefficientRing, nvars: usize, n: i64) -> Self {
        Self::constant(ring, nvars, ring.from_i64(n))
    }

    pub fn monomial(ring: CoefficientRing, exp: Monomial, c: Coef) -> Self {
        let nvars = exp.0.len();
        let mut p = Self::zero(ring, nvars);
        p.add_term(exp, c);
        p
    }

    /// The variable `i` (0-based) in a ring with `nvars` variables.
    pub fn var(ring: CoefficientRing, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(ring, Monomial(e), ring.from_i64(1))
    }

    /// Builds a polynomial from raw terms, coercing coefficients into `ring`.
    pub fn from_terms<I>(ring: CoefficientRing, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Coef)>,
    {
        let mut p = Self::zero(ring, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(GglError::Arity { expected: nvars, got: e.len() });
            }
            let c = ring.coerce(&c)?;
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coef)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &Monomial) -> Coef {
        self.terms.get(e).cloned().unwrap_or_else(Coef::zero)
    }

    pub fn constant_term(&self) -> Coef {
        self.coefficient(&Monomial::zero(self.nvars))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.0.iter().all(|&e| e == 0))
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Monomial::is_nonnegative)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Coef)> {
        self.terms.iter().next_back()
    }

    /// Smallest total degree among the terms (the order of a power series).
    pub fn order(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Coordinatewise minimum of the exponent vectors.
    pub fn min_exponents(&self) -> Monomial {
        let mut m = vec![i64::MAX; self.nvars];
        for e in self.terms.keys() {
            for (a, b) in m.iter_mut().zip(&e.0) {
                *a = (*a).min(*b);
            }
        }
        if self.terms.is_empty() {
            m = vec![0; self.nvars];
        }
        Monomial(m)
    }

    pub(crate) fn add_term(&mut self, e: Monomial, c: Coef) {
        debug_assert_eq!(e.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = self.ring.add(v, &c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn compatible(&self, o: &LaurentPoly) -> Result<()> {
        if self.ring != o.ring {
            return Err(GglError::RingMismatch(self.ring.name(), o.ring.name()));
        }
        if self.nvars != o.nvars {
            return Err(GglError::NvarsMismatch(self.nvars, o.nvars));
        }
        Ok(())
    }

    pub fn scale(&self, c: &Coef) -> LaurentPoly {
        let mut p = Self::zero(self.ring, self.nvars);
        for (e, v) in &self.terms {
            p.add_term(e.clone(), self.ring.mul(v, c));
        }
        p
    }

    pub fn shift(&self, m: &Monomial) -> LaurentPoly {
        let mut p = Self::zero(self.ring, self.nvars);
        for (e, v) in &self.terms {
            p.terms.insert(e.mul(m), v.clone());
        }
        p
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut acc = Self::one(self.ring, self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Product with every term of total degree `>= trunc` dropped.
    pub fn mul_trunc(&self, o: &LaurentPoly, trunc: Option<u32>) -> LaurentPoly {
        let Some(n) = trunc else { return self * o };
        let n = n as i64;
        let mut p = Self::zero(self.ring, self.nvars);
        for (ea, ca) in &self.terms {
            let da = ea.degree();
            for (eb, cb) in &o.terms {
                if da + eb.degree() >= n {
                    continue;
                }
                p.add_term(ea.mul(eb), self.ring.mul(ca, cb));
            }
        }
        p
    }

    /// Drops every term of total degree `>= n`.
    pub fn truncate(&self, n: u32) -> LaurentPoly {
        let mut p = self.clone();
        p.terms.retain(|e, _| e.degree() < n as i64);
        p
    }

    pub fn homogeneous_part(&self, d: i64) -> LaurentPoly {
        let mut p = self.clone();
        p.terms.retain(|e, _| e.degree() == d);
        p
    }

    pub fn map_terms<F>(&self, mut f: F) -> LaurentPoly
    where
        F: FnMut(&Monomial, &Coef) -> Option<(Monomial, Coef)>,
    {
        let mut p = Self::zero(self.ring, self.nvars);
        for (e, c) in &self.terms {
            if let Some((e2, c2)) = f(e, c) {
                p.add_term(e2, self.ring.norm(c2));
            }
        }
        p
    }

    /// Reinterprets the coefficients in another ring (canonical map).
    pub fn change_ring(&self, target: CoefficientRing) -> Result<LaurentPoly> {
        if !self.ring.maps_to(&target) {
            return Err(GglError::NotRingMap(format!("{} -> {}", self.ring, target)));
        }
        let mut p = Self::zero(target, self.nvars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), target.coerce(c)?);
        }
        Ok(p)
    }

    /// Inserts `extra` zero exponents after the existing variables.
    pub fn extend_vars(&self, extra: usize) -> LaurentPoly {
        let mut p = Self::zero(self.ring, self.nvars + extra);
        for (e, c) in &self.terms {
            let mut v = e.0.clone();
            v.extend(std::iter::repeat(0).take(extra));
            p.terms.insert(Monomial(v), c.clone());
        }
        p
    }

    /// Monomial substitution: variable `i` goes to the monomial `images[i]`
    /// in `target_nvars` variables, with coefficient 1.
    pub fn substitute(&self, images: &[Vec<i64>], target_nvars: usize) -> Result<LaurentPoly> {
        if images.len() != self.nvars {
            return Err(GglError::Arity { expected: self.nvars, got: images.len() });
        }
        if let Some(bad) = images.iter().find(|v| v.len() != target_nvars) {
            return Err(GglError::Arity { expected: target_nvars, got: bad.len() });
        }
        let mut p = Self::zero(self.ring, target_nvars);
        for (e, c) in &self.terms {
            let mut out = vec![0i64; target_nvars];
            for (k, &a) in e.0.iter().enumerate() {
                if a != 0 {
                    for (o, &b) in out.iter_mut().zip(&images[k]) {
                        *o += a * b;
                    }
                }
            }
            p.add_term(Monomial(out), c.clone());
        }
        Ok(p)
    }

    /// Polynomial substitution `x_i -> images[i]`, optionally truncated at
    /// total degree `trunc`. Requires nonnegative exponents.
    pub fn compose(&self, images: &[LaurentPoly], target_nvars: usize, trunc: Option<u32>) -> Result<LaurentPoly> {
        if images.len() != self.nvars {
            return Err(GglError::Arity { expected: self.nvars, got: images.len() });
        }
        for im in images {
            if im.nvars != target_nvars {
                return Err(GglError::NvarsMismatch(target_nvars, im.nvars));
            }
            if im.ring != self.ring {
                return Err(GglError::RingMismatch(self.ring.name(), im.ring.name()));
            }
        }
        if !self.is_polynomial() {
            return Err(GglError::Unsupported("composition of a Laurent polynomial with negative exponents".into()));
        }
        let mut powers: Vec<Vec<LaurentPoly>> = images
            .iter()
            .map(|_| vec![LaurentPoly::one(self.ring, target_nvars)])
            .collect();
        let mut out = Self::zero(self.ring, target_nvars);
        for (e, c) in &self.terms {
            let mut t = LaurentPoly::constant(self.ring, target_nvars, c.clone());
            for (k, &a) in e.0.iter().enumerate() {
                let a = a as usize;
                while powers[k].len() <= a {
                    let next = powers[k].last().unwrap().mul_trunc(&images[k], trunc);
                    powers[k].push(next);
                }
                if a > 0 {
                    t = t.mul_trunc(&powers[k][a], trunc);
                }
                if t.is_zero() {
                    break;
                }
            }
            out = &out + &t;
        }
        if let Some(n) = trunc {
            out = out.truncate(n);
        }
        Ok(out)
    }

    /// Exact quotient `self / den`.
    ///
    /// Both polynomials are shifted into the polynomial range, the quotient
    /// is found by leading-term division in the graded-lexicographic order,
    /// and the shift is undone.
    pub fn exact_divide(&self, den: &LaurentPoly) -> Result<LaurentPoly> {
        self.compatible(den)?;
        if den.is_zero() {
            return Err(GglError::NotDivisible("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let a = den.min_exponents();
        let b = self.min_exponents();
        let d = den.shift(&Monomial(a.0.iter().map(|x| -x).collect()));
        let mut r = self.shift(&Monomial(b.0.iter().map(|x| -x).collect()));
        let (ld, lc) = {
            let (m, c) = d.leading().unwrap();
            (m.clone(), c.clone())
        };
        let mut q = Self::zero(self.ring, self.nvars);
        while let Some((lr, cr)) = r.leading() {
            if !ld.divides(lr) {
                return Err(GglError::NotDivisible(format!("{self} by {den}")));
            }
            let c = self
                .ring
                .div(cr, &lc)
                .ok_or_else(|| GglError::NotDivisible(format!("{self} by {den}")))?;
            let m = lr.div(&ld);
            let step = LaurentPoly::monomial(self.ring, m, c);
            r = &r - &(&step * &d);
            q = &q + &step;
        }
        Ok(q.shift(&b.div(&a)))
    }

    /// Remainder modulo a monic univariate polynomial, after multiplying by a
    /// power of the variable to clear negative exponents. Only meaningful
    /// when the variable is a unit modulo `m` (constant term of `m` a unit).
    pub fn rem_monic_univariate(&self, m: &LaurentPoly) -> Result<LaurentPoly> {
        self.compatible(m)?;
        if self.nvars != 1 {
            return Err(GglError::Unsupported("univariate remainder in several variables".into()));
        }
        let (lm, lc) = m.leading().ok_or_else(|| GglError::NotDivisible("zero modulus".into()))?;
        if !lc.is_one() || !m.is_polynomial() {
            return Err(GglError::Unsupported("modulus must be a monic polynomial".into()));
        }
        let deg = lm.0[0];
        let shift = self.min_exponents().0[0].min(0);
        let mut r = self.shift(&Monomial(vec![-shift]));
        while let Some((e, c)) = r.leading() {
            if e.0[0] < deg {
                break;
            }
            let step = LaurentPoly::monomial(self.ring, Monomial(vec![e.0[0] - deg]), c.clone());
            r = &r - &(&step * m);
        }
        if shift == 0 {
            return Ok(r);
        }
        // r represents self * t^{-shift}; multiply back by t^{shift}, i.e. by
        // the inverse of t^{-shift} modulo m.
        let t_inv = {
            let c0 = m.constant_term();
            let inv_c0 = self
                .ring
                .inverse(&c0)
                .ok_or_else(|| GglError::NotUnit("t modulo the modulus".into()))?;
            // m = t*g + c0 gives t^{-1} = -g/c0.
            let g = (m - &LaurentPoly::constant(self.ring, 1, c0)).shift(&Monomial(vec![-1]));
            g.scale(&self.ring.neg(&inv_c0))
        };
        let mut out = r;
        for _ in 0..(-shift) {
            out = (&out * &t_inv).rem_monic_univariate(m)?;
        }
        Ok(out)
    }

    /// Content over the integers (gcd of coefficients); 1 over fields.
    pub fn content(&self) -> Coef {
        if self.ring.is_field() {
            return if self.is_zero() { Coef::zero() } else { Coef::one() };
        }
        let mut g = num_bigint::BigInt::zero();
        for c in self.terms.values() {
            g = num_integer::Integer::gcd(&g, c.numer());
        }
        BigRational::from_integer(g)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = monomial_string(e, names);
            if mono.is_empty() {
                out.push_str(&coef_to_string(&mag));
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&coef_to_string(&mag));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            ring: self.ring,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(e, c)| TermJson { exp: e.0.clone(), coef: coef_to_string(c) })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            terms.push((t.exp.clone(), parse_coef(&t.coef)?));
        }
        Self::from_terms(j.ring, j.nvars, terms)
    }
}

pub fn default_names(prefix: &str, n: usize) -> Vec<String> {
    if n == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }
}

fn monomial_string(e: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &a) in e.0.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let name = names.get(i).cloned().unwrap_or_else(|| format!("v{}", i + 1));
        if a == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{name}^{a}"));
        }
    }
    parts.join("*")
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&default_names("t", self.nvars)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<i64>,
    pub coef: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub ring: CoefficientRing,
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

impl<'a> Add for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &'a LaurentPoly) -> LaurentPoly {
        self.compatible(o).expect("incompatible polynomials");
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl<'a> Sub for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &'a LaurentPoly) -> LaurentPoly {
        self.compatible(o).expect("incompatible polynomials");
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), self.ring.neg(c));
        }
        p
    }
}

impl<'a> Mul for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &'a LaurentPoly) -> LaurentPoly {
        self.compatible(o).expect("incompatible polynomials");
        let mut p = LaurentPoly::zero(self.ring, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                p.add_term(ea.mul(eb), self.ring.mul(ca, cb));
            }
        }
        p
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&self.ring.from_i64(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    const Z: CoefficientRing = CoefficientRing::Integers;

    fn t() -> LaurentPoly {
        LaurentPoly::var(Z, 1, 0)
    }

    fn one() -> LaurentPoly {
        LaurentPoly::one(Z, 1)
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&t() - &one()) * &(&t() + &one());
        assert_eq!(p.to_string(), "t^2 - 1");
    }

    #[test]
    fn characteristic_two() {
        let f2 = CoefficientRing::PrimeField(2);
        let e = LaurentPoly::var(f2, 1, 0);
        assert!((&e + &e).is_zero());
    }

    #[test]
    fn monomial_pullback() {
        let p = LaurentPoly::monomial(Z, Monomial(vec![1, -1]), int(1));
        let q = p.substitute(&[vec![2], vec![3]], 1).unwrap();
        assert_eq!(q.to_string(), "t^-1");
        let m = (&t() - &one()).substitute(&[vec![1, 1]], 2).unwrap();
        assert_eq!(m.to_string(), "t1*t2 - 1");
    }

    #[test]
    fn geometric_sum_division() {
        let num = &t().pow(6) - &one();
        let q = num.exact_divide(&(&t() - &one())).unwrap();
        assert_eq!(q.to_string(), "t^5 + t^4 + t^3 + t^2 + t + 1");
    }

    #[test]
    fn content_obstruction() {
        let x = t();
        let two_x = x.scale(&int(2));
        assert_eq!(two_x.exact_divide(&x).unwrap(), LaurentPoly::from_i64(Z, 1, 2));
        assert!(matches!(x.exact_divide(&two_x), Err(GglError::NotDivisible(_))));
    }

    #[test]
    fn laurent_division_shifts() {
        let tinv = LaurentPoly::monomial(Z, Monomial(vec![-1]), int(1));
        let num = &tinv - &one();
        let q = num.exact_divide(&(&t() - &one())).unwrap();
        assert_eq!(q, -&tinv);
    }

    #[test]
    fn remainder_modulo_monic() {
        let m = &t() + &one();
        let tinv = LaurentPoly::monomial(Z, Monomial(vec![-3]), int(1));
        assert_eq!(tinv.rem_monic_univariate(&m).unwrap(), -&one());
        assert_eq!(t().pow(4).rem_monic_univariate(&m).unwrap(), one());
    }

    #[test]
    fn printing() {
        let q = CoefficientRing::Rationals;
        let p = LaurentPoly::from_terms(
            q,
            2,
            vec![(vec![1, 0], int(2)), (vec![0, 1], int(-3)), (vec![0, 0], BigRational::new(1.into(), 2.into()))],
        )
        .unwrap();
        assert_eq!(p.fmt_with(&default_names("e", 2)), "2*e1 - 3*e2 + 1/2");
        assert_eq!(LaurentPoly::zero(q, 2).to_string(), "0");
    }

    #[test]
    fn json_round_trip() {
        let p = &(&t().pow(3) - &t().scale(&int(4))) + &one();
        let j = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(j, r#"{"ring":"Z","nvars":1,"terms":[{"exp":[3],"coef":"1"},{"exp":[1],"coef":"-4"},{"exp":[0],"coef":"1"}]}"#);
        let back: PolyJson = serde_json::from_str(&j).unwrap();
        assert_eq!(LaurentPoly::from_json(&back).unwrap(), p);
    }
}
