//! Truncated one-dimensional formal group law data `F(x, y)`.
//!
//! A `TruncatedFGL` of degree `N` stores the coefficients `c_ij` of
//! `F(x, y) = sum c_ij x^i y^j` for `i + j <= N`. The linear part
//! `x + y` is stored explicitly, so counit violations are representable.
//! Series built from `F` carry the truncation bound `N + 1`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GglError, Result};
use crate::poly::{LaurentPoly, Monomial};
use crate::ring::{coef_to_string, parse_coef, Coef, CoefficientRing};
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedFGL {
    ring: CoefficientRing,
    n: u32,
    coeffs: BTreeMap<(u32, u32), Coef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FglEntryJson {
    pub i: u32,
    pub j: u32,
    pub coef: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FglJson {
    pub ring: CoefficientRing,
    #[serde(rename = "N")]
    pub n: u32,
    pub a: Vec<FglEntryJson>,
}

impl TruncatedFGL {
    /// `x + y + sum a_ij x^i y^j`; entries with `i = 0` or `j = 0` replace
    /// the corresponding coefficient of the linear part.
    pub fn new(ring: CoefficientRing, n: u32, entries: &[(u32, u32, Coef)]) -> Result<Self> {
        if n < 1 {
            return Err(GglError::InvalidFgl("degree bound must be at least 1".into()));
        }
        let mut coeffs = BTreeMap::new();
        coeffs.insert((1, 0), ring.from_i64(1));
        coeffs.insert((0, 1), ring.from_i64(1));
        for (i, j, c) in entries {
            if i + j > n {
                return Err(GglError::InvalidFgl(format!("coefficient a_{i}{j} beyond degree {n}")));
            }
            let c = ring.coerce(c)?;
            if *i == 0 || *j == 0 {
                coeffs.insert((*i, *j), c);
            } else {
                let e = coeffs.entry((*i, *j)).or_insert_with(Coef::zero);
                *e = ring.add(e, &c);
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(TruncatedFGL { ring, n, coeffs })
    }

    pub fn additive(ring: CoefficientRing, n: u32) -> Self {
        Self::new(ring, n, &[]).unwrap()
    }

    pub fn multiplicative(ring: CoefficientRing, n: u32) -> Self {
        Self::new(ring, n, &[(1, 1, ring.from_i64(1))]).unwrap()
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    /// Truncation bound of the series rings built from this law.
    pub fn trunc(&self) -> u32 {
        self.n + 1
    }

    pub fn coef(&self, i: u32, j: u32) -> Coef {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Coef::zero)
    }

    pub fn set_coef(&mut self, i: u32, j: u32, c: Coef) {
        let c = self.ring.norm(c);
        if c.is_zero() {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), c);
        }
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&(u32, u32), &Coef)> {
        self.coeffs.iter()
    }

    /// The same law read to a lower degree.
    pub fn restrict_degree(&self, n: u32) -> Self {
        let n = n.min(self.n);
        let mut c = self.coeffs.clone();
        c.retain(|(i, j), _| i + j <= n);
        TruncatedFGL { ring: self.ring, n, coeffs: c }
    }

    /// Nonzero `a_ij` with `i, j >= 1`, ordered by degree then `i`.
    pub fn a_entries(&self) -> Vec<(u32, u32, Coef)> {
        let mut v: Vec<(u32, u32, Coef)> = self
            .coeffs
            .iter()
            .filter(|((i, j), _)| *i >= 1 && *j >= 1)
            .map(|((i, j), c)| (*i, *j, c.clone()))
            .collect();
        v.sort_by_key(|(i, j, _)| (i + j, *i));
        v
    }

    pub fn map_ring(&self, k: CoefficientRing) -> Result<Self> {
        if !self.ring.maps_to(&k) {
            return Err(GglError::NotRingMap(format!("{} -> {}", self.ring, k)));
        }
        let mut coeffs = BTreeMap::new();
        for (ij, c) in &self.coeffs {
            let c = k.coerce(c)?;
            if !c.is_zero() {
                coeffs.insert(*ij, c);
            }
        }
        Ok(TruncatedFGL { ring: k, n: self.n, coeffs })
    }

    /// `F(x, y)` as a polynomial in two variables.
    pub fn poly(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero(self.ring, 2);
        for ((i, j), c) in &self.coeffs {
            p = &p + &LaurentPoly::monomial(self.ring, Monomial(vec![*i as i64, *j as i64]), c.clone());
        }
        p
    }

    pub fn series(&self) -> TruncatedSeries {
        TruncatedSeries::new(self.poly(), self.trunc()).unwrap()
    }

    /// `F(a, b)` truncated at total degree `trunc`; `a` and `b` must have no
    /// constant term.
    pub fn eval(&self, a: &LaurentPoly, b: &LaurentPoly, trunc: u32) -> Result<LaurentPoly> {
        if !a.constant_term().is_zero() || !b.constant_term().is_zero() {
            return Err(GglError::ConstantTerm);
        }
        let trunc = trunc.min(self.trunc());
        self.poly().compose(&[a.clone(), b.clone()], a.nvars(), Some(trunc))
    }

    /// The formal inverse `i(x)` with `F(x, i(x)) = 0`, as a one-variable
    /// polynomial truncated at `trunc`.
    pub fn inverse_series(&self, trunc: u32) -> Result<LaurentPoly> {
        let c01 = self.coef(0, 1);
        if !self.ring.is_unit(&c01) {
            return Err(GglError::InvalidFgl("coefficient of y is not a unit".into()));
        }
        let inv01 = self.ring.inverse(&c01).unwrap();
        let x = LaurentPoly::var(self.ring, 1, 0);
        let mut i = -&x.scale(&self.ring.mul(&self.coef(1, 0), &inv01));
        for _ in 0..trunc {
            let r = self.eval(&x, &i, trunc)?;
            if r.is_zero() {
                break;
            }
            i = (&i - &r.scale(&inv01)).truncate(trunc);
        }
        Ok(i.truncate(trunc))
    }

    /// `[k]_F(a)` by binary doubling; negative `k` goes through the inverse.
    pub fn multiple(&self, k: i64, a: &LaurentPoly, trunc: u32) -> Result<LaurentPoly> {
        let zero = LaurentPoly::zero(self.ring, a.nvars());
        if k == 0 || a.is_zero() {
            return Ok(zero);
        }
        let base = if k < 0 {
            let inv = self.inverse_series(trunc)?;
            inv.compose(&[a.clone()], a.nvars(), Some(trunc))?
        } else {
            a.truncate(trunc)
        };
        let mut n = k.unsigned_abs();
        let mut acc = zero;
        let mut pow = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.eval(&acc, &pow, trunc)?;
            }
            n >>= 1;
            if n > 0 {
                pow = self.eval(&pow, &pow, trunc)?;
            }
        }
        Ok(acc)
    }

    /// The F-linear combination `sum_F coeffs[i] * x_i`.
    pub fn linear_combination(&self, coeffs: &[i64], trunc: u32) -> Result<LaurentPoly> {
        let n = coeffs.len();
        let mut acc = LaurentPoly::zero(self.ring, n);
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = self.multiple(c, &LaurentPoly::var(self.ring, n, i), trunc)?;
            acc = self.eval(&acc, &term, trunc)?;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> FglJson {
        let mut a = Vec::new();
        let mut all: Vec<(&(u32, u32), &Coef)> = self.coeffs.iter().collect();
        all.sort_by_key(|((i, j), _)| (i + j, *i));
        for ((i, j), c) in all {
            let default_linear = (*i == 1 && *j == 0) || (*i == 0 && *j == 1);
            if default_linear && c.is_one() {
                continue;
            }
            a.push(FglEntryJson { i: *i, j: *j, coef: coef_to_string(c) });
        }
        for ij in [(1u32, 0u32), (0, 1)] {
            if !self.coeffs.contains_key(&ij) {
                a.insert(0, FglEntryJson { i: ij.0, j: ij.1, coef: "0".into() });
            }
        }
        FglJson { ring: self.ring, n: self.n, a }
    }

    pub fn from_json(j: &FglJson) -> Result<Self> {
        let mut entries = Vec::new();
        for e in &j.a {
            entries.push((e.i, e.j, parse_coef(&e.coef)?));
        }
        Self::new(j.ring, j.n, &entries)
    }

    pub fn to_string_poly(&self) -> String {
        self.poly().fmt_with(&["x".to_string(), "y".to_string()])
    }
}

/// `[n]_F(x)` by the recursion `[0] = 0`, `[n+1] = F(x, [n])`; negative `n`
/// uses the formal inverse.
pub fn n_series(f: &TruncatedFGL, n: i64) -> Result<TruncatedSeries> {
    let trunc = f.trunc();
    let x = LaurentPoly::var(f.ring(), 1, 0);
    let mut s = LaurentPoly::zero(f.ring(), 1);
    for _ in 0..n.unsigned_abs() {
        s = f.eval(&x, &s, trunc)?;
    }
    if n < 0 {
        let inv = f.inverse_series(trunc)?;
        s = inv.compose(&[s], 1, Some(trunc))?;
    }
    TruncatedSeries::new(s, trunc)
}
