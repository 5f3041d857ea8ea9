//! Truncated multivariate power series.
//!
//! A `TruncatedSeries` with bound `N` stores the terms of total degree `< N`;
//! everything of degree `>= N` is unknown. Results of operations are correct
//! modulo the ideal of terms of degree `>= N`.

use std::fmt;

use num_traits::Zero;

use crate::error::{GglError, Result};
use crate::poly::{default_names, LaurentPoly, Monomial};
use crate::ring::{Coef, CoefficientRing};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    poly: LaurentPoly,
    trunc: u32,
}

impl TruncatedSeries {
    pub fn new(poly: LaurentPoly, trunc: u32) -> Result<Self> {
        if !poly.is_polynomial() {
            return Err(GglError::Unsupported("power series with negative exponents".into()));
        }
        Ok(TruncatedSeries { poly: poly.truncate(trunc), trunc })
    }

    pub fn zero(ring: CoefficientRing, nvars: usize, trunc: u32) -> Self {
        TruncatedSeries { poly: LaurentPoly::zero(ring, nvars), trunc }
    }

    pub fn one(ring: CoefficientRing, nvars: usize, trunc: u32) -> Self {
        Self::new(LaurentPoly::one(ring, nvars), trunc).unwrap()
    }

    pub fn var(ring: CoefficientRing, nvars: usize, i: usize, trunc: u32) -> Self {
        Self::new(LaurentPoly::var(ring, nvars, i), trunc).unwrap()
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    pub fn into_poly(self) -> LaurentPoly {
        self.poly
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn ring(&self) -> CoefficientRing {
        self.poly.ring()
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coefficient(&self, e: &[i64]) -> Coef {
        self.poly.coefficient(&Monomial(e.to_vec()))
    }

    /// Lowers the truncation bound.
    pub fn retruncate(&self, n: u32) -> Self {
        let n = n.min(self.trunc);
        TruncatedSeries { poly: self.poly.truncate(n), trunc: n }
    }

    fn check(&self, o: &Self) -> Result<()> {
        self.poly.compatible(&o.poly)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let n = self.trunc.min(o.trunc);
        Ok(TruncatedSeries { poly: (&self.poly + &o.poly).truncate(n), trunc: n })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let n = self.trunc.min(o.trunc);
        Ok(TruncatedSeries { poly: (&self.poly - &o.poly).truncate(n), trunc: n })
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let n = self.trunc.min(o.trunc);
        Ok(TruncatedSeries { poly: self.poly.mul_trunc(&o.poly, Some(n)), trunc: n })
    }

    pub fn scale(&self, c: &Coef) -> Self {
        TruncatedSeries { poly: self.poly.scale(c), trunc: self.trunc }
    }

    /// Substitutes `args[i]` for variable `i`. Every argument must have zero
    /// constant term.
    pub fn compose(&self, args: &[TruncatedSeries]) -> Result<Self> {
        if args.len() != self.nvars() {
            return Err(GglError::Arity { expected: self.nvars(), got: args.len() });
        }
        let target = args.first().map(|a| a.nvars()).unwrap_or(0);
        let mut n = self.trunc;
        for a in args {
            if !a.poly.constant_term().is_zero() {
                return Err(GglError::ConstantTerm);
            }
            if a.nvars() != target {
                return Err(GglError::NvarsMismatch(target, a.nvars()));
            }
            n = n.min(a.trunc);
        }
        let images: Vec<LaurentPoly> = args.iter().map(|a| a.poly.clone()).collect();
        let poly = self.poly.compose(&images, target, Some(n))?;
        Ok(TruncatedSeries { poly, trunc: n })
    }

    /// Multiplicative inverse of a series with unit constant term.
    pub fn inverse(&self) -> Result<Self> {
        let k = self.ring();
        let c0 = self.poly.constant_term();
        let inv0 = k
            .inverse(&c0)
            .ok_or_else(|| GglError::NotUnit(format!("constant term {c0}")))?;
        // 1/f = inv0 * sum_k (1 - inv0 f)^k, and 1 - inv0 f has no constant term.
        let one = Self::one(k, self.nvars(), self.trunc);
        let h = one.sub(&self.scale(&inv0))?;
        let mut acc = one.clone();
        let mut pow = one;
        for _ in 1..self.trunc.max(1) {
            pow = pow.mul(&h)?;
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow)?;
        }
        Ok(acc.scale(&inv0))
    }

    /// Exact quotient `self / den` by graded division.
    ///
    /// If the lowest homogeneous part of `den` has degree `m`, the quotient is
    /// determined modulo degree `trunc - m`, and that is the bound it carries.
    pub fn exact_divide(&self, den: &Self) -> Result<Self> {
        self.check(den)?;
        let n = self.trunc.min(den.trunc);
        let m = den
            .poly
            .order()
            .ok_or_else(|| GglError::NotDivisible("division by a series that is zero to this precision".into()))?
            as u32;
        if m >= n {
            return Err(GglError::NotDivisible("divisor vanishes below the truncation bound".into()));
        }
        let lead = den.poly.homogeneous_part(m as i64);
        let mut r = self.poly.truncate(n);
        if let Some(o) = r.order() {
            if (o as u32) < m {
                return Err(GglError::NotDivisible(format!("order {o} below divisor order {m}")));
            }
        }
        let qn = n - m;
        let mut q = LaurentPoly::zero(self.ring(), self.nvars());
        for s in 0..qn {
            let part = r.homogeneous_part((s + m) as i64);
            if part.is_zero() {
                continue;
            }
            let qs = part
                .exact_divide(&lead)
                .map_err(|_| GglError::NotDivisible("homogeneous part not divisible by the leading form".into()))?;
            r = &r - &qs.mul_trunc(&den.poly, Some(n));
            q = &q + &qs;
        }
        Ok(TruncatedSeries { poly: q.truncate(qn), trunc: qn })
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        format!("{} + O({})", self.poly.fmt_with(names), self.trunc)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&default_names("x", self.nvars())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    const Q: CoefficientRing = CoefficientRing::Rationals;

    fn mult_law(n: u32) -> TruncatedSeries {
        let x = LaurentPoly::var(Q, 2, 0);
        let y = LaurentPoly::var(Q, 2, 1);
        TruncatedSeries::new(&(&x + &y) + &(&x * &y), n).unwrap()
    }

    #[test]
    fn diagonal_of_multiplicative_law() {
        let a = TruncatedSeries::var(Q, 1, 0, 5);
        let d = mult_law(5).compose(&[a.clone(), a]).unwrap();
        assert_eq!(d.poly().fmt_with(&default_names("a", 1)), "a^2 + 2*a");
    }

    #[test]
    fn counit() {
        let x = TruncatedSeries::var(Q, 1, 0, 5);
        let z = TruncatedSeries::zero(Q, 1, 5);
        let d = mult_law(5).compose(&[x.clone(), z]).unwrap();
        assert_eq!(d, x);
    }

    #[test]
    fn geometric_inverse() {
        let f = TruncatedSeries::new(&LaurentPoly::one(Q, 1) + &LaurentPoly::var(Q, 1, 0), 4).unwrap();
        let mut g = TruncatedSeries::zero(Q, 1, 4);
        for k in 0..8 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let m = TruncatedSeries::new(LaurentPoly::monomial(Q, Monomial(vec![k]), int(sign)), 4).unwrap();
            g = g.add(&m).unwrap();
        }
        assert_eq!(f.mul(&g).unwrap(), TruncatedSeries::one(Q, 1, 4));
        assert_eq!(f.inverse().unwrap(), g);
    }

    #[test]
    fn rejects_constant_argument() {
        let one = TruncatedSeries::one(Q, 1, 4);
        assert_eq!(mult_law(4).compose(&[one.clone(), one]), Err(GglError::ConstantTerm));
    }

    #[test]
    fn graded_division_loses_one_degree() {
        let f = mult_law(6);
        let x = TruncatedSeries::var(Q, 2, 0, 6);
        let q = f.sub(&TruncatedSeries::var(Q, 2, 1, 6)).unwrap().exact_divide(&x).unwrap();
        assert_eq!(q.trunc(), 5);
        assert_eq!(q.poly().to_string(), "t2 + 1");
        assert!(TruncatedSeries::one(Q, 2, 6).exact_divide(&x).is_err());
    }
}
