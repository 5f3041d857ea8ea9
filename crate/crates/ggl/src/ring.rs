//! Coefficient rings: the integers, the rationals and prime fields.
//!
//! Every coefficient is stored as a `BigRational`. Over `Z` the denominator is
//! always 1; over `F_p` the value is the canonical representative in `[0, p)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GglError, Result};

pub type Coef = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoefficientRing {
    Integers,
    Rationals,
    PrimeField(u64),
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn int(n: i64) -> Coef {
    BigRational::from_integer(BigInt::from(n))
}

impl CoefficientRing {
    pub fn prime_field(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(CoefficientRing::PrimeField(p))
        } else {
            Err(GglError::Parse(format!("F{p}: {p} is not prime")))
        }
    }

    pub fn name(&self) -> String {
        match self {
            CoefficientRing::Integers => "Z".into(),
            CoefficientRing::Rationals => "Q".into(),
            CoefficientRing::PrimeField(p) => format!("F{p}"),
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, CoefficientRing::Integers)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientRing::PrimeField(p) => *p,
            _ => 0,
        }
    }

    /// Brings an integral-or-rational value into canonical form.
    ///
    /// Over `Z` a non-integral value is an error; over `F_p` a denominator
    /// divisible by `p` is an error.
    pub fn coerce(&self, c: &Coef) -> Result<Coef> {
        match self {
            CoefficientRing::Rationals => Ok(c.clone()),
            CoefficientRing::Integers => {
                if c.is_integer() {
                    Ok(c.clone())
                } else {
                    Err(GglError::Parse(format!("{c} is not an integer")))
                }
            }
            CoefficientRing::PrimeField(p) => {
                let p = BigInt::from(*p);
                let den = c.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(GglError::NotUnit(format!("denominator {} in F{p}", c.denom())));
                }
                let inv = mod_inverse(&den, &p).expect("prime modulus");
                let v = (c.numer() * inv).mod_floor(&p);
                Ok(BigRational::from_integer(v))
            }
        }
    }

    /// Canonical form of a value known to lie in the ring (integers always do).
    pub fn norm(&self, c: Coef) -> Coef {
        match self {
            CoefficientRing::PrimeField(p) => {
                let p = BigInt::from(*p);
                if c.is_integer() {
                    BigRational::from_integer(c.numer().mod_floor(&p))
                } else {
                    self.coerce(&c).expect("coefficient outside F_p")
                }
            }
            _ => c,
        }
    }

    pub fn from_i64(&self, n: i64) -> Coef {
        self.norm(int(n))
    }

    pub fn add(&self, a: &Coef, b: &Coef) -> Coef {
        self.norm(a + b)
    }

    pub fn sub(&self, a: &Coef, b: &Coef) -> Coef {
        self.norm(a - b)
    }

    pub fn mul(&self, a: &Coef, b: &Coef) -> Coef {
        self.norm(a * b)
    }

    pub fn neg(&self, a: &Coef) -> Coef {
        self.norm(-a.clone())
    }

    pub fn is_unit(&self, a: &Coef) -> bool {
        match self {
            CoefficientRing::Integers => a.abs().is_one(),
            _ => !a.is_zero(),
        }
    }

    /// Exact quotient `a / b` inside the ring, if it exists.
    pub fn div(&self, a: &Coef, b: &Coef) -> Option<Coef> {
        if b.is_zero() {
            return None;
        }
        match self {
            CoefficientRing::Integers => {
                let (q, r) = a.numer().div_rem(b.numer());
                if r.is_zero() {
                    Some(BigRational::from_integer(q))
                } else {
                    None
                }
            }
            CoefficientRing::Rationals => Some(a / b),
            CoefficientRing::PrimeField(p) => {
                let p = BigInt::from(*p);
                let inv = mod_inverse(&b.numer().mod_floor(&p), &p)?;
                Some(BigRational::from_integer((a.numer() * inv).mod_floor(&p)))
            }
        }
    }

    pub fn inverse(&self, a: &Coef) -> Option<Coef> {
        if self.is_unit(a) {
            self.div(&self.from_i64(1), a)
        } else {
            None
        }
    }

    /// Whether the canonical map from `self` to `target` exists.
    pub fn maps_to(&self, target: &CoefficientRing) -> bool {
        match (self, target) {
            (CoefficientRing::Integers, _) => true,
            (CoefficientRing::Rationals, CoefficientRing::Rationals) => true,
            (CoefficientRing::PrimeField(p), CoefficientRing::PrimeField(q)) => p == q,
            _ => false,
        }
    }

    /// Image of an integer under the unique ring map `Z -> self`.
    pub fn of_int(&self, n: &BigInt) -> Coef {
        self.norm(BigRational::from_integer(n.clone()))
    }
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.abs().is_one() {
        Some((e.x * e.gcd.signum()).mod_floor(m))
    } else {
        None
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for CoefficientRing {
    type Err = GglError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "Z" => Ok(CoefficientRing::Integers),
            "Q" => Ok(CoefficientRing::Rationals),
            _ => {
                let rest = s
                    .strip_prefix('F')
                    .ok_or_else(|| GglError::Parse(format!("unknown ring `{s}`")))?;
                let p: u64 = rest
                    .parse()
                    .map_err(|_| GglError::Parse(format!("unknown ring `{s}`")))?;
                CoefficientRing::prime_field(p)
            }
        }
    }
}

impl Serialize for CoefficientRing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for CoefficientRing {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn parse_coef(s: &str) -> Result<Coef> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| GglError::Parse(format!("bad coefficient `{s}`")))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| GglError::Parse(format!("bad coefficient `{s}`")))?;
        if d.is_zero() {
            return Err(GglError::Parse("zero denominator".into()));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n = BigInt::from_str(s).map_err(|_| GglError::Parse(format!("bad coefficient `{s}`")))?;
        Ok(BigRational::from_integer(n))
    }
}

pub fn coef_to_string(c: &Coef) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rings() {
        assert_eq!("Z".parse::<CoefficientRing>().unwrap(), CoefficientRing::Integers);
        assert_eq!("F7".parse::<CoefficientRing>().unwrap(), CoefficientRing::PrimeField(7));
        assert!("F6".parse::<CoefficientRing>().is_err());
        assert!("R".parse::<CoefficientRing>().is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let k = CoefficientRing::PrimeField(5);
        assert_eq!(k.from_i64(-1), int(4));
        assert_eq!(k.div(&int(1), &int(2)).unwrap(), int(3));
        assert_eq!(k.coerce(&BigRational::new(1.into(), 3.into())).unwrap(), int(2));
        assert!(k.div(&int(1), &int(5)).is_none());
    }

    #[test]
    fn integer_division_is_exact_only() {
        let z = CoefficientRing::Integers;
        assert_eq!(z.div(&int(6), &int(-3)).unwrap(), int(-2));
        assert!(z.div(&int(1), &int(2)).is_none());
        assert!(z.is_unit(&int(-1)));
        assert!(!z.is_unit(&int(2)));
    }
}
