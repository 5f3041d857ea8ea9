//! Geometric fixed points `X(A)[e_V^{-1} | V != 0]`, as formal fractions with
//! Euler-class denominators. Only equality and zero tests are offered.

use serde::Serialize;

use crate::error::{GglError, Result};
use crate::euler::psi_table;
use crate::groups::{format_char, Character, GroupSpec};
use crate::laws::{euler_class, multiplicative_law, value, GlobalLaw, LawElement, ValueKind};
use crate::poly::{LaurentPoly, Monomial};
use crate::ring::{int, CoefficientRing};

/// `num / prod_{V in den} e_V`.
#[derive(Debug, Clone)]
pub struct LocalizedElement {
    pub num: LawElement,
    pub den: Vec<Character>,
}

impl LocalizedElement {
    pub fn new(num: LawElement, den: Vec<Character>) -> Result<Self> {
        for v in &den {
            num.group.check_character(v)?;
            if v.iter().all(|&x| x == 0) {
                return Err(GglError::ZeroCharacter);
            }
        }
        Ok(LocalizedElement { num, den })
    }
}

fn den_product(law: &dyn GlobalLaw, g: &GroupSpec, den: &[Character]) -> Result<LawElement> {
    let v = value(law, g)?;
    let mut p = v.one(law);
    for c in den {
        p = v.mul(law, &p, &euler_class(law, g, c)?)?;
    }
    Ok(p)
}

/// Equality in the localization by cross-multiplication; decided only where
/// `X(A)` is a domain.
pub fn loc_eq(law: &dyn GlobalLaw, a: &LocalizedElement, b: &LocalizedElement) -> Result<bool> {
    let g = &a.num.group;
    if *g != b.num.group {
        return Err(GglError::Dimension("fractions over different groups".into()));
    }
    let v = value(law, g)?;
    if v.quotient.is_some() || !law.torus_values_are_domains() || matches!(v.kind, ValueKind::Series { .. }) {
        return Err(GglError::Undecidable(format!(
            "{} at {}: cross-multiplication is only conclusive in a domain",
            law.id(),
            g
        )));
    }
    let da = den_product(law, g, &a.den)?;
    let db = den_product(law, g, &b.den)?;
    if da.is_zero() || db.is_zero() {
        // a vanishing Euler class is inverted: the localization is zero
        return Ok(true);
    }
    let l = v.mul(law, &a.num, &db)?;
    let r = v.mul(law, &b.num, &da)?;
    v.equal(law, &l, &r)
}

/// `Phi^{C_n}` of the multiplicative law over the integers: `Z[t]/(Phi_n(t))`
/// with the images of `t^k - 1`, `0 < k < n`, inverted.
#[derive(Debug, Clone, Serialize)]
pub struct CyclicFixedPoints {
    pub n: u64,
    #[serde(serialize_with = "ser_poly")]
    pub modulus: LaurentPoly,
    /// cyclotomic factors of `t^n - 1` killed by the localization
    #[serde(serialize_with = "ser_polys")]
    pub killed: Vec<LaurentPoly>,
    /// images of the inverted Euler classes, reduced modulo the modulus
    #[serde(serialize_with = "ser_polys")]
    pub inverted: Vec<LaurentPoly>,
}

fn ser_poly<S: serde::Serializer>(p: &LaurentPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn ser_polys<S: serde::Serializer>(p: &[LaurentPoly], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(p.len()))?;
    for x in p {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

pub fn cyclic_fixed_points_mult(n: u64) -> Result<CyclicFixedPoints> {
    if n < 2 {
        return Err(GglError::Dimension("cyclic fixed points need n >= 2".into()));
    }
    let z = CoefficientRing::Integers;
    let law = multiplicative_law(z);
    let table = psi_table(&*law, n)?;
    let modulus = table[&n].poly.clone();
    let killed = table.iter().filter(|(d, _)| **d < n).map(|(_, p)| p.poly.clone()).collect();
    let mut inverted = Vec::new();
    for k in 1..n as i64 {
        let e = &LaurentPoly::monomial(z, Monomial(vec![k]), int(1)) - &LaurentPoly::one(z, 1);
        inverted.push(e.rem_monic_univariate(&modulus)?);
    }
    Ok(CyclicFixedPoints { n, modulus, killed, inverted })
}

impl CyclicFixedPoints {
    /// Image of an element of `Z[t^{+-1}]` (reduced modulo `Phi_n`).
    pub fn reduce(&self, x: &LaurentPoly) -> Result<LaurentPoly> {
        x.rem_monic_univariate(&self.modulus)
    }

    /// Whether `x in X(T)` maps to zero in `Phi^{C_n}`. The inverted
    /// elements are nonzero in the domain `Z[t]/(Phi_n)`, so this is
    /// divisibility by `Phi_n`.
    pub fn maps_to_zero(&self, x: &LaurentPoly) -> Result<bool> {
        Ok(self.reduce(x)?.is_zero())
    }

    /// Equality of `a / prod (t^{k_i} - 1)` and `b / prod (t^{l_j} - 1)`.
    pub fn eq_fractions(&self, a: &LaurentPoly, ka: &[i64], b: &LaurentPoly, kb: &[i64]) -> Result<bool> {
        let z = CoefficientRing::Integers;
        let den = |ks: &[i64]| -> Result<LaurentPoly> {
            let mut p = LaurentPoly::one(z, 1);
            for &k in ks {
                if k.rem_euclid(self.n as i64) == 0 {
                    return Err(GglError::ZeroCharacter);
                }
                p = &p * &(&LaurentPoly::monomial(z, Monomial(vec![k]), int(1)) - &LaurentPoly::one(z, 1));
            }
            Ok(p)
        };
        let l = a * &den(kb)?;
        let r = b * &den(ka)?;
        self.maps_to_zero(&(&l - &r))
    }

    pub fn describe(&self) -> String {
        let inv: Vec<String> = self.inverted.iter().map(|p| p.to_string()).collect();
        format!("Z[t]/({}) with {} inverted", self.modulus, inv.join(", "))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelCheck {
    pub n: u64,
    pub tested: usize,
    pub in_kernel: usize,
    pub passed: bool,
    pub counterexample: Option<String>,
}

/// On a finite family of test elements, checks that `x` dies in the
/// composite `X(T) -> X(C_n) -> Phi^{C_n}` exactly when `psi_n | x`.
/// Dying is tested by the mechanism `x * prod_{0<i<n} e_i` divisible by
/// `e_n`.
pub fn psi_kernel_check(law: &dyn GlobalLaw, n: u64, bound: i64) -> Result<KernelCheck> {
    let t = GroupSpec::Torus(1);
    let v = value(law, &t)?;
    if matches!(v.kind, ValueKind::Series { .. }) {
        return Err(GglError::Unsupported("kernel check needs exact division".into()));
    }
    let psi_n = psi_table(law, n)?.remove(&n).unwrap();
    let k = law.ring();
    let en = euler_class(law, &t, &[n as i64])?;
    let mut guard = v.one(law);
    for i in 1..n as i64 {
        guard = v.mul(law, &guard, &euler_class(law, &t, &[i])?)?;
    }
    let lo = if v.kind == ValueKind::Laurent { -bound } else { 0 };
    let mono = |a: i64| LaurentPoly::monomial(k, Monomial(vec![a]), int(1));
    let mut tests: Vec<LaurentPoly> = vec![LaurentPoly::one(k, 1), psi_n.poly.clone()];
    for a in lo..=bound {
        tests.push(mono(a));
        tests.push(&psi_n.poly * &mono(a));
        for b in lo..a {
            tests.push(&mono(a) - &mono(b));
            tests.push(&mono(a) + &mono(b));
        }
    }
    let mut in_kernel = 0;
    for x in &tests {
        let xe = v.element(law, x.clone())?;
        let dies = v.mul(law, &xe, &guard)?.poly.exact_divide(&en.poly).is_ok();
        let div = x.exact_divide(&psi_n.poly).is_ok();
        if dies {
            in_kernel += 1;
        }
        if dies != div {
            return Ok(KernelCheck {
                n,
                tested: tests.len(),
                in_kernel,
                passed: false,
                counterexample: Some(v.fmt(x)),
            });
        }
    }
    Ok(KernelCheck { n, tested: tests.len(), in_kernel, passed: true, counterexample: None })
}

pub fn describe_den(den: &[Character]) -> String {
    den.iter().map(|v| format!("e_[{}]", format_char(v))).collect::<Vec<_>>().join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::additive_law;

    const Z: CoefficientRing = CoefficientRing::Integers;

    #[test]
    fn fractions() {
        let m = multiplicative_law(Z);
        let t = GroupSpec::Torus(1);
        let v = value(&*m, &t).unwrap();
        let e1 = euler_class(&*m, &t, &[1]).unwrap();
        let one = LocalizedElement::new(v.one(&*m), vec![]).unwrap();
        assert!(loc_eq(&*m, &LocalizedElement::new(e1.clone(), vec![vec![1]]).unwrap(), &one).unwrap());
        let e2 = euler_class(&*m, &t, &[2]).unwrap();
        let tp1 = v.element(&*m, &LaurentPoly::var(Z, 1, 0) + &LaurentPoly::one(Z, 1)).unwrap();
        let a = LocalizedElement::new(e2, vec![vec![1]]).unwrap();
        assert!(loc_eq(&*m, &a, &LocalizedElement::new(tp1, vec![]).unwrap()).unwrap());
        let q = additive_law(CoefficientRing::Rationals);
        let e5 = euler_class(&*q, &t, &[5]).unwrap();
        let five = value(&*q, &t).unwrap().element(&*q, LaurentPoly::from_i64(CoefficientRing::Rationals, 1, 5)).unwrap();
        assert!(loc_eq(&*q, &LocalizedElement::new(e5, vec![vec![1]]).unwrap(), &LocalizedElement::new(five, vec![]).unwrap()).unwrap());
        let c3 = GroupSpec::cyclic(3).unwrap();
        let x = value(&*m, &c3).unwrap().one(&*m);
        let y = LocalizedElement::new(x, vec![]).unwrap();
        assert!(matches!(loc_eq(&*m, &y, &y), Err(GglError::Undecidable(_))));
    }

    #[test]
    fn cyclic_presentations() {
        let c2 = cyclic_fixed_points_mult(2).unwrap();
        assert_eq!(c2.modulus.to_string(), "t + 1");
        assert_eq!(c2.inverted[0].to_string(), "-2");
        let c3 = cyclic_fixed_points_mult(3).unwrap();
        assert_eq!(c3.modulus.to_string(), "t^2 + t + 1");
        assert_eq!(c3.inverted.len(), 2);
        assert!(cyclic_fixed_points_mult(1).is_err());
    }

    #[test]
    fn kernels() {
        let m = multiplicative_law(Z);
        for n in 1..=6 {
            assert!(psi_kernel_check(&*m, n, 3).unwrap().passed, "n = {n}");
        }
    }
}
