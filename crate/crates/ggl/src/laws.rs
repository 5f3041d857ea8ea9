//! Global group laws: a value ring for every group, restriction maps and a
//! coordinate.
//!
//! Values at tori (or at elementary abelian 2-groups for the 2-torsion
//! family) are Laurent rings, polynomial rings or truncated power series
//! rings, depending on the law. Values at `Quotient` presentations are the
//! left Kan extension `X(T_A) / (e_V : V in kernel lattice)`.
//!
//! Normal forms in a quotient: the kernel lattice is put in Smith form
//! `U K W = D`. Restricting along the automorphism `W` of the ambient torus
//! turns the relations into `e_{d_j E_j}`, one per coordinate, which every
//! implemented law reduces by a per-coordinate rule (`CoordRule`). The normal
//! form is that reduction transported back along `W^{-1}`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{GglError, Result};
use crate::fgl::TruncatedFGL;
use crate::groups::{Character, Family, GroupHom, GroupSpec};
use crate::linalg::{smith, to_big};
use crate::poly::{default_names, LaurentPoly, Monomial};
use crate::ring::{Coef, CoefficientRing};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Laurent,
    Polynomial,
    Series { trunc: u32 },
}

/// How one diagonal relation `e_{d E_j}` acts on normal forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoordRule {
    Free,
    /// exponents of variable `j` are read modulo `d` (group rings)
    ExpMod(i64),
    /// monomials involving variable `j` have coefficients modulo `d`
    Torsion(BigInt),
    /// monomials with exponent `>= m` in variable `j` vanish
    Kill(u32),
}

pub trait GlobalLaw: fmt::Debug + Send + Sync {
    /// Short identifier such as `mult/Z`.
    fn id(&self) -> String;
    fn family(&self) -> Family;
    fn ring(&self) -> CoefficientRing;
    fn kind(&self) -> ValueKind;
    fn var_prefix(&self) -> &'static str;
    /// Restriction between ambient tori along the character matrix `m`
    /// (rows: target generators, columns: `source_rank` source generators).
    fn restrict_matrix(&self, m: &[Vec<i64>], source_rank: usize, x: &LaurentPoly, prec: Option<u32>) -> Result<LaurentPoly>;
    /// The coordinate `e`, an element of the value at `T` (or `C2`).
    fn coordinate_poly(&self) -> LaurentPoly;
    /// Reduction rule for the relation `e_{d E_j}` in a quotient.
    fn coord_rule(&self, d: i64) -> Result<CoordRule>;
    fn base_change(&self, k: CoefficientRing) -> Result<Arc<dyn GlobalLaw>>;
    /// Whether values at tori are integral domains (exact regularity).
    fn torus_values_are_domains(&self) -> bool {
        true
    }
    fn fgl(&self) -> Option<&TruncatedFGL> {
        None
    }
}

pub type Law = Arc<dyn GlobalLaw>;

fn matrix_rows_ok(m: &[Vec<i64>], nvars: usize, source_rank: usize) -> Result<()> {
    if m.len() != nvars || m.iter().any(|r| r.len() != source_rank) {
        return Err(GglError::Dimension(format!("restriction matrix must be {nvars}x{source_rank}")));
    }
    Ok(())
}

fn linear_images(k: CoefficientRing, m: &[Vec<i64>], source_rank: usize) -> Vec<LaurentPoly> {
    m.iter()
        .map(|row| {
            let mut p = LaurentPoly::zero(k, source_rank);
            for (i, &c) in row.iter().enumerate() {
                if c != 0 {
                    p = &p + &LaurentPoly::var(k, source_rank, i).scale(&k.from_i64(c));
                }
            }
            p
        })
        .collect()
}

/// The multiplicative law: the group ring of the character lattice,
/// coordinate `t - 1`.
#[derive(Debug, Clone)]
pub struct Multiplicative {
    pub k: CoefficientRing,
}

impl GlobalLaw for Multiplicative {
    fn id(&self) -> String {
        format!("mult/{}", self.k)
    }
    fn family(&self) -> Family {
        Family::Tori
    }
    fn ring(&self) -> CoefficientRing {
        self.k
    }
    fn kind(&self) -> ValueKind {
        ValueKind::Laurent
    }
    fn var_prefix(&self) -> &'static str {
        "t"
    }
    fn restrict_matrix(&self, m: &[Vec<i64>], source_rank: usize, x: &LaurentPoly, _prec: Option<u32>) -> Result<LaurentPoly> {
        matrix_rows_ok(m, x.nvars(), source_rank)?;
        x.substitute(m, source_rank)
    }
    fn coordinate_poly(&self) -> LaurentPoly {
        &LaurentPoly::var(self.k, 1, 0) - &LaurentPoly::one(self.k, 1)
    }
    fn coord_rule(&self, d: i64) -> Result<CoordRule> {
        Ok(if d == 0 { CoordRule::Free } else { CoordRule::ExpMod(d.abs()) })
    }
    fn base_change(&self, k: CoefficientRing) -> Result<Law> {
        check_map(self.k, k)?;
        Ok(Arc::new(Multiplicative { k }))
    }
}

/// The additive law: polynomials on the basis Euler classes, `e_V` linear
/// in `V`.
#[derive(Debug, Clone)]
pub struct Additive {
    pub k: CoefficientRing,
}

fn additive_rule(k: CoefficientRing, d: i64) -> CoordRule {
    let c = k.from_i64(d);
    if c.is_zero() {
        CoordRule::Free
    } else if k.is_unit(&c) {
        CoordRule::Kill(1)
    } else {
        CoordRule::Torsion(BigInt::from(d.abs()))
    }
}

impl GlobalLaw for Additive {
    fn id(&self) -> String {
        format!("add/{}", self.k)
    }
    fn family(&self) -> Family {
        Family::Tori
    }
    fn ring(&self) -> CoefficientRing {
        self.k
    }
    fn kind(&self) -> ValueKind {
        ValueKind::Polynomial
    }
    fn var_prefix(&self) -> &'static str {
        "e"
    }
    fn restrict_matrix(&self, m: &[Vec<i64>], source_rank: usize, x: &LaurentPoly, _prec: Option<u32>) -> Result<LaurentPoly> {
        matrix_rows_ok(m, x.nvars(), source_rank)?;
        x.compose(&linear_images(self.k, m, source_rank), source_rank, None)
    }
    fn coordinate_poly(&self) -> LaurentPoly {
        LaurentPoly::var(self.k, 1, 0)
    }
    fn coord_rule(&self, d: i64) -> Result<CoordRule> {
        Ok(additive_rule(self.k, d))
    }
    fn base_change(&self, k: CoefficientRing) -> Result<Law> {
        check_map(self.k, k)?;
        Ok(Arc::new(Additive { k }))
    }
}

/// The additive 2-torsion law on elementary abelian 2-groups over `F_2`.
#[derive(Debug, Clone)]
pub struct TwoTorsionAdditive;

impl GlobalLaw for TwoTorsionAdditive {
    fn id(&self) -> String {
        "2tor-add/F2".into()
    }
    fn family(&self) -> Family {
        Family::Elem2
    }
    fn ring(&self) -> CoefficientRing {
        CoefficientRing::PrimeField(2)
    }
    fn kind(&self) -> ValueKind {
        ValueKind::Polynomial
    }
    fn var_prefix(&self) -> &'static str {
        "e"
    }
    fn restrict_matrix(&self, m: &[Vec<i64>], source_rank: usize, x: &LaurentPoly, _prec: Option<u32>) -> Result<LaurentPoly> {
        matrix_rows_ok(m, x.nvars(), source_rank)?;
        x.compose(&linear_images(self.ring(), m, source_rank), source_rank, None)
    }
    fn coordinate_poly(&self) -> LaurentPoly {
        LaurentPoly::var(self.ring(), 1, 0)
    }
    fn coord_rule(&self, _d: i64) -> Result<CoordRule> {
        Err(GglError::FamilyMismatch("the 2-torsion family has no quotient presentations".into()))
    }
    fn base_change(&self, k: CoefficientRing) -> Result<Law> {
        if k == self.ring() {
            Ok(Arc::new(TwoTorsionAdditive))
        } else {
            Err(GglError::NotRingMap(format!("F2 -> {k}")))
        }
    }
}

/// The complete law attached to a formal group law: truncated power series
/// rings, restriction through F-linear combinations.
#[derive(Debug, Clone)]
pub struct FromFgl {
    f: TruncatedFGL,
}

impl FromFgl {
    pub fn new(f: TruncatedFGL) -> Result<Self> {
        let v = crate::lazard::validate_fgl(&f);
        if !v.is_empty() {
            return Err(GglError::InvalidFgl(
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "),
            ));
        }
        Ok(FromFgl { f })
    }
}

impl GlobalLaw for FromFgl {
    fn id(&self) -> String {
        format!("fgl/{}/N={}", self.f.ring(), self.f.degree())
    }
    fn family(&self) -> Family {
        Family::Tori
    }
    fn ring(&self) -> CoefficientRing {
        self.f.ring()
    }
    fn kind(&self) -> ValueKind {
        ValueKind::Series { trunc: self.f.trunc() }
    }
    fn var_prefix(&self) -> &'static str {
        "x"
    }
    fn restrict_matrix(&self, m: &[Vec<i64>], source_rank: usize, x: &LaurentPoly, prec: Option<u32>) -> Result<LaurentPoly> {
        matrix_rows_ok(m, x.nvars(), source_rank)?;
        let trunc = prec.unwrap_or(self.f.trunc()).min(self.f.trunc());
        let images = m
            .iter()
            .map(|row| self.f.linear_combination(row, trunc))
            .collect::<Result<Vec<_>>>()?;
        x.compose(&images, source_rank, Some(trunc))
    }
    fn coordinate_poly(&self) -> LaurentPoly {
        LaurentPoly::var(self.f.ring(), 1, 0)
    }
    fn coord_rule(&self, d: i64) -> Result<CoordRule> {
        if d == 0 {
            return Ok(CoordRule::Free);
        }
        let k = self.f.ring();
        if k.is_unit(&k.from_i64(d)) {
            return Ok(CoordRule::Kill(1));
        }
        if !k.is_field() {
            return Err(GglError::Unsupported(format!(
                "quotient by [{d}]-series over {k}: no normal form without a field of coefficients"
            )));
        }
        let s = crate::fgl::n_series(&self.f, d)?;
        Ok(match s.poly().order() {
            Some(m) => CoordRule::Kill(m as u32),
            None => CoordRule::Free,
        })
    }
    fn base_change(&self, k: CoefficientRing) -> Result<Law> {
        Ok(Arc::new(FromFgl { f: self.f.map_ring(k)? }))
    }
    fn fgl(&self) -> Option<&TruncatedFGL> {
        Some(&self.f)
    }
}

/// The same functor with the coordinate `lambda * e`.
#[derive(Debug, Clone)]
pub struct Recoordinated {
    inner: Law,
    lambda: LaurentPoly,
}

impl GlobalLaw for Recoordinated {
    fn id(&self) -> String {
        format!("{}*({})", self.inner.id(), self.lambda)
    }
    fn family(&self) -> Family {
        self.inner.family()
    }
    fn ring(&self) -> CoefficientRing {
        self.inner.ring()
    }
    fn kind(&self) -> ValueKind {
        self.inner.kind()
    }
    fn var_prefix(&self) -> &'static str {
        self.inner.var_prefix()
    }
    fn restrict_matrix(&self, m: &[Vec<i64>], source_rank: usize, x: &LaurentPoly, prec: Option<u32>) -> Result<LaurentPoly> {
        self.inner.restrict_matrix(m, source_rank, x, prec)
    }
    fn coordinate_poly(&self) -> LaurentPoly {
        let trunc = match self.inner.kind() {
            ValueKind::Series { trunc } => Some(trunc),
            _ => None,
        };
        self.lambda.mul_trunc(&self.inner.coordinate_poly(), trunc)
    }
    fn coord_rule(&self, d: i64) -> Result<CoordRule> {
        // lambda is a unit, so e'_V and e_V generate the same ideal.
        self.inner.coord_rule(d)
    }
    fn base_change(&self, k: CoefficientRing) -> Result<Law> {
        Ok(Arc::new(Recoordinated { inner: self.inner.base_change(k)?, lambda: self.lambda.change_ring(k)? }))
    }
    fn torus_values_are_domains(&self) -> bool {
        self.inner.torus_values_are_domains()
    }
}

fn check_map(a: CoefficientRing, b: CoefficientRing) -> Result<()> {
    if a.maps_to(&b) {
        Ok(())
    } else {
        Err(GglError::NotRingMap(format!("{a} -> {b}")))
    }
}

pub fn multiplicative_law(k: CoefficientRing) -> Law {
    Arc::new(Multiplicative { k })
}

pub fn additive_law(k: CoefficientRing) -> Law {
    Arc::new(Additive { k })
}

pub fn two_torsion_additive_law() -> Law {
    Arc::new(TwoTorsionAdditive)
}

pub fn from_fgl(f: TruncatedFGL) -> Result<Law> {
    Ok(Arc::new(FromFgl::new(f)?))
}

/// Base change along the canonical map `k -> target`.
pub fn base_change(x: &Law, target: CoefficientRing) -> Result<Law> {
    check_map(x.ring(), target)?;
    x.base_change(target)
}

/// Wraps `x` with the coordinate `lambda * e`; `lambda` must lie in `X(T)`.
pub fn recoordinate(x: &Law, lambda: LaurentPoly) -> Result<Law> {
    if lambda.nvars() != 1 || lambda.ring() != x.ring() {
        return Err(GglError::Dimension("lambda must be an element of X(T)".into()));
    }
    Ok(Arc::new(Recoordinated { inner: x.clone(), lambda }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientData {
    pub kernel: Vec<Character>,
    pub fwd: Vec<Vec<i64>>,
    pub back: Vec<Vec<i64>>,
    pub diag: Vec<i64>,
    pub rules: Vec<CoordRule>,
}

/// A ring presentation: generators are polynomial variables, relations are
/// the Euler classes of the kernel characters (Kan extension).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueRing {
    pub group: GroupSpec,
    pub ring: CoefficientRing,
    pub nvars: usize,
    pub kind: ValueKind,
    pub quotient: Option<QuotientData>,
    prefix: &'static str,
}

/// An element of `X(group)`; `prec` is the known precision for series laws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawElement {
    pub group: GroupSpec,
    pub poly: LaurentPoly,
    pub prec: Option<u32>,
}

impl LawElement {
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

fn to_i64_matrix(m: &[Vec<BigInt>]) -> Result<Vec<Vec<i64>>> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().ok_or_else(|| GglError::Unsupported("matrix entry overflow".into())))
                .collect()
        })
        .collect()
}

pub fn value(law: &dyn GlobalLaw, g: &GroupSpec) -> Result<ValueRing> {
    if law.family() != g.family() {
        return Err(GglError::FamilyMismatch(format!("{} is not defined on {}", law.id(), g)));
    }
    let r = g.ambient_rank();
    let quotient = match g {
        GroupSpec::Quotient { kernel, .. } => {
            let k = kernel.len();
            let s = smith(&to_big(kernel), k, r);
            let mut diag = vec![0i64; r];
            for (j, d) in s.d.iter().enumerate() {
                diag[j] = d.to_i64().ok_or_else(|| GglError::Unsupported("invariant factor overflow".into()))?;
            }
            let rules = diag.iter().map(|&d| law.coord_rule(d)).collect::<Result<Vec<_>>>()?;
            Some(QuotientData {
                kernel: kernel.clone(),
                fwd: to_i64_matrix(&s.w)?,
                back: to_i64_matrix(&s.w_inv)?,
                diag,
                rules,
            })
        }
        _ => None,
    };
    Ok(ValueRing { group: g.clone(), ring: law.ring(), nvars: r, kind: law.kind(), quotient, prefix: law.var_prefix() })
}

/// Applies per-coordinate rules to a polynomial (in Smith coordinates).
pub(crate) fn reduce_rules(p: &LaurentPoly, rules: &[CoordRule]) -> LaurentPoly {
    let k = p.ring();
    p.map_terms(|e, c| {
        let mut e2 = e.0.clone();
        let mut g = BigInt::zero();
        for (j, rule) in rules.iter().enumerate() {
            match rule {
                CoordRule::Free => {}
                CoordRule::ExpMod(d) => e2[j] = e2[j].rem_euclid(*d),
                CoordRule::Kill(m) => {
                    if e2[j] >= *m as i64 {
                        return None;
                    }
                }
                CoordRule::Torsion(d) => {
                    if e2[j] > 0 {
                        g = g.gcd(d);
                    }
                }
            }
        }
        let c = if g.is_zero() {
            c.clone()
        } else {
            let v = c.numer().mod_floor(&g);
            if v.is_zero() {
                return None;
            }
            BigRational::from_integer(v)
        };
        Some((Monomial(e2), k.norm(c)))
    })
}

/// Modulus of a monomial already in reduced form: `None` if it vanishes,
/// `Some(0)` if free, `Some(g)` if its coefficients live in `Z/g`.
pub(crate) fn monomial_modulus(e: &Monomial, rules: &[CoordRule]) -> Option<BigInt> {
    let mut g = BigInt::zero();
    for (j, rule) in rules.iter().enumerate() {
        match rule {
            CoordRule::Kill(m) if e.0[j] >= *m as i64 => return None,
            CoordRule::Torsion(d) if e.0[j] > 0 => g = g.gcd(d),
            _ => {}
        }
    }
    if g.is_one() {
        None
    } else {
        Some(g)
    }
}

impl ValueRing {
    pub fn trunc(&self) -> Option<u32> {
        match self.kind {
            ValueKind::Series { trunc } => Some(trunc),
            _ => None,
        }
    }

    pub fn var_names(&self) -> Vec<String> {
        default_names(self.prefix, self.nvars)
    }

    pub fn fmt(&self, p: &LaurentPoly) -> String {
        p.fmt_with(&self.var_names())
    }

    pub fn fmt_elem(&self, x: &LawElement) -> String {
        match x.prec {
            Some(n) => format!("{} + O({n})", self.fmt(&x.poly)),
            None => self.fmt(&x.poly),
        }
    }

    fn check_poly(&self, p: &LaurentPoly) -> Result<()> {
        if p.ring() != self.ring {
            return Err(GglError::RingMismatch(p.ring().name(), self.ring.name()));
        }
        if p.nvars() != self.nvars {
            return Err(GglError::NvarsMismatch(self.nvars, p.nvars()));
        }
        if self.kind != ValueKind::Laurent && !p.is_polynomial() {
            return Err(GglError::Unsupported("negative exponents outside a Laurent ring".into()));
        }
        Ok(())
    }

    /// Smith coordinates of an ambient element (identity outside quotients).
    pub(crate) fn to_smith(&self, law: &dyn GlobalLaw, p: &LaurentPoly, prec: Option<u32>) -> Result<LaurentPoly> {
        match &self.quotient {
            Some(q) => law.restrict_matrix(&q.fwd, self.nvars, p, prec),
            None => Ok(p.clone()),
        }
    }

    pub(crate) fn from_smith(&self, law: &dyn GlobalLaw, p: &LaurentPoly, prec: Option<u32>) -> Result<LaurentPoly> {
        match &self.quotient {
            Some(q) => law.restrict_matrix(&q.back, self.nvars, p, prec),
            None => Ok(p.clone()),
        }
    }

    pub fn normal_form(&self, law: &dyn GlobalLaw, p: &LaurentPoly, prec: Option<u32>) -> Result<LaurentPoly> {
        self.check_poly(p)?;
        let prec = self.effective_prec(prec);
        let p = match prec {
            Some(n) => p.truncate(n),
            None => p.clone(),
        };
        match &self.quotient {
            None => Ok(p),
            Some(q) => {
                let s = self.to_smith(law, &p, prec)?;
                let r = reduce_rules(&s, &q.rules);
                let back = self.from_smith(law, &r, prec)?;
                Ok(match prec {
                    Some(n) => back.truncate(n),
                    None => back,
                })
            }
        }
    }

    pub(crate) fn effective_prec(&self, prec: Option<u32>) -> Option<u32> {
        match (self.trunc(), prec) {
            (Some(t), Some(p)) => Some(t.min(p)),
            (Some(t), None) => Some(t),
            (None, _) => None,
        }
    }

    pub fn element(&self, law: &dyn GlobalLaw, p: LaurentPoly) -> Result<LawElement> {
        self.element_prec(law, p, None)
    }

    pub fn element_prec(&self, law: &dyn GlobalLaw, p: LaurentPoly, prec: Option<u32>) -> Result<LawElement> {
        let prec = self.effective_prec(prec);
        let poly = self.normal_form(law, &p, prec)?;
        Ok(LawElement { group: self.group.clone(), poly, prec })
    }

    pub fn zero(&self) -> LawElement {
        LawElement { group: self.group.clone(), poly: LaurentPoly::zero(self.ring, self.nvars), prec: self.trunc() }
    }

    pub fn one(&self, law: &dyn GlobalLaw) -> LawElement {
        self.element(law, LaurentPoly::one(self.ring, self.nvars)).expect("one is always an element")
    }

    fn join_prec(a: Option<u32>, b: Option<u32>) -> Option<u32> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn add(&self, law: &dyn GlobalLaw, a: &LawElement, b: &LawElement) -> Result<LawElement> {
        self.element_prec(law, &a.poly + &b.poly, Self::join_prec(a.prec, b.prec))
    }

    pub fn sub(&self, law: &dyn GlobalLaw, a: &LawElement, b: &LawElement) -> Result<LawElement> {
        self.element_prec(law, &a.poly - &b.poly, Self::join_prec(a.prec, b.prec))
    }

    pub fn mul(&self, law: &dyn GlobalLaw, a: &LawElement, b: &LawElement) -> Result<LawElement> {
        let prec = self.effective_prec(Self::join_prec(a.prec, b.prec));
        self.element_prec(law, a.poly.mul_trunc(&b.poly, prec), prec)
    }

    pub fn scale(&self, law: &dyn GlobalLaw, a: &LawElement, c: &Coef) -> Result<LawElement> {
        self.element_prec(law, a.poly.scale(c), a.prec)
    }

    /// Equality in the presentation, up to the joint precision.
    pub fn equal(&self, law: &dyn GlobalLaw, a: &LawElement, b: &LawElement) -> Result<bool> {
        Ok(self.sub(law, a, b)?.is_zero())
    }

    /// The Euler classes of the kernel characters, in ambient coordinates.
    pub fn relations(&self, law: &dyn GlobalLaw) -> Result<Vec<LaurentPoly>> {
        let amb = GroupSpec::Torus(self.nvars);
        let mut out = Vec::new();
        if let Some(q) = &self.quotient {
            for v in &q.kernel {
                out.push(euler_class(law, &amb, v)?.poly);
            }
        }
        Ok(out)
    }

    pub fn describe(&self, law: &dyn GlobalLaw) -> Result<String> {
        let names = self.var_names();
        let gens = match self.kind {
            ValueKind::Laurent => names.iter().map(|v| format!("{v}^+-1")).collect::<Vec<_>>().join(", "),
            _ => names.join(", "),
        };
        let base = match self.kind {
            ValueKind::Series { .. } => format!("{}[[{}]]", self.ring, gens),
            _ if self.nvars == 0 => self.ring.name(),
            _ => format!("{}[{}]", self.ring, gens),
        };
        let rels = self.relations(law)?;
        let mut s = base;
        if !rels.is_empty() {
            s.push_str(&format!(" / ({})", rels.iter().map(|r| self.fmt(r)).collect::<Vec<_>>().join(", ")));
        }
        if let Some(n) = self.trunc() {
            s.push_str(&format!(" mod degree {n}"));
        }
        Ok(s)
    }
}

/// Restriction along `alpha`, in the value ring of its source.
pub fn restrict(law: &dyn GlobalLaw, alpha: &GroupHom, x: &LawElement) -> Result<LawElement> {
    if x.group != alpha.target {
        return Err(GglError::Dimension(format!("element of X({}) restricted along a map into {}", x.group, alpha.target)));
    }
    let src = value(law, &alpha.source)?;
    let prec = src.effective_prec(x.prec);
    let p = law.restrict_matrix(&alpha.matrix, alpha.source.ambient_rank(), &x.poly, prec)?;
    src.element_prec(law, p, prec)
}

/// The value at a quotient presentation (left Kan extension).
pub fn kan_value(law: &dyn GlobalLaw, g: &GroupSpec) -> Result<ValueRing> {
    if law.family() != Family::Tori {
        return Err(GglError::FamilyMismatch("Kan extension needs a law on tori".into()));
    }
    value(law, g)
}

/// Restriction between presentations through the lift `alpha.matrix`.
pub fn kan_restrict(law: &dyn GlobalLaw, alpha: &GroupHom, x: &LawElement) -> Result<LawElement> {
    if law.family() != Family::Tori {
        return Err(GglError::FamilyMismatch("Kan extension needs a law on tori".into()));
    }
    restrict(law, alpha, x)
}

pub fn coordinate(law: &dyn GlobalLaw) -> LawElement {
    let g = match law.family() {
        Family::Tori => GroupSpec::Torus(1),
        Family::Elem2 => GroupSpec::Elem2(1),
    };
    let v = value(law, &g).expect("rank one value");
    v.element(law, law.coordinate_poly()).expect("coordinate lies in X(T)")
}

/// `e_V = V^* e`.
pub fn euler_class(law: &dyn GlobalLaw, g: &GroupSpec, v: &[i64]) -> Result<LawElement> {
    if law.family() != g.family() {
        return Err(GglError::FamilyMismatch(format!("{} is not defined on {}", law.id(), g)));
    }
    let alpha = GroupHom::from_character(g.clone(), v)?;
    restrict(law, &alpha, &coordinate(law))
}

/// Parses a law selector: `mult`, `add`, `2tor-add`, or `fgl:<json text>`.
pub fn law_from_name(name: &str, k: CoefficientRing) -> Result<Law> {
    match name {
        "mult" => Ok(multiplicative_law(k)),
        "add" => Ok(additive_law(k)),
        "2tor-add" => {
            if k != CoefficientRing::PrimeField(2) {
                return Err(GglError::NotRingMap(format!("the 2-torsion additive law lives over F2, not {k}")));
            }
            Ok(two_torsion_additive_law())
        }
        _ => Err(GglError::Parse(format!("unknown law `{name}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    const Z: CoefficientRing = CoefficientRing::Integers;

    #[test]
    fn multiplicative_euler_classes() {
        let m = multiplicative_law(Z);
        let t1 = GroupSpec::Torus(1);
        assert_eq!(euler_class(&*m, &t1, &[3]).unwrap().poly.to_string(), "t^3 - 1");
        assert!(euler_class(&*m, &t1, &[0]).unwrap().is_zero());
        let e = euler_class(&*m, &GroupSpec::Torus(2), &[1, -1]).unwrap();
        assert_eq!(e.poly.to_string(), "t1*t2^-1 - 1");
    }

    #[test]
    fn additive_euler_classes() {
        let a = additive_law(Z);
        let v = value(&*a, &GroupSpec::Torus(2)).unwrap();
        let e = euler_class(&*a, &GroupSpec::Torus(2), &[2, -3]).unwrap();
        assert_eq!(v.fmt(&e.poly), "2*e1 - 3*e2");
        let f5 = additive_law(CoefficientRing::PrimeField(5));
        assert!(euler_class(&*f5, &GroupSpec::Torus(1), &[5]).unwrap().is_zero());
    }

    #[test]
    fn two_torsion_classes() {
        let l = two_torsion_additive_law();
        let g = GroupSpec::Elem2(2);
        let v = value(&*l, &g).unwrap();
        assert_eq!(v.fmt(&euler_class(&*l, &g, &[1, 1]).unwrap().poly), "e1 + e2");
        let swap = GroupHom::new(g.clone(), g.clone(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let e1 = v.element(&*l, LaurentPoly::var(l.ring(), 2, 0)).unwrap();
        assert_eq!(v.fmt(&restrict(&*l, &swap, &e1).unwrap().poly), "e2");
        assert!(euler_class(&*l, &GroupSpec::Torus(1), &[1]).is_err());
    }

    #[test]
    fn kan_values() {
        let m = multiplicative_law(Z);
        let c5 = GroupSpec::cyclic(5).unwrap();
        let v = kan_value(&*m, &c5).unwrap();
        assert_eq!(v.describe(&*m).unwrap(), "Z[t^+-1] / (t^5 - 1)");
        let t = LaurentPoly::var(Z, 1, 0);
        assert_eq!(v.normal_form(&*m, &t.pow(7), None).unwrap(), t.pow(2));
        let a = additive_law(Z);
        let c2 = GroupSpec::cyclic(2).unwrap();
        let va = kan_value(&*a, &c2).unwrap();
        assert_eq!(va.describe(&*a).unwrap(), "Z[e] / (2*e)");
        let e = LaurentPoly::var(Z, 1, 0);
        assert_eq!(va.normal_form(&*a, &e.scale(&int(3)), None).unwrap(), e);
        assert!(va.normal_form(&*a, &e.scale(&int(4)), None).unwrap().is_zero());
    }

    #[test]
    fn fgl_restriction_composition() {
        let q = CoefficientRing::Rationals;
        let f = TruncatedFGL::new(q, 4, &[(1, 1, int(3))]).unwrap().restrict_degree(2);
        let law = from_fgl(f).unwrap();
        // Pull the coordinate back along the sum map T^2 -> T.
        let x = coordinate(&*law);
        let sum = GroupHom::new(GroupSpec::Torus(2), GroupSpec::Torus(1), vec![vec![1, 1]]).unwrap();
        let s = restrict(&*law, &sum, &x).unwrap();
        let v = value(&*law, &GroupSpec::Torus(2)).unwrap();
        assert_eq!(v.fmt(&s.poly), "3*x1*x2 + x1 + x2");
    }

    #[test]
    fn base_change_examples() {
        let m = multiplicative_law(Z);
        let m2 = base_change(&m, CoefficientRing::PrimeField(2)).unwrap();
        assert_eq!(coordinate(&*m2).poly.to_string(), "t + 1");
        let m3 = base_change(&m, CoefficientRing::PrimeField(3)).unwrap();
        let e3 = euler_class(&*m3, &GroupSpec::Torus(1), &[3]).unwrap().poly;
        assert_eq!(e3, coordinate(&*m3).poly.pow(3));
        let q = base_change(&additive_law(Z), CoefficientRing::Rationals).unwrap();
        assert_eq!(q.id(), "add/Q");
        assert!(base_change(&q, Z).is_err());
    }
}
