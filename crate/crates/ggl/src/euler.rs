//! Euler classes, the defining exact sequences, regularity of Euler-class
//! sequences, split decompositions and the prime factors `psi_n`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{GglError, Result};
use crate::fgl::{n_series, TruncatedFGL};
use crate::groups::{char_rank, format_char, kernel_subgroup, primitive_and_split, Character, Family, GroupHom, GroupSpec};
pub use crate::laws::euler_class;
use crate::laws::{monomial_modulus, reduce_rules, restrict, value, CoordRule, GlobalLaw, LawElement, ValueKind, ValueRing};
use crate::linalg::{smith, FieldEliminator, SparseVec};
use crate::poly::{LaurentPoly, Monomial};
use crate::ring::{Coef, CoefficientRing};
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub law: String,
    pub group: String,
    pub characters: Vec<String>,
    pub verdict: Verdict,
    pub witness: Option<String>,
    pub bound: u32,
    /// regularity certified exactly (domain) rather than up to the bound
    pub certified: bool,
    pub detail: String,
    #[serde(skip)]
    pub witness_element: Option<LawElement>,
}

impl RegularityReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Monomials in a box: exponents in `[-b, b]` for Laurent rings, `[0, b]`
/// otherwise, total degree below `trunc` for series; ascending order.
pub fn box_monomials(kind: ValueKind, nvars: usize, b: u32) -> Vec<Monomial> {
    let b = b as i64;
    let (lo, trunc) = match kind {
        ValueKind::Laurent => (-b, None),
        ValueKind::Polynomial => (0, None),
        ValueKind::Series { trunc } => (0, Some(trunc as i64)),
    };
    let ranges = vec![(lo, b); nvars];
    let mut out = product_box(&ranges);
    if let Some(t) = trunc {
        out.retain(|m| m.degree() < t);
    }
    out.sort();
    out
}

fn product_box(ranges: &[(i64, i64)]) -> Vec<Monomial> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in ranges {
        let mut next = Vec::new();
        for e in &out {
            for x in lo..=hi {
                let mut e2: Vec<i64> = e.clone();
                e2.push(x);
                next.push(e2);
            }
        }
        out = next;
    }
    out.into_iter().map(Monomial).collect()
}

fn mono(k: CoefficientRing, m: &Monomial) -> LaurentPoly {
    LaurentPoly::monomial(k, m.clone(), Coef::one())
}

/// Exact quotient in a torus value; graded division with precision loss for
/// series laws.
pub fn divide(v: &ValueRing, a: &LawElement, b: &LawElement) -> Result<LawElement> {
    if v.quotient.is_some() {
        return Err(GglError::Unsupported("exact division in a quotient presentation".into()));
    }
    match v.kind {
        ValueKind::Series { trunc } => {
            let na = TruncatedSeries::new(a.poly.clone(), a.prec.unwrap_or(trunc))?;
            let nb = TruncatedSeries::new(b.poly.clone(), b.prec.unwrap_or(trunc))?;
            let q = na.exact_divide(&nb)?;
            Ok(LawElement { group: v.group.clone(), prec: Some(q.trunc()), poly: q.into_poly() })
        }
        _ => Ok(LawElement { group: v.group.clone(), poly: a.poly.exact_divide(&b.poly)?, prec: None }),
    }
}

fn regular_in_domain(law: &dyn GlobalLaw, v: &ValueRing) -> bool {
    v.quotient.is_none() && law.torus_values_are_domains()
}

fn report(law: &dyn GlobalLaw, g: &GroupSpec, chars: &[Character], bound: u32) -> RegularityReport {
    RegularityReport {
        law: law.id(),
        group: g.to_string(),
        characters: chars.iter().map(|c| format!("[{}]", format_char(c))).collect(),
        verdict: Verdict::Pass,
        witness: None,
        bound,
        certified: false,
        detail: String::new(),
        witness_element: None,
    }
}

fn fail(mut r: RegularityReport, v: &ValueRing, w: LawElement, detail: String) -> RegularityReport {
    r.verdict = Verdict::Fail;
    r.witness = Some(v.fmt(&w.poly));
    r.witness_element = Some(w);
    r.detail = detail;
    r.certified = true;
    r
}

/// Linear map on a finite set of source monomials, given in coordinates of
/// target monomials; returns spanning vectors of the kernel as polynomials.
///
/// `src_mod[i]` / target moduli: `0` means a free coordinate, `g > 0` means
/// the coordinate lives in `Z/g` (integers only).
fn kernel_of(
    k: CoefficientRing,
    nvars: usize,
    src: &[Monomial],
    src_mod: &[BigInt],
    images: &[LaurentPoly],
    tgt_mod: &dyn Fn(&Monomial) -> BigInt,
) -> Vec<LaurentPoly> {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for im in images {
        for (e, _) in im.terms() {
            let n = index.len();
            index.entry(e.clone()).or_insert(n);
        }
    }
    let torsion = src_mod.iter().any(|g| !g.is_zero()) || index.keys().any(|e| !tgt_mod(e).is_zero());
    let build = |coeffs: &[Coef]| {
        let mut p = LaurentPoly::zero(k, nvars);
        for (m, c) in src.iter().zip(coeffs) {
            if !c.is_zero() {
                p = &p + &LaurentPoly::monomial(k, m.clone(), c.clone());
            }
        }
        p
    };
    if k.is_field() || !torsion {
        let field = if k.is_field() { k } else { CoefficientRing::Rationals };
        let mut elim = FieldEliminator::new(field);
        let mut out = Vec::new();
        for im in images {
            let col: SparseVec = im.terms().map(|(e, c)| (index[e], c.clone())).collect();
            if let Some(ker) = elim.push(col) {
                let mut coeffs = vec![Coef::zero(); src.len()];
                for (i, c) in ker {
                    coeffs[i] = c;
                }
                if !k.is_field() {
                    // clear denominators
                    let l = coeffs.iter().fold(BigInt::one(), |l, c| num_integer::Integer::lcm(&l, c.denom()));
                    for c in coeffs.iter_mut() {
                        *c = c.clone() * Coef::from_integer(l.clone());
                    }
                }
                out.push(build(&coeffs));
            }
        }
        return out;
    }
    // integers with torsion: kernel of [M | diag(target moduli)], read modulo the source moduli
    let rows = index.len();
    let tgt: Vec<(usize, BigInt)> = {
        let mut v: Vec<(usize, BigInt)> = index.iter().map(|(e, &i)| (i, tgt_mod(e))).collect();
        v.sort_by_key(|(i, _)| *i);
        v.into_iter().filter(|(_, g)| !g.is_zero()).collect()
    };
    let cols = src.len() + tgt.len();
    let mut m = vec![vec![BigInt::zero(); cols]; rows];
    for (j, im) in images.iter().enumerate() {
        for (e, c) in im.terms() {
            m[index[e]][j] = c.numer().clone();
        }
    }
    for (t, (i, g)) in tgt.iter().enumerate() {
        m[*i][src.len() + t] = g.clone();
    }
    let s = smith(&m, rows, cols);
    let mut out = Vec::new();
    for j in s.rank..cols {
        let coeffs: Vec<Coef> = (0..src.len())
            .map(|i| {
                let c = s.w[i][j].clone();
                let g = &src_mod[i];
                Coef::from_integer(if g.is_zero() { c } else { num_integer::Integer::mod_floor(&c, g) })
            })
            .collect();
        let p = build(&coeffs);
        if !p.is_zero() {
            out.push(p);
        }
    }
    out
}

/// Checks `0 -> X(A) -e_V-> X(A) -> X(ker V) -> 0` on a monomial box.
pub fn check_exact_sequence(law: &dyn GlobalLaw, a: &GroupSpec, v: &[i64], bound: u32) -> Result<RegularityReport> {
    a.check_character(v)?;
    let vv: Vec<i64> = match a.family() {
        Family::Elem2 => v.iter().map(|x| x.rem_euclid(2)).collect(),
        Family::Tori => v.to_vec(),
    };
    if vv.iter().all(|&x| x == 0) {
        return Err(GglError::ZeroCharacter);
    }
    if matches!(a, GroupSpec::Quotient { .. }) {
        return Err(GglError::Unsupported("exact sequences are checked at tori and elementary abelian 2-groups".into()));
    }
    let va = value(law, a)?;
    let k = law.ring();
    let r = a.ambient_rank();
    let mut rep = report(law, a, &[vv.clone()], bound);
    let ev = euler_class(law, a, &vv)?;

    // (i) e_V is a nonzerodivisor
    if ev.is_zero() {
        let w = match a.family() {
            Family::Tori => primitive_and_split(&vv)?.1,
            Family::Elem2 => vv.clone(),
        };
        let witness = euler_class(law, a, &w)?;
        return Ok(fail(rep, &va, witness, "the Euler class vanishes, so multiplication by it kills everything".into()));
    }

    // (ii) kernel of restriction to ker V is generated by e_V
    let ks = kernel_subgroup(a, &vv)?;
    let (rest, target): (GroupHom, GroupSpec) = match &ks.splitting {
        Some(sp) => (sp.embedding.clone(), sp.kernel.clone()),
        None => {
            let q = ks.presentation.clone();
            (GroupHom::new(q.clone(), a.clone(), (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect())?, q)
        }
    };
    let vt = value(law, &target)?;
    let src = box_monomials(va.kind, r, bound);
    let mut images = Vec::with_capacity(src.len());
    for m in &src {
        let x = va.element(law, mono(k, m))?;
        let y = restrict(law, &rest, &x)?;
        images.push(vt.to_smith(law, &y.poly, y.prec)?);
    }
    let rules: Vec<CoordRule> = vt.quotient.as_ref().map(|q| q.rules.clone()).unwrap_or_default();
    let tmod = |e: &Monomial| {
        if rules.is_empty() {
            BigInt::zero()
        } else {
            monomial_modulus(e, &rules).unwrap_or_else(BigInt::zero)
        }
    };
    let zero_mod = vec![BigInt::zero(); src.len()];
    let torsion_target = rules.iter().any(|r| matches!(r, CoordRule::Torsion(_)));
    // Over Z with e_V primitive, divisibility over Q implies divisibility over Z.
    let over_q = !k.is_field() && !torsion_target && ev.poly.content().is_one();
    let q = CoefficientRing::Rationals;
    let (kk, imgs, evk) = if over_q {
        (q, images.iter().map(|p| p.change_ring(q)).collect::<Result<Vec<_>>>()?, ev.poly.change_ring(q)?)
    } else {
        (k, images, ev.poly.clone())
    };
    for p in kernel_of(kk, r, &src, &zero_mod, &imgs, &tmod) {
        let ok = match va.kind {
            ValueKind::Series { trunc } => TruncatedSeries::new(p.clone(), trunc)?
                .exact_divide(&TruncatedSeries::new(evk.clone(), trunc)?)
                .is_ok(),
            _ => p.exact_divide(&evk).is_ok(),
        };
        if !ok {
            let p = if over_q { clear_denominators(&p) } else { p };
            let x = LawElement { group: a.clone(), poly: p, prec: va.trunc() };
            return Ok(fail(rep, &va, x, "restricts to zero on the kernel but is not divisible by the Euler class".into()));
        }
    }

    // (iii) surjectivity through the splitting
    if let Some(sp) = &ks.splitting {
        let vk = value(law, &sp.kernel)?;
        for m in box_monomials(vk.kind, sp.kernel.ambient_rank(), bound) {
            let y = vk.element(law, mono(k, &m))?;
            let back = restrict(law, &sp.embedding, &restrict(law, &sp.projection, &y)?)?;
            if !vk.equal(law, &back, &y)? {
                let w = restrict(law, &sp.projection, &y)?;
                return Ok(fail(rep, &va, w, "the splitting does not restrict back to the identity".into()));
            }
        }
    }
    rep.certified = regular_in_domain(law, &va);
    rep.detail = if ks.splitting.is_some() {
        "e_V regular; kernel generated by e_V on the box; restriction split surjective".into()
    } else {
        "e_V regular; kernel generated by e_V on the box; target is a quotient presentation".into()
    };
    Ok(rep)
}

fn clear_denominators(p: &LaurentPoly) -> LaurentPoly {
    let l = p.terms().fold(BigInt::one(), |l, (_, c)| num_integer::Integer::lcm(&l, c.denom()));
    let z = CoefficientRing::Integers;
    let mut out = LaurentPoly::zero(z, p.nvars());
    for (e, c) in p.terms() {
        out = &out + &LaurentPoly::monomial(z, e.clone(), c * Coef::from_integer(l.clone()));
    }
    out
}

/// Monomials of a quotient in Smith coordinates, reduced, up to `b`.
fn quotient_box(v: &ValueRing, b: u32) -> Vec<Monomial> {
    let b = b as i64;
    let rules: Vec<CoordRule> = v.quotient.as_ref().map(|q| q.rules.clone()).unwrap_or_else(|| vec![CoordRule::Free; v.nvars]);
    let lo = if v.kind == ValueKind::Laurent { -b } else { 0 };
    let ranges: Vec<(i64, i64)> = rules
        .iter()
        .map(|r| match r {
            CoordRule::ExpMod(d) => (0, d - 1),
            CoordRule::Kill(m) => (0, (*m as i64 - 1).min(b)),
            _ => (lo, b),
        })
        .collect();
    let mut out = product_box(&ranges);
    if let Some(t) = v.trunc() {
        out.retain(|m| m.degree() < t as i64);
    }
    out.retain(|m| monomial_modulus(m, &rules).is_some());
    out.sort();
    out
}

/// Checks that `(e_{V_1}, ..., e_{V_l})` is a regular sequence in `X(A)`.
pub fn check_k_regular(law: &dyn GlobalLaw, a: &GroupSpec, chars: &[Character], bound: u32) -> Result<RegularityReport> {
    if law.family() != Family::Tori || !a.is_torus() {
        return Err(GglError::Unsupported("regular sequences are checked at tori".into()));
    }
    for v in chars {
        a.check_character(v)?;
    }
    if char_rank(chars) != chars.len() {
        return Err(GglError::DependentTuple);
    }
    let r = a.ambient_rank();
    let k = law.ring();
    let mut rep = report(law, a, chars, bound);
    let mut certified = true;
    for l in 0..chars.len() {
        let q = GroupSpec::quotient(r, chars[..l].to_vec())?;
        let vq = value(law, &q)?;
        let amb = value(law, a)?;
        let e = euler_class(law, a, &chars[l])?;
        let es = vq.to_smith(law, &e.poly, e.prec)?;
        let rules: Vec<CoordRule> = vq.quotient.as_ref().map(|q| q.rules.clone()).unwrap_or_default();
        let reduce = |p: &LaurentPoly| if rules.is_empty() { p.clone() } else { reduce_rules(p, &rules) };
        let es = reduce(&es);
        let to_witness = |p: &LaurentPoly| -> Result<LawElement> {
            let back = vq.from_smith(law, p, vq.trunc())?;
            Ok(LawElement { group: a.clone(), poly: amb.normal_form(law, &back, None)?, prec: vq.trunc() })
        };
        if es.is_zero() {
            // everything is annihilated; prefer the Euler class of the primitive part
            let prim = euler_class(law, a, &primitive_and_split(&chars[l])?.1)?;
            let ps = reduce(&vq.to_smith(law, &prim.poly, prim.prec)?);
            let w = to_witness(&if ps.is_zero() { LaurentPoly::one(k, r) } else { ps })?;
            return Ok(fail(rep, &amb, w, format!("e_{} vanishes modulo the earlier Euler classes", l + 1)));
        }
        if l == 0 && regular_in_domain(law, &amb) {
            continue;
        }
        certified = false;
        let trunc = vq.trunc();
        let src = quotient_box(&vq, bound);
        // monomial annihilators first
        let mut images = Vec::with_capacity(src.len());
        for m in &src {
            let prod = reduce(&mono(k, m).mul_trunc(&es, trunc));
            if prod.is_zero() {
                let w = to_witness(&mono(k, m))?;
                return Ok(fail(rep, &amb, w, format!("annihilates e_{} modulo the earlier Euler classes", l + 1)));
            }
            images.push(prod);
        }
        let src_mod: Vec<BigInt> = src.iter().map(|m| monomial_modulus(m, &rules).unwrap_or_else(BigInt::zero)).collect();
        let tmod = |e: &Monomial| monomial_modulus(e, &rules).unwrap_or_else(BigInt::zero);
        let ker = kernel_of(k, r, &src, &src_mod, &images, &tmod);
        if let Some(p) = ker.into_iter().map(|p| reduce(&p)).find(|p| !p.is_zero()) {
            let w = to_witness(&p)?;
            return Ok(fail(rep, &amb, w, format!("annihilates e_{} modulo the earlier Euler classes", l + 1)));
        }
    }
    rep.certified = certified;
    rep.detail = if certified {
        "regular: value ring is a domain".into()
    } else {
        format!("pass up to bound {bound}")
    };
    Ok(rep)
}

#[derive(Debug, Clone)]
pub struct SplitDecomposition {
    pub kernel: GroupSpec,
    pub coeffs: Vec<LawElement>,
    pub remainder: LawElement,
}

/// `x = sum p^*(x_i) e_V^i + rem * e_V^n`, with `p` the projection onto
/// `ker V` of the splitting and `x_i` in `X(ker V)`.
pub fn split_decompose(law: &dyn GlobalLaw, a: &GroupSpec, v: &[i64], x: &LawElement, n: usize) -> Result<SplitDecomposition> {
    let ks = kernel_subgroup(a, v)?;
    let sp = ks.splitting.ok_or_else(|| GglError::Unsupported(format!("[{}] is not split", format_char(v))))?;
    let va = value(law, a)?;
    let ev = euler_class(law, a, v)?;
    let mut cur = x.clone();
    let mut coeffs = Vec::with_capacity(n);
    for _ in 0..n {
        let x0 = restrict(law, &sp.embedding, &cur)?;
        let lifted = restrict(law, &sp.projection, &x0)?;
        let diff = va.sub(law, &cur, &lifted)?;
        cur = divide(&va, &diff, &ev)
            .map_err(|_| GglError::NotDivisible(format!("x - p^*i^*x is not divisible by e_V at {a}")))?;
        coeffs.push(x0);
    }
    Ok(SplitDecomposition { kernel: sp.kernel.clone(), coeffs, remainder: cur })
}

/// Reassembles a split decomposition.
pub fn reassemble(law: &dyn GlobalLaw, a: &GroupSpec, v: &[i64], d: &SplitDecomposition) -> Result<LawElement> {
    let sp = kernel_subgroup(a, v)?.splitting.ok_or(GglError::DependentTuple)?;
    let va = value(law, a)?;
    let ev = euler_class(law, a, v)?;
    let mut acc = va.mul(law, &d.remainder, &va.one(law))?;
    for c in d.coeffs.iter().rev() {
        acc = va.add(law, &va.mul(law, &acc, &ev)?, &restrict(law, &sp.projection, c)?)?;
    }
    Ok(acc)
}

/// `psi_n` with `e_n = prod_{m | n} psi_m` in `X(T)`.
pub fn psi(law: &dyn GlobalLaw, n: u64) -> Result<LawElement> {
    Ok(psi_table(law, n)?.remove(&n).unwrap())
}

/// All `psi_m` for `m | n`.
pub fn psi_table(law: &dyn GlobalLaw, n: u64) -> Result<BTreeMap<u64, LawElement>> {
    if n == 0 {
        return Err(GglError::ZeroCharacter);
    }
    if law.family() != Family::Tori {
        return Err(GglError::FamilyMismatch("psi is defined for laws on tori".into()));
    }
    if !law.torus_values_are_domains() {
        return Err(GglError::Unsupported("psi needs a domain X(T)".into()));
    }
    let t = GroupSpec::Torus(1);
    let v = value(law, &t)?;
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let mut table: BTreeMap<u64, LawElement> = BTreeMap::new();
    for &m in &divisors {
        let e = euler_class(law, &t, &[m as i64])?;
        let mut prod = v.one(law);
        for (&d, p) in &table {
            if m % d == 0 {
                prod = v.mul(law, &prod, p)?;
            }
        }
        let q = divide(&v, &e, &prod).map_err(|_| {
            GglError::NotDivisible(format!("e_{m} is not divisible by the product of psi_d over proper divisors d of {m}"))
        })?;
        table.insert(m, q);
    }
    table.retain(|d, _| n % d == 0);
    Ok(table)
}

pub fn check_euler_product(law: &dyn GlobalLaw, n: u64) -> Result<bool> {
    let t = GroupSpec::Torus(1);
    let v = value(law, &t)?;
    let table = psi_table(law, n)?;
    let mut prod = v.one(law);
    for p in table.values() {
        prod = v.mul(law, &prod, p)?;
    }
    let e = euler_class(law, &t, &[n as i64])?;
    v.equal(law, &prod, &e)
}

/// The coefficient `x'` in `e_{V+W} = e_V + e_W + x' e_V e_W` for the two
/// basis characters of the rank-two group of the law's family.
pub fn sum_coefficient(law: &dyn GlobalLaw) -> Result<LawElement> {
    let g = match law.family() {
        Family::Tori => GroupSpec::Torus(2),
        Family::Elem2 => GroupSpec::Elem2(2),
    };
    let v = value(law, &g)?;
    let e10 = euler_class(law, &g, &[1, 0])?;
    let e01 = euler_class(law, &g, &[0, 1])?;
    let e11 = euler_class(law, &g, &[1, 1])?;
    let diff = v.sub(law, &v.sub(law, &e11, &e10)?, &e01)?;
    divide(&v, &diff, &v.mul(law, &e10, &e01)?)
}

/// The diagonal restriction of `e_{1,0} + e_{0,1}`, which is `2e`.
pub fn diagonal_double(law: &dyn GlobalLaw) -> Result<LawElement> {
    let (g, c) = match law.family() {
        Family::Tori => (GroupSpec::Torus(2), GroupSpec::Torus(1)),
        Family::Elem2 => (GroupSpec::Elem2(2), GroupSpec::Elem2(1)),
    };
    let v = value(law, &g)?;
    let s = v.add(law, &euler_class(law, &g, &[1, 0])?, &euler_class(law, &g, &[0, 1])?)?;
    let diag = GroupHom::new(c, g, vec![vec![1], vec![1]])?;
    restrict(law, &diag, &s)
}

/// The leading-term mechanism behind (p,2)-regularity: for the primitive
/// multiplicities `n_i` of `V_1, V_2`, `[n_i]_F(x)` has linear coefficient
/// `n_i`, a unit.
pub fn p2_leading_term_check(f: &TruncatedFGL, v1: &[i64], v2: &[i64]) -> Result<bool> {
    if v1.len() != v2.len() {
        return Err(GglError::Dimension("characters of different rank".into()));
    }
    if char_rank(&[v1.to_vec(), v2.to_vec()]) != 2 {
        return Err(GglError::DependentTuple);
    }
    let k = f.ring();
    for v in [v1, v2] {
        let (n, _) = primitive_and_split(v)?;
        let c = k.from_i64(n);
        if !k.is_unit(&c) {
            return Err(GglError::NotUnit(format!("multiplicity {n} in {k}")));
        }
        let s = n_series(f, n)?;
        if s.coefficient(&[1]) != c || s.coefficient(&[0]) != Coef::zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
