//! Flag expansions, augmentations, the completion of a global law at a group
//! (truncated equivariant formal group law data), and coordinate changes.
//!
//! `y(V)` is realized as the Euler class `e_{(V, tau)}` of the character
//! `(a, z) -> V(a) z` on `A x T`; the last ambient variable is `tau`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{GglError, Result};
use crate::fgl::TruncatedFGL;
use crate::groups::{Character, Family, GroupHom, GroupSpec};
use crate::laws::{
    coordinate, euler_class, recoordinate, reduce_rules, restrict, value, GlobalLaw, Law, LawElement, ValueKind, ValueRing,
};
use crate::poly::{LaurentPoly, Monomial, PolyJson};
use crate::ring::{Coef, CoefficientRing};
use crate::series::TruncatedSeries;

pub use crate::fgl::n_series;

/// Truncation degree used for laws whose values are not power series.
pub const DEFAULT_DEGREE: u32 = 8;
/// Default number of flag steps.
pub const DEFAULT_DEPTH: usize = 6;

#[derive(Debug, Clone)]
pub struct FlagExpansion {
    pub group: GroupSpec,
    pub flag: Vec<Character>,
    /// `a_i` in `X(A)`, the coefficient of `y(V_i) ... y(V_1)`
    pub coeffs: Vec<LawElement>,
    /// element of `X(A x T)` multiplying `y(V_n) ... y(V_1)`
    pub remainder: LawElement,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagExpansionJson {
    pub flag: Vec<Character>,
    pub coeffs: Vec<PolyJson>,
}

impl FlagExpansion {
    pub fn to_json(&self) -> FlagExpansionJson {
        FlagExpansionJson { flag: self.flag.clone(), coeffs: self.coeffs.iter().map(|c| c.poly.to_json()).collect() }
    }
}

/// `0, W_1, -W_1, W_2, -W_2, ...` cycled to `depth` entries.
pub fn default_flag(a: &GroupSpec, depth: usize) -> Vec<Character> {
    let r = a.ambient_rank();
    let mut cycle = vec![vec![0; r]];
    if a.family() == Family::Tori {
        for i in 0..r {
            let mut w = vec![0; r];
            w[i] = 1;
            cycle.push(w.clone());
            w[i] = -1;
            cycle.push(w);
        }
    } else {
        for i in 0..r {
            let mut w = vec![0; r];
            w[i] = 1;
            cycle.push(w);
        }
    }
    (0..depth).map(|i| cycle[i % cycle.len()].clone()).collect()
}

fn circle_section(a: &GroupSpec, at: &GroupSpec, v: &[i64], sign: i64) -> Result<GroupHom> {
    let r = a.ambient_rank();
    let mut m: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
    m.push(v.iter().map(|x| sign * x).collect());
    GroupHom::new(a.clone(), at.clone(), m)
}

fn circle_projection(a: &GroupSpec, at: &GroupSpec) -> Result<GroupHom> {
    let r = a.ambient_rank();
    let m = (0..r).map(|i| (0..=r).map(|j| i64::from(i == j)).collect()).collect();
    GroupHom::new(at.clone(), a.clone(), m)
}

fn restrict_smith(law: &dyn GlobalLaw, vat: &ValueRing, m: &[Vec<i64>], p: &LaurentPoly, prec: Option<u32>) -> Result<LaurentPoly> {
    let q = law.restrict_matrix(m, vat.nvars, p, prec)?;
    Ok(match &vat.quotient {
        Some(qd) => reduce_rules(&q, &qd.rules),
        None => q,
    })
}

/// Exact quotient of `x` by `y(V) = e_{(V, tau)}` in `X(A x T)`.
///
/// In Smith coordinates the automorphism `(a, z) -> (a, V(a) z)` carries
/// `e_tau` to `y(V)`; after moving `x` back along it, divisibility by `e_tau`
/// is literal on reduced representatives.
pub fn divide_by_y(law: &dyn GlobalLaw, vat: &ValueRing, x: &LawElement, v: &[i64]) -> Result<LawElement> {
    let n = vat.nvars;
    let prec = vat.effective_prec(x.prec);
    if let Some(p) = prec {
        if p <= 1 {
            // nothing of the quotient is determined at this precision
            let z = vat.zero();
            return Ok(LawElement { prec: Some(p.saturating_sub(1)), ..z });
        }
    }
    let mut chi = v.to_vec();
    chi.push(1);
    let c: Vec<i64> = match &vat.quotient {
        Some(q) => (0..n).map(|j| (0..n).map(|i| chi[i] * q.fwd[i][j]).sum()).collect(),
        None => chi,
    };
    if c[n - 1] != 1 {
        return Err(GglError::Unsupported("circle coordinate mixed by the Smith form".into()));
    }
    let auto = |sign: i64| -> Vec<Vec<i64>> {
        let mut m: Vec<Vec<i64>> = (0..n - 1).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let mut last: Vec<i64> = c[..n - 1].iter().map(|x| sign * x).collect();
        last.push(1);
        m.push(last);
        m
    };
    let s = vat.to_smith(law, &x.poly, prec)?;
    let s = match &vat.quotient {
        Some(q) => reduce_rules(&s, &q.rules),
        None => s,
    };
    let moved = restrict_smith(law, vat, &auto(-1), &s, prec)?;
    let mut tau = vec![0; n];
    tau[n - 1] = 1;
    let e_tau = law.restrict_matrix(&[tau], n, &law.coordinate_poly(), prec)?;
    let (q, qprec) = match vat.kind {
        ValueKind::Series { trunc } => {
            let p = prec.unwrap_or(trunc);
            let d = TruncatedSeries::new(moved, p)?.exact_divide(&TruncatedSeries::new(e_tau, p)?)?;
            (d.poly().clone(), Some(d.trunc()))
        }
        _ => (moved.exact_divide(&e_tau)?, None),
    };
    let back = restrict_smith(law, vat, &auto(1), &q, qprec)?;
    let amb = vat.from_smith(law, &back, qprec)?;
    vat.element_prec(law, amb, qprec)
}

/// Expands `x` in `X(A x T)` along `flag`.
pub fn flag_expand(law: &dyn GlobalLaw, a: &GroupSpec, flag: &[Character], x: &LawElement) -> Result<FlagExpansion> {
    if flag.is_empty() {
        return Err(GglError::Dimension("empty flag".into()));
    }
    let at = a.times_circle()?;
    if x.group != at {
        return Err(GglError::Dimension(format!("flag expansion at {a} needs an element of X({at})")));
    }
    for v in flag {
        a.check_character(v)?;
    }
    let vat = value(law, &at)?;
    let proj = circle_projection(a, &at)?;
    let mut cur = x.clone();
    let mut coeffs = Vec::with_capacity(flag.len());
    for v in flag {
        let sec = circle_section(a, &at, v, -1)?;
        let ai = restrict(law, &sec, &cur)?;
        let diff = vat.sub(law, &cur, &restrict(law, &proj, &ai)?)?;
        cur = divide_by_y(law, &vat, &diff, v)
            .map_err(|e| GglError::NotDivisible(format!("flag step at [{}]: {e}", crate::groups::format_char(v))))?;
        coeffs.push(ai);
    }
    Ok(FlagExpansion { group: a.clone(), flag: flag.to_vec(), coeffs, remainder: cur })
}

/// `y(V)` as an element of `X(A x T)`.
pub fn y_class(law: &dyn GlobalLaw, a: &GroupSpec, v: &[i64]) -> Result<LawElement> {
    let at = a.times_circle()?;
    let mut chi = v.to_vec();
    chi.push(1);
    euler_class(law, &at, &chi)
}

/// `sum p^*(a_i) y(V_i)...y(V_1) + rem * y(V_n)...y(V_1)`.
pub fn reassemble_flag(law: &dyn GlobalLaw, e: &FlagExpansion) -> Result<LawElement> {
    let at = e.group.times_circle()?;
    let vat = value(law, &at)?;
    let proj = circle_projection(&e.group, &at)?;
    let mut acc = e.remainder.clone();
    for (a, v) in e.coeffs.iter().zip(&e.flag).rev() {
        acc = vat.add(law, &restrict(law, &proj, a)?, &vat.mul(law, &acc, &y_class(law, &e.group, v)?)?)?;
    }
    Ok(acc)
}

fn sum_chars(a: &[i64], b: &[i64]) -> Character {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `theta(V)` applied to an expansion: `sum a_i e_{V V_i} ... e_{V V_1}`.
pub fn theta_eval(law: &dyn GlobalLaw, e: &FlagExpansion, v: &[i64]) -> Result<LawElement> {
    let va = value(law, &e.group)?;
    let mut acc = va.zero();
    let mut prod = va.one(law);
    for (a, vi) in e.coeffs.iter().zip(&e.flag) {
        acc = va.add(law, &acc, &va.mul(law, a, &prod)?)?;
        prod = va.mul(law, &prod, &euler_class(law, &e.group, &sum_chars(v, vi))?)?;
    }
    Ok(acc)
}

/// Restriction of `x in X(A x T)` along `(id_A, V)`.
pub fn augment(law: &dyn GlobalLaw, a: &GroupSpec, x: &LawElement, v: &[i64]) -> Result<LawElement> {
    let at = a.times_circle()?;
    restrict(law, &circle_section(a, &at, v, 1)?, x)
}

/// Checks `theta(V)(expansion) = (id, V)^* x` modulo `prod_i e_{V V_i}`, by
/// exact division in a torus value.
pub fn theta_check(law: &dyn GlobalLaw, e: &FlagExpansion, x: &LawElement, v: &[i64]) -> Result<bool> {
    let va = value(law, &e.group)?;
    let lhs = theta_eval(law, e, v)?;
    let rhs = augment(law, &e.group, x, v)?;
    let diff = va.sub(law, &lhs, &rhs)?;
    let mut prod = va.one(law);
    for vi in &e.flag {
        prod = va.mul(law, &prod, &euler_class(law, &e.group, &sum_chars(v, vi))?)?;
    }
    if diff.is_zero() {
        return Ok(true);
    }
    if prod.is_zero() {
        return Ok(false);
    }
    Ok(crate::euler::divide(&va, &diff, &prod).is_ok())
}

#[derive(Debug, Clone)]
pub struct CompletedFgl {
    pub group: GroupSpec,
    pub ground: String,
    pub flag: Vec<Character>,
    /// `y(epsilon)` expanded along the flag
    pub coordinate: FlagExpansion,
    /// `Delta(y(epsilon)) = sum c[i][j] b_i (x) b_j` on the flag basis
    pub coproduct: Vec<Vec<LawElement>>,
    /// `theta(V)(y(epsilon))` for the characters of the flag
    pub theta: Vec<(Character, LawElement)>,
    pub euler: Vec<(Character, LawElement)>,
}

/// The completion at `A`, computed to `depth` flag steps.
pub fn completed_fgl(law: &dyn GlobalLaw, a: &GroupSpec, depth: usize, flag: Option<&[Character]>) -> Result<CompletedFgl> {
    let flag: Vec<Character> = match flag {
        Some(f) => f.to_vec(),
        None => default_flag(a, depth),
    };
    let va = value(law, a)?;
    let at = a.times_circle()?;
    let r = a.ambient_rank();
    let y_eps = y_class(law, a, &vec![0; r])?;
    let coordinate = flag_expand(law, a, &flag, &y_eps)?;

    let att = at.times_circle()?;
    let mut chi = vec![0; r];
    chi.extend([1, 1]);
    let delta = euler_class(law, &att, &chi)?;
    let flag2: Vec<Character> = flag.iter().map(|v| v.iter().copied().chain([0]).collect()).collect();
    let outer = flag_expand(law, &at, &flag2, &delta)?;
    let mut coproduct = Vec::with_capacity(flag.len());
    for bj in &outer.coeffs {
        let inner = flag_expand(law, a, &flag, bj)?;
        coproduct.push(inner.coeffs);
    }
    // coproduct[j][i] -> c[i][j]
    let n = flag.len();
    let c: Vec<Vec<LawElement>> = (0..n).map(|i| (0..n).map(|j| coproduct[j][i].clone()).collect()).collect();

    let mut seen: Vec<Character> = Vec::new();
    for v in &flag {
        if !seen.contains(v) {
            seen.push(v.clone());
        }
    }
    let mut theta = Vec::new();
    let mut euler = Vec::new();
    for v in &seen {
        theta.push((v.clone(), theta_eval(law, &coordinate, v)?));
        euler.push((v.clone(), euler_class(law, a, v)?));
    }
    Ok(CompletedFgl { group: a.clone(), ground: va.describe(law)?, flag, coordinate, coproduct: c, theta, euler })
}

fn law_degree(law: &dyn GlobalLaw, degree: Option<u32>) -> u32 {
    match law.kind() {
        ValueKind::Series { trunc } => degree.unwrap_or(trunc - 1).min(trunc - 1),
        _ => degree.unwrap_or(DEFAULT_DEGREE),
    }
}

/// The formal group law of the completion at the trivial group.
pub fn classify(law: &dyn GlobalLaw, degree: Option<u32>) -> Result<TruncatedFGL> {
    if law.family() != Family::Tori {
        return classify_elem2(law, degree);
    }
    let n = law_degree(law, degree);
    let triv = GroupSpec::trivial();
    let flag = vec![Vec::new(); n as usize + 1];
    let c = completed_fgl(law, &triv, flag.len(), Some(&flag))?;
    let mut entries = Vec::new();
    for i in 0..=n as usize {
        for j in 0..=(n as usize - i) {
            let v = &c.coproduct[i][j];
            if i + j == 0 {
                if !v.poly.is_zero() {
                    return Err(GglError::InvalidFgl("constant term in the coproduct".into()));
                }
                continue;
            }
            entries.push((i as u32, j as u32, v.poly.constant_term()));
        }
    }
    TruncatedFGL::new(law.ring(), n, &entries)
}

/// The 2-torsion family has no circle; its group law is read off the sum
/// formula `e_{V+W} = F(e_V, e_W)` at `C2^2`.
fn classify_elem2(law: &dyn GlobalLaw, degree: Option<u32>) -> Result<TruncatedFGL> {
    let n = law_degree(law, degree);
    let g = GroupSpec::Elem2(2);
    let e11 = euler_class(law, &g, &[1, 1])?;
    let e10 = euler_class(law, &g, &[1, 0])?;
    let e01 = euler_class(law, &g, &[0, 1])?;
    let x = LaurentPoly::var(law.ring(), 2, 0);
    let y = LaurentPoly::var(law.ring(), 2, 1);
    if e10.poly != x || e01.poly != y {
        return Err(GglError::Unsupported("2-torsion law without linear basis classes".into()));
    }
    let entries: Vec<(u32, u32, Coef)> = e11
        .poly
        .terms()
        .filter(|(m, _)| m.degree() <= n as i64)
        .map(|(m, c)| (m.0[0] as u32, m.0[1] as u32, c.clone()))
        .collect();
    TruncatedFGL::new(law.ring(), n, &entries)
}

/// The image of `x in X(T)` in the completion at the trivial group, as a
/// series in `y(epsilon)`.
pub fn completion_image(law: &dyn GlobalLaw, x: &LawElement, degree: Option<u32>) -> Result<LaurentPoly> {
    let n = law_degree(law, degree);
    let triv = GroupSpec::trivial();
    let flag = vec![Vec::new(); n as usize + 1];
    let e = flag_expand(law, &triv, &flag, x)?;
    let mut p = LaurentPoly::zero(law.ring(), 1);
    for (i, c) in e.coeffs.iter().enumerate() {
        p = &p + &LaurentPoly::monomial(law.ring(), Monomial(vec![i as i64]), c.poly.constant_term());
    }
    Ok(p)
}

#[derive(Debug, Clone)]
pub struct GammaNormalForm {
    pub character: Character,
    /// `theta(V^{-1})(y(epsilon)) = e_{V^{-1}}`
    pub leading: LawElement,
    pub gamma: Vec<LawElement>,
}

/// `y(epsilon) = e_{V^{-1}} + sum_i gamma_i y(V)^{i+1}`: the expansion of
/// `y(epsilon)` along the constant flag `(V, V, ...)`.
pub fn gamma(law: &dyn GlobalLaw, a: &GroupSpec, v: &[i64], depth: usize) -> Result<GammaNormalForm> {
    let flag = vec![v.to_vec(); depth + 1];
    let y_eps = y_class(law, a, &vec![0; a.ambient_rank()])?;
    let e = flag_expand(law, a, &flag, &y_eps)?;
    let mut it = e.coeffs.into_iter();
    let leading = it.next().unwrap();
    Ok(GammaNormalForm { character: v.to_vec(), leading, gamma: it.collect() })
}

/// The law with coordinate `lambda * e`; `lambda` must augment to a unit
/// at the trivial group, and to 1 when `check_strict` is set.
pub fn change_coordinate(law: &Law, lambda: &LawElement, check_strict: bool) -> Result<Law> {
    if lambda.group != GroupSpec::Torus(1) {
        return Err(GglError::Dimension("lambda must be an element of X(T)".into()));
    }
    let aug = restrict(&**law, &GroupHom::new(GroupSpec::trivial(), GroupSpec::Torus(1), vec![vec![]])?, lambda)?;
    let c = aug.poly.constant_term();
    let k = law.ring();
    if !k.is_unit(&c) {
        return Err(GglError::NotUnit(format!("lambda augments to {c}")));
    }
    if check_strict && !c.is_one() {
        return Err(GglError::NotStrict(format!("lambda augments to {c}, not 1")));
    }
    recoordinate(law, lambda.poly.clone())
}

fn var1(k: CoefficientRing) -> LaurentPoly {
    LaurentPoly::var(k, 1, 0)
}

/// Compositional inverse of a series `x + O(x^2)`.
pub fn series_reverse(phi: &LaurentPoly, trunc: u32) -> Result<LaurentPoly> {
    let k = phi.ring();
    if !phi.constant_term().is_zero() || !phi.coefficient(&Monomial(vec![1])).is_one() {
        return Err(GglError::NotStrict("series is not x + O(x^2)".into()));
    }
    let x = var1(k);
    let mut psi = x.clone();
    for _ in 0..trunc {
        let err = (&phi.compose(&[psi.clone()], 1, Some(trunc))? - &x).truncate(trunc);
        if err.is_zero() {
            break;
        }
        psi = (&psi - &err).truncate(trunc);
    }
    Ok(psi)
}

#[derive(Debug, Clone)]
pub struct StrictIso {
    /// `phi(x) = lambda_hat(x) x`
    pub phi: LaurentPoly,
    pub phi_inverse: LaurentPoly,
    /// `F'(x, y) = phi(F(phi^{-1} x, phi^{-1} y))`
    pub target: TruncatedFGL,
    /// the double expansion of `phi(F(x, y))` in `phi(x)`, `phi(y)` agrees
    pub routes_agree: bool,
    /// `mu(x') = 1 / lambda_hat(phi^{-1}(x'))`, the inverse coordinate change
    pub inverse_lambda: LaurentPoly,
}

/// The strict isomorphism `phi(x) = lambda_hat(x) x` out of `F`.
pub fn strict_iso(f: &TruncatedFGL, lambda_hat: &LaurentPoly) -> Result<StrictIso> {
    let k = f.ring();
    let n = f.degree();
    let trunc = f.trunc();
    if lambda_hat.nvars() != 1 || !lambda_hat.is_polynomial() {
        return Err(GglError::Dimension("lambda must be a one-variable power series".into()));
    }
    if !lambda_hat.constant_term().is_one() {
        return Err(GglError::NotStrict(format!("lambda(0) = {}", lambda_hat.constant_term())));
    }
    let x = var1(k);
    let phi = lambda_hat.mul_trunc(&x, Some(trunc));
    let psi = series_reverse(&phi, trunc)?;
    let x2 = LaurentPoly::var(k, 2, 0);
    let y2 = LaurentPoly::var(k, 2, 1);
    let psix = psi.compose(&[x2.clone()], 2, Some(trunc))?;
    let psiy = psi.compose(&[y2.clone()], 2, Some(trunc))?;
    let inner = f.eval(&psix, &psiy, trunc)?;
    let conj = phi.compose(&[inner], 2, Some(trunc))?;
    let mut entries = Vec::new();
    for (m, c) in conj.terms() {
        entries.push((m.0[0] as u32, m.0[1] as u32, c.clone()));
    }
    let target = TruncatedFGL::new(k, n, &entries)?;

    // second route: peel off powers of phi(y), then of phi(x)
    let g = phi.compose(&[f.eval(&x2, &y2, trunc)?], 2, Some(trunc))?;
    let phix = phi.compose(&[x2.clone()], 2, Some(trunc))?;
    let phiy = phi.compose(&[y2.clone()], 2, Some(trunc))?;
    let zero = LaurentPoly::zero(k, 2);
    let mut cur = TruncatedSeries::new(g, trunc)?;
    let mut agree = true;
    for j in 0..=n {
        let b = TruncatedSeries::new(cur.poly().compose(&[x2.clone(), zero.clone()], 2, Some(cur.trunc()))?, cur.trunc())?;
        let mut inner = b.clone();
        for i in 0..=(n - j) {
            let c = inner.poly().constant_term();
            if i + j >= 1 && c != target.coef(i, j) {
                agree = false;
            }
            let rest = inner.sub(&TruncatedSeries::new(LaurentPoly::constant(k, 2, c), inner.trunc())?)?;
            if rest.trunc() <= 1 {
                break;
            }
            inner = rest.exact_divide(&TruncatedSeries::new(phix.clone(), rest.trunc())?)?;
        }
        let rest = cur.sub(&b)?;
        if rest.trunc() <= 1 {
            break;
        }
        cur = rest.exact_divide(&TruncatedSeries::new(phiy.clone(), rest.trunc())?)?;
    }
    let lam_at_psi = lambda_hat.compose(&[psi.clone()], 1, Some(trunc))?;
    let mu = TruncatedSeries::new(lam_at_psi, trunc)?.inverse()?.into_poly();
    Ok(StrictIso { phi, phi_inverse: psi, target, routes_agree: agree, inverse_lambda: mu })
}

/// `lambda` viewed in the completion at the trivial group.
pub fn lambda_hat(law: &dyn GlobalLaw, lambda: &LawElement, degree: Option<u32>) -> Result<LaurentPoly> {
    completion_image(law, lambda, degree)
}

/// The coordinate change by `lambda` on the level of formal group laws,
/// checked against the completion of the recoordinated law when the flag
/// divisions are exact there.
pub fn strict_iso_for_law(law: &Law, lambda: &LawElement, degree: Option<u32>) -> Result<(StrictIso, Option<bool>)> {
    let f = classify(&**law, degree)?;
    let lam = lambda_hat(&**law, lambda, Some(f.degree()))?;
    let iso = strict_iso(&f, &lam)?;
    let new_law = change_coordinate(law, lambda, true)?;
    let check = match classify(&*new_law, Some(f.degree())) {
        Ok(g) => Some(g == iso.target),
        Err(_) => None,
    };
    Ok((iso, check))
}

/// `[n]`-series of the classified law against the completion image of
/// `e_n`.
pub fn n_series_matches(law: &dyn GlobalLaw, n: i64, degree: Option<u32>) -> Result<bool> {
    let f = classify(law, degree)?;
    let e = euler_class(law, &GroupSpec::Torus(1), &[n])?;
    let img = completion_image(law, &e, Some(f.degree()))?;
    let s = n_series(&f, n)?;
    Ok(img.truncate(f.trunc()) == *s.poly())
}

pub fn coordinate_expansion(law: &dyn GlobalLaw, depth: usize) -> Result<FlagExpansion> {
    let x = coordinate(law);
    flag_expand(law, &GroupSpec::trivial(), &vec![Vec::new(); depth], &x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::{additive_law, from_fgl, multiplicative_law};
    use crate::ring::int;

    const Z: CoefficientRing = CoefficientRing::Integers;
    const Q: CoefficientRing = CoefficientRing::Rationals;

    fn strs(e: &FlagExpansion) -> Vec<String> {
        e.coeffs.iter().map(|c| c.poly.to_string()).collect()
    }

    #[test]
    fn trivial_group_expansions() {
        let m = multiplicative_law(Z);
        let t = GroupSpec::Torus(1);
        let v = value(&*m, &t).unwrap();
        let flag = vec![Vec::new(); 3];
        let x = v.element(&*m, LaurentPoly::var(Z, 1, 0)).unwrap();
        assert_eq!(strs(&flag_expand(&*m, &GroupSpec::trivial(), &flag, &x).unwrap()), ["1", "1", "0"]);
        let xi = v.element(&*m, LaurentPoly::monomial(Z, Monomial(vec![-1]), int(1))).unwrap();
        let e = flag_expand(&*m, &GroupSpec::trivial(), &flag, &xi).unwrap();
        assert_eq!(strs(&e), ["1", "-1", "1"]);
        assert_eq!(reassemble_flag(&*m, &e).unwrap(), xi);
    }

    #[test]
    fn circle_expansion() {
        let m = multiplicative_law(Z);
        let a = GroupSpec::Torus(1);
        let at = GroupSpec::Torus(2);
        let v = value(&*m, &at).unwrap();
        let st = v.element(&*m, LaurentPoly::monomial(Z, Monomial(vec![1, 1]), int(1))).unwrap();
        let e = flag_expand(&*m, &a, &[vec![0], vec![1]], &st).unwrap();
        assert_eq!(strs(&e), ["t", "t"]);
        assert!(theta_check(&*m, &e, &st, &[1]).unwrap());
        assert!(theta_check(&*m, &e, &st, &[-1]).unwrap());
    }

    #[test]
    fn classify_examples() {
        let m = classify(&*multiplicative_law(Z), Some(8)).unwrap();
        assert_eq!(m, TruncatedFGL::multiplicative(Z, 8));
        let a = classify(&*additive_law(Q), Some(5)).unwrap();
        assert_eq!(a, TruncatedFGL::additive(Q, 5));
        let f = TruncatedFGL::new(Q, 4, &[(1, 1, int(2)), (1, 2, int(-1)), (2, 1, int(-1))]).unwrap();
        let f = f.restrict_degree(2);
        assert_eq!(classify(&*from_fgl(f.clone()).unwrap(), None).unwrap(), f);
    }

    #[test]
    fn gamma_at_c2() {
        let m = multiplicative_law(Z);
        let c2 = GroupSpec::cyclic(2).unwrap();
        let g = gamma(&*m, &c2, &[1], 3).unwrap();
        assert_eq!(g.leading.poly.to_string(), "t - 1");
        let gs: Vec<String> = g.gamma.iter().map(|c| c.poly.to_string()).collect();
        assert_eq!(gs, ["t", "0", "0"]);
    }

    #[test]
    fn conjugate_coordinate() {
        let m = multiplicative_law(Z);
        let t = GroupSpec::Torus(1);
        let v = value(&*m, &t).unwrap();
        let lam = v.element(&*m, LaurentPoly::monomial(Z, Monomial(vec![-1]), int(1))).unwrap();
        let (iso, check) = strict_iso_for_law(&m, &lam, Some(8)).unwrap();
        let expect: Vec<(u32, i64)> = (1..=8).map(|k| (k, if k % 2 == 1 { 1 } else { -1 })).collect();
        for (k, c) in expect {
            assert_eq!(iso.phi.coefficient(&Monomial(vec![k as i64])), int(c));
        }
        assert!(iso.routes_agree);
        assert_eq!(check, Some(true));
        let back = strict_iso(&iso.target, &iso.inverse_lambda).unwrap();
        let id = back.phi.compose(&[iso.phi.clone()], 1, Some(9)).unwrap();
        assert_eq!(id, LaurentPoly::var(Z, 1, 0));
        assert_eq!(back.target, TruncatedFGL::multiplicative(Z, 8));
    }

    #[test]
    fn additive_recoordination() {
        let a = additive_law(Q);
        let t = GroupSpec::Torus(1);
        let v = value(&*a, &t).unwrap();
        let lam = v.element(&*a, &LaurentPoly::one(Q, 1) + &LaurentPoly::var(Q, 1, 0)).unwrap();
        let (iso, _) = strict_iso_for_law(&a, &lam, Some(6)).unwrap();
        assert_eq!(iso.phi.to_string(), "t^2 + t");
    }
}
