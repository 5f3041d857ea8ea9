//! Truncated Lazard-ring bookkeeping: the universal relations among the
//! coefficients `a_ij`, the 2-torsion variant, and validity of concrete
//! truncated formal group laws.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{GglError, Result};
use crate::fgl::TruncatedFGL;
use crate::linalg::{smith, FieldEliminator, SparseVec};
use crate::poly::LaurentPoly;
use crate::ring::{coef_to_string, Coef, CoefficientRing};

/// Series in up to three formal variables with coefficients in a polynomial
/// ring, truncated at total formal degree `<= n`.
#[derive(Debug, Clone)]
struct FormalSeries {
    n: u32,
    terms: BTreeMap<[u32; 3], LaurentPoly>,
    ring: CoefficientRing,
    nvars: usize,
}

impl FormalSeries {
    fn zero(ring: CoefficientRing, nvars: usize, n: u32) -> Self {
        FormalSeries { n, terms: BTreeMap::new(), ring, nvars }
    }

    fn one(ring: CoefficientRing, nvars: usize, n: u32) -> Self {
        let mut s = Self::zero(ring, nvars, n);
        s.terms.insert([0, 0, 0], LaurentPoly::one(ring, nvars));
        s
    }

    fn var(ring: CoefficientRing, nvars: usize, n: u32, k: usize) -> Self {
        let mut s = Self::zero(ring, nvars, n);
        let mut e = [0; 3];
        e[k] = 1;
        s.terms.insert(e, LaurentPoly::one(ring, nvars));
        s
    }

    fn add_term(&mut self, e: [u32; 3], c: LaurentPoly) {
        if e.iter().sum::<u32>() > self.n || c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&e) {
            Some(old) => &old + &c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(e, v);
        }
    }

    fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        for (e, c) in &o.terms {
            s.add_term(*e, c.clone());
        }
        s
    }

    fn mul(&self, o: &Self) -> Self {
        let mut s = Self::zero(self.ring, self.nvars, self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let e = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
                if e.iter().sum::<u32>() <= self.n {
                    s.add_term(e, ca * cb);
                }
            }
        }
        s
    }

    fn scale(&self, c: &LaurentPoly) -> Self {
        let mut s = Self::zero(self.ring, self.nvars, self.n);
        for (e, v) in &self.terms {
            s.add_term(*e, v * c);
        }
        s
    }
}

/// `F(u, v) = sum c_ij u^i v^j` with coefficient polynomials `c`.
fn apply(c: &BTreeMap<(u32, u32), LaurentPoly>, u: &FormalSeries, v: &FormalSeries) -> FormalSeries {
    let n = u.n;
    let mut upow = vec![FormalSeries::one(u.ring, u.nvars, n)];
    let mut vpow = vec![FormalSeries::one(u.ring, u.nvars, n)];
    let mut out = FormalSeries::zero(u.ring, u.nvars, n);
    for ((i, j), coef) in c {
        while upow.len() <= *i as usize {
            let next = upow.last().unwrap().mul(u);
            upow.push(next);
        }
        while vpow.len() <= *j as usize {
            let next = vpow.last().unwrap().mul(v);
            vpow.push(next);
        }
        out = out.add(&upow[*i as usize].mul(&vpow[*j as usize]).scale(coef));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Plain,
    TwoTorsion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RelationSource {
    Symmetry { i: u32, j: u32 },
    Associativity { i: u32, j: u32, k: u32 },
    TwoSeries { d: u32 },
}

impl fmt::Display for RelationSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationSource::Symmetry { i, j } => write!(f, "symmetry a{i}{j}"),
            RelationSource::Associativity { i, j, k } => write!(f, "associativity x^{i} y^{j} z^{k}"),
            RelationSource::TwoSeries { d } => write!(f, "[2](x) at x^{d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub source: RelationSource,
    /// `2 (total degree - 1)`
    pub grading: u32,
    pub poly: LaurentPoly,
}

#[derive(Debug, Clone)]
pub struct RelationSystem {
    pub n: u32,
    pub mode: Mode,
    /// `a_ij`, `i, j >= 1`, in variable order
    pub unknowns: Vec<(u32, u32)>,
    pub relations: Vec<Relation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeRank {
    pub grading: u32,
    pub unknowns: usize,
    pub linear_rank: usize,
    pub indecomposables: usize,
    /// all relations of this grading lie within the truncation
    pub complete: bool,
    /// invariant factors of the integral linear parts (descriptive only)
    pub smith_invariants: Vec<String>,
}

pub fn unknown_names(unknowns: &[(u32, u32)]) -> Vec<String> {
    unknowns.iter().map(|(i, j)| format!("a{i}{j}")).collect()
}

fn unknown_list(n: u32) -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for d in 2..=n {
        for i in 1..d {
            v.push((i, d - i));
        }
    }
    v
}

fn reduce_mod2(p: &LaurentPoly) -> LaurentPoly {
    let two = BigInt::from(2);
    p.map_terms(|e, c| {
        let r = c.numer().mod_floor(&two);
        if r.is_zero() {
            None
        } else {
            Some((e.clone(), Coef::from_integer(r)))
        }
    })
}

/// The relations satisfied by the coefficients of the universal formal group
/// law truncated at degree `n` (in the variables `a_ij`, over the integers).
pub fn universal_relations(n: u32, mode: Mode) -> Result<RelationSystem> {
    if n < 2 {
        return Err(GglError::InvalidFgl("degree bound must be at least 2".into()));
    }
    let z = CoefficientRing::Integers;
    let unknowns = unknown_list(n);
    let nv = unknowns.len();
    let index: BTreeMap<(u32, u32), usize> = unknowns.iter().enumerate().map(|(k, ij)| (*ij, k)).collect();
    let mut c: BTreeMap<(u32, u32), LaurentPoly> = BTreeMap::new();
    c.insert((1, 0), LaurentPoly::one(z, nv));
    c.insert((0, 1), LaurentPoly::one(z, nv));
    for (ij, k) in &index {
        c.insert(*ij, LaurentPoly::var(z, nv, *k));
    }
    let mut relations = Vec::new();
    for &(i, j) in &unknowns {
        if i < j {
            let p = &LaurentPoly::var(z, nv, index[&(i, j)]) - &LaurentPoly::var(z, nv, index[&(j, i)]);
            relations.push(Relation { source: RelationSource::Symmetry { i, j }, grading: 2 * (i + j - 1), poly: p });
        }
    }
    let x = FormalSeries::var(z, nv, n, 0);
    let y = FormalSeries::var(z, nv, n, 1);
    let w = FormalSeries::var(z, nv, n, 2);
    let left = apply(&c, &apply(&c, &x, &y), &w);
    let right = apply(&c, &x, &apply(&c, &y, &w));
    let mut keys: Vec<[u32; 3]> = left.terms.keys().chain(right.terms.keys()).copied().collect();
    keys.sort_by_key(|e| (e.iter().sum::<u32>(), std::cmp::Reverse(*e)));
    keys.dedup();
    for e in keys {
        let l = left.terms.get(&e).cloned().unwrap_or_else(|| LaurentPoly::zero(z, nv));
        let r = right.terms.get(&e).cloned().unwrap_or_else(|| LaurentPoly::zero(z, nv));
        let p = &l - &r;
        if !p.is_zero() {
            let d = e.iter().sum::<u32>();
            relations.push(Relation {
                source: RelationSource::Associativity { i: e[0], j: e[1], k: e[2] },
                grading: 2 * (d - 1),
                poly: p,
            });
        }
    }
    if mode == Mode::TwoTorsion {
        let d2 = apply(&c, &x, &x);
        for d in 1..=n {
            let p = d2.terms.get(&[d, 0, 0]).cloned().unwrap_or_else(|| LaurentPoly::zero(z, nv));
            if !p.is_zero() {
                relations.push(Relation { source: RelationSource::TwoSeries { d }, grading: 2 * (d - 1), poly: p });
            }
        }
        // once 2 is a relation, every other coefficient is read mod 2
        for r in relations.iter_mut() {
            if r.source != (RelationSource::TwoSeries { d: 1 }) {
                r.poly = reduce_mod2(&r.poly);
            }
        }
        relations.retain(|r| !r.poly.is_zero());
    }
    relations.sort_by_key(|r| r.grading);
    Ok(RelationSystem { n, mode, unknowns, relations })
}

impl RelationSystem {
    pub fn names(&self) -> Vec<String> {
        unknown_names(&self.unknowns)
    }

    pub fn nvars(&self) -> usize {
        self.unknowns.len()
    }

    pub fn in_grading(&self, g: u32) -> impl Iterator<Item = &Relation> {
        self.relations.iter().filter(move |r| r.grading == g)
    }

    /// The field over which ranks are counted: `Q`, or `F_2` for 2-torsion.
    pub fn rank_field(&self) -> CoefficientRing {
        match self.mode {
            Mode::Plain => CoefficientRing::Rationals,
            Mode::TwoTorsion => CoefficientRing::PrimeField(2),
        }
    }

    /// Ranks of the indecomposable quotient `I / I^2` per grading `2k`.
    pub fn indecomposable_ranks(&self) -> Vec<DegreeRank> {
        let field = self.rank_field();
        let mut out = Vec::new();
        for k in 1..self.n {
            let g = 2 * k;
            let cols: Vec<usize> = self
                .unknowns
                .iter()
                .enumerate()
                .filter(|(_, (i, j))| i + j == k + 1)
                .map(|(c, _)| c)
                .collect();
            let mut elim = FieldEliminator::new(field);
            let mut int_rows: Vec<Vec<BigInt>> = Vec::new();
            for r in self.in_grading(g) {
                let mut row = SparseVec::new();
                let mut irow = vec![BigInt::zero(); cols.len()];
                for (e, c) in r.poly.terms() {
                    if e.degree() == 1 {
                        let var = e.0.iter().position(|&x| x == 1).unwrap();
                        if let Some(pos) = cols.iter().position(|&cc| cc == var) {
                            row.insert(pos, field.norm(c.clone()));
                            irow[pos] = c.numer().clone();
                        }
                    }
                }
                // rows are pushed as columns: rank is symmetric
                elim.push(row);
                int_rows.push(irow);
            }
            let rank = elim.rank();
            let s = if int_rows.is_empty() {
                Vec::new()
            } else {
                let sm = smith(&int_rows, int_rows.len(), cols.len());
                sm.d[..sm.rank].iter().map(|d| d.to_string()).collect()
            };
            out.push(DegreeRank {
                grading: g,
                unknowns: cols.len(),
                linear_rank: rank,
                indecomposables: cols.len() - rank,
                complete: k + 2 <= self.n,
                smith_invariants: s,
            });
        }
        out
    }

    /// Whether a constant nonzero integer appears among the relations.
    pub fn constant_relations(&self) -> Vec<Coef> {
        self.relations.iter().filter(|r| r.poly.is_constant() && !r.poly.is_zero()).map(|r| r.poly.constant_term()).collect()
    }

    /// Evaluates every relation at the coefficients of `f`.
    pub fn residuals(&self, f: &TruncatedFGL) -> Result<Vec<(RelationSource, Coef)>> {
        let k = f.ring();
        let mut out = Vec::new();
        for r in &self.relations {
            let mut val = Coef::zero();
            for (e, c) in r.poly.terms() {
                let mut t = k.coerce(c)?;
                for (v, &a) in e.0.iter().enumerate() {
                    let (i, j) = self.unknowns[v];
                    for _ in 0..a {
                        t = k.mul(&t, &f.coef(i, j));
                    }
                }
                val = k.add(&val, &t);
            }
            if !val.is_zero() {
                out.push((r.source.clone(), val));
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Counit,
    Commutativity,
    Associativity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// total degree in the formal variables
    pub degree: u32,
    /// `(i, j)` for coefficient violations, `(i, j, k)` exponents of
    /// nonzero associativity residual monomials
    pub at: Vec<Vec<u32>>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ViolationKind::Counit => "counit",
            ViolationKind::Commutativity => "commutativity",
            ViolationKind::Associativity => "associativity",
        };
        write!(f, "{kind} at degree {}: {}", self.degree, self.detail)
    }
}

/// Nonzero monomials of `F(F(x,y),z) - F(x,F(y,z))` through degree `n`, by
/// total degree.
fn associativity_residuals(c: &BTreeMap<(u32, u32), LaurentPoly>, k: CoefficientRing, n: u32) -> BTreeMap<u32, Vec<([u32; 3], Coef)>> {
    let x = FormalSeries::var(k, 0, n, 0);
    let y = FormalSeries::var(k, 0, n, 1);
    let z = FormalSeries::var(k, 0, n, 2);
    let left = apply(c, &apply(c, &x, &y), &z);
    let right = apply(c, &x, &apply(c, &y, &z));
    let mut by_degree: BTreeMap<u32, Vec<([u32; 3], Coef)>> = BTreeMap::new();
    let zero = LaurentPoly::zero(k, 0);
    let mut keys: Vec<[u32; 3]> = left.terms.keys().chain(right.terms.keys()).copied().collect();
    keys.sort_by_key(|e| std::cmp::Reverse(*e));
    keys.dedup();
    for e in keys {
        let d = &left.terms.get(&e).cloned().unwrap_or_else(|| zero.clone()) - right.terms.get(&e).unwrap_or(&zero);
        if !d.is_zero() {
            by_degree.entry(e.iter().sum()).or_default().push((e, d.constant_term()));
        }
    }
    by_degree
}

/// Lists the violated axioms of `f` through its truncation degree.
///
/// Counit and commutativity are read off the coefficients. Associativity is
/// tested on the law with the counit reset and each asymmetric pair replaced
/// by one of its entries, and only the lowest failing degree is reported.
pub fn validate_fgl(f: &TruncatedFGL) -> Vec<Violation> {
    let k = f.ring();
    let n = f.degree();
    let mut out = Vec::new();
    for (&(i, j), c) in f.coefficients() {
        if i == 0 || j == 0 {
            let expect = if i + j == 1 { Coef::one() } else { Coef::zero() };
            if *c != expect {
                out.push(Violation {
                    kind: ViolationKind::Counit,
                    degree: i + j,
                    at: vec![vec![i, j]],
                    detail: format!("coefficient of x^{i} y^{j} is {}, expected {}", coef_to_string(c), coef_to_string(&expect)),
                });
            }
        }
    }
    for ij in [(1u32, 0u32), (0, 1)] {
        if f.coef(ij.0, ij.1).is_zero() {
            out.push(Violation {
                kind: ViolationKind::Counit,
                degree: 1,
                at: vec![vec![ij.0, ij.1]],
                detail: format!("coefficient of x^{} y^{} is 0, expected 1", ij.0, ij.1),
            });
        }
    }
    let mut repaired: BTreeMap<(u32, u32), LaurentPoly> = BTreeMap::new();
    repaired.insert((1, 0), LaurentPoly::one(k, 0));
    repaired.insert((0, 1), LaurentPoly::one(k, 0));
    let set = |rep: &mut BTreeMap<(u32, u32), LaurentPoly>, i: u32, j: u32, a: &Coef| {
        rep.remove(&(i, j));
        rep.remove(&(j, i));
        if !a.is_zero() {
            rep.insert((i, j), LaurentPoly::constant(k, 0, a.clone()));
            rep.insert((j, i), LaurentPoly::constant(k, 0, a.clone()));
        }
    };
    for d in 2..=n {
        for i in 1..=d / 2 {
            let j = d - i;
            let a = f.coef(i, j);
            let b = f.coef(j, i);
            set(&mut repaired, i, j, &a);
            if i < j && a != b {
                out.push(Violation {
                    kind: ViolationKind::Commutativity,
                    degree: d,
                    at: vec![vec![i, j]],
                    detail: format!("a{i}{j} = {} but a{j}{i} = {}", coef_to_string(&a), coef_to_string(&b)),
                });
            }
        }
        // of the two entries of an asymmetric pair, keep one consistent with associativity
        for i in 1..=d / 2 {
            let j = d - i;
            let b = f.coef(j, i);
            if i < j && f.coef(i, j) != b {
                let first = |rep: &BTreeMap<(u32, u32), LaurentPoly>| associativity_residuals(rep, k, n).into_keys().next().unwrap_or(u32::MAX);
                let mut alt = repaired.clone();
                set(&mut alt, i, j, &b);
                if first(&alt) > first(&repaired) {
                    repaired = alt;
                }
            }
        }
    }
    // higher residuals are not meaningful past the first failing degree
    if let Some((deg, mons)) = associativity_residuals(&repaired, k, n).into_iter().next() {
        let detail = mons
            .iter()
            .map(|(e, c)| format!("{}*x^{} y^{} z^{}", coef_to_string(c), e[0], e[1], e[2]))
            .collect::<Vec<_>>()
            .join(", ");
        out.push(Violation {
            kind: ViolationKind::Associativity,
            degree: deg,
            at: mons.iter().map(|(e, _)| e.to_vec()).collect(),
            detail: format!("residual F(F(x,y),z) - F(x,F(y,z)) has {detail}"),
        });
    }
    out.sort_by_key(|v| (v.kind, v.degree));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    const Q: CoefficientRing = CoefficientRing::Rationals;

    #[test]
    fn degree_two_has_only_symmetry() {
        let s = universal_relations(2, Mode::Plain).unwrap();
        assert_eq!(s.unknowns, vec![(1, 1)]);
        assert!(s.relations.is_empty());
    }

    #[test]
    fn rational_indecomposables() {
        let s = universal_relations(6, Mode::Plain).unwrap();
        assert_eq!(s.nvars(), 15);
        let r = s.indecomposable_ranks();
        for g in [2, 4, 6] {
            let d = r.iter().find(|d| d.grading == g).unwrap();
            assert_eq!(d.indecomposables, 1, "grading {g}");
            assert!(d.complete);
        }
    }

    #[test]
    fn two_torsion_has_literal_two() {
        let s = universal_relations(4, Mode::TwoTorsion).unwrap();
        assert_eq!(s.constant_relations(), vec![int(2)]);
    }

    #[test]
    fn known_laws_are_valid() {
        assert!(validate_fgl(&TruncatedFGL::multiplicative(Q, 6)).is_empty());
        assert!(validate_fgl(&TruncatedFGL::additive(Q, 6)).is_empty());
        let s = universal_relations(5, Mode::Plain).unwrap();
        assert!(s.residuals(&TruncatedFGL::multiplicative(Q, 5)).unwrap().is_empty());
    }

    #[test]
    fn asymmetric_entry() {
        let f = TruncatedFGL::new(Q, 3, &[(1, 1, int(1)), (1, 2, int(1))]).unwrap();
        let v = validate_fgl(&f);
        assert_eq!(v[0].kind, ViolationKind::Commutativity);
        assert_eq!(v[0].at, vec![vec![1, 2]]);
    }

    #[test]
    fn quartic_perturbation() {
        let f = TruncatedFGL::new(Q, 5, &[(2, 2, int(3))]).unwrap();
        let v = validate_fgl(&f);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::Associativity);
        assert_eq!(v[0].degree, 4);
        assert_eq!(v[0].at, vec![vec![2, 1, 1], vec![1, 1, 2]]);
    }
}
