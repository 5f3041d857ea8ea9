//! Abelian compact Lie groups presented by character lattices.
//!
//! Conventions: a character is a row vector, one entry per generator of the
//! character lattice. A homomorphism `alpha: B -> A` is stored as the integer
//! matrix `M` with one row per generator of `A^*` and one column per
//! generator of `B^*`, so `alpha^*(V) = V * M`.
//!
//! Finite and mixed groups are presented as `Quotient { ambient, kernel }`,
//! meaning the closed subgroup of `T^ambient` cut out by the kernel
//! characters. Elementary abelian 2-groups are their own family, with
//! characters over `F_2`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{GglError, Result};
use crate::linalg::{smith, solve_int, to_big};

pub type Character = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupSpec {
    Torus(usize),
    Elem2(usize),
    Quotient { ambient: usize, kernel: Vec<Character> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Tori,
    Elem2,
}

impl GroupSpec {
    pub fn trivial() -> Self {
        GroupSpec::Torus(0)
    }

    /// `T^ambient` cut down by `kernel`; zero characters are dropped and an
    /// empty list gives the torus itself.
    pub fn quotient(ambient: usize, kernel: Vec<Character>) -> Result<Self> {
        for v in &kernel {
            if v.len() != ambient {
                return Err(GglError::Dimension(format!(
                    "kernel character of length {} on T^{ambient}",
                    v.len()
                )));
            }
        }
        let kernel: Vec<Character> = kernel.into_iter().filter(|v| v.iter().any(|&x| x != 0)).collect();
        if kernel.is_empty() {
            Ok(GroupSpec::Torus(ambient))
        } else {
            Ok(GroupSpec::Quotient { ambient, kernel })
        }
    }

    /// The cyclic group `C_n` presented as `T / [n]`.
    pub fn cyclic(n: i64) -> Result<Self> {
        Self::quotient(1, vec![vec![n]])
    }

    pub fn family(&self) -> Family {
        match self {
            GroupSpec::Elem2(_) => Family::Elem2,
            _ => Family::Tori,
        }
    }

    /// Rank of the character lattice of the ambient torus (or of the
    /// `F_2`-vector space for `Elem2`).
    pub fn ambient_rank(&self) -> usize {
        match self {
            GroupSpec::Torus(r) | GroupSpec::Elem2(r) => *r,
            GroupSpec::Quotient { ambient, .. } => *ambient,
        }
    }

    pub fn kernel_chars(&self) -> &[Character] {
        match self {
            GroupSpec::Quotient { kernel, .. } => kernel,
            _ => &[],
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self, GroupSpec::Torus(_))
    }

    /// `self x T`, with the circle as the last generator.
    pub fn times_circle(&self) -> Result<Self> {
        match self {
            GroupSpec::Torus(r) => Ok(GroupSpec::Torus(r + 1)),
            GroupSpec::Quotient { ambient, kernel } => Ok(GroupSpec::Quotient {
                ambient: ambient + 1,
                kernel: kernel.iter().map(|v| v.iter().copied().chain([0]).collect()).collect(),
            }),
            GroupSpec::Elem2(_) => Err(GglError::FamilyMismatch("C2^r x T leaves the 2-torsion family".into())),
        }
    }

    pub fn check_character(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.ambient_rank() {
            return Err(GglError::Dimension(format!(
                "character of length {} on {} (rank {})",
                v.len(),
                self,
                self.ambient_rank()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Torus(0) => write!(f, "1"),
            GroupSpec::Torus(r) => write!(f, "T^{r}"),
            GroupSpec::Elem2(r) => write!(f, "C2^{r}"),
            GroupSpec::Quotient { ambient, kernel } => {
                write!(f, "T^{ambient} / [{}]", format_chars(kernel))
            }
        }
    }
}

pub fn format_char(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn format_chars(vs: &[Character]) -> String {
    vs.iter().map(|v| format_char(v)).collect::<Vec<_>>().join("; ")
}

pub fn parse_char(s: &str) -> Result<Character> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| GglError::Parse(format!("bad character entry `{x}`"))))
        .collect()
}

pub fn parse_chars(s: &str) -> Result<Vec<Character>> {
    s.split(';').filter(|x| !x.trim().is_empty()).map(parse_char).collect()
}

impl FromStr for GroupSpec {
    type Err = GglError;

    /// Accepted forms: `1`, `T`, `T^r`, `C2^r`, `C<n>`, `T^r / [V1; V2; ...]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || GglError::Parse(format!("unknown group `{s}`"));
        if s == "1" {
            return Ok(GroupSpec::trivial());
        }
        if let Some((amb, ker)) = s.split_once('/') {
            let amb: GroupSpec = amb.parse()?;
            let GroupSpec::Torus(r) = amb else { return Err(bad()) };
            let ker = ker.trim();
            let inner = ker.strip_prefix('[').and_then(|k| k.strip_suffix(']')).ok_or_else(bad)?;
            return GroupSpec::quotient(r, parse_chars(inner)?);
        }
        if s == "T" {
            return Ok(GroupSpec::Torus(1));
        }
        if let Some(r) = s.strip_prefix("T^") {
            return r.trim().parse().map(GroupSpec::Torus).map_err(|_| bad());
        }
        if let Some(r) = s.strip_prefix("C2^") {
            return r.trim().parse().map(GroupSpec::Elem2).map_err(|_| bad());
        }
        if let Some(n) = s.strip_prefix('C') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            if n < 1 {
                return Err(bad());
            }
            return GroupSpec::cyclic(n);
        }
        Err(bad())
    }
}

/// A homomorphism `source -> target` given by its character matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    pub source: GroupSpec,
    pub target: GroupSpec,
    pub matrix: Vec<Vec<i64>>,
}

impl GroupHom {
    pub fn new(source: GroupSpec, target: GroupSpec, matrix: Vec<Vec<i64>>) -> Result<Self> {
        if source.family() != target.family() {
            return Err(GglError::FamilyMismatch(format!("{source} -> {target}")));
        }
        let (rows, cols) = (target.ambient_rank(), source.ambient_rank());
        if matrix.len() != rows || matrix.iter().any(|r| r.len() != cols) {
            return Err(GglError::Dimension(format!("expected a {rows}x{cols} matrix for {source} -> {target}")));
        }
        let matrix = if target.family() == Family::Elem2 {
            matrix.into_iter().map(|r| r.into_iter().map(|x| x.rem_euclid(2)).collect()).collect()
        } else {
            matrix
        };
        let h = GroupHom { source, target, matrix };
        h.check_descends()?;
        Ok(h)
    }

    pub fn identity(g: GroupSpec) -> Self {
        let r = g.ambient_rank();
        let m = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
        GroupHom { source: g.clone(), target: g, matrix: m }
    }

    /// A character `V` of `source`, seen as a homomorphism `source -> T`.
    pub fn from_character(source: GroupSpec, v: &[i64]) -> Result<Self> {
        source.check_character(v)?;
        let target = match source.family() {
            Family::Tori => GroupSpec::Torus(1),
            Family::Elem2 => GroupSpec::Elem2(1),
        };
        GroupHom::new(source, target, vec![v.to_vec()])
    }

    fn check_descends(&self) -> Result<()> {
        for k in self.target.kernel_chars() {
            let pulled = pullback_raw(k, &self.matrix, self.source.ambient_rank());
            if !in_lattice(&pulled, self.source.kernel_chars()) {
                return Err(GglError::NoDescent(format!(
                    "kernel character [{}] of {} pulls back to [{}], outside the kernel lattice of {}",
                    format_char(k),
                    self.target,
                    format_char(&pulled),
                    self.source
                )));
            }
        }
        Ok(())
    }

    /// `self o other` (first `other`, then `self`).
    pub fn compose(&self, other: &GroupHom) -> Result<GroupHom> {
        if other.target != self.source {
            return Err(GglError::Dimension(format!("cannot compose {} -> {} after {} -> {}", self.source, self.target, other.source, other.target)));
        }
        let inner = other.source.ambient_rank();
        let mid = self.source.ambient_rank();
        let m = self
            .matrix
            .iter()
            .map(|row| (0..inner).map(|j| (0..mid).map(|k| row[k] * other.matrix[k][j]).sum()).collect())
            .collect();
        GroupHom::new(other.source.clone(), self.target.clone(), m)
    }
}

fn pullback_raw(v: &[i64], m: &[Vec<i64>], cols: usize) -> Character {
    (0..cols).map(|j| v.iter().zip(m).map(|(a, row)| a * row[j]).sum()).collect()
}

/// Whether `v` lies in the integer span of `basis`.
pub fn in_lattice(v: &[i64], basis: &[Character]) -> bool {
    if v.iter().all(|&x| x == 0) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let n = v.len();
    let k = basis.len();
    // Solve B^T y = v.
    let bt: Vec<Vec<i64>> = (0..n).map(|i| (0..k).map(|j| basis[j][i]).collect()).collect();
    let rhs: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    solve_int(&to_big(&bt), n, k, &rhs).is_some()
}

pub fn char_pullback(v: &[i64], alpha: &GroupHom) -> Result<Character> {
    alpha.target.check_character(v)?;
    let out = pullback_raw(v, &alpha.matrix, alpha.source.ambient_rank());
    Ok(match alpha.source.family() {
        Family::Elem2 => out.into_iter().map(|x| x.rem_euclid(2)).collect(),
        Family::Tori => out,
    })
}

/// `V = d * W` with `d` the gcd of the entries and `W` primitive.
pub fn primitive_and_split(v: &[i64]) -> Result<(i64, Character)> {
    let d = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if d == 0 {
        return Err(GglError::ZeroCharacter);
    }
    Ok((d, v.iter().map(|x| x / d).collect()))
}

pub fn is_split(v: &[i64]) -> bool {
    matches!(primitive_and_split(v), Ok((1, _)))
}

/// An explicit identification `A = ker(V) x T` for a split character `V`.
#[derive(Debug, Clone)]
pub struct Splitting {
    pub kernel: GroupSpec,
    /// `ker(V) -> A`
    pub embedding: GroupHom,
    /// `A -> ker(V)`, a retraction of the embedding with kernel the section's image
    pub projection: GroupHom,
    /// `T -> A` with `V o section = id` (or `C2 -> A` in the 2-torsion family)
    pub section: GroupHom,
}

#[derive(Debug, Clone)]
pub struct KernelSubgroup {
    pub presentation: GroupSpec,
    pub splitting: Option<Splitting>,
}

/// Unimodular `P` with last row `V`, together with `P^{-1}` (integers).
pub fn unimodular_completion(v: &[i64]) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    let (d, _) = primitive_and_split(v)?;
    if d != 1 {
        return Err(GglError::Unsupported(format!("[{}] is not split", format_char(v))));
    }
    let r = v.len();
    let s = smith(&to_big(&[v.to_vec()]), 1, r);
    let u = s.u[0][0].clone();
    let conv = |x: &BigInt| x.to_i64().expect("entry overflow");
    let mut p = Vec::with_capacity(r);
    for k in 1..r {
        p.push(s.w_inv[k].iter().map(conv).collect::<Vec<_>>());
    }
    p.push(s.w_inv[0].iter().map(|x| conv(&(x * &u))).collect());
    let mut pinv = vec![vec![0i64; r]; r];
    for i in 0..r {
        for k in 0..r - 1 {
            pinv[i][k] = conv(&s.w[i][k + 1]);
        }
        pinv[i][r - 1] = conv(&(&s.w[i][0] * &u));
    }
    debug_assert_eq!(p[r - 1], v.to_vec());
    Ok((p, pinv))
}

fn splitting_from(
    a: &GroupSpec,
    kernel: GroupSpec,
    circle: GroupSpec,
    p: &[Vec<i64>],
    pinv: &[Vec<i64>],
) -> Result<Splitting> {
    let r = a.ambient_rank();
    let emb: Vec<Vec<i64>> = (0..r).map(|i| pinv[i][..r - 1].to_vec()).collect();
    let proj: Vec<Vec<i64>> = p[..r - 1].to_vec();
    let sec: Vec<Vec<i64>> = (0..r).map(|i| vec![pinv[i][r - 1]]).collect();
    Ok(Splitting {
        embedding: GroupHom::new(kernel.clone(), a.clone(), emb)?,
        projection: GroupHom::new(a.clone(), kernel.clone(), proj)?,
        section: GroupHom::new(circle, a.clone(), sec)?,
        kernel,
    })
}

pub fn kernel_subgroup(a: &GroupSpec, v: &[i64]) -> Result<KernelSubgroup> {
    a.check_character(v)?;
    match a {
        GroupSpec::Torus(r) => {
            let (d, _) = primitive_and_split(v)?;
            let presentation = GroupSpec::quotient(*r, vec![v.to_vec()])?;
            let splitting = if d == 1 {
                let (p, pinv) = unimodular_completion(v)?;
                Some(splitting_from(a, GroupSpec::Torus(r - 1), GroupSpec::Torus(1), &p, &pinv)?)
            } else {
                None
            };
            Ok(KernelSubgroup { presentation, splitting })
        }
        GroupSpec::Elem2(r) => {
            let v2: Vec<i64> = v.iter().map(|x| x.rem_euclid(2)).collect();
            let j = v2.iter().position(|&x| x == 1).ok_or(GglError::ZeroCharacter)?;
            let mut p: Vec<Vec<i64>> = (0..*r)
                .filter(|&i| i != j)
                .map(|i| (0..*r).map(|k| i64::from(k == i)).collect())
                .collect();
            p.push(v2);
            let pinv = f2_inverse(&p).expect("completion is invertible");
            let splitting = splitting_from(a, GroupSpec::Elem2(r - 1), GroupSpec::Elem2(1), &p, &pinv)?;
            Ok(KernelSubgroup { presentation: a.clone(), splitting: Some(splitting) })
        }
        GroupSpec::Quotient { .. } => Err(GglError::Unsupported("kernel of a character on a quotient presentation".into())),
    }
}

pub fn f2_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    let mut a: Vec<Vec<u8>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<u8> = r.iter().map(|x| x.rem_euclid(2) as u8).collect();
            row.extend((0..n).map(|j| u8::from(i == j)));
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| a[r][c] == 1)?;
        a.swap(c, piv);
        for r in 0..n {
            if r != c && a[r][c] == 1 {
                let src = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(src) {
                    *x ^= y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].iter().map(|&x| i64::from(x)).collect()).collect())
}

/// Rank of a list of characters over the rationals.
pub fn char_rank(chars: &[Character]) -> usize {
    if chars.is_empty() {
        return 0;
    }
    let n = chars[0].len();
    crate::linalg::int_rank(&to_big(chars), chars.len(), n)
}
