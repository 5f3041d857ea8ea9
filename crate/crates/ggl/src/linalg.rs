//! Exact linear algebra: Smith normal form over the integers and sparse
//! incremental elimination over fields.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::ring::{Coef, CoefficientRing};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn to_big(m: &[Vec<i64>]) -> IntMatrix {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix, inner: usize, cols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// `U * A * W = diag(d)`, with `U`, `W` unimodular and `d[i] | d[i+1]`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub d: Vec<BigInt>,
    pub rank: usize,
    pub u: IntMatrix,
    pub w: IntMatrix,
    pub w_inv: IntMatrix,
}

pub fn smith(a: &IntMatrix, rows: usize, cols: usize) -> Smith {
    let mut a = a.clone();
    let mut u = identity(rows);
    let mut w = identity(cols);
    let mut wi = identity(cols);
    let lim = rows.min(cols);
    let mut rank = 0;

    let col_add = |a: &mut IntMatrix, w: &mut IntMatrix, wi: &mut IntMatrix, dst: usize, src: usize, c: &BigInt| {
        // column dst += c * column src
        for r in a.iter_mut() {
            let v = &r[src] * c;
            r[dst] += v;
        }
        for r in w.iter_mut() {
            let v = &r[src] * c;
            r[dst] += v;
        }
        let (rs, rd) = (wi[dst].clone(), &mut wi[src]);
        for (x, y) in rd.iter_mut().zip(rs.iter()) {
            *x -= y * c;
        }
    };
    let col_swap = |a: &mut IntMatrix, w: &mut IntMatrix, wi: &mut IntMatrix, i: usize, j: usize| {
        for r in a.iter_mut() {
            r.swap(i, j);
        }
        for r in w.iter_mut() {
            r.swap(i, j);
        }
        wi.swap(i, j);
    };
    let row_add = |a: &mut IntMatrix, u: &mut IntMatrix, dst: usize, src: usize, c: &BigInt| {
        let s = a[src].clone();
        for (x, y) in a[dst].iter_mut().zip(s.iter()) {
            *x += y * c;
        }
        let s = u[src].clone();
        for (x, y) in u[dst].iter_mut().zip(s.iter()) {
            *x += y * c;
        }
    };

    for t in 0..lim {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() {
                        let better = match best {
                            None => true,
                            Some((bi, bj)) => a[i][j].abs() < a[bi][bj].abs(),
                        };
                        if better {
                            best = Some((i, j));
                        }
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            if bi != t {
                a.swap(bi, t);
                u.swap(bi, t);
            }
            if bj != t {
                col_swap(&mut a, &mut w, &mut wi, bj, t);
            }
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = -a[i][t].div_floor(&a[t][t]);
                    row_add(&mut a, &mut u, i, t, &q);
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = -a[t][j].div_floor(&a[t][t]);
                    col_add(&mut a, &mut w, &mut wi, j, t, &q);
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            let mut bad = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !a[i][j].is_multiple_of(&a[t][t]) {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad {
                Some(i) => row_add(&mut a, &mut u, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[t][t].is_zero() {
            break;
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        rank += 1;
    }
    let d = (0..lim).map(|i| a[i][i].clone()).collect();
    Smith { d, rank, u, w, w_inv: wi }
}

/// A basis of the integer kernel `{x : A x = 0}` (columns of `W` past the rank).
pub fn int_kernel(a: &IntMatrix, rows: usize, cols: usize) -> Vec<Vec<BigInt>> {
    let s = smith(a, rows, cols);
    (s.rank..cols).map(|j| (0..cols).map(|i| s.w[i][j].clone()).collect()).collect()
}

/// An integer solution of `A x = b`, if one exists.
pub fn solve_int(a: &IntMatrix, rows: usize, cols: usize, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = smith(a, rows, cols);
    let ub: Vec<BigInt> = (0..rows)
        .map(|i| (0..rows).fold(BigInt::zero(), |acc, k| acc + &s.u[i][k] * &b[k]))
        .collect();
    let mut y = vec![BigInt::zero(); cols];
    for i in 0..rows {
        if i < s.rank {
            let (q, r) = ub[i].div_rem(&s.d[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ub[i].is_zero() {
            return None;
        }
    }
    Some((0..cols).map(|i| (0..cols).fold(BigInt::zero(), |acc, k| acc + &s.w[i][k] * &y[k])).collect())
}

pub fn int_rank(a: &IntMatrix, rows: usize, cols: usize) -> usize {
    smith(a, rows, cols).rank
}

pub type SparseVec = BTreeMap<usize, Coef>;

fn axpy(k: CoefficientRing, y: &mut SparseVec, c: &Coef, x: &SparseVec) {
    for (i, v) in x {
        let add = k.mul(c, v);
        let e = y.entry(*i).or_insert_with(Coef::zero);
        *e = k.add(e, &add);
        if e.is_zero() {
            y.remove(i);
        }
    }
}

/// Incremental Gaussian elimination over a field: columns are pushed one at
/// a time; a column in the span of earlier ones yields a kernel vector.
#[derive(Debug, Clone)]
pub struct FieldEliminator {
    k: CoefficientRing,
    pivots: BTreeMap<usize, (SparseVec, SparseVec)>,
    count: usize,
}

impl FieldEliminator {
    /// `k` must be a field; pass `Q` when working over the integers.
    pub fn new(k: CoefficientRing) -> Self {
        assert!(k.is_field(), "elimination needs a field");
        FieldEliminator { k, pivots: BTreeMap::new(), count: 0 }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Pushes the next column; returns a kernel vector (indexed by column
    /// number) if the column is dependent on the previous ones.
    pub fn push(&mut self, col: SparseVec) -> Option<SparseVec> {
        let k = self.k;
        let idx = self.count;
        self.count += 1;
        let mut v: SparseVec = col.into_iter().map(|(i, c)| (i, k.norm(c))).filter(|(_, c)| !c.is_zero()).collect();
        let mut comb = SparseVec::new();
        comb.insert(idx, k.from_i64(1));
        loop {
            let Some((&r, c)) = v.iter().next() else {
                return Some(comb);
            };
            match self.pivots.get(&r) {
                Some((pv, pc)) => {
                    let f = k.neg(&k.div(c, &pv[&r]).unwrap());
                    axpy(k, &mut v, &f, pv);
                    axpy(k, &mut comb, &f, pc);
                }
                None => {
                    self.pivots.insert(r, (v, comb));
                    return None;
                }
            }
        }
    }
}

/// Rank of a list of sparse rows over a field.
pub fn field_rank(k: CoefficientRing, rows: &[SparseVec]) -> usize {
    let mut e = FieldEliminator::new(k);
    for r in rows {
        e.push(r.clone());
    }
    e.rank()
}
