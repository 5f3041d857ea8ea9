#![allow(dead_code)]

use ggl::completion::strict_iso;
use ggl::fgl::TruncatedFGL;
use ggl::poly::LaurentPoly;
use ggl::ring::{Coef, CoefficientRing};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const Z: CoefficientRing = CoefficientRing::Integers;
pub const Q: CoefficientRing = CoefficientRing::Rationals;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

fn long_divide(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1);
    let mut q = vec![0i128; num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    assert!(rem.iter().all(|&r| r == 0), "inexact division");
    q
}

/// `Phi_n` by dividing `t^n - 1` by `Phi_d` for the proper divisors `d`.
pub fn cyclotomic(n: usize) -> Vec<i128> {
    let mut num = vec![0i128; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = long_divide(&num, &cyclotomic(d));
        }
    }
    num
}

/// Dense integer coefficients of a univariate polynomial (no negative exponents).
pub fn dense_int(p: &LaurentPoly) -> Vec<i128> {
    let deg = p.max_degree().unwrap_or(0).max(0) as usize;
    let mut out = vec![0i128; deg + 1];
    for (m, c) in p.terms() {
        assert!(c.is_integer());
        out[m.0[0] as usize] = c.numer().to_i128().unwrap();
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

/// `[n]_F(x)` mod `x^{N+1}` by dense iteration of `s -> F(x, s)`.
pub fn n_series_dense(f: &TruncatedFGL, n: u32) -> Vec<Coef> {
    let top = f.degree() as usize;
    let mul = |a: &[Coef], b: &[Coef]| {
        let mut out = vec![Coef::zero(); top + 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j <= top {
                    out[i + j] += x * y;
                }
            }
        }
        out
    };
    let mut s = vec![Coef::zero(); top + 1];
    for _ in 0..n {
        let mut xp = vec![Coef::zero(); top + 1];
        xp[0] = Coef::from_integer(BigInt::from(1));
        let mut next = vec![Coef::zero(); top + 1];
        for i in 0..=top {
            let mut sp = vec![Coef::zero(); top + 1];
            sp[0] = Coef::from_integer(BigInt::from(1));
            for j in 0..=top - i {
                let c = f.coef(i as u32, j as u32);
                if !c.is_zero() {
                    for (d, v) in mul(&xp, &sp).iter().enumerate() {
                        next[d] += &c * v;
                    }
                }
                sp = mul(&sp, &s);
            }
            let mut x = vec![Coef::zero(); top + 1];
            if top >= 1 {
                x[1] = Coef::from_integer(BigInt::from(1));
            }
            xp = mul(&xp, &x);
        }
        s = next;
    }
    s
}

pub fn small_rational(r: &mut ChaCha8Rng) -> Coef {
    Coef::new(BigInt::from(r.gen_range(-3..=3)), BigInt::from(r.gen_range(1..=3)))
}

/// A valid FGL over Q: `x + y + c xy` conjugated by a random strict series.
pub fn random_fgl(r: &mut ChaCha8Rng, n: u32) -> TruncatedFGL {
    let c = small_rational(r);
    let base = TruncatedFGL::new(Q, n, &[(1, 1, c)]).unwrap();
    let mut terms = vec![(vec![0], Coef::from_integer(BigInt::from(1)))];
    for i in 1..n as i64 {
        terms.push((vec![i], small_rational(r)));
    }
    let lambda = LaurentPoly::from_terms(Q, 1, terms).unwrap();
    strict_iso(&base, &lambda).unwrap().target
}

/// A random Laurent polynomial with integer coefficients.
pub fn random_poly(r: &mut ChaCha8Rng, ring: CoefficientRing, nvars: usize, lo: i64, hi: i64, terms: usize) -> LaurentPoly {
    let ts: Vec<(Vec<i64>, Coef)> = (0..terms)
        .map(|_| {
            let m = (0..nvars).map(|_| r.gen_range(lo..=hi)).collect();
            (m, Coef::from_integer(BigInt::from(r.gen_range(-5..=5))))
        })
        .collect();
    LaurentPoly::from_terms(ring, nvars, ts).unwrap()
}
