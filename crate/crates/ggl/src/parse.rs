//! A small parser for polynomial expressions such as `t1*t2^-1 - 1`,
//! `3/2*x^2 + (1 + e)^2`.

use crate::error::{GglError, Result};
use crate::poly::{LaurentPoly, Monomial};
use crate::ring::{parse_coef, CoefficientRing};

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    ring: CoefficientRing,
    names: &'a [String],
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> GglError {
        GglError::Parse(format!("{msg} at position {} in `{}`", self.pos, String::from_utf8_lossy(self.s)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = LaurentPoly::zero(self.ring, self.names.len());
        let mut sign = 1;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                sign = -1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(c) if c == b'(' || c.is_ascii_alphabetic() => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.s.len() && (self.s[self.pos] == b'-' || self.s[self.pos] == b'+') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("expected an integer exponent"))
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            if self.peek() == Some(b'(') {
                self.pos += 1;
                let e = self.integer()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                return Ok(e);
            }
            self.integer()
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        let n = self.names.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                let k = self.exponent()?;
                if k < 0 {
                    return Err(self.err("negative power of a parenthesized expression"));
                }
                Ok(e.pow(k as u32))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'/') {
                    self.pos += 1;
                }
                let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                let c = self.ring.coerce(&parse_coef(txt)?)?;
                Ok(LaurentPoly::constant(self.ring, n, c))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                let i = self
                    .names
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| GglError::Parse(format!("unknown variable `{name}` (expected one of {})", self.names.join(", "))))?;
                let k = self.exponent()?;
                let mut e = vec![0; n];
                e[i] = k;
                Ok(LaurentPoly::monomial(self.ring, Monomial(e), self.ring.from_i64(1)))
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}

/// Parses `s` as a polynomial in the variables `names` over `ring`.
pub fn parse_poly(s: &str, ring: CoefficientRing, names: &[String]) -> Result<LaurentPoly> {
    let mut p = Parser { s: s.as_bytes(), pos: 0, ring, names };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}
