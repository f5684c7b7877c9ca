//! ASCII text format for polynomials.
//!
//! θ prints as `T`, the t-module variable as `t`, and the generator of
//! F_q over F_p as `g`. Example: `T^2+g*T+1`, `(g+1)*t^3*T`.
//!
//! Grammar accepted by the parser:
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := INT | 'g' ['^' INT] | VAR ['^' INT] | '(' expr ')' ['^' INT]
//! ```

use std::collections::BTreeMap;

use super::field::{Fq, FqElem};
use super::poly::Poly;
use crate::error::{MathError, Result};

/// Sparse polynomial in up to two variables: (outer exponent, inner exponent) → coefficient.
type Sparse = BTreeMap<(usize, usize), FqElem>;

fn sparse_add(f: Fq, a: &Sparse, b: &Sparse, negate: bool) -> Sparse {
    let mut out = a.clone();
    for (&k, &c) in b {
        let c = if negate { f.neg(c) } else { c };
        let e = out.entry(k).or_insert(FqElem::ZERO);
        *e = f.add(*e, c);
        if e.is_zero() {
            out.remove(&k);
        }
    }
    out
}

fn sparse_mul(f: Fq, a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (&(i1, j1), &c1) in a {
        for (&(i2, j2), &c2) in b {
            let k = (i1 + i2, j1 + j2);
            let e = out.entry(k).or_insert(FqElem::ZERO);
            *e = f.add(*e, f.mul(c1, c2));
            if e.is_zero() {
                out.remove(&k);
            }
        }
    }
    out
}

fn sparse_const(c: FqElem) -> Sparse {
    let mut m = Sparse::new();
    if !c.is_zero() {
        m.insert((0, 0), c);
    }
    m
}

struct Parser<'a> {
    field: Fq,
    s: &'a [u8],
    pos: usize,
    /// Variable names: index 0 is the outer variable, index 1 the inner one.
    vars: [Option<&'a str>; 2],
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(MathError::Parse(format!(
            "{msg} at position {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.s)
        )))
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

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err("integer out of range"))
    }

    fn exponent(&mut self) -> Result<u64> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.int()
        } else {
            Ok(1)
        }
    }

    fn expr(&mut self) -> Result<Sparse> {
        let f = self.field;
        let mut acc = Sparse::new();
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negate = true;
        }
        loop {
            let t = self.term()?;
            acc = sparse_add(f, &acc, &t, negate);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Sparse> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = sparse_mul(self.field, &acc, &rhs);
        }
        Ok(acc)
    }

    fn pow(&self, base: &Sparse, n: u64) -> Sparse {
        let mut acc = sparse_const(FqElem::ONE);
        for _ in 0..n {
            acc = sparse_mul(self.field, &acc, base);
        }
        acc
    }

    fn factor(&mut self) -> Result<Sparse> {
        let f = self.field;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                Ok(sparse_const(f.from_int((n % f.p() as u64) as i64)))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                let n = self.exponent()?;
                Ok(self.pow(&inner, n))
            }
            Some(b'g') => {
                self.pos += 1;
                let Some(g) = f.generator() else {
                    return self.err("'g' is undefined over a prime field");
                };
                let n = self.exponent()?;
                Ok(sparse_const(f.pow(g, n)))
            }
            Some(_) => {
                for (slot, var) in self.vars.iter().enumerate() {
                    let Some(var) = var else { continue };
                    if self.s[self.pos..].starts_with(var.as_bytes()) {
                        self.pos += var.len();
                        let n = self.exponent()? as usize;
                        let key = if slot == 0 { (n, 0) } else { (0, n) };
                        let mut m = Sparse::new();
                        m.insert(key, FqElem::ONE);
                        return Ok(m);
                    }
                }
                self.err("unexpected character")
            }
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_sparse(field: Fq, s: &str, vars: [Option<&str>; 2]) -> Result<Sparse> {
    let mut p = Parser { field, s: s.as_bytes(), pos: 0, vars };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

pub(crate) fn parse_poly(field: Fq, s: &str, var: &str) -> Result<Poly> {
    let sparse = parse_sparse(field, s, [None, Some(var)])?;
    let deg = sparse.keys().map(|k| k.1).max().unwrap_or(0);
    let mut coeffs = vec![FqElem::ZERO; deg + 1];
    for ((_, j), c) in sparse {
        coeffs[j] = c;
    }
    Ok(Poly::new(field, coeffs))
}

/// Parses a polynomial in two variables into `(outer exponent, inner exponent) → coefficient`.
pub(crate) fn parse_bivariate(field: Fq, s: &str, outer: &str, inner: &str) -> Result<Sparse> {
    parse_sparse(field, s, [Some(outer), Some(inner)])
}

/// Renders an element of F_q as a sum of `c*g^k`, highest power first.
pub fn fq_to_text(field: Fq, c: FqElem) -> String {
    if c.is_zero() {
        return "0".into();
    }
    let coords = field.coords(c);
    let mut parts = Vec::new();
    for (k, &a) in coords.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let gpart = match k {
            0 => String::new(),
            1 => "g".into(),
            _ => format!("g^{k}"),
        };
        parts.push(match (a, k) {
            (_, 0) => a.to_string(),
            (1, _) => gpart,
            _ => format!("{a}*{gpart}"),
        });
    }
    parts.join("+")
}

fn var_power(var: &str, n: usize) -> String {
    match n {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{n}"),
    }
}

/// Renders `c * monomial` where `monomial` is already formatted (possibly empty).
pub(crate) fn coeff_times(field: Fq, c: FqElem, monomial: &str) -> String {
    if monomial.is_empty() {
        return fq_to_text(field, c);
    }
    if c == FqElem::ONE {
        return monomial.to_string();
    }
    let ct = fq_to_text(field, c);
    if ct.contains('+') {
        format!("({ct})*{monomial}")
    } else {
        format!("{ct}*{monomial}")
    }
}

pub(crate) fn poly_to_text(p: &Poly, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let f = p.field();
    let terms: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, &c)| coeff_times(f, c, &var_power(var, n)))
        .collect();
    terms.join("+")
}

/// Renders a sparse bivariate polynomial, outer degree first then inner degree, both descending.
pub(crate) fn bivariate_to_text(
    field: Fq,
    terms: &BTreeMap<(usize, usize), FqElem>,
    outer: &str,
    inner: &str,
) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = terms
        .iter()
        .rev()
        .map(|(&(i, j), &c)| {
            let mono = match (var_power(outer, i), var_power(inner, j)) {
                (a, b) if a.is_empty() => b,
                (a, b) if b.is_empty() => a,
                (a, b) => format!("{a}*{b}"),
            };
            coeff_times(field, c, &mono)
        })
        .collect();
    parts.join("+")
}
