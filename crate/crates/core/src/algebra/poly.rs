//! Dense univariate polynomials over F_q.
//!
//! The same type serves for A = F_q[T] and for F_q[t]; only the printed
//! variable name differs.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Fq, FqElem};
use super::text;
use crate::error::{MathError, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Fq,
    coeffs: Vec<FqElem>,
}

/// Elements of A = F_q[θ].
pub type PolyTheta = Poly;

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("T"))
    }
}

impl Poly {
    pub fn new(field: Fq, mut coeffs: Vec<FqElem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: Fq) -> Poly {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Fq) -> Poly {
        Poly::constant(field, FqElem::ONE)
    }

    pub fn constant(field: Fq, c: FqElem) -> Poly {
        Poly::new(field, vec![c])
    }

    /// The variable itself.
    pub fn x(field: Fq) -> Poly {
        Poly::monomial(field, FqElem::ONE, 1)
    }

    pub fn monomial(field: Fq, c: FqElem, n: usize) -> Poly {
        if c.is_zero() {
            return Poly::zero(field);
        }
        let mut coeffs = vec![FqElem::ZERO; n + 1];
        coeffs[n] = c;
        Poly { field, coeffs }
    }

    /// Builds a polynomial from integer coefficients (reduced into F_p).
    pub fn from_ints(field: Fq, c: &[i64]) -> Poly {
        Poly::new(field, c.iter().map(|&x| field.from_int(x)).collect())
    }

    pub fn parse(field: Fq, s: &str) -> Result<Poly> {
        text::parse_poly(field, s, "T")
    }

    pub fn parse_var(field: Fq, s: &str, var: &str) -> Result<Poly> {
        text::parse_poly(field, s, var)
    }

    pub fn to_text(&self, var: &str) -> String {
        text::poly_to_text(self, var)
    }

    pub fn field(&self) -> Fq {
        self.field
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FqElem> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FqElem::ONE
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Number of stored coefficients (degree + 1, or 0).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == FqElem::ONE
    }

    pub fn make_monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn scale(&self, c: FqElem) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.field);
        }
        let f = self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplication by x^n.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![FqElem::ZERO; n];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { field: self.field, coeffs }
    }

    /// Keeps the coefficients of x^0..x^{n-1}.
    pub fn truncate(&self, n: usize) -> Poly {
        let n = n.min(self.coeffs.len());
        Poly::new(self.field, self.coeffs[..n].to_vec())
    }

    /// Exact division by x^n; the low coefficients must vanish.
    pub fn shift_down(&self, n: usize) -> Poly {
        debug_assert!(self.coeffs.iter().take(n).all(|c| c.is_zero()));
        if n >= self.coeffs.len() {
            return Poly::zero(self.field);
        }
        Poly { field: self.field, coeffs: self.coeffs[n..].to_vec() }
    }

    /// Lowest index with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// p(x^k).
    pub fn spread(&self, k: usize) -> Poly {
        if self.is_zero() || k == 1 {
            return self.clone();
        }
        let mut coeffs = vec![FqElem::ZERO; (self.coeffs.len() - 1) * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c;
        }
        Poly { field: self.field, coeffs }
    }

    /// p^q. Coefficients lie in F_q and are fixed by the q-power map, so this is p(x^q).
    pub fn frobenius(&self) -> Poly {
        self.spread(self.field.q() as usize)
    }

    pub fn eval(&self, x: FqElem) -> FqElem {
        let f = self.field;
        self.coeffs.iter().rev().fold(FqElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn pow(&self, mut n: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn add_impl(&self, other: &Poly, negate: bool) -> Poly {
        assert_eq!(self.field, other.field, "polynomials over different fields");
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeff(i);
            let b = other.coeff(i);
            coeffs.push(if negate { f.sub(a, b) } else { f.add(a, b) });
        }
        Poly::new(f, coeffs)
    }

    fn mul_impl(&self, other: &Poly) -> Poly {
        assert_eq!(self.field, other.field, "polynomials over different fields");
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let f = self.field;
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        if f.is_prime_field() {
            let p = f.p() as u64;
            // delayed reduction: flush before the accumulator can overflow
            let max_terms = (u64::MAX / ((p - 1) * (p - 1)).max(1)).min(1 << 20) as usize;
            let mut acc = vec![0u64; n];
            let (a, b) = if self.coeffs.len() <= other.coeffs.len() {
                (&self.coeffs, &other.coeffs)
            } else {
                (&other.coeffs, &self.coeffs)
            };
            for (i, &x) in a.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let x = x.0 as u64;
                for (j, &y) in b.iter().enumerate() {
                    acc[i + j] += x * y.0 as u64;
                }
                if (i + 1) % max_terms == 0 {
                    acc.iter_mut().for_each(|c| *c %= p);
                }
            }
            Poly::new(f, acc.into_iter().map(|c| FqElem((c % p) as u16)).collect())
        } else {
            let mut acc = vec![FqElem::ZERO; n];
            for (i, &x) in self.coeffs.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, &y) in other.coeffs.iter().enumerate() {
                    acc[i + j] = f.add(acc[i + j], f.mul(x, y));
                }
            }
            Poly::new(f, acc)
        }
    }

    /// Euclidean division: `self = q*b + r` with `deg r < deg b`.
    pub fn divrem(&self, b: &Poly) -> Result<(Poly, Poly)> {
        if b.is_zero() {
            return Err(MathError::DivisionByZero);
        }
        let f = self.field;
        let db = b.coeffs.len() - 1;
        if self.coeffs.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv_lead = f.inv(b.lead())?;
        let mut r = self.coeffs.clone();
        let mut quot = vec![FqElem::ZERO; r.len() - db];
        for k in (db..r.len()).rev() {
            let c = r[k];
            if c.is_zero() {
                continue;
            }
            let m = f.mul(c, inv_lead);
            quot[k - db] = m;
            for (j, &bc) in b.coeffs.iter().enumerate() {
                let i = k - db + j;
                r[i] = f.sub(r[i], f.mul(m, bc));
            }
        }
        r.truncate(db);
        Ok((Poly::new(f, quot), Poly::new(f, r)))
    }

    pub fn rem(&self, b: &Poly) -> Result<Poly> {
        Ok(self.divrem(b)?.1)
    }

    /// Remainder modulo a monic polynomial; avoids the leading-coefficient inverse.
    pub fn rem_monic(&self, m: &Poly) -> Poly {
        debug_assert!(m.is_monic());
        let f = self.field;
        let dm = m.coeffs.len() - 1;
        if self.coeffs.len() <= dm {
            return self.clone();
        }
        if dm == 0 {
            return Poly::zero(f);
        }
        let mut r = self.coeffs.clone();
        // m = x^dm + tail
        let tail: Vec<(usize, FqElem)> = m.coeffs[..dm]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, &c)| (j, f.neg(c)))
            .collect();
        for k in (dm..r.len()).rev() {
            let c = r[k];
            if c.is_zero() {
                continue;
            }
            for &(j, nc) in &tail {
                let i = k - dm + j;
                r[i] = f.add(r[i], f.mul(c, nc));
            }
        }
        r.truncate(dm);
        Poly::new(f, r)
    }

    /// Exact division; errors if `b` does not divide `self`.
    pub fn exact_div(&self, b: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(b)?;
        if !r.is_zero() {
            return Err(MathError::Invariant(format!("{b} does not divide {self}")));
        }
        Ok(q)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Extended Euclid: returns `(g, s, t)` with `g = s*self + t*other`, g monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lead()).expect("nonzero");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// Inverse modulo `m`, if `gcd(self, m) = 1`.
    pub fn inv_mod(&self, m: &Poly) -> Result<Poly> {
        let (g, s, _) = self.ext_gcd(m);
        if !g.is_one() {
            return Err(MathError::DivisionByZero);
        }
        s.rem(m)
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        (self * other).rem_monic(m)
    }

    /// self^(q^k) mod m by k successive q-th powers (m monic).
    pub fn frobenius_pow_mod(&self, k: u32, m: &Poly) -> Poly {
        let mut x = self.rem_monic(m);
        for _ in 0..k {
            x = x.frobenius().rem_monic(m);
        }
        x
    }

    /// Total order: by degree, then coefficients from the top down.
    pub fn cmp_canonical(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.add_impl(rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.add_impl(rhs, true)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_impl(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = self.field;
        Poly { field: f, coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> Fq {
        Fq::new(2).unwrap()
    }

    #[test]
    fn worked_examples() {
        let f = f2();
        let t = Poly::x(f);
        let one = Poly::one(f);
        let a = &(&t * &t) + &t;
        let (q, r) = a.divrem(&t).unwrap();
        assert_eq!(q, &t + &one);
        assert!(r.is_zero());
        assert_eq!(a.gcd(&t), t);
        let s = &t + &one;
        assert_eq!(&s * &s, Poly::from_ints(f, &[1, 0, 1]));
    }

    #[test]
    fn division_by_zero() {
        let f = f2();
        assert_eq!(Poly::x(f).divrem(&Poly::zero(f)), Err(MathError::DivisionByZero));
    }

    #[test]
    fn ext_gcd_identity() {
        let f = Fq::new(3).unwrap();
        let a = Poly::from_ints(f, &[1, 2, 0, 1]);
        let b = Poly::from_ints(f, &[2, 1, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    fn arb_poly(q: u32, max_len: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(0..q, 0..max_len).prop_map(move |c| {
            let f = Fq::new(q).unwrap();
            Poly::new(f, c.into_iter().map(|x| f.elem(x)).collect())
        })
    }

    proptest! {
        #[test]
        fn degree_additive_and_divrem_roundtrip(
            (a, b) in prop_oneof![Just(2u32), Just(3), Just(4), Just(5)]
                .prop_flat_map(|q| (arb_poly(q, 12), arb_poly(q, 8)))
        ) {
            if !a.is_zero() && !b.is_zero() {
                prop_assert_eq!((&a * &b).degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
                let (qq, r) = a.divrem(&b).unwrap();
                prop_assert_eq!(&(&qq * &b) + &r, a.clone());
                prop_assert!(r.is_zero() || r.degree().unwrap() < b.degree().unwrap());
                if b.is_monic() {
                    prop_assert_eq!(a.rem_monic(&b), r);
                }
            }
        }

        #[test]
        fn text_roundtrip(p in arb_poly(9, 10)) {
            let s = p.to_text("T");
            prop_assert_eq!(Poly::parse(p.field(), &s).unwrap(), p);
        }

        #[test]
        fn text_roundtrip_prime(p in arb_poly(5, 10)) {
            let s = p.to_text("T");
            prop_assert_eq!(Poly::parse(p.field(), &s).unwrap(), p);
        }
    }
}
