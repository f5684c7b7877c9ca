//! Finite fields F_q with q = p^e.
//!
//! Fields are small (q ≤ 1024) so every operation goes through precomputed
//! tables. A field is constructed once per process and shared through the
//! copyable [`Fq`] handle.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::error::{MathError, Result};

/// Largest field size for which tables are built.
pub const MAX_Q: u32 = 1024;

/// Defining polynomials for the non-prime fields supported out of the box,
/// listed as `(p, e, coefficients little-endian including the leading 1)`.
const MODULUS_TABLE: &[(u32, u32, &[u16])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
];

/// An element of F_q, stored as the base-p encoding of its coordinate vector
/// in the power basis of the defining polynomial.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FqElem(pub(crate) u16);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Raw table index, `0 ≤ index < q`.
    pub fn index(self) -> u16 {
        self.0
    }
}

/// Parameters of a finite field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    /// Monic irreducible polynomial over F_p of degree e, little-endian.
    /// For e = 1 this is `[0, 1]` (the identity convention).
    pub modulus: Vec<u16>,
    pub q: u32,
}

pub(crate) struct FieldTables {
    spec: FieldSpec,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

/// Handle to an interned finite field.
#[derive(Clone, Copy)]
pub struct Fq(&'static FieldTables);

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for Fq {}

impl std::hash::Hash for Fq {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.spec.q.hash(state)
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())
    }
}

fn registry() -> &'static Mutex<HashMap<(u32, u32), &'static FieldTables>> {
    static REG: OnceLock<Mutex<HashMap<(u32, u32), &'static FieldTables>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, e)`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// Multiplies two polynomials over F_p modulo a monic modulus (all little-endian).
fn fp_mulmod(a: &[u16], b: &[u16], modulus: &[u16], p: u32) -> Vec<u16> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u32 * y as u32) % p;
        }
    }
    for k in (e..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for (j, &m) in modulus.iter().enumerate() {
            let idx = k - e + j;
            prod[idx] = (prod[idx] + (p - c) * m as u32) % p;
        }
    }
    prod.truncate(e);
    prod.into_iter().map(|c| c as u16).collect()
}

fn decode(mut x: u32, p: u32, e: u32) -> Vec<u16> {
    (0..e)
        .map(|_| {
            let c = (x % p) as u16;
            x /= p;
            c
        })
        .collect()
}

fn encode(v: &[u16], p: u32) -> u16 {
    v.iter().rev().fold(0u32, |acc, &c| acc * p + c as u32) as u16
}

impl FieldTables {
    fn build(spec: FieldSpec) -> FieldTables {
        let (p, e, q) = (spec.p, spec.e, spec.q as usize);
        let elems: Vec<Vec<u16>> = (0..q as u32).map(|x| decode(x, p, e)).collect();
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        let mut neg = vec![0u16; q];
        let mut inv = vec![0u16; q];
        for a in 0..q {
            let na: Vec<u16> = elems[a].iter().map(|&c| ((p - c as u32) % p) as u16).collect();
            neg[a] = encode(&na, p);
            for b in 0..q {
                let s: Vec<u16> = elems[a]
                    .iter()
                    .zip(&elems[b])
                    .map(|(&x, &y)| ((x as u32 + y as u32) % p) as u16)
                    .collect();
                add[a * q + b] = encode(&s, p);
                let m = if e == 1 {
                    vec![((a as u32 * b as u32) % p) as u16]
                } else {
                    fp_mulmod(&elems[a], &elems[b], &spec.modulus, p)
                };
                mul[a * q + b] = encode(&m, p);
            }
        }
        for a in 1..q {
            inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).expect("field without inverse") as u16;
        }
        FieldTables { spec, add, mul, neg, inv }
    }
}

impl Fq {
    /// The field with `q` elements. Non-prime `q` must appear in the built-in
    /// modulus table.
    pub fn new(q: u32) -> Result<Fq> {
        let (p, e) = prime_power(q)
            .ok_or_else(|| MathError::InvalidInput(format!("{q} is not a prime power")))?;
        Fq::with_pe(p, e)
    }

    pub fn with_pe(p: u32, e: u32) -> Result<Fq> {
        if !is_prime(p) || e == 0 {
            return Err(MathError::InvalidInput(format!("invalid field parameters p={p}, e={e}")));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_Q)
            .ok_or_else(|| MathError::InvalidInput(format!("field {p}^{e} is too large")))?;
        let mut reg = registry().lock().expect("field registry poisoned");
        if let Some(t) = reg.get(&(p, e)) {
            return Ok(Fq(t));
        }
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            MODULUS_TABLE
                .iter()
                .find(|(mp, me, _)| *mp == p && *me == e)
                .map(|(_, _, m)| m.to_vec())
                .ok_or_else(|| {
                    MathError::InvalidInput(format!("no built-in modulus for F_{{{p}^{e}}}"))
                })?
        };
        let tables: &'static FieldTables =
            Box::leak(Box::new(FieldTables::build(FieldSpec { p, e, modulus, q })));
        reg.insert((p, e), tables);
        Ok(Fq(tables))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn q(&self) -> u32 {
        self.0.spec.q
    }

    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    pub fn e(&self) -> u32 {
        self.0.spec.e
    }

    /// Element with the given table index, reduced mod q.
    pub fn elem(&self, index: u32) -> FqElem {
        FqElem((index % self.q()) as u16)
    }

    /// The image of an integer under Z → F_p ⊂ F_q.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p() as i64) as u16)
    }

    /// The generator `g` of F_q over F_p (the class of x); equals 0 for prime fields
    /// in the sense that it is not defined, so prime fields return `None`.
    pub fn generator(&self) -> Option<FqElem> {
        (self.e() > 1).then(|| FqElem(self.p() as u16))
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q() as u16).map(FqElem)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.0.add[a.0 as usize * self.q() as usize + b.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        FqElem(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.0.mul[a.0 as usize * self.q() as usize + b.0 as usize])
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.is_zero() {
            Err(MathError::DivisionByZero)
        } else {
            Ok(FqElem(self.0.inv[a.0 as usize]))
        }
    }

    pub fn pow(&self, a: FqElem, mut n: u64) -> FqElem {
        let mut base = a;
        let mut acc = FqElem::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Coordinates of `a` over F_p in the power basis of the modulus.
    pub fn coords(&self, a: FqElem) -> Vec<u16> {
        decode(a.0 as u32, self.p(), self.e())
    }

    pub fn from_coords(&self, c: &[u16]) -> FqElem {
        let p = self.p();
        let mut v: Vec<u16> = c.iter().map(|&x| (x as u32 % p) as u16).collect();
        v.resize(self.e() as usize, 0);
        FqElem(encode(&v, p))
    }

    #[inline]
    pub(crate) fn is_prime_field(&self) -> bool {
        self.e() == 1
    }
}

/// Binomial coefficient C(n, k) mod p via Lucas' theorem.
pub fn binomial_mod_p(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let small = |n: u64, k: u64| -> u64 {
        if k > n {
            return 0;
        }
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..k {
            num = num * ((n - i) % p) % p;
            den = den * ((i + 1) % p) % p;
        }
        // p prime: den^{p-2}
        let mut inv = 1u64;
        let mut b = den;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                inv = inv * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        num * inv % p
    };
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        acc = acc * small(n % p, k % p) % p;
        if acc == 0 {
            return 0;
        }
        n /= p;
        k /= p;
    }
    acc
}
