//! Finite places of k: monic irreducible polynomials in A.

use std::fmt;
use std::sync::{Arc, RwLock};

use super::field::{Fq, FqElem};
use super::poly::Poly;
use super::rational::RationalK;
use crate::error::{MathError, Result};

/// Distinct prime divisors of n.
fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test over F_q.
///
/// `f` of degree n is irreducible iff `T^{q^n} ≡ T (mod f)` and
/// `gcd(T^{q^{n/r}} − T, f) = 1` for every prime r dividing n.
pub fn is_irreducible(f: &Poly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let field = f.field();
    let m = f.make_monic();
    let x = Poly::x(field);
    if x.frobenius_pow_mod(n as u32, &m) != x.rem_monic(&m) {
        return false;
    }
    prime_divisors(n).into_iter().all(|r| {
        let h = &x.frobenius_pow_mod((n / r) as u32, &m) - &x;
        h.gcd(&m).is_one()
    })
}

/// Number of monic irreducibles of degree d over F_q (necklace formula).
pub fn count_irreducibles(q: u64, d: u32) -> u64 {
    fn mobius(mut n: u32) -> i64 {
        let mut result = 1i64;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                result = -result;
            }
            p += 1;
        }
        if n > 1 {
            result = -result;
        }
        result
    }
    let total: i64 = (1..=d)
        .filter(|m| d.is_multiple_of(*m))
        .map(|m| mobius(m) * (q as i64).pow(d / m))
        .sum();
    (total / d as i64) as u64
}

struct PlaceInner {
    v: Poly,
    eps: usize,
    q_v: u64,
    powers: RwLock<Vec<Arc<Poly>>>,
}

/// A finite place v of k, with cached powers v^k.
#[derive(Clone)]
pub struct Place(Arc<PlaceInner>);

impl PartialEq for Place {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.v == other.0.v
    }
}

impl Eq for Place {}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Place({})", self.0.v)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.v)
    }
}

impl Place {
    pub fn new(v: Poly) -> Result<Place> {
        if !v.is_monic() || !is_irreducible(&v) {
            return Err(MathError::InvalidInput(format!("{v} is not monic irreducible")));
        }
        let eps = v.degree().unwrap();
        let q_v = (v.field().q() as u64).checked_pow(eps as u32).ok_or_else(|| {
            MathError::InvalidInput(format!("residue field of {v} is too large"))
        })?;
        let one = Arc::new(Poly::one(v.field()));
        Ok(Place(Arc::new(PlaceInner { v, eps, q_v, powers: RwLock::new(vec![one]) })))
    }

    /// The place at θ.
    pub fn theta(field: Fq) -> Place {
        Place::new(Poly::x(field)).expect("T is irreducible")
    }

    pub fn parse(field: Fq, s: &str) -> Result<Place> {
        Place::new(Poly::parse(field, s)?)
    }

    pub fn poly(&self) -> &Poly {
        &self.0.v
    }

    pub fn field(&self) -> Fq {
        self.0.v.field()
    }

    /// ε_v = deg v.
    pub fn degree(&self) -> usize {
        self.0.eps
    }

    /// q_v = q^{ε_v}.
    pub fn residue_size(&self) -> u64 {
        self.0.q_v
    }

    /// Whether v = θ, where reduction mod v^k is truncation.
    pub fn is_theta(&self) -> bool {
        self.0.eps == 1 && self.0.v.coeff(0).is_zero()
    }

    /// v^k (cached).
    pub fn power(&self, k: usize) -> Arc<Poly> {
        {
            let cache = self.0.powers.read().expect("place cache poisoned");
            if let Some(p) = cache.get(k) {
                return p.clone();
            }
        }
        let mut cache = self.0.powers.write().expect("place cache poisoned");
        while cache.len() <= k {
            let next = Arc::new(cache.last().unwrap().as_ref() * &self.0.v);
            cache.push(next);
        }
        cache[k].clone()
    }

    /// Reduces `a` modulo v^k.
    pub fn reduce(&self, a: &Poly, k: usize) -> Poly {
        if k == 0 {
            return Poly::zero(self.field());
        }
        if self.is_theta() {
            return a.truncate(k);
        }
        if a.len() <= k * self.0.eps {
            return a.clone();
        }
        a.rem_monic(&self.power(k))
    }

    /// Splits a nonzero `a` as v^m · b with v ∤ b.
    pub fn split_valuation(&self, a: &Poly) -> (usize, Poly) {
        debug_assert!(!a.is_zero());
        if self.is_theta() {
            let m = a.low_degree().unwrap_or(0);
            return (m, a.shift_down(m));
        }
        let mut m = 0;
        let mut b = a.clone();
        loop {
            let (quot, r) = b.divrem(&self.0.v).expect("v nonzero");
            if !r.is_zero() {
                return (m, b);
            }
            m += 1;
            b = quot;
        }
    }

    /// Residue of `a` in A/vA.
    pub fn residue(&self, a: &Poly) -> Poly {
        a.rem_monic(&self.0.v)
    }
}

/// All places of degree ≤ `max_deg`, ordered by degree and then by
/// coefficients read from the top down.
pub fn enumerate_places(field: Fq, max_deg: usize) -> Vec<Place> {
    let q = field.q() as u64;
    let mut out = Vec::new();
    for d in 1..=max_deg {
        let count = q.pow(d as u32);
        for idx in 0..count {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                coeffs.push(field.elem((x % q) as u32));
                x /= q;
            }
            coeffs.push(FqElem::ONE);
            let f = Poly::new(field, coeffs);
            if is_irreducible(&f) {
                out.push(Place::new(f).expect("checked irreducible"));
            }
        }
    }
    out
}

/// Valuation of a polynomial by trial division; `None` for zero.
pub fn ord_poly(a: &Poly, v: &Place) -> Option<usize> {
    if a.is_zero() {
        return None;
    }
    let mut m = 0;
    let mut b = a.clone();
    loop {
        let (quot, r) = b.divrem(v.poly()).expect("v nonzero");
        if !r.is_zero() {
            return Some(m);
        }
        m += 1;
        b = quot;
    }
}

/// v-adic valuation of x ∈ k by trial division; `None` stands for +∞.
pub fn ord_exact(x: &RationalK, v: &Place) -> Option<i64> {
    let n = ord_poly(x.num(), v)? as i64;
    let d = ord_poly(x.den(), v).expect("nonzero denominator") as i64;
    Some(n - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_examples() {
        let f = Fq::new(2).unwrap();
        assert!(is_irreducible(&Poly::from_ints(f, &[1, 1, 1])));
        assert!(!is_irreducible(&Poly::from_ints(f, &[0, 1, 1])));
        for q in [2, 3, 4, 5] {
            assert!(is_irreducible(&Poly::x(Fq::new(q).unwrap())));
        }
        // x^4+x^2+1 = (x^2+x+1)^2 over F_2
        assert!(!is_irreducible(&Poly::from_ints(f, &[1, 0, 1, 0, 1])));
    }

    #[test]
    fn places_small() {
        let f = Fq::new(2).unwrap();
        let names: Vec<String> = enumerate_places(f, 2).iter().map(|p| p.to_string()).collect();
        assert_eq!(names, ["T", "T+1", "T^2+T+1"]);
        assert_eq!(enumerate_places(Fq::new(3).unwrap(), 1).len(), 3);
    }

    fn brute_irreducible(f: &Poly) -> bool {
        // no monic divisor of degree 1..=deg/2
        let field = f.field();
        let n = f.degree().unwrap();
        let q = field.q() as u64;
        for d in 1..=n / 2 {
            for idx in 0..q.pow(d as u32) {
                let mut c = Vec::new();
                let mut x = idx;
                for _ in 0..d {
                    c.push(field.elem((x % q) as u32));
                    x /= q;
                }
                c.push(FqElem::ONE);
                if f.rem(&Poly::new(field, c)).unwrap().is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_matches_brute_force() {
        for q in [2u32, 3, 4] {
            let field = Fq::new(q).unwrap();
            for d in 1..=4usize {
                for idx in 0..(q as u64).pow(d as u32) {
                    let mut c = Vec::new();
                    let mut x = idx;
                    for _ in 0..d {
                        c.push(field.elem((x % q as u64) as u32));
                        x /= q as u64;
                    }
                    c.push(FqElem::ONE);
                    let f = Poly::new(field, c);
                    assert_eq!(is_irreducible(&f), brute_irreducible(&f), "{f} over F_{q}");
                }
            }
        }
    }

    #[test]
    fn necklace_counts() {
        for q in [2u32, 3, 4, 5] {
            let field = Fq::new(q).unwrap();
            let places = enumerate_places(field, 4);
            for d in 1..=4 {
                let n = places.iter().filter(|p| p.degree() == d).count() as u64;
                assert_eq!(n, count_irreducibles(q as u64, d as u32), "q={q} d={d}");
            }
        }
    }

    #[test]
    fn ord_exact_examples() {
        let f = Fq::new(2).unwrap();
        let th = Place::theta(f);
        let x = RationalK::from_poly(Poly::from_ints(f, &[0, 1, 1]));
        assert_eq!(ord_exact(&x, &th), Some(1));
        let th1 = Place::new(Poly::from_ints(f, &[1, 1])).unwrap();
        let y = x.inv().unwrap();
        assert_eq!(ord_exact(&y, &th1), Some(-1));
        assert_eq!(ord_exact(&RationalK::zero(f), &th), None);
    }

    #[test]
    fn rejects_reducible_place() {
        let f = Fq::new(2).unwrap();
        assert!(Place::new(Poly::from_ints(f, &[0, 1, 1])).is_err());
        assert!(Place::new(Poly::from_ints(Fq::new(3).unwrap(), &[0, 2])).is_err());
    }

    #[test]
    fn reduction() {
        let f = Fq::new(2).unwrap();
        let v = Place::new(Poly::from_ints(f, &[1, 1, 1])).unwrap();
        let a = Poly::from_ints(f, &[1, 0, 1, 1, 0, 1]);
        assert_eq!(v.reduce(&a, 2), a.rem(&v.power(2)).unwrap());
        let (m, b) = v.split_valuation(&(&*v.power(3) * &Poly::x(f)));
        assert_eq!((m, b), (3, Poly::x(f)));
    }
}
