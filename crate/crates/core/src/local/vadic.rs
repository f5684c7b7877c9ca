//! Elements of k_v with absolute precision.

use std::fmt;

use serde::Serialize;

use crate::algebra::text::coeff_times;
use crate::algebra::{FqElem, Place, Poly, RationalK};
use crate::error::{MathError, Result};

/// Precision carried by exact zeros.
pub const EXACT: i64 = i64::MAX / 8;

fn clamp(p: i64) -> i64 {
    p.min(EXACT)
}

/// One digit of a v-adic expansion, as serialized to JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Digit {
    pub pow: i64,
    pub c: String,
}

/// `v^shift · unit + O(v^prec)`; when `zero` is set only `prec` is meaningful.
#[derive(Clone)]
pub struct VAdic {
    place: Place,
    shift: i64,
    unit: Poly,
    prec: i64,
    zero: bool,
}

impl VAdic {
    /// Zero known to precision `prec` (`EXACT` for an exact zero).
    pub fn zero(place: &Place, prec: i64) -> VAdic {
        let prec = clamp(prec);
        VAdic { place: place.clone(), shift: prec, unit: Poly::zero(place.field()), prec, zero: true }
    }

    pub fn exact_zero(place: &Place) -> VAdic {
        VAdic::zero(place, EXACT)
    }

    pub fn one(place: &Place, prec: i64) -> VAdic {
        VAdic::from_poly(&Poly::one(place.field()), place, prec)
    }

    /// Builds `v^m · p + O(v^prec)` for an arbitrary polynomial `p`.
    pub fn from_parts(place: &Place, m: i64, p: Poly, prec: i64) -> VAdic {
        let prec = clamp(prec);
        if p.is_zero() || prec <= m {
            return VAdic::zero(place, prec);
        }
        let (k, b) = place.split_valuation(&p);
        let shift = m + k as i64;
        if prec <= shift {
            return VAdic::zero(place, prec);
        }
        let unit = place.reduce(&b, (prec - shift) as usize);
        VAdic { place: place.clone(), shift, unit, prec, zero: false }
    }

    pub fn from_poly(a: &Poly, place: &Place, prec: i64) -> VAdic {
        VAdic::from_parts(place, 0, a.clone(), prec)
    }

    pub fn from_rational(x: &RationalK, place: &Place, prec: i64) -> VAdic {
        if x.is_zero() {
            return VAdic::zero(place, prec);
        }
        let (n, nu) = place.split_valuation(x.num());
        let (d, du) = place.split_valuation(x.den());
        let m = n as i64 - d as i64;
        if prec <= m {
            return VAdic::zero(place, prec);
        }
        let rel = (prec - m) as usize;
        let inv = unit_inverse(place, &place.reduce(&du, rel), rel);
        let unit = place.reduce(&(&place.reduce(&nu, rel) * &inv), rel);
        VAdic { place: place.clone(), shift: m, unit, prec, zero: false }
    }

    pub fn place(&self) -> &Place {
        &self.place
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn is_exact_zero(&self) -> bool {
        self.zero && self.prec >= EXACT
    }

    /// ord_v; an error if the value is zero to its precision.
    pub fn ord(&self) -> Result<i64> {
        if self.zero {
            Err(MathError::ZeroValuation(self.prec))
        } else {
            Ok(self.shift)
        }
    }

    /// ord_v, or the precision when the value is zero to precision.
    pub fn ord_lower(&self) -> i64 {
        if self.zero {
            self.prec
        } else {
            self.shift
        }
    }

    pub fn unit(&self) -> &Poly {
        &self.unit
    }

    fn check(&self, other: &VAdic) {
        assert!(self.place == other.place, "operands at different places");
    }

    /// Lowers the absolute precision to `prec` (no-op if already lower).
    pub fn with_prec(&self, prec: i64) -> VAdic {
        if prec >= self.prec {
            return self.clone();
        }
        if self.zero {
            return VAdic::zero(&self.place, prec);
        }
        VAdic::from_parts(&self.place, self.shift, self.unit.clone(), prec)
    }

    pub fn neg(&self) -> VAdic {
        let mut out = self.clone();
        out.unit = -&out.unit;
        out
    }

    pub fn add(&self, other: &VAdic) -> VAdic {
        self.check(other);
        let prec = self.prec.min(other.prec);
        if self.zero {
            return other.with_prec(prec);
        }
        if other.zero {
            return self.with_prec(prec);
        }
        let m = self.shift.min(other.shift);
        if prec <= m {
            return VAdic::zero(&self.place, prec);
        }
        let lift = |x: &VAdic| {
            let k = (x.shift - m) as usize;
            if k == 0 {
                x.unit.clone()
            } else if self.place.is_theta() {
                x.unit.shift(k)
            } else {
                &x.unit * &*self.place.power(k)
            }
        };
        let sum = &lift(self) + &lift(other);
        VAdic::from_parts(&self.place, m, sum, prec)
    }

    pub fn sub(&self, other: &VAdic) -> VAdic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &VAdic) -> VAdic {
        self.check(other);
        let prec = clamp(
            self.prec
                .saturating_add(other.ord_lower())
                .min(other.prec.saturating_add(self.ord_lower())),
        );
        if self.zero || other.zero {
            return VAdic::zero(&self.place, prec);
        }
        let m = self.shift + other.shift;
        let rel = (prec - m) as usize;
        let unit = self.place.reduce(&(&self.unit * &other.unit), rel);
        VAdic { place: self.place.clone(), shift: m, unit, prec, zero: false }
    }

    /// Multiplies by an exactly known polynomial.
    pub fn mul_poly(&self, a: &Poly) -> VAdic {
        if a.is_zero() {
            return VAdic::exact_zero(&self.place);
        }
        let (k, b) = self.place.split_valuation(a);
        let k = k as i64;
        if self.zero {
            return VAdic::zero(&self.place, self.prec.saturating_add(k));
        }
        let prec = clamp(self.prec.saturating_add(k));
        let rel = (prec - self.shift - k) as usize;
        let unit = self.place.reduce(&(&self.unit * &self.place.reduce(&b, rel)), rel);
        VAdic { place: self.place.clone(), shift: self.shift + k, unit, prec, zero: false }
    }

    pub fn scale(&self, c: FqElem) -> VAdic {
        if c.is_zero() {
            return VAdic::exact_zero(&self.place);
        }
        let mut out = self.clone();
        out.unit = out.unit.scale(c);
        out
    }

    pub fn inv(&self) -> Result<VAdic> {
        if self.zero {
            return Err(MathError::DivisionByZero);
        }
        if self.prec >= EXACT {
            return Err(MathError::Invariant("inverse of a value without finite precision".into()));
        }
        let rel = self.prec - self.shift;
        let unit = unit_inverse(&self.place, &self.unit, rel as usize);
        Ok(VAdic {
            place: self.place.clone(),
            shift: -self.shift,
            unit,
            prec: -self.shift + rel,
            zero: false,
        })
    }

    pub fn div(&self, other: &VAdic) -> Result<VAdic> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, n: u64) -> VAdic {
        let mut acc = VAdic::one(&self.place, EXACT);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// x^{q^i}, with the absolute precision multiplied by q^i and optionally capped.
    pub fn frobenius(&self, i: u32, cap: Option<i64>) -> VAdic {
        let cap = cap.map(clamp).unwrap_or(EXACT);
        if i == 0 {
            return self.with_prec(cap);
        }
        let q = self.place.field().q() as i64;
        if self.place.is_theta() && self.shift.unsigned_abs() < 1 << 20 {
            if let Some(big_q) = q.checked_pow(i).filter(|b| *b < 1 << 40) {
                return self.frobenius_theta(big_q, cap);
            }
        }
        let mut x = self.clone();
        for _ in 0..i {
            x = x.frobenius_once(q, cap);
        }
        x
    }

    fn frobenius_once(&self, q: i64, cap: i64) -> VAdic {
        let prec = clamp(self.prec.saturating_mul(q)).min(cap);
        if self.zero {
            return VAdic::zero(&self.place, prec);
        }
        let m = self.shift * q;
        VAdic::from_parts(&self.place, m, self.unit.spread(q as usize), prec)
    }

    /// Sparse Frobenius at v = θ: only coefficients landing below the new precision are kept.
    fn frobenius_theta(&self, big_q: i64, cap: i64) -> VAdic {
        let prec = clamp(self.prec.saturating_mul(big_q)).min(cap);
        if self.zero {
            return VAdic::zero(&self.place, prec);
        }
        let m = self.shift.saturating_mul(big_q);
        if prec <= m {
            return VAdic::zero(&self.place, prec);
        }
        let rel = (prec - m) as usize;
        let bq = big_q as usize;
        let len = rel.min((self.unit.len() - 1).saturating_mul(bq) + 1);
        let mut coeffs = vec![FqElem::ZERO; len];
        for (k, &c) in self.unit.coeffs().iter().enumerate() {
            match k.checked_mul(bq) {
                Some(pos) if pos < len => coeffs[pos] = c,
                _ => break,
            }
        }
        let unit = Poly::new(self.place.field(), coeffs);
        VAdic { place: self.place.clone(), shift: m, unit, prec, zero: false }
    }

    /// Canonical digits: `x = Σ d_k v^k + O(v^prec)` with deg d_k < ε_v.
    pub fn digits(&self) -> Vec<(i64, Poly)> {
        if self.zero {
            return Vec::new();
        }
        let rel = (self.prec - self.shift) as usize;
        let mut out = Vec::new();
        if self.place.is_theta() {
            let f = self.place.field();
            for (k, &c) in self.unit.coeffs().iter().enumerate().take(rel) {
                if !c.is_zero() {
                    out.push((self.shift + k as i64, Poly::constant(f, c)));
                }
            }
            return out;
        }
        let mut rest = self.unit.clone();
        for k in 0..rel {
            if rest.is_zero() {
                break;
            }
            let (quot, r) = rest.divrem(self.place.poly()).expect("v nonzero");
            if !r.is_zero() {
                out.push((self.shift + k as i64, r));
            }
            rest = quot;
        }
        out
    }

    /// Reassembles `Σ d_k v^k + O(v^prec)`.
    pub fn from_digits(place: &Place, digits: &[(i64, Poly)], prec: i64) -> VAdic {
        let Some(m) = digits.iter().map(|d| d.0).min() else {
            return VAdic::zero(place, prec);
        };
        let mut acc = Poly::zero(place.field());
        for (k, d) in digits {
            let e = (k - m) as usize;
            acc = &acc + &(d * &*place.power(e));
        }
        VAdic::from_parts(place, m, acc, prec)
    }

    pub fn digits_json(&self) -> Vec<Digit> {
        self.digits()
            .into_iter()
            .map(|(pow, c)| Digit { pow, c: c.to_string() })
            .collect()
    }

    /// The truncated representative `v^shift · unit` as an element of k.
    pub fn to_rational(&self) -> RationalK {
        let f = self.place.field();
        if self.zero {
            return RationalK::zero(f);
        }
        let vm = self.place.power(self.shift.unsigned_abs() as usize);
        if self.shift >= 0 {
            RationalK::from_poly(&self.unit * &*vm)
        } else {
            RationalK::new(self.unit.clone(), (*vm).clone()).expect("v^m nonzero")
        }
    }

    /// Whether `self` and `other` agree to the smaller of their precisions.
    pub fn agrees_with(&self, other: &VAdic) -> bool {
        self.sub(other).is_zero()
    }

    fn render_power(&self, k: i64) -> String {
        let v = self.place.poly().to_string();
        let base = if self.place.degree() == 1 && self.place.is_theta() {
            v
        } else {
            format!("({v})")
        };
        match k {
            0 => String::new(),
            1 => base,
            _ => format!("{base}^{k}"),
        }
    }
}

/// Inverse of a unit modulo v^k: extended Euclid mod v, then Newton lifting.
pub(crate) fn unit_inverse(place: &Place, u: &Poly, k: usize) -> Poly {
    let f = place.field();
    if k == 0 {
        return Poly::zero(f);
    }
    let mut y = place.residue(u).inv_mod(place.poly()).expect("argument is a v-adic unit");
    let two = Poly::constant(f, f.from_int(2));
    let mut have = 1;
    while have < k {
        have = (2 * have).min(k);
        let uy = place.reduce(&(&place.reduce(u, have) * &y), have);
        y = place.reduce(&(&y * &(&two - &uy)), have);
    }
    y
}

impl fmt::Display for VAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.place.field();
        let mut terms = Vec::new();
        for (k, d) in self.digits() {
            let mono = self.render_power(k);
            let t = if d.degree() == Some(0) {
                coeff_times(field, d.coeff(0), &mono)
            } else if mono.is_empty() {
                d.to_string()
            } else {
                format!("({d})*{mono}")
            };
            terms.push(t);
        }
        if self.prec < EXACT {
            let p = self.render_power(self.prec);
            terms.push(format!("O({})", if p.is_empty() { "1".into() } else { p }));
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&terms.join("+"))
    }
}

impl fmt::Debug for VAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VAdic[{}]({self})", self.place)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Fq;

    fn q2() -> (Fq, Place) {
        let f = Fq::new(2).unwrap();
        (f, Place::theta(f))
    }

    #[test]
    fn from_rational_examples() {
        let (f, th) = q2();
        let x = RationalK::new(Poly::one(f), Poly::from_ints(f, &[0, 1, 1])).unwrap();
        let a = VAdic::from_rational(&x, &th, 3);
        assert_eq!(a.to_string(), "T^-1+1+T+T^2+O(T^3)");
        assert_eq!(a.ord().unwrap(), -1);
        let z = VAdic::from_rational(&RationalK::zero(f), &th, 4);
        assert!(z.is_zero() && z.prec() == 4 && z.ord().is_err());
        let v = Place::new(Poly::from_ints(f, &[1, 1, 1])).unwrap();
        let w = VAdic::from_poly(v.poly(), &v, 5);
        assert_eq!((w.ord().unwrap(), w.unit().clone()), (1, Poly::one(f)));
    }

    #[test]
    fn arithmetic_examples() {
        let (f, th) = q2();
        let a = VAdic::from_poly(&Poly::x(f), &th, 5);
        let b = VAdic::from_poly(&Poly::x(f), &th, 3);
        let s = a.add(&b);
        assert!(s.is_zero() && s.prec() == 3);
        let one = VAdic::one(&th, 4);
        let d = one.div(&VAdic::from_poly(&Poly::from_ints(f, &[1, 1]), &th, 4)).unwrap();
        assert_eq!(d.to_string(), "1+T+T^2+T^3+O(T^4)");
        assert!(a.mul(&VAdic::exact_zero(&th)).is_zero());
    }

    #[test]
    fn frobenius_examples() {
        let (f, th) = q2();
        let a = VAdic::from_poly(&Poly::x(f), &th, 2);
        assert_eq!(a.frobenius(1, None).to_string(), "T^2+O(T^4)");
        assert_eq!(a.frobenius(0, None).to_string(), a.to_string());
        let b = VAdic::from_poly(&Poly::from_ints(f, &[1, 1]), &th, 3);
        assert_eq!(b.frobenius(1, None).to_string(), "1+T^2+O(T^6)");
        let c = b.frobenius(3, Some(10));
        assert_eq!(c.to_string(), "1+T^8+O(T^10)");
        // general place matches the θ fast path semantics
        let v = Place::new(Poly::from_ints(f, &[1, 1])).unwrap();
        let x = VAdic::from_poly(&Poly::from_ints(f, &[0, 0, 1]), &v, 3);
        let y = x.frobenius(2, None);
        assert_eq!(y.prec(), 12);
        assert!(y.agrees_with(&VAdic::from_poly(&Poly::from_ints(f, &[0, 0, 1]).pow(4), &v, 12)));
    }

    #[test]
    fn digits_general_place() {
        let f = Fq::new(2).unwrap();
        let v = Place::new(Poly::from_ints(f, &[1, 1, 1])).unwrap();
        let x = VAdic::from_poly(&Poly::from_ints(f, &[0, 1, 0, 1]), &v, 2);
        let d = x.digits();
        // θ³+θ = θ + 1 + (θ+1)·v  (since θ³ ≡ 1 mod v)
        let rebuilt = VAdic::from_digits(&v, &d, 2);
        assert!(rebuilt.agrees_with(&x));
        for (_, c) in &d {
            assert!(c.degree().unwrap_or(0) < 2);
        }
    }

    #[test]
    fn display_general() {
        let f = Fq::new(3).unwrap();
        let v = Place::new(Poly::from_ints(f, &[1, 1])).unwrap();
        let x = VAdic::from_poly(&Poly::from_ints(f, &[2, 2]), &v, 3);
        assert_eq!(x.to_string(), "2*(T+1)+O((T+1)^3)");
    }
}
