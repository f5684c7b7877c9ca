//! Elements of k_∞ = F_q((1/θ)).
//!
//! Stored as a v-adic number in the uniformizer x = 1/θ, reusing the
//! truncation arithmetic of the θ-adic place.

use std::fmt;

use super::vadic::{VAdic, EXACT};
use crate::algebra::text::coeff_times;
use crate::algebra::{Fq, Place, Poly, RationalK};
use crate::error::Result;

#[derive(Clone)]
pub struct InfAdic(VAdic);

fn reversed(p: &Poly) -> Poly {
    let mut c = p.coeffs().to_vec();
    c.reverse();
    Poly::new(p.field(), c)
}

impl InfAdic {
    fn x_place(f: Fq) -> Place {
        Place::theta(f)
    }

    pub fn zero(f: Fq, prec: i64) -> InfAdic {
        InfAdic(VAdic::zero(&Self::x_place(f), prec))
    }

    pub fn exact_zero(f: Fq) -> InfAdic {
        Self::zero(f, EXACT)
    }

    pub fn one(f: Fq, prec: i64) -> InfAdic {
        InfAdic(VAdic::one(&Self::x_place(f), prec))
    }

    /// Laurent expansion at infinity: θ^n ↦ x^{-n}.
    pub fn from_rational(r: &RationalK, prec: i64) -> InfAdic {
        let f = r.field();
        let place = Self::x_place(f);
        if r.is_zero() {
            return InfAdic(VAdic::zero(&place, prec));
        }
        let k = r.den().degree().unwrap() as i64 - r.num().degree().unwrap() as i64;
        let num = reversed(r.num());
        let den = reversed(r.den());
        let (num, den) = if k >= 0 {
            (num.shift(k as usize), den)
        } else {
            (num, den.shift((-k) as usize))
        };
        let x = RationalK::new(num, den).expect("nonzero denominator");
        InfAdic(VAdic::from_rational(&x, &place, prec))
    }

    pub fn from_poly(a: &Poly, prec: i64) -> InfAdic {
        Self::from_rational(&RationalK::from_poly(a.clone()), prec)
    }

    pub fn field(&self) -> Fq {
        self.0.place().field()
    }

    /// Absolute precision M: the value is known modulo θ^{-M}.
    pub fn prec(&self) -> i64 {
        self.0.prec()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// ord_∞ = −deg.
    pub fn ord(&self) -> Result<i64> {
        self.0.ord()
    }

    pub fn ord_lower(&self) -> i64 {
        self.0.ord_lower()
    }

    /// Degree in θ of the leading term.
    pub fn top_deg(&self) -> Result<i64> {
        Ok(-self.0.ord()?)
    }

    pub fn with_prec(&self, prec: i64) -> InfAdic {
        InfAdic(self.0.with_prec(prec))
    }

    pub fn add(&self, o: &InfAdic) -> InfAdic {
        InfAdic(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &InfAdic) -> InfAdic {
        InfAdic(self.0.sub(&o.0))
    }

    pub fn neg(&self) -> InfAdic {
        InfAdic(self.0.neg())
    }

    pub fn mul(&self, o: &InfAdic) -> InfAdic {
        InfAdic(self.0.mul(&o.0))
    }

    pub fn div(&self, o: &InfAdic) -> Result<InfAdic> {
        Ok(InfAdic(self.0.div(&o.0)?))
    }

    pub fn inv(&self) -> Result<InfAdic> {
        Ok(InfAdic(self.0.inv()?))
    }

    pub fn pow(&self, n: u64) -> InfAdic {
        InfAdic(self.0.pow(n))
    }

    pub fn frobenius(&self, i: u32, cap: Option<i64>) -> InfAdic {
        InfAdic(self.0.frobenius(i, cap))
    }

    pub fn agrees_with(&self, o: &InfAdic) -> bool {
        self.0.agrees_with(&o.0)
    }

    /// Coefficients as (θ-exponent, coefficient), highest exponent first.
    pub fn terms(&self) -> Vec<(i64, crate::algebra::FqElem)> {
        self.0.digits().into_iter().map(|(k, d)| (-k, d.coeff(0))).collect()
    }
}

fn theta_power(n: i64) -> String {
    match n {
        0 => String::new(),
        1 => "T".into(),
        _ => format!("T^{n}"),
    }
}

impl fmt::Display for InfAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.field();
        let mut parts: Vec<String> = self
            .terms()
            .into_iter()
            .map(|(n, c)| coeff_times(field, c, &theta_power(n)))
            .collect();
        if self.prec() < EXACT {
            let p = theta_power(-self.prec());
            parts.push(format!("O({})", if p.is_empty() { "1".into() } else { p }));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join("+"))
    }
}

impl fmt::Debug for InfAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InfAdic({self})")
    }
}
