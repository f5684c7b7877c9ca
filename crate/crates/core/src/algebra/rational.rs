//! The rational function field k = F_q(θ).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::field::Fq;
use super::poly::Poly;
use crate::error::{MathError, Result};

/// A reduced fraction `num/den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalK {
    num: Poly,
    den: Poly,
}

impl RationalK {
    pub fn new(num: Poly, den: Poly) -> Result<RationalK> {
        if den.is_zero() {
            return Err(MathError::DivisionByZero);
        }
        let f = num.field();
        if num.is_zero() {
            return Ok(RationalK { num, den: Poly::one(f) });
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        if !d.is_monic() {
            let inv = f.inv(d.lead())?;
            n = n.scale(inv);
            d = d.scale(inv);
        }
        Ok(RationalK { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> RationalK {
        let f = p.field();
        RationalK { num: p, den: Poly::one(f) }
    }

    pub fn zero(f: Fq) -> RationalK {
        RationalK::from_poly(Poly::zero(f))
    }

    pub fn one(f: Fq) -> RationalK {
        RationalK::from_poly(Poly::one(f))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> Fq {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inv(&self) -> Result<RationalK> {
        RationalK::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, n: u64) -> RationalK {
        RationalK { num: self.num.pow(n), den: self.den.pow(n) }
    }

    /// x^q: applies the q-power map to numerator and denominator.
    pub fn frobenius(&self) -> RationalK {
        RationalK { num: self.num.frobenius(), den: self.den.frobenius() }
    }

    /// Whether `self == num/den` (cross-multiplication).
    pub fn equals_fraction(&self, num: &Poly, den: &Poly) -> bool {
        &self.num * den == num * &self.den
    }
}

impl Add for &RationalK {
    type Output = RationalK;
    fn add(self, rhs: &RationalK) -> RationalK {
        if self.den == rhs.den {
            return RationalK::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RationalK::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
            .unwrap()
    }
}

impl Sub for &RationalK {
    type Output = RationalK;
    fn sub(self, rhs: &RationalK) -> RationalK {
        self + &(-rhs)
    }
}

impl Neg for &RationalK {
    type Output = RationalK;
    fn neg(self) -> RationalK {
        RationalK { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RationalK {
    type Output = RationalK;
    fn mul(self, rhs: &RationalK) -> RationalK {
        // cross-cancel before multiplying
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let div = |a: &Poly, g: &Poly| if g.is_one() || g.is_zero() { a.clone() } else { a.exact_div(g).unwrap() };
        let num = &div(&self.num, &g1) * &div(&rhs.num, &g2);
        let den = &div(&self.den, &g2) * &div(&rhs.den, &g1);
        if num.is_zero() {
            return RationalK::zero(num.field());
        }
        RationalK { num, den }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for &RationalK {
    type Output = Result<RationalK>;
    fn div(self, rhs: &RationalK) -> Result<RationalK> {
        Ok(self * &rhs.inv()?)
    }
}

impl fmt::Display for RationalK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalK({self})")
    }
}
