//! Streaming the d_1-th row of the logarithm coefficients P_i.
//!
//! y_{1,j} = (−[i])^{d_1−j}/L_i^{d_1},
//! y_{m,j} = (−1)^{m−1}(−[i])^{d_m−j}·A_{m−1}(i−1)/L_i^{d_m},
//! with A_0 = 1 and A_m(i) = A_m(i−1) + A_{m−1}(i)·u_m^{q^i}/L_i^{s_m}.

use super::TModule;
use crate::algebra::{Fq, Place, Poly, RationalK};
use crate::carlitz::{CarlitzContext, VadicCarlitz};
use crate::error::{MathError, Result};
use crate::local::VAdic;

/// Arithmetic backend for row entries.
pub trait RowArith {
    type V: Clone;
    fn zero(&self) -> Self::V;
    fn one(&self) -> Self::V;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    /// [i] (with [0] = 0).
    fn bracket(&mut self, i: u32) -> Self::V;
    /// 1/L_i^e.
    fn inv_l_pow(&mut self, i: u32, e: u32) -> Result<Self::V>;
    /// u^{q^i}.
    fn twist(&mut self, u: &Poly, i: u32) -> Self::V;
}

/// Exact rows in k.
pub struct ExactRows {
    ctx: CarlitzContext,
}

impl ExactRows {
    pub fn new(f: Fq) -> ExactRows {
        ExactRows { ctx: CarlitzContext::new(f) }
    }
}

impl RowArith for ExactRows {
    type V = RationalK;
    fn zero(&self) -> RationalK {
        RationalK::zero(self.ctx.field())
    }
    fn one(&self) -> RationalK {
        RationalK::one(self.ctx.field())
    }
    fn add(&self, a: &RationalK, b: &RationalK) -> RationalK {
        a + b
    }
    fn neg(&self, a: &RationalK) -> RationalK {
        -a
    }
    fn mul(&self, a: &RationalK, b: &RationalK) -> RationalK {
        a * b
    }
    fn bracket(&mut self, i: u32) -> RationalK {
        if i == 0 {
            return self.zero();
        }
        RationalK::from_poly(self.ctx.bracket(i))
    }
    fn inv_l_pow(&mut self, i: u32, e: u32) -> Result<RationalK> {
        RationalK::from_poly(self.ctx.l_factor(i).pow(e as u64)).inv()
    }
    fn twist(&mut self, u: &Poly, i: u32) -> RationalK {
        let q = self.ctx.field().q() as usize;
        RationalK::from_poly(u.spread(q.pow(i)))
    }
}

/// Rows in k_v; exact inputs are seen to absolute precision `K`.
pub struct VadicRows {
    vc: VadicCarlitz,
}

impl VadicRows {
    pub fn new(place: &Place, k: i64) -> VadicRows {
        VadicRows { vc: VadicCarlitz::new(place, k) }
    }
}

impl RowArith for VadicRows {
    type V = VAdic;
    fn zero(&self) -> VAdic {
        VAdic::exact_zero(self.vc.place())
    }
    fn one(&self) -> VAdic {
        VAdic::one(self.vc.place(), crate::local::EXACT)
    }
    fn add(&self, a: &VAdic, b: &VAdic) -> VAdic {
        a.add(b)
    }
    fn neg(&self, a: &VAdic) -> VAdic {
        a.neg()
    }
    fn mul(&self, a: &VAdic, b: &VAdic) -> VAdic {
        a.mul(b)
    }
    fn bracket(&mut self, i: u32) -> VAdic {
        if i == 0 {
            return self.zero();
        }
        self.vc.bracket(i)
    }
    fn inv_l_pow(&mut self, i: u32, e: u32) -> Result<VAdic> {
        self.vc.inv_l_pow(i, e)
    }
    fn twist(&mut self, u: &Poly, i: u32) -> VAdic {
        let k = self.vc.prec();
        VAdic::from_poly(u, self.vc.place(), k).frobenius(i, Some(k))
    }
}

/// Single-owner iterator over rows i = 0, 1, 2, … of the d_1-th row of P_i.
pub struct LogRowStream<'a, R: RowArith> {
    g: &'a TModule,
    arith: R,
    i: u32,
    /// acc[m] = A_m(i − 1).
    acc: Vec<R::V>,
}

impl<'a, R: RowArith> LogRowStream<'a, R> {
    pub fn new(g: &'a TModule, arith: R) -> Self {
        let r = g.depth();
        let mut acc = vec![arith.zero(); r];
        acc[0] = arith.one();
        LogRowStream { g, arith, i: 0, acc }
    }

    pub fn index(&self) -> u32 {
        self.i
    }

    /// The row for the current i, flattened block by block; advances i.
    pub fn next_row(&mut self) -> Result<Vec<R::V>> {
        let g = self.g;
        let r = g.depth();
        let i = self.i;
        let neg_b = {
            let b = self.arith.bracket(i);
            self.arith.neg(&b)
        };
        let mut row = Vec::with_capacity(g.dim());
        for m in 0..r {
            let d = g.blocks()[m];
            let inv = self.arith.inv_l_pow(i, d as u32)?;
            let mut bottom = self.arith.mul(&self.acc[m], &inv);
            if m % 2 == 1 {
                bottom = self.arith.neg(&bottom);
            }
            let mut block = vec![bottom];
            for _ in 1..d {
                let next = self.arith.mul(block.last().unwrap(), &neg_b);
                block.push(next);
            }
            block.reverse();
            row.extend(block);
        }
        let s = g.index().parts();
        for m in 1..r {
            let tw = self.arith.twist(&g.point()[m - 1], i);
            let inv = self.arith.inv_l_pow(i, s[m - 1])?;
            let step = self.arith.mul(&self.arith.mul(&self.acc[m - 1], &tw), &inv);
            self.acc[m] = self.arith.add(&self.acc[m], &step);
        }
        self.i += 1;
        Ok(row)
    }
}

/// The row P_i (d_1-th row) computed from scratch.
pub fn log_row<R: RowArith>(g: &TModule, arith: R, i: u32) -> Result<Vec<R::V>> {
    let mut s = LogRowStream::new(g, arith);
    for _ in 0..i {
        s.next_row()?;
    }
    s.next_row()
}

/// Truncation plan for Σ_i ⟨row_i, x^{(i)}⟩ with term bound T(i) = c·q^i − d_1⌊i/ε⌋.
///
/// Returns (I, tail) where every term with i ≥ I has valuation ≥ tail ≥ n.
pub fn truncation_plan(c: i64, q: u64, d1: usize, eps: usize, n: i64) -> (u32, i64) {
    let t = |i: u32| -> i64 {
        let pow = (q as i128).saturating_pow(i).min(i64::MAX as i128 / 4) as i64;
        c.saturating_mul(pow).saturating_sub(d1 as i64 * (i as i64 / eps as i64))
    };
    // T is nondecreasing once c·q^i·(q−1) ≥ d_1 at every step of a residue class
    let mut i0 = 0u32;
    while (c as i128) * (q as i128).pow(i0) * (q as i128 - 1) < d1 as i128 {
        i0 += 1;
    }
    let mut j_max = i0;
    while t(j_max) < n {
        j_max += 1;
    }
    let mut first = j_max;
    while first > 0 && t(first - 1) >= n {
        first -= 1;
    }
    let tail = (first..=j_max).map(t).min().unwrap().min(t(j_max + 1));
    (first, tail)
}

/// The d_1-th coordinate of log_G(x) to absolute precision ≥ n.
///
/// `work` is the working precision for x^{(i)} and the Carlitz data; the
/// achieved precision is tracked and an underflow reported when it falls
/// short of `n`.
pub fn log_top_coordinate(g: &TModule, x: &[VAdic], v: &Place, n: i64, work: i64) -> Result<VAdic> {
    if x.iter().all(|c| c.is_exact_zero()) {
        return Ok(VAdic::exact_zero(v));
    }
    let c = x.iter().map(|c| c.ord_lower()).min().unwrap();
    if c < 1 {
        let k = x.iter().position(|c| c.ord_lower() < 1).unwrap();
        return Err(MathError::NotInMaximalIdeal { coordinate: k });
    }
    let d1 = g.blocks()[0];
    let eps = v.degree();
    let (big_i, tail) = truncation_plan(c, v.field().q() as u64, d1, eps, n);
    let alpha = (big_i as i64) / eps as i64;
    let k = work + 2 * d1 as i64 * (alpha + 1);
    let mut stream = LogRowStream::new(g, VadicRows::new(v, k));
    let mut xi: Vec<VAdic> = x.iter().map(|c| c.with_prec(work)).collect();
    let mut sum = VAdic::exact_zero(v);
    for i in 0..big_i {
        let row = stream.next_row()?;
        for (y, xc) in row.iter().zip(&xi) {
            if !xc.is_exact_zero() {
                sum = sum.add(&y.mul(xc));
            }
        }
        if i + 1 < big_i {
            xi = xi.iter().map(|c| c.frobenius(1, Some(work))).collect();
        }
    }
    let out = sum.with_prec(tail);
    if out.prec() < n {
        return Err(MathError::PrecisionUnderflow { achieved: out.prec(), required: n });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carlitz::Index;

    #[test]
    fn row_zero_is_unit_vector() {
        let f = Fq::new(3).unwrap();
        let g = TModule::new(&"2,1".parse().unwrap(), &[Poly::x(f), Poly::one(f)]).unwrap();
        let row = log_row(&g, ExactRows::new(f), 0).unwrap();
        for (k, y) in row.iter().enumerate() {
            let expect = if k == g.blocks()[0] - 1 { RationalK::one(f) } else { RationalK::zero(f) };
            assert_eq!(y, &expect, "k={k}");
        }
    }

    #[test]
    fn depth_one_row_one() {
        let f = Fq::new(2).unwrap();
        let s = 3;
        let g = TModule::new(&Index::new(vec![s]).unwrap(), &[Poly::one(f)]).unwrap();
        let row = log_row(&g, ExactRows::new(f), 1).unwrap();
        let mut ctx = CarlitzContext::new(f);
        let l1s = ctx.l_factor(1).pow(s as u64);
        let b = -&ctx.bracket(1);
        for j in 1..=s as usize {
            let num = b.pow((s as usize - j) as u64);
            assert!(row[j - 1].equals_fraction(&num, &l1s), "j={j}");
        }
    }

    #[test]
    fn plan_matches_worked_bound() {
        // weight-5 module over q = 2, v = θ: T(i) = 2^i − 5i
        let (big_i, tail) = truncation_plan(1, 2, 5, 1, 7);
        for i in big_i as i64..40 {
            assert!((1i64 << i) - 5 * i >= 7);
        }
        assert!((1i64 << (big_i - 1)) - 5 * (big_i as i64 - 1) < 7);
        assert!(tail >= 7);
    }

    #[test]
    fn depth_one_log_matches_series() {
        let f = Fq::new(2).unwrap();
        let th = Place::theta(f);
        let s = 2u32;
        let g = TModule::new(&Index::new(vec![s]).unwrap(), &[Poly::one(f)]).unwrap();
        // x = (θ, θ^2 + θ^3)
        let x = vec![
            VAdic::from_poly(&Poly::from_ints(f, &[0, 1]), &th, 40),
            VAdic::from_poly(&Poly::from_ints(f, &[0, 0, 1, 1]), &th, 40),
        ];
        let got = log_top_coordinate(&g, &x, &th, 12, 40).unwrap();
        // Σ_i ((−[i]) x_1^{q^i} + x_2^{q^i}) / L_i^2, summed naively in k
        let mut ctx = CarlitzContext::new(f);
        let mut acc = RationalK::zero(f);
        for i in 0..8u32 {
            let qi = 2usize.pow(i);
            let b = if i == 0 { Poly::zero(f) } else { ctx.bracket(i) };
            let num = &(&-&b * &Poly::from_ints(f, &[0, 1]).spread(qi)) + &Poly::from_ints(f, &[0, 0, 1, 1]).spread(qi);
            acc = &acc + &RationalK::new(num, ctx.l_factor(i).pow(2)).unwrap();
        }
        assert!(got.agrees_with(&VAdic::from_rational(&acc, &th, 12)));
        assert!(got.prec() >= 12);
    }
}
