//! Anderson–Thakur polynomials H_n ∈ A[t].

use crate::algebra::{BiPoly, Fq, FqElem, Poly};
use crate::carlitz::{CarlitzContext, Index};
use crate::error::{MathError, Result};

/// An element of F_q[t][θ]: t-polynomial coefficients indexed by θ-degree.
type TTheta = Vec<Poly>;

fn tt_trim(mut a: TTheta) -> TTheta {
    while a.last().is_some_and(|p| p.is_zero()) {
        a.pop();
    }
    a
}

fn tt_add(a: &TTheta, b: &TTheta, f: Fq) -> TTheta {
    let n = a.len().max(b.len());
    let z = Poly::zero(f);
    tt_trim((0..n).map(|j| a.get(j).unwrap_or(&z) + b.get(j).unwrap_or(&z)).collect())
}

fn tt_mul(a: &TTheta, b: &TTheta, f: Fq) -> TTheta {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Poly::zero(f); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    tt_trim(out)
}

fn tt_scale(a: &TTheta, c: &Poly) -> TTheta {
    tt_trim(a.iter().map(|p| p * c).collect())
}

/// F_i = Π_{j=1}^{i} (t^{q^i} − θ^{q^j}).
fn f_factor(f: Fq, i: u32) -> TTheta {
    let q = f.q() as usize;
    let mut acc: TTheta = vec![Poly::one(f)];
    let ti = Poly::monomial(f, FqElem::ONE, q.pow(i));
    for j in 1..=i {
        let mut factor = vec![Poly::zero(f); q.pow(j) + 1];
        factor[0] = ti.clone();
        factor[q.pow(j)] = Poly::constant(f, f.neg(FqElem::ONE));
        acc = tt_mul(&acc, &factor, f);
    }
    acc
}

/// Memoized H_n over one field.
pub struct AtContext {
    carlitz: CarlitzContext,
    h: Vec<TTheta>,
}

impl AtContext {
    pub fn new(field: Fq) -> AtContext {
        AtContext { carlitz: CarlitzContext::new(field), h: vec![vec![Poly::one(field)]] }
    }

    pub fn field(&self) -> Fq {
        self.carlitz.field()
    }

    pub fn carlitz(&mut self) -> &mut CarlitzContext {
        &mut self.carlitz
    }

    fn compute(&mut self, n: usize) -> Result<TTheta> {
        let f = self.field();
        let q = f.q() as usize;
        // terms F_i·H_{n−q^i} / (D_i(t)·Γ_{n−q^i+1}(t)), over a common denominator
        let mut terms = Vec::new();
        let mut i = 0u32;
        while q.pow(i) <= n {
            let m = n - q.pow(i);
            let den = &self.carlitz.d_factor(i) * &self.carlitz.gamma(m as u32 + 1);
            let num = tt_mul(&f_factor(f, i), &self.h[m], f);
            terms.push((num, den));
            i += 1;
        }
        let mut total_den = Poly::one(f);
        for (_, d) in &terms {
            total_den = &total_den * d;
        }
        let mut sum: TTheta = Vec::new();
        for (k, (num, _)) in terms.iter().enumerate() {
            let mut other = Poly::one(f);
            for (l, (_, d)) in terms.iter().enumerate() {
                if l != k {
                    other = &other * d;
                }
            }
            sum = tt_add(&sum, &tt_scale(num, &other), f);
        }
        let gamma = self.carlitz.gamma(n as u32 + 1);
        let sum = tt_scale(&sum, &gamma);
        let g = sum.iter().fold(total_den.clone(), |acc, c| acc.gcd(c));
        let den = total_den.exact_div(&g)?;
        if !den.is_one() && den.degree() != Some(0) {
            return Err(MathError::Invariant(format!("H_{n} has a nontrivial t-denominator {den}")));
        }
        let inv = f.inv(den.lead())?;
        sum.iter()
            .map(|c| Ok(c.exact_div(&g)?.scale(inv)))
            .collect::<Result<Vec<_>>>()
            .map(tt_trim)
    }

    fn ensure(&mut self, n: usize) -> Result<()> {
        while self.h.len() <= n {
            let k = self.h.len();
            let next = self.compute(k)?;
            self.h.push(next);
        }
        Ok(())
    }

    /// H_n as a bivariate polynomial in t and θ.
    pub fn at_poly(&mut self, n: usize) -> Result<BiPoly> {
        self.ensure(n)?;
        Ok(BiPoly::from_theta_coeffs(self.field(), &self.h[n]))
    }

    /// Coefficients u_0, …, u_m ∈ A of H_n = Σ u_j t^j.
    pub fn t_coeffs(&mut self, n: usize) -> Result<Vec<Poly>> {
        Ok(self.at_poly(n)?.t_coeffs())
    }

    /// For each s_i: the coefficient list of H_{s_i − 1}, checked against
    /// the degree bound deg u_ij < s_i·q/(q−1).
    pub fn at_coeffs(&mut self, s: &Index) -> Result<Vec<Vec<Poly>>> {
        let q = self.field().q() as u64;
        s.parts()
            .iter()
            .map(|&si| {
                let c = self.t_coeffs(si as usize - 1)?;
                for u in &c {
                    let d = u.degree().unwrap_or(0) as u64;
                    if d * (q - 1) >= si as u64 * q {
                        return Err(MathError::Invariant(format!(
                            "AT coefficient {u} of H_{} exceeds the degree bound",
                            si - 1
                        )));
                    }
                }
                Ok(c)
            })
            .collect()
    }
}

/// Convenience wrapper: H_n over F_q.
pub fn at_poly(f: Fq, n: usize) -> Result<BiPoly> {
    AtContext::new(f).at_poly(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RationalK;

    #[test]
    fn small_values() {
        let f = Fq::new(2).unwrap();
        let mut ctx = AtContext::new(f);
        assert_eq!(ctx.at_poly(0).unwrap().to_string(), "1");
        assert_eq!(ctx.at_poly(1).unwrap().to_string(), "1");
        assert_eq!(ctx.at_poly(3).unwrap().to_string(), "t^2+t");
        let c = ctx.at_coeffs(&"4,1".parse().unwrap()).unwrap();
        assert_eq!(c[0], vec![Poly::zero(f), Poly::one(f), Poly::one(f)]);
        assert_eq!(c[1], vec![Poly::one(f)]);
        let f3 = Fq::new(3).unwrap();
        let mut c3 = AtContext::new(f3);
        assert_eq!(c3.at_coeffs(&"2".parse().unwrap()).unwrap(), vec![vec![Poly::one(f3)]]);
        assert_eq!(c3.at_coeffs(&"1".parse().unwrap()).unwrap(), vec![vec![Poly::one(f3)]]);
    }

    fn monic_of_degree(f: Fq, d: usize) -> Vec<Poly> {
        let q = f.q() as u64;
        (0..q.pow(d as u32))
            .map(|mut idx| {
                let mut c: Vec<FqElem> = (0..d)
                    .map(|_| {
                        let e = f.elem((idx % q) as u32);
                        idx /= q;
                        e
                    })
                    .collect();
                c.push(FqElem::ONE);
                Poly::new(f, c)
            })
            .collect()
    }

    /// Γ_s·S_d(s) = H_{s−1}^{(d)}(θ)/L_d^s, with H^{(d)} twisting the θ-coefficients.
    #[test]
    fn power_sum_interpolation() {
        for q in [2u32, 3] {
            let f = Fq::new(q).unwrap();
            let mut ctx = AtContext::new(f);
            for s in 1..=6u32 {
                for d in 0..=2usize {
                    let mut sum = RationalK::zero(f);
                    for a in monic_of_degree(f, d) {
                        sum = &sum + &RationalK::new(Poly::one(f), a.pow(s as u64)).unwrap();
                    }
                    let gamma = RationalK::from_poly(ctx.carlitz().gamma(s));
                    let lhs = &gamma * &sum;
                    let coeffs = ctx.t_coeffs(s as usize - 1).unwrap();
                    let mut rhs_num = Poly::zero(f);
                    for (j, u) in coeffs.iter().enumerate() {
                        let tw = u.spread((q as usize).pow(d as u32));
                        rhs_num = &rhs_num + &tw.shift(j);
                    }
                    let l = ctx.carlitz().l_factor(d as u32).pow(s as u64);
                    assert!(lhs.equals_fraction(&rhs_num, &l), "q={q} s={s} d={d}");
                }
            }
        }
    }

    #[test]
    fn degree_bound_holds() {
        for q in [2u32, 3] {
            let f = Fq::new(q).unwrap();
            let mut ctx = AtContext::new(f);
            for s in 1..=10u32 {
                ctx.at_coeffs(&Index::new(vec![s]).unwrap()).unwrap();
            }
        }
    }
}
