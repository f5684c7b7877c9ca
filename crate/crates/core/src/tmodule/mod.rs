//! The t-module G_{𝔰,𝐮}: ρ_t = θI + N + Eτ, its special point and ρ-action.

pub mod logrow;
pub mod oracle;

pub use logrow::{log_row, log_top_coordinate, truncation_plan, ExactRows, LogRowStream, RowArith, VadicRows};
pub use oracle::{log_row_oracle, OracleMatrix};

use crate::algebra::{Fq, FqElem, Place, Poly};
use crate::carlitz::Index;
use crate::error::{MathError, Result};
use crate::local::VAdic;

/// Coordinates the ρ-action can run over.
pub trait ModScalar: Clone {
    fn add(&self, o: &Self) -> Self;
    fn mul_poly(&self, a: &Poly) -> Self;
    fn scale(&self, c: FqElem) -> Self;
    /// x^q, optionally truncated to absolute precision `cap`.
    fn frob(&self, cap: Option<i64>) -> Self;
}

impl ModScalar for Poly {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul_poly(&self, a: &Poly) -> Self {
        self * a
    }
    fn scale(&self, c: FqElem) -> Self {
        Poly::scale(self, c)
    }
    fn frob(&self, _cap: Option<i64>) -> Self {
        self.frobenius()
    }
}

impl ModScalar for VAdic {
    fn add(&self, o: &Self) -> Self {
        VAdic::add(self, o)
    }
    fn mul_poly(&self, a: &Poly) -> Self {
        VAdic::mul_poly(self, a)
    }
    fn scale(&self, c: FqElem) -> Self {
        VAdic::scale(self, c)
    }
    fn frob(&self, cap: Option<i64>) -> Self {
        self.frobenius(1, cap)
    }
}

#[derive(Clone, Debug)]
pub struct TModule {
    field: Fq,
    index: Index,
    point: Vec<Poly>,
    blocks: Vec<usize>,
    offsets: Vec<usize>,
    /// corner[ℓ][m] for m ≥ ℓ: (−1)^{m−ℓ} u_ℓ⋯u_{m−1}.
    corner: Vec<Vec<Poly>>,
}

/// Which continuation polynomial to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Continuation {
    /// Smallest ℓ₀ with every u_i mod v in F_{q^ℓ₀}.
    Minimal,
    /// ℓ = ε_v.
    Full,
    /// The minimal choice times an extra factor (v(t)^{d_1 ℓ₀} − 1).
    Extended,
}

impl TModule {
    pub fn new(index: &Index, point: &[Poly]) -> Result<TModule> {
        let r = index.depth();
        if point.len() != r {
            return Err(MathError::InvalidInput(format!(
                "index {index} has depth {r} but the point has {} entries",
                point.len()
            )));
        }
        let field = point[0].field();
        let s = index.parts();
        let blocks: Vec<usize> = (0..r).map(|l| s[l..].iter().sum::<u32>() as usize).collect();
        let mut offsets = Vec::with_capacity(r);
        let mut acc = 0;
        for &b in &blocks {
            offsets.push(acc);
            acc += b;
        }
        let mut corner = vec![Vec::new(); r];
        for l in 0..r {
            let mut c = Poly::one(field);
            for m in l..r {
                if m > l {
                    c = -&(&c * &point[m - 1]);
                }
                corner[l].push(c.clone());
            }
        }
        Ok(TModule { field, index: index.clone(), point: point.to_vec(), blocks, offsets, corner })
    }

    pub fn field(&self) -> Fq {
        self.field
    }

    pub fn index(&self) -> &Index {
        &self.index
    }

    pub fn point(&self) -> &[Poly] {
        &self.point
    }

    pub fn depth(&self) -> usize {
        self.blocks.len()
    }

    /// Block sizes d_ℓ = s_ℓ + ⋯ + s_r.
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// E[ℓm] corner entry (0-based ℓ ≤ m).
    pub fn corner(&self, l: usize, m: usize) -> &Poly {
        &self.corner[l][m - l]
    }

    /// 𝐯_{𝔰,𝐮}: block m bottom holds (−1)^{r−m} u_m⋯u_r.
    pub fn special_point(&self) -> Vec<Poly> {
        let r = self.depth();
        let mut out = vec![Poly::zero(self.field); self.dim()];
        let mut prod = Poly::one(self.field);
        for m in (0..r).rev() {
            prod = &prod * &self.point[m];
            let signed = if (r - 1 - m) % 2 == 1 { -&prod } else { prod.clone() };
            out[self.offsets[m] + self.blocks[m] - 1] = signed;
        }
        out
    }

    /// ρ_t(x) = (θI + N)x + E·x^{(1)}.
    pub fn apply_rho_t<S: ModScalar>(&self, x: &[S], cap: Option<i64>) -> Vec<S> {
        let th = Poly::x(self.field);
        let r = self.depth();
        let mut out = Vec::with_capacity(x.len());
        let firsts: Vec<S> = (0..r).map(|m| x[self.offsets[m]].frob(cap)).collect();
        for l in 0..r {
            let off = self.offsets[l];
            let d = self.blocks[l];
            for j in 0..d {
                let mut y = x[off + j].mul_poly(&th);
                if j + 1 < d {
                    y = y.add(&x[off + j + 1]);
                } else {
                    for m in l..r {
                        y = y.add(&firsts[m].mul_poly(self.corner(l, m)));
                    }
                }
                out.push(y);
            }
        }
        out
    }

    /// ρ_a(x) by Horner; `a` is a polynomial in t over F_q.
    pub fn apply_rho_poly<S: ModScalar>(&self, a: &Poly, x: &[S], cap: Option<i64>) -> Vec<S> {
        let Some(deg) = a.degree() else {
            return x.iter().map(|c| c.scale(FqElem::ZERO)).collect();
        };
        let mut w: Vec<S> = x.iter().map(|c| c.scale(a.coeff(deg))).collect();
        for n in (0..deg).rev() {
            w = self.apply_rho_t(&w, cap);
            let c = a.coeff(n);
            if !c.is_zero() {
                w = w.iter().zip(x).map(|(a, b)| a.add(&b.scale(c))).collect();
            }
        }
        w
    }

    /// Smallest ℓ ≥ 1 dividing ε_v with u_i^{q^ℓ} ≡ u_i (mod v) for all i.
    pub fn minimal_ell(&self, v: &Place) -> usize {
        let eps = v.degree();
        let residues: Vec<Poly> = self.point.iter().map(|u| v.residue(u)).collect();
        (1..=eps)
            .filter(|l| eps.is_multiple_of(*l))
            .find(|&l| residues.iter().all(|u| u.frobenius_pow_mod(l as u32, v.poly()) == *u))
            .unwrap_or(eps)
    }

    /// a(t) = Π_ℓ (v(t)^{d_ℓ·ℓ₀} − 1).
    pub fn continuation_poly(&self, v: &Place, choice: Continuation) -> Poly {
        let ell = match choice {
            Continuation::Minimal | Continuation::Extended => self.minimal_ell(v),
            Continuation::Full => v.degree(),
        };
        let one = Poly::one(self.field);
        let mut a = one.clone();
        for &d in &self.blocks {
            a = &a * &(&v.poly().pow((d * ell) as u64) - &one);
        }
        if choice == Continuation::Extended {
            a = &a * &(&v.poly().pow((self.blocks[0] * ell) as u64) - &one);
        }
        a
    }

    /// ρ_a(𝐯) at working precision `w`, checked to lie in G(𝔪_v).
    pub fn continued_point(&self, a: &Poly, v: &Place, w: i64) -> Result<Vec<VAdic>> {
        let x: Vec<VAdic> = self.special_point().iter().map(|c| VAdic::from_poly(c, v, w)).collect();
        let y = self.apply_rho_poly(a, &x, Some(w));
        for (k, c) in y.iter().enumerate() {
            if c.ord_lower() < 1 {
                return Err(MathError::NotInMaximalIdeal { coordinate: k });
            }
        }
        Ok(y)
    }
}

/// a(θ): the coefficient list of a(t) read as a polynomial in θ.
pub fn eval_at_theta(a: &Poly) -> Poly {
    a.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::binomial_mod_p;

    #[test]
    fn shapes() {
        let f = Fq::new(2).unwrap();
        let one = Poly::one(f);
        let g = TModule::new(&"1,4".parse().unwrap(), &[one.clone(), one.clone()]).unwrap();
        assert_eq!((g.dim(), g.blocks().to_vec()), (9, vec![5, 4]));
        let g1 = TModule::new(&"3".parse().unwrap(), std::slice::from_ref(&one)).unwrap();
        assert_eq!(g1.dim(), 3);
        assert!(g1.corner(0, 0).is_one());
        let u1 = Poly::from_ints(f, &[1, 1]);
        let f3 = Fq::new(3).unwrap();
        let u1_3 = Poly::from_ints(f3, &[1, 1]);
        let g2 = TModule::new(&"1,1".parse().unwrap(), &[u1_3.clone(), Poly::one(f3)]).unwrap();
        assert_eq!(g2.corner(0, 1), &-&u1_3);
        assert!(TModule::new(&"1,1".parse().unwrap(), &[u1]).is_err());
    }

    #[test]
    fn special_point_signs() {
        let f = Fq::new(3).unwrap();
        let u = [Poly::from_ints(f, &[0, 1]), Poly::from_ints(f, &[2]), Poly::from_ints(f, &[1, 1])];
        let g = TModule::new(&"1,2,1".parse().unwrap(), &u).unwrap();
        let p = g.special_point();
        let prod = &(&u[0] * &u[1]) * &u[2];
        assert_eq!(p[g.offsets()[0] + g.blocks()[0] - 1], prod);
        assert_eq!(p[g.offsets()[1] + g.blocks()[1] - 1], -&(&u[1] * &u[2]));
        assert_eq!(p[g.dim() - 1], u[2]);
        assert_eq!(p.iter().filter(|c| !c.is_zero()).count(), 3);
    }

    #[test]
    fn carlitz_case() {
        let f = Fq::new(3).unwrap();
        let x = Poly::from_ints(f, &[1, 2, 1]);
        let g = TModule::new(&"1".parse().unwrap(), &[Poly::one(f)]).unwrap();
        let y = g.apply_rho_t(std::slice::from_ref(&x), None);
        assert_eq!(y[0], &(&x * &Poly::x(f)) + &x.pow(3));
    }

    /// ρ_{t^s − 1}(𝐯_{s,u}) = (C(s,1)θu, …, C(s,s−1)θ^{s−1}u, θ^s u + u^q − u).
    #[test]
    fn depth_one_continuation_image() {
        for q in [2u32, 3] {
            let f = Fq::new(q).unwrap();
            for s in 1..=4usize {
                let u = Poly::from_ints(f, &[1, 1]);
                let g = TModule::new(&Index::new(vec![s as u32]).unwrap(), std::slice::from_ref(&u)).unwrap();
                let th = Place::theta(f);
                let a = g.continuation_poly(&th, Continuation::Minimal);
                let one = Poly::one(f);
                assert_eq!(a, &Poly::monomial(f, FqElem::ONE, s) - &one);
                let img = g.apply_rho_poly(&a, &g.special_point(), None);
                for j in 1..s {
                    let c = f.from_int(binomial_mod_p(s as u64, j as u64, q as u64) as i64);
                    assert_eq!(img[j - 1], (&Poly::monomial(f, c, j) * &u), "q={q} s={s} j={j}");
                }
                let last = &(&Poly::monomial(f, FqElem::ONE, s) * &u) + &(&u.pow(q as u64) - &u);
                assert_eq!(img[s - 1], last);
            }
        }
    }

    #[test]
    fn rho_is_a_ring_action() {
        let f = Fq::new(2).unwrap();
        let u = [Poly::from_ints(f, &[0, 1]), Poly::from_ints(f, &[1, 0, 1])];
        let g = TModule::new(&"2,1".parse().unwrap(), &u).unwrap();
        let x: Vec<Poly> = (0..g.dim()).map(|k| Poly::from_ints(f, &[k as i64 % 2, 1])).collect();
        let y: Vec<Poly> = (0..g.dim()).map(|k| Poly::from_ints(f, &[1, k as i64 % 2])).collect();
        let a = Poly::from_ints(f, &[1, 1, 0, 1]);
        let b = Poly::from_ints(f, &[0, 1, 1]);
        let sum: Vec<Poly> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
        let lhs = g.apply_rho_poly(&a, &sum, None);
        let rx = g.apply_rho_poly(&a, &x, None);
        let ry = g.apply_rho_poly(&a, &y, None);
        assert_eq!(lhs, rx.iter().zip(&ry).map(|(p, q)| p + q).collect::<Vec<_>>());
        let ab = g.apply_rho_poly(&(&a * &b), &x, None);
        let a_b = g.apply_rho_poly(&a, &g.apply_rho_poly(&b, &x, None), None);
        assert_eq!(ab, a_b);
    }

    #[test]
    fn golden_continuation() {
        let f = Fq::new(2).unwrap();
        let one = Poly::one(f);
        let g = TModule::new(&"1,4".parse().unwrap(), &[one.clone(), one.clone()]).unwrap();
        let th = Place::theta(f);
        assert_eq!(g.minimal_ell(&th), 1);
        let a = g.continuation_poly(&th, Continuation::Minimal);
        let t5 = &Poly::monomial(f, FqElem::ONE, 5) - &one;
        let t4 = &Poly::monomial(f, FqElem::ONE, 4) - &one;
        assert_eq!(a, &t5 * &t4);
        g.continued_point(&a, &th, 20).unwrap();
        // a(θ) is a v-adic unit at every place
        assert!(!th.residue(&eval_at_theta(&a)).is_zero());
    }

    #[test]
    fn minimal_ell_over_quadratic_place() {
        let f = Fq::new(2).unwrap();
        let v = Place::new(Poly::from_ints(f, &[1, 1, 1])).unwrap();
        let g = TModule::new(&"1".parse().unwrap(), &[Poly::x(f)]).unwrap();
        assert_eq!(g.minimal_ell(&v), 2);
        let g0 = TModule::new(&"1".parse().unwrap(), &[v.poly().clone()]).unwrap();
        assert_eq!(g0.minimal_ell(&v), 1);
        for choice in [Continuation::Minimal, Continuation::Full, Continuation::Extended] {
            let a = g.continuation_poly(&v, choice);
            g.continued_point(&a, &v, 12).unwrap();
        }
    }
}
