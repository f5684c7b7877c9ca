//! Carlitz multiple star polylogarithms
//! Li⋆_𝔰(𝐮) = Σ_{i_1 ≥ ⋯ ≥ i_r ≥ 0} Π u_j^{q^{i_j}}/L_{i_j}^{s_j},
//! v-adically (direct series and continuation) and at ∞.

use crate::algebra::{binomial_mod_p, Place, Poly, RationalK};
use crate::carlitz::{CarlitzContext, Index, VadicCarlitz};
use crate::error::{MathError, Result};
use crate::local::{InfAdic, VAdic};
use crate::tmodule::logrow::truncation_plan;
use crate::tmodule::{log_top_coordinate, Continuation, TModule};

const MAX_RETRIES: u32 = 3;

/// Runs `f(guard)`, doubling the guard on precision underflow.
pub fn with_retry<T>(initial: i64, mut f: impl FnMut(i64) -> Result<T>) -> Result<T> {
    let mut guard = initial.max(1);
    let mut attempt = 0;
    loop {
        match f(guard) {
            Err(MathError::PrecisionUnderflow { .. }) if attempt < MAX_RETRIES => {
                guard *= 2;
                attempt += 1;
            }
            other => return other,
        }
    }
}

fn check_point(s: &Index, u: &[Poly]) -> Result<()> {
    if s.depth() != u.len() {
        return Err(MathError::InvalidInput(format!(
            "index {s} has depth {} but the point has {} entries",
            s.depth(),
            u.len()
        )));
    }
    Ok(())
}

fn initial_guard(s: &Index, v: &Place, n: i64) -> i64 {
    let q = v.field().q() as u64;
    let (big_i, _) = truncation_plan(1, q, s.weight() as usize, v.degree(), n);
    s.weight() as i64 * ((big_i as i64 + v.degree() as i64 - 1) / v.degree() as i64)
}

/// The direct series with a v-adic first argument and polynomial remaining arguments.
pub fn direct_series(s: &Index, first: &VAdic, rest: &[Poly], v: &Place, n: i64, guard: i64) -> Result<VAdic> {
    if rest.len() + 1 != s.depth() {
        return Err(MathError::InvalidInput("point length does not match the index".into()));
    }
    if first.is_exact_zero() || rest.iter().any(|u| u.is_zero()) {
        return Ok(VAdic::exact_zero(v));
    }
    let c = first.ord_lower();
    if c < 1 {
        return Err(MathError::NotInMaximalIdeal { coordinate: 0 });
    }
    let r = s.depth();
    let sp = s.parts();
    let wt = s.weight() as usize;
    let eps = v.degree();
    let (big_i, tail) = truncation_plan(c, v.field().q() as u64, wt, eps, n);
    let alpha = big_i as i64 / eps as i64;
    let w = n + wt as i64 * alpha + guard;
    let k = w + 2 * wt as i64 * (alpha + 1);
    let mut vc = VadicCarlitz::new(v, k);
    let mut xi = first.with_prec(w);
    let mut tw: Vec<VAdic> = rest.iter().map(|u| VAdic::from_poly(u, v, k)).collect();
    let mut acc = vec![VAdic::exact_zero(v); r];
    for i in 0..big_i {
        let mut inner = VAdic::one(v, crate::local::EXACT);
        for m in (0..r).rev() {
            let base = if m == 0 { &xi } else { &tw[m - 1] };
            let t = base.mul(&vc.inv_l_pow(i, sp[m])?);
            acc[m] = acc[m].add(&t.mul(&inner));
            inner = acc[m].clone();
        }
        if i + 1 < big_i {
            xi = xi.frobenius(1, Some(w));
            tw = tw.iter().map(|x| x.frobenius(1, Some(k))).collect();
        }
    }
    let out = acc[0].with_prec(tail);
    if out.prec() < n {
        return Err(MathError::PrecisionUnderflow { achieved: out.prec(), required: n });
    }
    Ok(out)
}

/// Direct series with a v-adic first argument, with adaptive retry.
pub fn direct_series_auto(s: &Index, first: &VAdic, rest: &[Poly], v: &Place, n: i64) -> Result<VAdic> {
    with_retry(initial_guard(s, v, n), |g| direct_series(s, first, rest, v, n, g))
}

/// Li⋆_𝔰(𝐮)_v by the defining series; needs ord_v(u_1) ≥ 1.
pub fn cmspl_direct_v(s: &Index, u: &[Poly], v: &Place, n: i64) -> Result<VAdic> {
    check_point(s, u)?;
    if u.iter().any(|x| x.is_zero()) {
        return Ok(VAdic::exact_zero(v));
    }
    let w = n + initial_guard(s, v, n) * 4 + s.weight() as i64;
    let first = VAdic::from_poly(&u[0], v, w.max(n + 1));
    if first.ord_lower() < 1 {
        return Err(MathError::NotInMaximalIdeal { coordinate: 0 });
    }
    with_retry(initial_guard(s, v, n), |g| {
        let first = VAdic::from_poly(&u[0], v, n + g * 4 + s.weight() as i64);
        direct_series(s, &first, &u[1..], v, n, g)
    })
}

/// Li⋆ via the continuation polynomial `a`: (−1)^{r−1}/a(θ) times the top
/// coordinate of log_G(ρ_a(𝐯)) for G = G_{𝔰̃,𝐮̃}.
pub fn cmspl_continued_with(s: &Index, u: &[Poly], v: &Place, n: i64, a: &Poly) -> Result<VAdic> {
    check_point(s, u)?;
    if u.iter().any(|x| x.is_zero()) {
        return Ok(VAdic::exact_zero(v));
    }
    let mut rev_u = u.to_vec();
    rev_u.reverse();
    let g = TModule::new(&s.reversed(), &rev_u)?;
    let (continued, prec) = with_retry(initial_guard(s, v, n), |guard| {
        let (big_i, _) = truncation_plan(1, v.field().q() as u64, g.blocks()[0], v.degree(), n);
        let w = n + g.blocks()[0] as i64 * (big_i as i64 / v.degree() as i64) + guard;
        let x = g.continued_point(a, v, w)?;
        let val = log_top_coordinate(&g, &x, v, n, w)?;
        Ok((val, w))
    })?;
    let a_inv = RationalK::new(Poly::one(v.field()), a.clone())?;
    let mut out = continued.mul(&VAdic::from_rational(&a_inv, v, prec.max(continued.prec())));
    if s.depth().is_multiple_of(2) {
        out = out.neg();
    }
    Ok(out)
}

pub fn cmspl_continued_v(s: &Index, u: &[Poly], v: &Place, n: i64, choice: Continuation) -> Result<VAdic> {
    check_point(s, u)?;
    if u.iter().any(|x| x.is_zero()) {
        return Ok(VAdic::exact_zero(v));
    }
    let mut rev_u = u.to_vec();
    rev_u.reverse();
    let g = TModule::new(&s.reversed(), &rev_u)?;
    let a = g.continuation_poly(v, choice);
    cmspl_continued_with(s, u, v, n, &a)
}

/// Dispatch: exact zero if some u_i = 0, direct series when ord_v(u_1) ≥ 1,
/// continuation otherwise.
pub fn cmspl_v(s: &Index, u: &[Poly], v: &Place, n: i64) -> Result<VAdic> {
    check_point(s, u)?;
    if u.iter().any(|x| x.is_zero()) {
        return Ok(VAdic::exact_zero(v));
    }
    if v.residue(&u[0]).is_zero() {
        cmspl_direct_v(s, u, v, n)
    } else {
        cmspl_continued_v(s, u, v, n, Continuation::Minimal)
    }
}

/// Li⋆_𝔰(𝐮) in k_∞ to absolute precision `m`; requires deg u_j < s_j·q/(q−1).
pub fn cmspl_inf(s: &Index, u: &[Poly], m: i64) -> Result<InfAdic> {
    check_point(s, u)?;
    let f = u[0].field();
    let q = f.q() as i64;
    for (j, (x, &sj)) in u.iter().zip(s.parts()).enumerate() {
        if let Some(d) = x.degree() {
            if d as i64 * (q - 1) >= sj as i64 * q {
                return Err(MathError::Divergent { position: j + 1, degree: d });
            }
        }
    }
    if u.iter().any(|x| x.is_zero()) {
        return Ok(InfAdic::exact_zero(f));
    }
    let r = s.depth();
    let sp = s.parts();
    let rest_deg: i64 = u[1..].iter().map(|x| x.degree().unwrap() as i64).sum();
    let d1 = u[0].degree().unwrap() as i64;
    // ord_∞ of u_1^{q^i}/L_i^{s_1}
    let f1 = |i: u32| -> i64 {
        let qi = q.pow(i);
        sp[0] as i64 * (qi * q - q) / (q - 1) - qi * d1
    };
    let mut big_i = 0u32;
    while f1(big_i) - rest_deg < m {
        big_i += 1;
    }
    let w = m + rest_deg + d1 + 2;
    let mut ctx = CarlitzContext::new(f);
    let mut acc = vec![InfAdic::exact_zero(f); r];
    for i in 0..big_i {
        let l = ctx.l_factor(i);
        let qi = (q as usize).pow(i);
        let mut inner = InfAdic::one(f, crate::local::EXACT);
        for mm in (0..r).rev() {
            let t = RationalK::new(u[mm].spread(qi), l.pow(sp[mm] as u64))?;
            let t = InfAdic::from_rational(&t, w);
            acc[mm] = acc[mm].add(&t.mul(&inner));
            inner = acc[mm].clone();
        }
    }
    let out = acc[0].with_prec(m);
    if out.prec() < m {
        return Err(MathError::PrecisionUnderflow { achieved: out.prec(), required: m });
    }
    Ok(out)
}

/// Both sides of the functional equation expressing Li⋆_𝔰(𝐮)_v through
/// star values whose first argument lies in 𝔪_v.
pub struct FunctionalEquation {
    pub lhs: VAdic,
    pub rhs: VAdic,
    pub agree: bool,
}

pub fn functional_equation_rhs(s: &Index, u: &[Poly], v: &Place, n: i64) -> Result<VAdic> {
    check_point(s, u)?;
    let f = v.field();
    let p = f.p() as u64;
    let r = s.depth();
    let mut rev_u = u.to_vec();
    rev_u.reverse();
    let g = TModule::new(&s.reversed(), &rev_u)?;
    let a = g.continuation_poly(v, Continuation::Minimal);
    let dt = g.blocks();
    let wt = s.weight() as i64;
    let th = Poly::x(f);
    with_retry(initial_guard(s, v, n), |guard| {
        let w = n + guard * 4 + 2 * wt;
        let big_v = g.continued_point(&a, v, w)?;
        let mut total = VAdic::exact_zero(v);
        for m in 1..=r {
            let idx1 = s.collapsed(r + 1 - m);
            let idx2 = s.collapsed(r + 2 - m);
            let d = dt[m - 1];
            for j in 0..d {
                let coord = &big_v[g.offsets()[m - 1] + d - j - 1];
                for l in 0..=j {
                    let c = binomial_mod_p(j as u64, l as u64, p);
                    if c == 0 {
                        continue;
                    }
                    let mut coeff = Poly::constant(f, f.from_int(c as i64)).shift(l);
                    if (j + l + m - 1) % 2 == 1 {
                        coeff = -coeff;
                    }
                    let x = coord.mul_poly(&th.pow((j - l) as u64));
                    let mut term = VAdic::exact_zero(v);
                    if let Some(i1) = &idx1 {
                        term = term.add(&direct_series(i1, &x, &u[r + 1 - m..], v, n, guard)?);
                    }
                    if let Some(i2) = &idx2 {
                        let x2 = x.mul_poly(&u[r + 1 - m]);
                        term = term.sub(&direct_series(i2, &x2, &u[r + 2 - m..], v, n, guard)?);
                    }
                    total = total.add(&term.mul_poly(&coeff));
                }
            }
        }
        let a_inv = RationalK::new(Poly::one(f), a.clone())?;
        let mut out = total.mul(&VAdic::from_rational(&a_inv, v, w));
        if r.is_multiple_of(2) {
            out = out.neg();
        }
        if out.prec() < n {
            return Err(MathError::PrecisionUnderflow { achieved: out.prec(), required: n });
        }
        Ok(out)
    })
}

pub fn functional_equation_check(s: &Index, u: &[Poly], v: &Place, n: i64) -> Result<FunctionalEquation> {
    let lhs = cmspl_v(s, u, v, n)?;
    let rhs = functional_equation_rhs(s, u, v, n)?;
    let agree = lhs.agrees_with(&rhs) && lhs.prec().min(rhs.prec()) >= n;
    Ok(FunctionalEquation { lhs, rhs, agree })
}

/// Li⋆_{s1}(u1)·Li⋆_{s2}(u2) = Li⋆_{(s1,s2)}(u1,u2) + Li⋆_{(s2,s1)}(u2,u1) − Li⋆_{s1+s2}(u1u2).
pub fn stuffle_depth1_check(s1: u32, s2: u32, u1: &Poly, u2: &Poly, v: &Place, n: i64) -> Result<bool> {
    for (k, u) in [u1, u2].into_iter().enumerate() {
        if !u.is_zero() && !v.residue(u).is_zero() {
            return Err(MathError::NotInMaximalIdeal { coordinate: k });
        }
    }
    let i1 = Index::new(vec![s1])?;
    let i2 = Index::new(vec![s2])?;
    let i12 = Index::new(vec![s1, s2])?;
    let i21 = Index::new(vec![s2, s1])?;
    let i3 = Index::new(vec![s1 + s2])?;
    let prod = u1 * u2;
    let mut work = n;
    let mut attempt = 0;
    loop {
        let a = cmspl_direct_v(&i1, std::slice::from_ref(u1), v, work)?;
        let b = cmspl_direct_v(&i2, std::slice::from_ref(u2), v, work)?;
        let lhs = a.mul(&b);
        let p12 = cmspl_direct_v(&i12, &[u1.clone(), u2.clone()], v, work)?;
        let p21 = cmspl_direct_v(&i21, &[u2.clone(), u1.clone()], v, work)?;
        let p3 = cmspl_direct_v(&i3, std::slice::from_ref(&prod), v, work)?;
        let rhs = p12.add(&p21).sub(&p3);
        let got = lhs.prec().min(rhs.prec());
        if got >= n || attempt == MAX_RETRIES {
            return Ok(lhs.agrees_with(&rhs) && got >= n);
        }
        work += n - got;
        attempt += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Fq;

    /// Σ_{i_1 ≥ ⋯ ≥ i_r, i_1 < I} Π u_j^{q^{i_j}}/L_{i_j}^{s_j} in k, no DP.
    fn naive(s: &Index, u: &[Poly], big_i: u32) -> RationalK {
        let f = u[0].field();
        let q = f.q() as usize;
        let mut ctx = CarlitzContext::new(f);
        let r = s.depth();
        let mut total = RationalK::zero(f);
        let mut idx = vec![0u32; r];
        loop {
            if idx.windows(2).all(|w| w[0] >= w[1]) {
                let mut t = RationalK::one(f);
                for j in 0..r {
                    let l = ctx.l_factor(idx[j]).pow(s.parts()[j] as u64);
                    t = &t * &RationalK::new(u[j].spread(q.pow(idx[j])), l).unwrap();
                }
                total = &total + &t;
            }
            let mut k = r;
            loop {
                if k == 0 {
                    return total;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < big_i {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    #[test]
    fn direct_matches_naive() {
        let f = Fq::new(2).unwrap();
        let th = Place::theta(f);
        let s: Index = "2".parse().unwrap();
        let u = [Poly::from_ints(f, &[0, 0, 1])];
        let got = cmspl_direct_v(&s, &u, &th, 12).unwrap();
        assert!(got.agrees_with(&VAdic::from_rational(&naive(&s, &u, 6), &th, 12)));
        let s2: Index = "1,2".parse().unwrap();
        let u2 = [Poly::from_ints(f, &[0, 1, 1]), Poly::from_ints(f, &[1, 0, 1])];
        let got2 = cmspl_direct_v(&s2, &u2, &th, 10).unwrap();
        assert!(got2.agrees_with(&VAdic::from_rational(&naive(&s2, &u2, 6), &th, 10)));
        assert!(got2.prec() >= 10);
    }

    #[test]
    fn zero_short_circuit() {
        let f = Fq::new(3).unwrap();
        let th = Place::theta(f);
        let s: Index = "1,2".parse().unwrap();
        let z = cmspl_v(&s, &[Poly::one(f), Poly::zero(f)], &th, 8).unwrap();
        assert!(z.is_exact_zero());
    }

    #[test]
    fn continued_matches_direct() {
        for q in [2, 3] {
            let f = Fq::new(q).unwrap();
            let th = Place::theta(f);
            let s: Index = "2,1".parse().unwrap();
            let u = [Poly::from_ints(f, &[0, 1, 1]), Poly::from_ints(f, &[1, 1])];
            let d = cmspl_direct_v(&s, &u, &th, 8).unwrap();
            let c = cmspl_continued_v(&s, &u, &th, 8, Continuation::Minimal).unwrap();
            assert!(d.agrees_with(&c), "q={q}: {d} vs {c}");
        }
    }

    /// Li⋆_2(1)_θ = 1/(θ^2+1)·Li⋆_2(θ^2)_θ over F_2.
    #[test]
    fn depth_one_prime_power_example() {
        let f = Fq::new(2).unwrap();
        let th = Place::theta(f);
        let s: Index = "2".parse().unwrap();
        let lhs = cmspl_continued_v(&s, &[Poly::one(f)], &th, 10, Continuation::Minimal).unwrap();
        let inner = cmspl_direct_v(&s, &[Poly::from_ints(f, &[0, 0, 1])], &th, 10).unwrap();
        let scale = RationalK::new(Poly::one(f), Poly::from_ints(f, &[1, 0, 1])).unwrap();
        let rhs = inner.mul(&VAdic::from_rational(&scale, &th, 10));
        assert!(lhs.agrees_with(&rhs) && lhs.prec() >= 10, "{lhs} vs {rhs}");
    }

    #[test]
    fn functional_equation_small() {
        let f = Fq::new(2).unwrap();
        let th = Place::theta(f);
        let s: Index = "4,1".parse().unwrap();
        let fe = functional_equation_check(&s, &[Poly::one(f), Poly::one(f)], &th, 8).unwrap();
        assert!(fe.agree, "{} vs {}", fe.lhs, fe.rhs);
    }

    #[test]
    fn stuffle_small() {
        let f = Fq::new(2).unwrap();
        let th = Place::theta(f);
        assert!(stuffle_depth1_check(1, 1, &Poly::x(f), &Poly::x(f), &th, 8).unwrap());
        let f3 = Fq::new(3).unwrap();
        let th3 = Place::theta(f3);
        assert!(stuffle_depth1_check(1, 2, &Poly::x(f3), &Poly::from_ints(f3, &[0, 0, 1]), &th3, 8).unwrap());
        assert!(stuffle_depth1_check(1, 2, &Poly::zero(f3), &Poly::x(f3), &th3, 8).unwrap());
    }

    #[test]
    fn infinite_place() {
        let f = Fq::new(2).unwrap();
        let s: Index = "1".parse().unwrap();
        let x = cmspl_inf(&s, &[Poly::one(f)], 6).unwrap();
        let exact = naive(&s, &[Poly::one(f)], 4);
        assert!(x.agrees_with(&InfAdic::from_rational(&exact, 6)));
        assert!(matches!(
            cmspl_inf(&s, &[Poly::from_ints(f, &[0, 0, 1])], 6),
            Err(MathError::Divergent { position: 1, degree: 2 })
        ));
    }
}
