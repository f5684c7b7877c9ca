//! v-adic, ∞-adic, finite and adelic multiple zeta values.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{enumerate_places, ord_poly, Fq, FqElem, Place, Poly, RationalK};
use crate::andersonthakur::AtContext;
use crate::carlitz::{mzv_bound, CarlitzContext, Index};
use crate::cmspl::{cmspl_inf, cmspl_v};
use crate::error::{MathError, Result};
use crate::local::{Digit, InfAdic, VAdic};

/// Default cap on enumeration sizes (number of monic polynomials or tuples).
pub const DEFAULT_BUDGET: u64 = 1 << 22;

/// One term b·Li⋆_{index}(point) of the decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompTriple {
    pub b: Poly,
    pub index: Index,
    pub point: Vec<Poly>,
}

/// Applies a word in {0,1}^{r−1} (1 = merge with the previous entry).
fn collapse(s: &[u32], u: &[Poly], word: u64) -> (Index, Vec<Poly>) {
    let r = s.len();
    let mut parts = vec![s[0]];
    let mut pts = vec![u[0].clone()];
    for k in 1..r {
        let bit = (word >> (r - 1 - k)) & 1;
        if bit == 1 {
            *parts.last_mut().unwrap() += s[k];
            let last = pts.last_mut().unwrap();
            *last = &*last * &u[k];
        } else {
            parts.push(s[k]);
            pts.push(u[k].clone());
        }
    }
    (Index::new(parts).expect("positive parts"), pts)
}

/// All triples (b, 𝔰_ℓ, 𝐮_ℓ): 𝐣 in lexicographic order, then words as binary numbers.
pub fn decompose_index(s: &Index, ctx: &mut AtContext) -> Result<Vec<DecompTriple>> {
    let f = ctx.field();
    let coeffs = ctx.at_coeffs(s)?;
    let r = s.depth();
    let mut out = Vec::new();
    let mut j = vec![0usize; r];
    loop {
        let u: Vec<Poly> = (0..r).map(|i| coeffs[i][j[i]].clone()).collect();
        let jsum: usize = j.iter().sum();
        let mut b = Poly::x(f).pow(jsum as u64);
        if r.is_multiple_of(2) {
            b = -&b;
        }
        for word in 0..(1u64 << (r - 1)) {
            let (index, point) = collapse(s.parts(), &u, word);
            out.push(DecompTriple { b: b.clone(), index, point });
        }
        let mut k = r;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            j[k] += 1;
            if j[k] < coeffs[k].len() {
                break;
            }
            j[k] = 0;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct MzvResult {
    pub index: Index,
    pub place: Place,
    pub value: VAdic,
    pub bound: Ratio<i64>,
    pub criterion: bool,
    pub integral: Verdict,
}

impl MzvResult {
    /// Whether ord_v ≥ bound is certified; `None` when the precision is too low to tell.
    pub fn meets_bound(&self) -> Option<bool> {
        match self.value.ord() {
            Ok(o) => Some(Ratio::from_integer(o) >= self.bound),
            Err(_) if Ratio::from_integer(self.value.prec()) >= self.bound => Some(true),
            Err(_) => None,
        }
    }

    pub fn row(&self) -> MzvRow {
        MzvRow {
            q: self.place.field().q(),
            place: self.place.poly().to_string(),
            index: self.index.parts().to_vec(),
            abs_precision: self.value.prec(),
            valuation: self.value.ord().ok(),
            digits: self.value.digits_json(),
            bound: self.bound.to_string(),
            criterion: self.criterion,
            integral: self.integral,
            error: None,
        }
    }
}

/// One output row, shared by JSON and CSV renderers.
#[derive(Clone, Debug, Serialize)]
pub struct MzvRow {
    pub q: u32,
    pub place: String,
    pub index: Vec<u32>,
    pub abs_precision: i64,
    pub valuation: Option<i64>,
    pub digits: Vec<Digit>,
    pub bound: String,
    pub criterion: bool,
    pub integral: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// ζ_A(𝔰)_v computed to absolute precision n; the reported value keeps n
/// significant digits when its valuation is negative.
pub fn zeta_v(s: &Index, v: &Place, n: i64) -> Result<MzvResult> {
    if n < 1 {
        return Err(MathError::InvalidInput("precision must be at least 1".into()));
    }
    let f = v.field();
    let mut ctx = AtContext::new(f);
    let triples = decompose_index(s, &mut ctx)?;
    let gamma = ctx.carlitz().gamma_index(s);
    let g = ord_poly(&gamma, v).expect("Γ is nonzero") as i64;
    let target = n + g;
    let mut total = VAdic::exact_zero(v);
    for t in &triples {
        if t.point.iter().any(|u| u.is_zero()) {
            continue;
        }
        let mut li = cmspl_v(&t.index, &t.point, v, target)?.mul_poly(&t.b);
        if t.index.depth() % 2 == 0 {
            li = li.neg();
        }
        total = total.add(&li);
    }
    let gamma_v = VAdic::from_poly(&gamma, v, target + 2 * g + 1);
    let value = total.div(&gamma_v)?;
    let keep = value.ord().map(|o| n + o.min(0)).unwrap_or(n);
    if value.prec() < keep {
        return Err(MathError::PrecisionUnderflow { achieved: value.prec(), required: keep });
    }
    let value = value.with_prec(keep);
    let (bound, criterion) = mzv_bound(s, v);
    let integral = match value.ord() {
        Ok(o) if o >= 0 => Verdict::True,
        Ok(_) => Verdict::False,
        Err(_) if value.prec() >= 0 => Verdict::True,
        Err(_) => Verdict::Unknown,
    };
    Ok(MzvResult { index: s.clone(), place: v.clone(), value, bound, criterion, integral })
}

fn monic_polys(f: Fq, d: usize) -> impl Iterator<Item = Poly> {
    let q = f.q() as u64;
    (0..q.pow(d as u32)).map(move |mut idx| {
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
}

fn guard(what: &str, count: u64, budget: u64) -> Result<()> {
    if count > budget {
        return Err(MathError::CostGuard(format!("{what} needs {count} terms, budget is {budget}")));
    }
    Ok(())
}

fn monic_count(f: Fq, d: usize) -> u64 {
    (f.q() as u64).checked_pow(d as u32).unwrap_or(u64::MAX)
}

/// S_d(s) = Σ_{a monic, deg a = d} a^{−s} in k_∞ to precision m.
pub fn power_sum(f: Fq, d: usize, s: u32, m: i64, budget: u64) -> Result<InfAdic> {
    guard("power sum", monic_count(f, d), budget)?;
    let mut acc = InfAdic::exact_zero(f).with_prec(m);
    for a in monic_polys(f, d) {
        let x = RationalK::new(Poly::one(f), a.pow(s as u64))?;
        acc = acc.add(&InfAdic::from_rational(&x, m));
    }
    Ok(acc)
}

/// ζ_A(𝔰) in k_∞ by summing power sums over d_1 > ⋯ > d_r ≥ 0.
pub fn zeta_inf_series(s: &Index, f: Fq, m: i64, budget: u64) -> Result<InfAdic> {
    let r = s.depth();
    let sp = s.parts();
    let mut acc = InfAdic::exact_zero(f).with_prec(m.max(0));
    if m <= 0 {
        return Ok(acc);
    }
    let mut cache: std::collections::HashMap<(usize, u32), InfAdic> = Default::default();
    // enumerate decreasing degree tuples, pruned by the lower bound Σ d_i s_i on ord_∞
    fn rec(
        k: usize,
        upper: usize,
        lower_ord: i64,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        sp: &[u32],
        m: i64,
    ) {
        let r = sp.len();
        if k == r {
            out.push(cur.clone());
            return;
        }
        let min_d = r - k - 1;
        for d in min_d..upper {
            let o = lower_ord + (d as i64) * sp[k] as i64;
            if o >= m {
                break;
            }
            cur.push(d);
            rec(k + 1, d, o, cur, out, sp, m);
            cur.pop();
        }
    }
    let mut tuples = Vec::new();
    rec(0, m as usize + r, 0, &mut Vec::new(), &mut tuples, sp, m);
    for t in tuples {
        let mut term = InfAdic::one(f, crate::local::EXACT);
        for i in 0..r {
            let key = (t[i], sp[i]);
            if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
                e.insert(power_sum(f, t[i], sp[i], m, budget)?);
            }
            term = term.mul(&cache[&key]);
        }
        acc = acc.add(&term.with_prec(m));
    }
    Ok(acc)
}

/// ζ_A(𝔰) in k_∞ via the decomposition and ∞-adic star polylogarithms.
pub fn zeta_inf_cmspl(s: &Index, f: Fq, m: i64) -> Result<InfAdic> {
    let mut ctx = AtContext::new(f);
    let triples = decompose_index(s, &mut ctx)?;
    let gamma = ctx.carlitz().gamma_index(s);
    let g = gamma.degree().unwrap() as i64;
    let mut total = InfAdic::exact_zero(f);
    for t in &triples {
        if t.point.iter().any(|u| u.is_zero()) {
            continue;
        }
        let jb = t.b.degree().unwrap() as i64;
        let mut li = cmspl_inf(&t.index, &t.point, m - g + jb)?.mul(&InfAdic::from_poly(&t.b, m + jb + 8));
        if t.index.depth() % 2 == 0 {
            li = li.neg();
        }
        total = total.add(&li);
    }
    Ok(total.div(&InfAdic::from_poly(&gamma, m + g + 8))?.with_prec(m))
}

/// Residue of Σ Π a_i^{−s_i} over monic a_i with deg v > deg a_1 > ⋯ > deg a_r, in A/vA.
pub fn finite_zeta(s: &Index, v: &Place, budget: u64) -> Result<Poly> {
    let f = v.field();
    let dv = v.degree();
    let r = s.depth();
    if r > dv {
        return Ok(Poly::zero(f));
    }
    let total: u64 = (0..dv).map(|d| monic_count(f, d)).sum();
    guard("finite zeta", total.saturating_pow(r as u32), budget)?;
    let inv_pows: Vec<Vec<(usize, Poly)>> = (0..r)
        .map(|i| {
            (0..dv)
                .flat_map(|d| monic_polys(f, d).map(move |a| (d, a)))
                .map(|(d, a)| {
                    let x = a.pow(s.parts()[i] as u64).inv_mod(v.poly()).expect("a coprime to v");
                    (d, x)
                })
                .collect()
        })
        .collect();
    fn rec(k: usize, upper: usize, prod: Poly, inv: &[Vec<(usize, Poly)>], v: &Poly, acc: &mut Poly) {
        if k == inv.len() {
            *acc = &*acc + &prod;
            return;
        }
        for (d, x) in &inv[k] {
            if *d < upper {
                rec(k + 1, *d, prod.mul_mod(x, v), inv, v, acc);
            }
        }
    }
    let mut acc = Poly::zero(f);
    rec(0, dv, Poly::one(f), &inv_pows, v.poly(), &mut acc);
    Ok(acc.rem_monic(v.poly()))
}

/// The same residue assembled degree by degree: Σ_{d_1>⋯>d_r} Π S_{d_i}(s_i) mod v.
pub fn finite_zeta_by_degree(s: &Index, v: &Place, budget: u64) -> Result<Poly> {
    let f = v.field();
    let dv = v.degree();
    let r = s.depth();
    let total: u64 = (0..dv).map(|d| monic_count(f, d)).sum();
    guard("finite zeta", total.saturating_mul(r as u64), budget)?;
    // sums[i][d] = S_d(s_i) mod v
    let sums: Vec<Vec<Poly>> = s
        .parts()
        .iter()
        .map(|&si| {
            (0..dv)
                .map(|d| {
                    monic_polys(f, d).fold(Poly::zero(f), |acc, a| {
                        &acc + &a.pow(si as u64).inv_mod(v.poly()).expect("a coprime to v")
                    })
                })
                .collect()
        })
        .collect();
    // dp[d] = Σ over tuples for positions k.. with first degree exactly d
    let mut dp: Vec<Poly> = sums[r - 1].clone();
    for k in (0..r - 1).rev() {
        let mut next = vec![Poly::zero(f); dv];
        let mut prefix = Poly::zero(f);
        for d in 0..dv {
            next[d] = sums[k][d].mul_mod(&prefix, v.poly());
            prefix = &prefix + &dp[d];
        }
        dp = next;
    }
    Ok(dp.iter().fold(Poly::zero(f), |a, b| &a + b).rem_monic(v.poly()))
}

/// One scan row: the place and either its result or the error message.
pub struct ScanRow {
    pub place: Place,
    pub result: std::result::Result<MzvResult, MathError>,
}

impl ScanRow {
    pub fn row(&self, s: &Index) -> MzvRow {
        match &self.result {
            Ok(r) => r.row(),
            Err(e) => {
                let (bound, criterion) = mzv_bound(s, &self.place);
                MzvRow {
                    q: self.place.field().q(),
                    place: self.place.poly().to_string(),
                    index: s.parts().to_vec(),
                    abs_precision: 0,
                    valuation: None,
                    digits: Vec::new(),
                    bound: bound.to_string(),
                    criterion,
                    integral: Verdict::Unknown,
                    error: Some(e.to_string()),
                }
            }
        }
    }
}

/// ζ_A(𝔰)_v at every place of degree ≤ max_deg, in place order.
pub fn adelic_scan(s: &Index, f: Fq, max_deg: usize, n: i64) -> Vec<ScanRow> {
    enumerate_places(f, max_deg)
        .into_par_iter()
        .map(|place| {
            let result = zeta_v(s, &place, n);
            ScanRow { place, result }
        })
        .collect()
}

/// Γ_𝔰 for reporting.
pub fn gamma_index(f: Fq, s: &Index) -> Poly {
    CarlitzContext::new(f).gamma_index(s)
}
