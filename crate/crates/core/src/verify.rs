//! Self-check suites: each case is a named PASS/FAIL with a short detail string.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{enumerate_places, Fq, FqElem, Place, Poly};
use crate::carlitz::Index;
use crate::cmspl::{cmspl_continued_v, cmspl_continued_with, cmspl_direct_v, functional_equation_check, stuffle_depth1_check};
use crate::error::Result;
use crate::mzv::{zeta_inf_cmspl, zeta_inf_series, zeta_v, Verdict, DEFAULT_BUDGET};
use crate::tmodule::{Continuation, TModule};

#[derive(Clone, Debug)]
pub struct Case {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Case {
    fn from_result(name: String, r: Result<(bool, String)>) -> Case {
        match r {
            Ok((pass, detail)) => Case { name, pass, detail },
            Err(e) => Case { name, pass: false, detail: format!("error: {e}") },
        }
    }
}

pub const SUITES: [&str; 5] = ["funceq", "stuffle", "avals", "bounds", "dualinf"];

pub fn run_suite(name: &str, seed: u64) -> Option<Vec<Case>> {
    Some(match name {
        "funceq" => funceq(),
        "stuffle" => stuffle(seed, 10),
        "avals" => avals(seed, 20, 10),
        "bounds" => bounds(6),
        "dualinf" => dualinf(5),
        _ => return None,
    })
}

pub fn random_poly(rng: &mut ChaCha8Rng, f: Fq, max_deg: usize) -> Poly {
    let d = rng.gen_range(0..=max_deg);
    let c: Vec<FqElem> = (0..=d).map(|_| f.elem(rng.gen_range(0..f.q()))).collect();
    Poly::new(f, c)
}

pub fn random_nonzero(rng: &mut ChaCha8Rng, f: Fq, max_deg: usize) -> Poly {
    loop {
        let p = random_poly(rng, f, max_deg);
        if !p.is_zero() {
            return p;
        }
    }
}

fn random_index(rng: &mut ChaCha8Rng, max_wt: u32, max_depth: usize) -> Index {
    loop {
        let r = rng.gen_range(1..=max_depth);
        let parts: Vec<u32> = (0..r).map(|_| rng.gen_range(1..=max_wt)).collect();
        if parts.iter().sum::<u32>() <= max_wt {
            return Index::new(parts).unwrap();
        }
    }
}

/// All 𝔰 with wt ≤ 5, q ∈ {2,3}, 𝐮 ∈ {0,1,θ}^r, v ∈ {θ, θ+1}, at precision 8.
pub fn funceq() -> Vec<Case> {
    let mut out = Vec::new();
    for q in [2u32, 3] {
        let f = Fq::new(q).unwrap();
        let cands = [Poly::zero(f), Poly::one(f), Poly::x(f)];
        let places = [Place::theta(f), Place::parse(f, "T+1").unwrap()];
        for w in 1..=5 {
            for s in Index::compositions(w) {
                let r = s.depth();
                for code in 0..3usize.pow(r as u32) {
                    let u: Vec<Poly> = (0..r).map(|i| cands[(code / 3usize.pow(i as u32)) % 3].clone()).collect();
                    for v in &places {
                        let name = format!("funceq q={q} v={v} s={s} u=({})", join(&u));
                        let r = functional_equation_check(&s, &u, v, 8).map(|fe| {
                            (fe.agree, format!("lhs={} rhs={}", fe.lhs, fe.rhs))
                        });
                        out.push(Case::from_result(name, r));
                    }
                }
            }
        }
    }
    out
}

fn join(u: &[Poly]) -> String {
    u.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
}

/// Depth-one stuffle with u1, u2 ∈ vA, `per_q` cases for each q ∈ {2,3}.
pub fn stuffle(seed: u64, per_q: usize) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for q in [2u32, 3] {
        let f = Fq::new(q).unwrap();
        let places = enumerate_places(f, 2);
        for _ in 0..per_q {
            let v = places[rng.gen_range(0..places.len())].clone();
            let s1 = rng.gen_range(1..=3);
            let s2 = rng.gen_range(1..=3);
            let u1 = v.poly() * &random_nonzero(&mut rng, f, 1);
            let u2 = v.poly() * &random_nonzero(&mut rng, f, 1);
            let name = format!("stuffle q={q} v={v} s=({s1},{s2}) u=({u1},{u2})");
            let r = stuffle_depth1_check(s1, s2, &u1, &u2, &v, 8).map(|ok| (ok, String::new()));
            out.push(Case::from_result(name, r));
        }
    }
    out
}

/// Continuation consistency (`n_cons` cases) and a(t)-independence (`n_indep` cases).
pub fn avals(seed: u64, n_cons: usize, n_indep: usize) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for k in 0..n_cons {
        let q = [2u32, 3][k % 2];
        let f = Fq::new(q).unwrap();
        let places = enumerate_places(f, 2);
        let v = places[rng.gen_range(0..places.len())].clone();
        let s = random_index(&mut rng, 4, 2);
        let mut u: Vec<Poly> = (0..s.depth()).map(|_| random_nonzero(&mut rng, f, 2)).collect();
        u[0] = v.poly() * &random_nonzero(&mut rng, f, 1);
        let name = format!("continued=direct q={q} v={v} s={s} u=({})", join(&u));
        let r = (|| {
            let a = cmspl_direct_v(&s, &u, &v, 8)?;
            let b = cmspl_continued_v(&s, &u, &v, 8, Continuation::Minimal)?;
            let ok = a.agrees_with(&b) && a.prec().min(b.prec()) >= 8;
            Ok((ok, format!("direct={a} continued={b}")))
        })();
        out.push(Case::from_result(name, r));
    }
    for k in 0..n_indep {
        let q = [2u32, 3][k % 2];
        let f = Fq::new(q).unwrap();
        let places = enumerate_places(f, 2);
        let v = places[rng.gen_range(0..places.len())].clone();
        let s = random_index(&mut rng, 4, 2);
        let u: Vec<Poly> = (0..s.depth()).map(|_| random_nonzero(&mut rng, f, 2)).collect();
        let name = format!("a-independence q={q} v={v} s={s} u=({})", join(&u));
        let r = (|| {
            let mut rev = u.clone();
            rev.reverse();
            let g = TModule::new(&s.reversed(), &rev)?;
            let a1 = g.continuation_poly(&v, Continuation::Minimal);
            let a2 = g.continuation_poly(&v, Continuation::Extended);
            let x = cmspl_continued_with(&s, &u, &v, 8, &a1)?;
            let y = cmspl_continued_with(&s, &u, &v, 8, &a2)?;
            let ok = a1 != a2 && x.agrees_with(&y) && x.prec().min(y.prec()) >= 8;
            Ok((ok, format!("{x} vs {y}")))
        })();
        out.push(Case::from_result(name, r));
    }
    out
}

/// ord_v ζ_A(𝔰)_v ≥ bound and the integrality criterion, all 𝔰 with wt ≤ max_wt, q ∈ {2,3}, deg v ≤ 2.
pub fn bounds(max_wt: u32) -> Vec<Case> {
    let mut out = Vec::new();
    for q in [2u32, 3] {
        let f = Fq::new(q).unwrap();
        let places = enumerate_places(f, 2);
        for w in 1..=max_wt {
            for s in Index::compositions(w) {
                let cases: Vec<Case> = {
                    use rayon::prelude::*;
                    places
                        .par_iter()
                        .map(|v| {
                            let name = format!("bound q={q} v={v} s={s}");
                            let r = zeta_v(&s, v, 8).map(|m| {
                                let meets = m.meets_bound() == Some(true);
                                let integral_ok = !m.criterion || m.integral == Verdict::True;
                                (meets && integral_ok, format!("value={} bound={} criterion={}", m.value, m.bound, m.criterion))
                            });
                            Case::from_result(name, r)
                        })
                        .collect()
                };
                out.extend(cases);
            }
        }
    }
    out
}

/// zeta_inf_series == zeta_inf_cmspl to precision 8, all 𝔰 with wt ≤ max_wt, q ∈ {2,3}.
pub fn dualinf(max_wt: u32) -> Vec<Case> {
    let mut out = Vec::new();
    for q in [2u32, 3] {
        let f = Fq::new(q).unwrap();
        for w in 1..=max_wt {
            for s in Index::compositions(w) {
                let name = format!("dualinf q={q} s={s}");
                let r = (|| {
                    let a = zeta_inf_series(&s, f, 8, DEFAULT_BUDGET)?;
                    let b = zeta_inf_cmspl(&s, f, 8)?;
                    Ok((a.agrees_with(&b) && a.prec().min(b.prec()) >= 8, format!("series={a} cmspl={b}")))
                })();
                out.push(Case::from_result(name, r));
            }
        }
    }
    out
}
