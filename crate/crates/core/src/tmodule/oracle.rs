//! Exact full-matrix recurrence for the logarithm coefficients:
//! P_{i+1} = −Σ_{j=0}^{2d_1−2} ad(N)^j(P_i E^{(i)})/[i+1]^{j+1}.
//!
//! Kept over a common denominator: P_i = M_i/δ_i with δ_{i+1} = δ_i·[i+1]^{2d_1−1}.

use super::TModule;
use crate::algebra::{Poly, RationalK};
use crate::carlitz::bracket;
use crate::error::{MathError, Result};

type Mat = Vec<Vec<Poly>>;

pub struct OracleMatrix {
    pub num: Mat,
    pub den: Poly,
}

impl OracleMatrix {
    pub fn entry(&self, a: usize, b: usize) -> RationalK {
        RationalK::new(self.num[a][b].clone(), self.den.clone()).expect("nonzero denominator")
    }

    /// Whether entry (a, b) equals `x`, by cross-multiplication.
    pub fn entry_equals(&self, a: usize, b: usize, x: &RationalK) -> bool {
        x.equals_fraction(&self.num[a][b], &self.den)
    }
}

fn ad_n(g: &TModule, y: &Mat) -> Mat {
    let d = g.dim();
    let f = g.field();
    let mut bottoms = vec![false; d];
    let mut firsts = vec![false; d];
    for (o, b) in g.offsets().iter().zip(g.blocks()) {
        firsts[*o] = true;
        bottoms[o + b - 1] = true;
    }
    let mut out = vec![vec![Poly::zero(f); d]; d];
    for a in 0..d {
        for b in 0..d {
            let ny = if bottoms[a] { None } else { Some(&y[a + 1][b]) };
            let yn = if firsts[b] { None } else { Some(&y[a][b - 1]) };
            out[a][b] = match (ny, yn) {
                (Some(p), Some(q)) => p - q,
                (Some(p), None) => p.clone(),
                (None, Some(q)) => -q,
                (None, None) => Poly::zero(f),
            };
        }
    }
    out
}

/// P_i as an exact matrix; refuses when i·dim exceeds `budget`.
pub fn log_row_oracle(g: &TModule, i: u32, budget: usize) -> Result<OracleMatrix> {
    let d = g.dim();
    if i as usize * d > budget {
        return Err(MathError::CostGuard(format!(
            "full-matrix oracle with i = {i}, d = {d} exceeds budget {budget}"
        )));
    }
    let f = g.field();
    let q = f.q() as usize;
    let r = g.depth();
    let big_j = 2 * g.blocks()[0] - 2;
    let mut m: Mat = (0..d)
        .map(|a| (0..d).map(|b| if a == b { Poly::one(f) } else { Poly::zero(f) }).collect())
        .collect();
    let mut den = Poly::one(f);
    for step in 0..i {
        // X = M·E^{(step)}: only the first column of each block is nonzero
        let tw = q.pow(step);
        let mut x = vec![vec![Poly::zero(f); d]; d];
        for mm in 0..r {
            let col = g.offsets()[mm];
            for l in 0..=mm {
                let e = g.corner(l, mm).spread(tw);
                let bot = g.offsets()[l] + g.blocks()[l] - 1;
                for a in 0..d {
                    if !m[a][bot].is_zero() {
                        x[a][col] = &x[a][col] + &(&m[a][bot] * &e);
                    }
                }
            }
        }
        let b = bracket(f, step + 1);
        let mut z = vec![vec![Poly::zero(f); d]; d];
        let mut adj = x;
        for j in 0..=big_j {
            for a in 0..d {
                for c in 0..d {
                    let zb = if j == 0 || z[a][c].is_zero() { Poly::zero(f) } else { &z[a][c] * &b };
                    z[a][c] = &zb + &adj[a][c];
                }
            }
            if j < big_j {
                adj = ad_n(g, &adj);
            }
        }
        m = z.into_iter().map(|row| row.into_iter().map(|p| -p).collect()).collect();
        den = &den * &b.pow(big_j as u64 + 1);
    }
    Ok(OracleMatrix { num: m, den })
}
