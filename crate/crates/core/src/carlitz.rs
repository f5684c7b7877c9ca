//! Carlitz quantities [i], D_i, L_i, Γ, their valuations and the integrality bounds.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::algebra::{Fq, FqElem, Place, Poly};
use crate::error::{MathError, Result};
use crate::local::VAdic;

/// An index 𝔰 = (s_1, …, s_r) of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Index {
    parts: Vec<u32>,
}

impl Index {
    pub fn new(parts: Vec<u32>) -> Result<Index> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(MathError::InvalidInput(format!("index must be nonempty and positive: {parts:?}")));
        }
        Ok(Index { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.parts.len()
    }

    pub fn height(&self) -> usize {
        self.parts.iter().filter(|&&s| s != 1).count()
    }

    pub fn reversed(&self) -> Index {
        let mut p = self.parts.clone();
        p.reverse();
        Index { parts: p }
    }

    /// 𝔰_{(i)} = (s_1+⋯+s_i, s_{i+1}, …, s_r); `None` (the empty index) when i < 1 or i > r.
    pub fn collapsed(&self, i: usize) -> Option<Index> {
        if i == 0 || i > self.parts.len() {
            return None;
        }
        let mut p = vec![self.parts[..i].iter().sum()];
        p.extend_from_slice(&self.parts[i..]);
        Some(Index { parts: p })
    }

    /// All compositions of `w`, in lexicographic order.
    pub fn compositions(w: u32) -> Vec<Index> {
        fn rec(rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Index>) {
            if rest == 0 {
                out.push(Index { parts: cur.clone() });
                return;
            }
            for s in 1..=rest {
                cur.push(s);
                rec(rest - s, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if w > 0 {
            rec(w, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl FromStr for Index {
    type Err = MathError;
    fn from_str(s: &str) -> Result<Index> {
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| MathError::Parse(format!("bad index entry {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Index::new(parts)
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl fmt::Debug for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Index{self}")
    }
}

/// [i] = θ^{q^i} − θ.
pub fn bracket(f: Fq, i: u32) -> Poly {
    let deg = (f.q() as usize).pow(i);
    &Poly::monomial(f, FqElem::ONE, deg) - &Poly::x(f)
}

/// Memo tables for D_i, L_i and Γ_n over one field.
pub struct CarlitzContext {
    field: Fq,
    d: Vec<Poly>,
    l: Vec<Poly>,
}

impl CarlitzContext {
    pub fn new(field: Fq) -> CarlitzContext {
        let one = Poly::one(field);
        CarlitzContext { field, d: vec![one.clone()], l: vec![one] }
    }

    pub fn field(&self) -> Fq {
        self.field
    }

    pub fn bracket(&self, i: u32) -> Poly {
        bracket(self.field, i)
    }

    /// D_i = [i]·D_{i−1}^q.
    pub fn d_factor(&mut self, i: u32) -> Poly {
        while self.d.len() <= i as usize {
            let k = self.d.len() as u32;
            let next = &bracket(self.field, k) * &self.d[k as usize - 1].frobenius();
            self.d.push(next);
        }
        self.d[i as usize].clone()
    }

    /// L_i = (−1)^i [i][i−1]⋯[1].
    pub fn l_factor(&mut self, i: u32) -> Poly {
        while self.l.len() <= i as usize {
            let k = self.l.len() as u32;
            let next = -&(&self.l[k as usize - 1] * &bracket(self.field, k));
            self.l.push(next);
        }
        self.l[i as usize].clone()
    }

    /// Γ_n = Π D_j^{n_j} over the base-q digits of n − 1.
    pub fn gamma(&mut self, n: u32) -> Poly {
        assert!(n >= 1, "Γ_n needs n ≥ 1");
        let q = self.field.q();
        let mut m = n - 1;
        let mut j = 0;
        let mut acc = Poly::one(self.field);
        while m > 0 {
            let digit = m % q;
            if digit > 0 {
                acc = &acc * &self.d_factor(j).pow(digit as u64);
            }
            m /= q;
            j += 1;
        }
        acc
    }

    /// Γ_𝔰 = Π Γ_{s_i}.
    pub fn gamma_index(&mut self, s: &Index) -> Poly {
        let mut acc = Poly::one(self.field);
        for &si in s.parts() {
            acc = &acc * &self.gamma(si);
        }
        acc
    }
}

/// (ord_v D_i, ord_v L_i) in closed form: with i = α·ε_v + β,
/// ord D_i = q^β (q_v^α − 1)/(q_v − 1) and ord L_i = α.
pub fn ord_closed(i: u32, v: &Place) -> (u128, u64) {
    let eps = v.degree() as u32;
    let (alpha, beta) = (i / eps, i % eps);
    let q = v.field().q() as u128;
    let qv = v.residue_size() as u128;
    let ord_d = q.pow(beta) * (qv.pow(alpha) - 1) / (qv - 1);
    (ord_d, alpha as u64)
}

/// (wt − dep − ht)/(q_v − 1), an upper bound for ord_v Γ_𝔰.
pub fn gamma_ord_bound(s: &Index, v: &Place) -> Ratio<i64> {
    let num = s.weight() as i64 - s.depth() as i64 - s.height() as i64;
    Ratio::new(num, v.residue_size() as i64 - 1)
}

/// B_{w,v} = min_{n ≥ 0} (q_v^n − n·w).
pub fn b_weight(w: u32, qv: u64) -> i128 {
    let (w, qv) = (w as i128, qv as i128);
    let mut best = 1i128;
    let mut pow = 1i128;
    let mut n = 0i128;
    loop {
        best = best.min(pow - n * w);
        if pow * (qv - 1) > w {
            break;
        }
        pow *= qv;
        n += 1;
    }
    best
}

/// The lower bound B_{wt,v} − (wt − dep − ht)/(q_v − 1) for ord_v ζ_A(𝔰)_v,
/// with the integrality criterion q_v ≥ wt.
pub fn mzv_bound(s: &Index, v: &Place) -> (Ratio<i64>, bool) {
    let b = b_weight(s.weight(), v.residue_size()) as i64;
    let bound = Ratio::from_integer(b) - gamma_ord_bound(s, v);
    (bound, v.residue_size() >= s.weight() as u64)
}

/// Carlitz quantities reduced at a place, with θ^{q^i} cached modulo v^K.
///
/// Every value handed out is an exact element of A seen to absolute
/// precision `K`; inverses lose precision according to the usual rules.
pub struct VadicCarlitz {
    place: Place,
    k: i64,
    theta_frob: Vec<Poly>,
    l: Vec<VAdic>,
    inv_l: std::collections::HashMap<(u32, u32), VAdic>,
}

impl VadicCarlitz {
    pub fn new(place: &Place, k: i64) -> VadicCarlitz {
        let f = place.field();
        let k = k.max(1);
        let th = place.reduce(&Poly::x(f), k as usize);
        VadicCarlitz {
            place: place.clone(),
            k,
            theta_frob: vec![th],
            l: vec![VAdic::one(place, k)],
            inv_l: std::collections::HashMap::new(),
        }
    }

    pub fn place(&self) -> &Place {
        &self.place
    }

    pub fn prec(&self) -> i64 {
        self.k
    }

    fn theta_q(&mut self, i: u32) -> &Poly {
        while self.theta_frob.len() <= i as usize {
            let last = self.theta_frob.last().unwrap();
            let next = self.place.reduce(&last.frobenius(), self.k as usize);
            self.theta_frob.push(next);
        }
        &self.theta_frob[i as usize]
    }

    /// [i] mod v^K.
    pub fn bracket(&mut self, i: u32) -> VAdic {
        let f = self.place.field();
        let k = self.k;
        let p = self.theta_q(i) - &Poly::x(f);
        VAdic::from_poly(&p, &self.place.clone(), k)
    }

    /// L_i mod v^K (relative to its valuation the precision is at least K − α).
    pub fn l_factor(&mut self, i: u32) -> VAdic {
        while self.l.len() <= i as usize {
            let j = self.l.len() as u32;
            let b = self.bracket(j);
            let next = self.l[j as usize - 1].mul(&b).neg();
            self.l.push(next);
        }
        self.l[i as usize].clone()
    }

    /// 1/L_i^e.
    pub fn inv_l_pow(&mut self, i: u32, e: u32) -> Result<VAdic> {
        if let Some(x) = self.inv_l.get(&(i, e)) {
            return Ok(x.clone());
        }
        let x = self.l_factor(i).pow(e as u64).inv()?;
        self.inv_l.insert((i, e), x.clone());
        Ok(x)
    }
}
