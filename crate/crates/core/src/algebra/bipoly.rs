//! Polynomials in F_q[t, θ].

use std::collections::BTreeMap;
use std::fmt;

use super::field::{Fq, FqElem};
use super::poly::Poly;
use super::text;
use crate::error::Result;

/// Sparse bivariate polynomial keyed by `(t-degree, θ-degree)`; zero entries are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    field: Fq,
    terms: BTreeMap<(usize, usize), FqElem>,
}

impl BiPoly {
    pub fn zero(field: Fq) -> BiPoly {
        BiPoly { field, terms: BTreeMap::new() }
    }

    pub fn from_terms(field: Fq, terms: impl IntoIterator<Item = ((usize, usize), FqElem)>) -> BiPoly {
        let mut out = BiPoly::zero(field);
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    /// Builds Σ_j c_j(θ) t^j from θ-polynomials indexed by t-degree.
    pub fn from_t_coeffs(field: Fq, by_t: &[Poly]) -> BiPoly {
        let mut out = BiPoly::zero(field);
        for (i, p) in by_t.iter().enumerate() {
            for (j, &c) in p.coeffs().iter().enumerate() {
                out.add_term((i, j), c);
            }
        }
        out
    }

    /// Builds Σ_j c_j(t) θ^j from t-polynomials indexed by θ-degree.
    pub fn from_theta_coeffs(field: Fq, by_theta: &[Poly]) -> BiPoly {
        let mut out = BiPoly::zero(field);
        for (j, p) in by_theta.iter().enumerate() {
            for (i, &c) in p.coeffs().iter().enumerate() {
                out.add_term((i, j), c);
            }
        }
        out
    }

    fn add_term(&mut self, k: (usize, usize), c: FqElem) {
        let f = self.field;
        let e = self.terms.entry(k).or_insert(FqElem::ZERO);
        *e = f.add(*e, c);
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn field(&self) -> Fq {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), FqElem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn t_degree(&self) -> Option<usize> {
        self.terms.keys().map(|k| k.0).max()
    }

    /// Coefficients of t^0, …, t^m as elements of A (m = t-degree).
    pub fn t_coeffs(&self) -> Vec<Poly> {
        let Some(m) = self.t_degree() else { return Vec::new() };
        let mut rows = vec![Vec::<FqElem>::new(); m + 1];
        for (&(i, j), &c) in &self.terms {
            let row = &mut rows[i];
            if row.len() <= j {
                row.resize(j + 1, FqElem::ZERO);
            }
            row[j] = c;
        }
        rows.into_iter().map(|r| Poly::new(self.field, r)).collect()
    }

    pub fn parse(field: Fq, s: &str) -> Result<BiPoly> {
        let sparse = text::parse_bivariate(field, s, "t", "T")?;
        Ok(BiPoly { field, terms: sparse })
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero(self.field);
        let f = self.field;
        for (&(a, b), &c) in &self.terms {
            for (&(x, y), &d) in &other.terms {
                out.add_term((a + x, b + y), f.mul(c, d));
            }
        }
        out
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::bivariate_to_text(self.field, &self.terms, "t", "T"))
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_coeffs() {
        let f = Fq::new(3).unwrap();
        let b = BiPoly::parse(f, "t^2*T + 2*t + T^3 + 1").unwrap();
        assert_eq!(b.to_string(), "t^2*T+2*t+T^3+1");
        assert_eq!(BiPoly::parse(f, &b.to_string()).unwrap(), b);
        let c = b.t_coeffs();
        assert_eq!(c.len(), 3);
        assert_eq!(c[0], Poly::from_ints(f, &[1, 0, 0, 1]));
        assert_eq!(c[1], Poly::from_ints(f, &[2]));
        assert_eq!(c[2], Poly::x(f));
        assert_eq!(BiPoly::from_t_coeffs(f, &c), b);
    }
}
