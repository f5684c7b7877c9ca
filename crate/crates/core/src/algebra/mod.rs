//! Finite fields, polynomial rings and the rational function field.

pub mod bipoly;
pub mod field;
pub mod place;
pub mod poly;
pub mod rational;
pub mod text;

pub use bipoly::BiPoly;
pub use field::{binomial_mod_p, prime_power, Fq, FqElem};
pub use place::{enumerate_places, is_irreducible, ord_exact, ord_poly, Place};
pub use poly::{Poly, PolyTheta};
pub use rational::RationalK;
pub use text::fq_to_text;
