//! Completions k_v and k_∞.

pub mod infadic;
pub mod vadic;

pub use infadic::InfAdic;
pub use vadic::{Digit, VAdic, EXACT};
