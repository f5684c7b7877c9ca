pub mod algebra;
pub mod andersonthakur;
pub mod carlitz;
pub mod cmspl;
pub mod error;
pub mod local;
pub mod mzv;
pub mod tmodule;
pub mod verify;

pub use error::{MathError, Result};
