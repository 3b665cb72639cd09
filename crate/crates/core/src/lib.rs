pub mod error;
pub mod harness;
pub mod inequalities;
pub mod multiindex;
pub mod norms;
pub mod poly;
pub mod summation;

pub use error::{Error, Result};
