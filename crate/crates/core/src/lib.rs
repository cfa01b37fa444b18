//! Exact computations with differential operators of rational coefficients:
//! Weyl-algebra arithmetic, wave operators, Darboux transformations, weight
//! filtrations and a bispectrality classifier for prime-order operators.

pub mod airy;
pub mod algebra;
pub mod bispectral;
pub mod classify;
pub mod diffop;
pub mod error;
pub mod expr;
pub mod families;
pub mod pdo;
pub mod weights;

pub use error::{Error, Result};
