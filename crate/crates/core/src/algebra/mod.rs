//! Exact scalar, polynomial, rational-function and series arithmetic.

pub mod laurent;
pub mod linalg;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod series;

pub use laurent::{antiderivative, laurent_expand, rational_reconstruct, LaurentTail};
pub use poly::Poly;
pub use ratfunc::{ratfunc_canonicalize, RatFunc};
pub use scalar::Scalar;
pub use series::PowerSeries;
