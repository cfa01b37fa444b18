//! Bounded-coefficient machinery: wave operators, conjugation of `θ`, the
//! anti-isomorphism `b`, the dual operator `Λ`, and centralizer search.

mod bounded;
mod centralizer;
mod involution;
mod lambda;
mod wave;

pub use bounded::{bounded_test, q_polynomial_in_l, BoundedReport};
pub use centralizer::{centralizer_search, CentralizerBounds, CentralizerResult};
pub use involution::{involution_b, involution_b_pdo};
pub use lambda::{build_lambda, DualOperator, LambdaBounds};
pub use wave::{conjugate_theta, split_constant_part, wave_operator, wave_tails, ThetaConjugate, WaveData};
