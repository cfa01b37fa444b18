use crate::algebra::{rational_reconstruct, Poly};
use crate::diffop::{DiffOp, Var};
use crate::error::{Error, Result};

use super::involution::involution_b_pdo;
use super::wave::{conjugate_theta, split_constant_part, wave_operator};

/// Degree bounds for reconstructing the coefficients of `Λ`.
#[derive(Clone, Copy, Debug)]
pub struct LambdaBounds {
    /// Starting numerator/denominator degree; `None` means `2m`.
    pub start: Option<usize>,
    pub cap: usize,
}

impl Default for LambdaBounds {
    fn default() -> Self {
        LambdaBounds { start: None, cap: 16 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualOperator {
    pub lambda: DiffOp,
    pub theta: Poly,
    pub m: usize,
}

/// Build `Λ = b(K^-1 θ K)` in the spectral variable and reconstruct its
/// coefficients as rational functions.
pub fn build_lambda(l: &DiffOp, theta: &Poly, trunc: usize, bounds: LambdaBounds) -> Result<DualOperator> {
    let (f, _) = split_constant_part(l)?;
    let w = wave_operator(l, &f, trunc)?;
    let conj = conjugate_theta(&w, theta, trunc)?;
    let tails = involution_b_pdo(&conj.theta)?;
    let m = *tails
        .keys()
        .next_back()
        .ok_or_else(|| Error::NormalizationFailed("Λ vanishes".into()))?;
    let prec = trunc as i64;
    // keep at least one verifying equation beyond the unknowns
    let feasible = ((prec - 1) / 2).max(0) as usize;
    let lo = bounds.start.unwrap_or(2 * m).min(feasible);
    let hi = bounds.cap.min(feasible).max(lo);
    let mut coeffs = Vec::new();
    for i in 0..=m {
        let Some(t) = tails.get(&i) else {
            continue;
        };
        let mut found = None;
        for deg in lo..=hi {
            if let Some(r) = rational_reconstruct(t, deg, deg)? {
                found = Some(r);
                break;
            }
        }
        coeffs.push((i, found.ok_or(Error::ReconstructionFailed { index: i })?));
    }
    let lambda = DiffOp::from_coeffs(Var::Z, coeffs);
    if !lambda.coeff(m).is_one() {
        return Err(Error::NormalizationFailed(format!("leading coefficient {}", lambda.coeff(m))));
    }
    if m >= 1 && !lambda.coeff(m - 1).is_zero() {
        return Err(Error::NormalizationFailed(format!(
            "subleading coefficient {}",
            lambda.coeff(m - 1)
        )));
    }
    Ok(DualOperator {
        lambda,
        theta: theta.clone(),
        m,
    })
}
