use std::collections::BTreeMap;

use crate::algebra::scalar::Scalar;
use crate::algebra::{LaurentTail, RatFunc};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::pdo::Pdo;

fn weyl_terms(p: &DiffOp) -> Result<Vec<(usize, usize, Scalar)>> {
    let mut out = Vec::new();
    for (j, f) in p.coeffs() {
        let poly = f
            .as_poly()
            .ok_or_else(|| Error::NotInDomain(format!("coefficient {f} of d^{j} is not a polynomial")))?;
        for (i, c) in poly.coeffs().iter().enumerate() {
            out.push((i, j, c.clone()));
        }
    }
    Ok(out)
}

/// The anti-isomorphism `x ↦ ∂_z`, `∂_x ↦ z` on the Weyl algebra. Applied
/// to a `z`-side operator it maps back, so it is an involution.
pub fn involution_b(p: &DiffOp) -> Result<DiffOp> {
    let var = p.var().other();
    let mut out = DiffOp::zero(var);
    // b(x^i ∂^j) = b(∂)^j b(x)^i = z^j ∂_z^i, already normal-ordered
    for (i, j, c) in weyl_terms(p)? {
        out = &out + &DiffOp::monomial(RatFunc::monomial(c, j as i64), i, var);
    }
    Ok(out)
}

/// Image of `Σ_k Θ_k(x) ∂^k` with polynomial `Θ_k` as `Σ_i Λ_i(z) ∂_z^i`,
/// where `Λ_i(z) = Σ_k θ_{k,i} z^k` is known down to `z^low`.
pub fn involution_b_pdo(p: &Pdo) -> Result<BTreeMap<usize, LaurentTail>> {
    let polys = p
        .polynomial_coeffs()
        .ok_or_else(|| Error::NotInDomain("a coefficient is not a polynomial".into()))?;
    let prec = -p.low();
    let mut out: BTreeMap<usize, LaurentTail> = BTreeMap::new();
    for (k, poly) in polys {
        for (i, c) in poly.coeffs().iter().enumerate() {
            let slot = out.entry(i).or_insert_with(|| LaurentTail::zero(prec));
            *slot = &*slot + &LaurentTail::monomial(c.clone(), k, prec);
        }
    }
    out.retain(|_, t| !t.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;
    use crate::diffop::Var;

    #[test]
    fn generator_images() {
        let x = DiffOp::variable(Var::X);
        assert_eq!(involution_b(&x).unwrap(), DiffOp::d(Var::Z));
        assert_eq!(
            involution_b(&DiffOp::d(Var::X).pow(2)).unwrap(),
            DiffOp::function(RatFunc::monomial(int(1), 2), Var::Z)
        );
        assert_eq!(involution_b(&DiffOp::euler(Var::X)).unwrap(), DiffOp::euler(Var::Z));
        let bad = DiffOp::function(RatFunc::monomial(int(1), -1), Var::X);
        assert!(matches!(involution_b(&bad), Err(Error::NotInDomain(_))));
    }

    #[test]
    fn involution_squares_to_identity() {
        let p = &(&DiffOp::euler(Var::X) * &DiffOp::d(Var::X)) + &DiffOp::variable(Var::X).pow(3);
        assert_eq!(involution_b(&involution_b(&p).unwrap()).unwrap(), p);
    }
}
