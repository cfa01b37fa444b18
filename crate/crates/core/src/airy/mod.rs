//! Calculus modulo a generalized Airy operator `A = F(∂) - λx`, where
//! `F(∂) = ∂^N + Σ_{j=1}^{N-2} a_j ∂^j + a_0`.
//!
//! Operators of `∂`-degree below `N` play the role of coefficients: every
//! operator `T` is uniquely `q·A + r` with `r` of `∂`-degree below `N`.

mod kernel;
mod wave;

pub use kernel::{airy_bispectral_check, airy_involution, airy_kernel_series, AiryCheck};
pub use wave::{
    airy_wave_solve, perturbation_obstruction, AiryPdo, AiryWave, ObstructionTrace, TraceStep, Verdict,
};

use num_traits::Zero;

use crate::algebra::scalar::Scalar;
use crate::algebra::{Poly, RatFunc};
use crate::diffop::{commutator, dop_mul, right_divide, DiffOp};
use crate::error::{Error, Result};

/// Parameters of a generalized Airy operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AiryShape {
    pub order: usize,
    /// `F` with `A = F(∂) - λx`.
    pub symbol: Poly,
    pub lambda: Scalar,
}

pub fn airy_shape(a: &DiffOp) -> Result<AiryShape> {
    let n = a.order().unwrap_or(0);
    if n < 2 || !a.is_monic() {
        return Err(Error::NotAiryShape(format!("{a} is not monic of order at least 2")));
    }
    let mut cs = vec![Scalar::zero(); n + 1];
    for (j, c) in a.coeffs() {
        if j == 0 {
            continue;
        }
        cs[j] = c
            .as_constant()
            .ok_or_else(|| Error::NotAiryShape(format!("coefficient of d^{j} is not constant")))?;
    }
    if !cs[n - 1].is_zero() {
        return Err(Error::NotAiryShape(format!("coefficient of d^{} is nonzero", n - 1)));
    }
    let c0 = a.coeff(0);
    let p = c0
        .as_poly()
        .filter(|p| p.degree() == Some(1))
        .ok_or_else(|| Error::NotAiryShape(format!("free coefficient {c0} is not linear in x")))?;
    cs[0] = p.coeff(0);
    Ok(AiryShape {
        order: n,
        symbol: Poly::from_coeffs(cs),
        lambda: -p.coeff(1),
    })
}

/// Split `L = A + V` into its generalized Airy part and a remainder whose
/// coefficients vanish at infinity. `V` must have `∂`-degree at most `N-2`.
pub fn split_airy(l: &DiffOp) -> Result<(DiffOp, DiffOp)> {
    let n = l.order().unwrap_or(0);
    if n < 2 || !l.is_monic() {
        return Err(Error::NotAiryShape(format!("{l} is not monic of order at least 2")));
    }
    let var = l.var();
    let mut a = DiffOp::zero(var);
    let mut v = DiffOp::zero(var);
    for (j, c) in l.coeffs() {
        let (q, r) = c.num().div_rem(c.den());
        let proper = RatFunc::new(r, c.den().clone())?;
        a = &a + &DiffOp::monomial(q.into(), j, var);
        v = &v + &DiffOp::monomial(proper, j, var);
    }
    airy_shape(&a)?;
    if !v.coeff(n - 1).is_zero() {
        return Err(Error::NotNormalized(format!("remainder has a d^{} term", n - 1)));
    }
    Ok((a, v))
}

/// `T = q·A + r` with `∂`-degree of `r` below the order of `A`.
pub fn reduce_mod_a(t: &DiffOp, a: &DiffOp) -> Result<(DiffOp, DiffOp)> {
    airy_shape(a)?;
    right_divide(t, a)
}

/// `[A, m] = b·A + c`.
pub fn bracket_decompose(a: &DiffOp, m: &DiffOp) -> Result<(DiffOp, DiffOp)> {
    reduce_mod_a(&commutator(a, m)?, a)
}

/// `V·m = U·A + W`.
pub fn v_decompose(v: &DiffOp, m: &DiffOp, a: &DiffOp) -> Result<(DiffOp, DiffOp)> {
    reduce_mod_a(&dop_mul(v, m)?, a)
}

/// Leading monomial `coeff·x^height·∂^d_degree`, ordering monomials by the
/// power of `x` at infinity and then by the power of `∂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Height {
    pub height: i64,
    pub d_degree: usize,
    pub coeff: Scalar,
}

pub fn height(m: &DiffOp) -> Result<Height> {
    m.coeffs()
        .filter_map(|(j, c)| c.order_at_infinity().map(|h| (h, j, c)))
        .max_by_key(|&(h, j, _)| (h, j))
        .map(|(height, d_degree, c)| Height {
            height,
            d_degree,
            coeff: c.leading_at_infinity(),
        })
        .ok_or(Error::ZeroOperand)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;
    use crate::diffop::Var;

    fn d() -> DiffOp {
        DiffOp::d(Var::X)
    }
    fn x() -> DiffOp {
        DiffOp::variable(Var::X)
    }
    fn xpow(c: i64, e: i64) -> DiffOp {
        DiffOp::function(RatFunc::monomial(int(c), e), Var::X)
    }
    fn airy2() -> DiffOp {
        &d().pow(2) - &x()
    }

    #[test]
    fn shape_and_split() {
        let s = airy_shape(&(&(&d().pow(3) + &d().scale(&int(5))) - &x())).unwrap();
        assert_eq!(s.symbol, Poly::from_ints(&[0, 5, 0, 1]));
        assert_eq!(s.lambda, int(1));
        assert!(airy_shape(&(&d().pow(2) + &d())).is_err());
        assert!(airy_shape(&(&d().pow(3) - &(&x() * &d()))).is_err());
        let (a, v) = split_airy(&(&airy2() + &xpow(1, -1))).unwrap();
        assert_eq!((a, v), (airy2(), xpow(1, -1)));
        let bad = &airy2() + &(&xpow(1, -1) * &d());
        assert!(matches!(split_airy(&bad), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(reduce_mod_a(&d().pow(2), &airy2()).unwrap(), (DiffOp::one(Var::X), x()));
        let r = &(&x() * &d()) + &DiffOp::one(Var::X);
        assert_eq!(reduce_mod_a(&d().pow(3), &airy2()).unwrap(), (d(), r));
        assert_eq!(reduce_mod_a(&x(), &airy2()).unwrap(), (DiffOp::zero(Var::X), x()));
    }

    #[test]
    fn bracket_examples() {
        let alpha = RatFunc::monomial(int(3), -2);
        let (b, c) = bracket_decompose(&airy2(), &DiffOp::function(alpha.clone(), Var::X)).unwrap();
        assert!(b.is_zero());
        let expect = DiffOp::from_coeffs(Var::X, [(1, alpha.derivative().scale(&int(2))), (0, alpha.nth_derivative(2))]);
        assert_eq!(c, expect);
        assert_eq!(bracket_decompose(&airy2(), &d()).unwrap(), (DiffOp::zero(Var::X), DiffOp::one(Var::X)));
        let (b, c) = bracket_decompose(&airy2(), &DiffOp::constant(int(7), Var::X)).unwrap();
        assert!(b.is_zero() && c.is_zero());
    }

    #[test]
    fn v_decompose_examples() {
        let one = DiffOp::one(Var::X);
        assert_eq!(v_decompose(&xpow(1, -2), &one, &airy2()).unwrap(), (DiffOp::zero(Var::X), xpow(1, -2)));
        let v = &xpow(1, -1) * &d();
        assert_eq!(v_decompose(&v, &d(), &airy2()).unwrap(), (xpow(1, -1), one));
        assert_eq!(
            v_decompose(&xpow(1, -2), &d(), &airy2()).unwrap(),
            (DiffOp::zero(Var::X), &xpow(1, -2) * &d())
        );
    }

    #[test]
    fn height_examples() {
        let m = &(&xpow(1, 2) * &d()) + &xpow(1, 3);
        assert_eq!(height(&m).unwrap(), Height { height: 3, d_degree: 0, coeff: int(1) });
        let m = &(&x() * &d().pow(2)) + &(&x() * &d());
        assert_eq!(height(&m).unwrap(), Height { height: 1, d_degree: 2, coeff: int(1) });
        assert_eq!(height(&DiffOp::constant(int(5), Var::X)).unwrap().height, 0);
        assert_eq!(height(&DiffOp::zero(Var::X)), Err(Error::ZeroOperand));
    }
}
