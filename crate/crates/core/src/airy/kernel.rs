use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::scalar::{binomial, factorial, int, Scalar};
use crate::algebra::{Poly, PowerSeries, RatFunc};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};

use super::airy_shape;

fn falling(top: usize, j: usize) -> Scalar {
    Scalar::from_integer(factorial(top) / factorial(top - j))
}

/// Taylor coefficients through `x^upto` of the solution of `AΦ = 0` with
/// `Φ^(i)(0) = init[i]`.
pub fn airy_kernel_series(a: &DiffOp, init: &[Scalar], upto: usize) -> Result<PowerSeries> {
    let shape = airy_shape(a)?;
    let n = shape.order;
    if init.len() != n {
        return Err(Error::InitialData { expected: n, got: init.len() });
    }
    let mut c: Vec<Scalar> = init
        .iter()
        .enumerate()
        .map(|(i, v)| v / Scalar::from_integer(factorial(i)))
        .collect();
    // coefficient of x^t in AΦ: Σ_j f_j c_{t+j} (t+j)!/t! - λ c_{t-1}
    let mut t = 0;
    while t + n <= upto {
        let mut acc = if t == 0 { Scalar::zero() } else { &shape.lambda * &c[t - 1] };
        for j in 0..n {
            let f = shape.symbol.coeff(j);
            if !f.is_zero() {
                acc -= f * &c[t + j] * falling(t + j, j);
            }
        }
        c.push(acc / falling(t + n, n));
        t += 1;
    }
    c.truncate(upto + 1);
    Ok(PowerSeries::new(c, upto as i64))
}

/// Outcome of checking `A_x Ψ = λzΨ`, `A_z Ψ = λxΨ` and `∂_x Ψ = ∂_z Ψ` for
/// `Ψ(x, z) = Φ(x + z)` over a basis of the kernel of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AiryCheck {
    pub order: usize,
    /// Total degree through which the identities were compared.
    pub degree: usize,
    pub x_equation: bool,
    pub z_equation: bool,
    pub shift: bool,
}

impl AiryCheck {
    pub fn passed(&self) -> bool {
        self.x_equation && self.z_equation && self.shift
    }
}

type Bivariate = BTreeMap<(usize, usize), Scalar>;

fn get(psi: &Bivariate, a: usize, b: usize) -> Scalar {
    psi.get(&(a, b)).cloned().unwrap_or_default()
}

pub fn airy_bispectral_check(a: &DiffOp, upto: usize) -> Result<AiryCheck> {
    let shape = airy_shape(a)?;
    let n = shape.order;
    if upto < n {
        return Err(Error::TruncationTooShort { have: upto, need: n });
    }
    let degree = upto - n;
    let mut check = AiryCheck {
        order: n,
        degree,
        x_equation: true,
        z_equation: true,
        shift: true,
    };
    for i in 0..n {
        let mut init = vec![Scalar::zero(); n];
        init[i] = Scalar::one();
        let phi = airy_kernel_series(a, &init, upto)?;
        let mut psi = Bivariate::new();
        for s in 0..=upto {
            let c = phi.coeff(s);
            if c.is_zero() {
                continue;
            }
            for p in 0..=s {
                psi.insert((p, s - p), &c * binomial(s as i64, p));
            }
        }
        // A in the first slot applied to Ψ, compared with λ·(second variable)·Ψ
        let apply = |first: bool, p: usize, q: usize| -> Scalar {
            let at = |u: usize, v: usize| if first { get(&psi, u, v) } else { get(&psi, v, u) };
            let mut acc = Scalar::zero();
            for j in 0..=n {
                let f = shape.symbol.coeff(j);
                if !f.is_zero() {
                    acc += f * at(p + j, q) * falling(p + j, j);
                }
            }
            if p > 0 {
                acc -= &shape.lambda * at(p - 1, q);
            }
            let rhs = if q > 0 { &shape.lambda * at(p, q - 1) } else { Scalar::zero() };
            acc - rhs
        };
        for s in 0..=degree {
            for p in 0..=s {
                check.x_equation &= apply(true, p, s - p).is_zero();
                check.z_equation &= apply(false, p, s - p).is_zero();
            }
        }
        for s in 0..upto {
            for p in 0..=s {
                let q = s - p;
                let dx = get(&psi, p + 1, q) * int(p as i64 + 1);
                let dz = get(&psi, p, q + 1) * int(q as i64 + 1);
                check.shift &= dx == dz;
            }
        }
    }
    Ok(check)
}

/// Image of a Weyl-algebra operator under the anti-involution with `A ↦ λz`,
/// `∂ ↦ ∂_z`, so that `x ↦ (F(∂_z) - λz)/λ`. Sending `A` to `λz` rather than
/// `z` keeps `[∂, A] = -λ` intact.
pub fn airy_involution(p: &DiffOp, a: &DiffOp) -> Result<DiffOp> {
    let shape = airy_shape(a)?;
    if p.var() != a.var() {
        return Err(Error::VariableMismatch);
    }
    let var = p.var();
    let minus_lambda_inv = -shape.lambda.recip();
    // P = Σ_u A^u q_u(∂), peeled off by the top power of x
    let mut parts: BTreeMap<usize, Poly> = BTreeMap::new();
    let mut rest = p.clone();
    while !rest.is_zero() {
        let mut top = 0;
        for (j, c) in rest.coeffs() {
            let poly = c
                .as_poly()
                .ok_or_else(|| Error::NotInDomain(format!("coefficient {c} of d^{j} is not a polynomial")))?;
            top = top.max(poly.degree().unwrap_or(0));
        }
        let sym = Poly::from_coeffs(
            (0..=rest.order().unwrap())
                .map(|j| rest.coeff(j).as_poly().map(|q| q.coeff(top)).unwrap_or_default())
                .collect(),
        );
        let q = sym.scale(&minus_lambda_inv.pow(top as i32));
        rest = &rest - &(&a.pow(top) * &DiffOp::from_symbol(&q, var));
        let slot = parts.entry(top).or_insert_with(Poly::zero);
        *slot = &*slot + &q;
    }
    let zvar = var.other();
    let mut out = DiffOp::zero(zvar);
    for (u, q) in parts {
        let zu = DiffOp::function(RatFunc::monomial(shape.lambda.pow(u as i32), u as i64), zvar);
        out = &out + &(&DiffOp::from_symbol(&q, zvar) * &zu);
    }
    Ok(out)
}
