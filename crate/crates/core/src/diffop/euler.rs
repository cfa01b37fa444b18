//! Rewriting operators in powers of the Euler operator `D = x∂`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{DiffOp, Var};
use crate::algebra::scalar::int;
use crate::algebra::{Poly, RatFunc};

/// `D(D-1)…(D-j+1)` as a polynomial in `D`; its coefficients are the signed
/// Stirling numbers of the first kind.
pub fn stirling_first(j: usize) -> Poly {
    (0..j).fold(Poly::one(), |acc, i| &acc * &Poly::from_ints(&[-(i as i64), 1]))
}

/// Coefficients `w_k` with `L = Σ w_k(x) D^k`, using `∂^j = x^-j D(D-1)…(D-j+1)`.
pub fn euler_coefficients(l: &DiffOp) -> BTreeMap<usize, RatFunc> {
    let mut w: BTreeMap<usize, RatFunc> = BTreeMap::new();
    for (j, v) in l.coeffs() {
        let base = v * &RatFunc::monomial(int(1), -(j as i64));
        for (k, s) in stirling_first(j).coeffs().iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let slot = w.entry(k).or_default();
            *slot = &*slot + &base.scale(s);
        }
    }
    w.retain(|_, f| !f.is_zero());
    w
}

/// `Σ w_k D^k` as a normal-ordered operator.
pub fn from_euler(w: &BTreeMap<usize, RatFunc>, var: Var) -> DiffOp {
    let e = DiffOp::euler(var);
    let mut out = DiffOp::zero(var);
    let mut power = DiffOp::one(var);
    let top = w.keys().next_back().copied().unwrap_or(0);
    for k in 0..=top {
        if let Some(f) = w.get(&k) {
            out = &out + &power.mul_left(f);
        }
        power = &power * &e;
    }
    out
}

/// `b(u)` with `x^N L = b(D)`, when `L` is Euler-homogeneous of degree `-N`.
pub fn euler_symbol(l: &DiffOp) -> Option<Poly> {
    let n = l.order()? as i64;
    let xn = RatFunc::monomial(int(1), n);
    let w = euler_coefficients(l);
    let top = *w.keys().next_back()?;
    let mut cs = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let f = w.get(&k).map(|f| f * &xn).unwrap_or_default();
        cs.push(f.as_constant()?);
    }
    Some(Poly::from_coeffs(cs))
}

fn is_function_of_power(p: &Poly, n: usize) -> bool {
    p.coeffs()
        .iter()
        .enumerate()
        .all(|(i, c)| c.is_zero() || i % n == 0)
}

/// Whether `P = x^-n Σ p_k(x^N) D^k` with rational `p_k` and `p_n = 1`,
/// where `n` is the order of `P`.
pub fn p_form_check(p: &DiffOp, big_n: usize) -> bool {
    let Some(n) = p.order() else {
        return false;
    };
    if big_n == 0 {
        return false;
    }
    let xn = RatFunc::monomial(int(1), n as i64);
    let w = euler_coefficients(p);
    if w.get(&n).map(|f| f * &xn) != Some(RatFunc::one()) {
        return false;
    }
    w.values().all(|f| {
        let g = f * &xn;
        is_function_of_power(g.num(), big_n) && is_function_of_power(g.den(), big_n)
    })
}
