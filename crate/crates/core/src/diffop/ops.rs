use std::collections::BTreeMap;

use num_traits::Zero;

use super::{DiffOp, Var};
use crate::algebra::scalar::{int, Scalar};
use crate::algebra::series::expand_at_zero;
use crate::algebra::{Poly, PowerSeries, RatFunc};
use crate::error::{Error, Result};

fn check_var(a: &DiffOp, b: &DiffOp) -> Result<Var> {
    if a.var() == b.var() {
        Ok(a.var())
    } else {
        Err(Error::VariableMismatch)
    }
}

pub fn dop_mul(l: &DiffOp, m: &DiffOp) -> Result<DiffOp> {
    check_var(l, m)?;
    Ok(l * m)
}

/// `[L, M] = LM - ML`.
pub fn commutator(l: &DiffOp, m: &DiffOp) -> Result<DiffOp> {
    check_var(l, m)?;
    Ok(&(l * m) - &(m * l))
}

/// `ad_L^m(G)`.
pub fn ad_pow(l: &DiffOp, g: &DiffOp, m: usize) -> Result<DiffOp> {
    check_var(l, g)?;
    let mut cur = g.clone();
    for _ in 0..m {
        if cur.is_zero() {
            break;
        }
        cur = commutator(l, &cur)?;
    }
    Ok(cur)
}

/// `G, ad_L(G), ad_L^2(G), …` up to and including the first zero, or
/// `max_len` entries.
pub fn ad_chain(l: &DiffOp, g: &DiffOp, max_len: usize) -> Result<Vec<DiffOp>> {
    check_var(l, g)?;
    let mut chain = vec![g.clone()];
    while chain.len() < max_len && !chain.last().unwrap().is_zero() {
        let next = commutator(l, chain.last().unwrap())?;
        chain.push(next);
    }
    Ok(chain)
}

/// Minimal `m <= m_max` with `ad_L^(m+1)(θ) = 0` and `ad_L^m(θ) ≠ 0`.
pub fn ad_condition_min_m(l: &DiffOp, theta: &Poly, m_max: usize) -> Option<usize> {
    if theta.is_zero() {
        return None;
    }
    let g = DiffOp::function(RatFunc::from_poly(theta.clone()), l.var());
    let chain = ad_chain(l, &g, m_max + 2).ok()?;
    chain.iter().position(|op| op.is_zero()).map(|k| k - 1)
}

fn divide(l: &DiffOp, p: &DiffOp, right: bool) -> Result<(DiffOp, DiffOp)> {
    let var = check_var(l, p)?;
    let n = p.order().ok_or(Error::DivisionByZeroOperator)?;
    let lead_inv = p.leading().inv().unwrap();
    let mut q = DiffOp::zero(var);
    let mut r = l.clone();
    while let Some(k) = r.order().filter(|&k| k >= n) {
        let t = DiffOp::monomial(&r.leading() * &lead_inv, k - n, var);
        r = if right { &r - &(&t * p) } else { &r - &(p * &t) };
        q = &q + &t;
    }
    Ok((q, r))
}

/// `L = Q·P + R` with `order(R) < order(P)`.
pub fn right_divide(l: &DiffOp, p: &DiffOp) -> Result<(DiffOp, DiffOp)> {
    divide(l, p, true)
}

/// `L = P·Q + R` with `order(R) < order(P)`.
pub fn left_divide(l: &DiffOp, p: &DiffOp) -> Result<(DiffOp, DiffOp)> {
    divide(l, p, false)
}

/// Gauge data of a normalization: the conjugation is by `e^g` with `g' = g_prime`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gauge {
    pub g_prime: RatFunc,
    pub g: RatFunc,
}

/// Substitute `∂ ↦ ∂ + g'`, which is conjugation `e^(-g) L e^g`.
pub fn gauge_conjugate(l: &DiffOp, g_prime: &RatFunc) -> DiffOp {
    let var = l.var();
    let shifted = &DiffOp::d(var) + &DiffOp::function(g_prime.clone(), var);
    let mut out = DiffOp::zero(var);
    let mut power = DiffOp::one(var);
    let top = l.order().unwrap_or(0);
    for j in 0..=top {
        let c = l.coeff(j);
        if !c.is_zero() {
            out = &out + &power.mul_left(&c);
        }
        if j < top {
            power = &power * &shifted;
        }
    }
    out
}

/// Remove the subleading coefficient of a monic operator by a rational gauge.
pub fn gauge_normalize(l: &DiffOp) -> Result<(DiffOp, Gauge)> {
    if !l.is_monic() {
        return Err(Error::NotMonic);
    }
    let n = l.order().unwrap();
    if n == 0 {
        return Ok((l.clone(), Gauge { g_prime: RatFunc::zero(), g: RatFunc::zero() }));
    }
    let g_prime = l.coeff(n - 1).scale(&int(-(n as i64)).recip());
    let g = g_prime.integrate().map_err(|_| Error::NonRationalGauge)?;
    Ok((gauge_conjugate(l, &g_prime), Gauge { g_prime, g }))
}

/// `L(s)` for a truncated power series `s`. The result's precision records
/// the loss from differentiation and from poles of the coefficients.
pub fn apply_to_series(l: &DiffOp, s: &PowerSeries) -> Result<PowerSeries> {
    let mut total: BTreeMap<i64, Scalar> = BTreeMap::new();
    let mut prec = i64::MAX;
    let mut deriv = s.clone();
    let top = l.order().unwrap_or(0);
    for j in 0..=top {
        let v = l.coeff(j);
        if !v.is_zero() {
            let val = v.valuation_at_zero().unwrap();
            let target = deriv.prec() + val;
            prec = prec.min(target);
            let ve = expand_at_zero(&v, target);
            for (e, c) in &ve {
                for (k, a) in deriv.coeffs().iter().enumerate() {
                    let t = e + k as i64;
                    if t > target {
                        break;
                    }
                    if !a.is_zero() {
                        *total.entry(t).or_insert_with(Scalar::zero) += c * a;
                    }
                }
            }
        }
        if j < top {
            deriv = deriv.derivative();
        }
    }
    if prec == i64::MAX {
        prec = s.prec();
    }
    if total.iter().any(|(e, c)| *e < 0 && *e <= prec && !c.is_zero()) {
        return Err(Error::PoleAtOrigin);
    }
    let len = total.keys().next_back().map_or(0, |&e| e.max(-1) + 1) as usize;
    let mut coeffs = vec![Scalar::zero(); len];
    for (e, c) in total {
        if e >= 0 {
            coeffs[e as usize] = c;
        }
    }
    Ok(PowerSeries::new(coeffs, prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::rat;

    fn x() -> DiffOp {
        DiffOp::variable(Var::X)
    }
    fn d() -> DiffOp {
        DiffOp::d(Var::X)
    }
    fn xpow(c: i64, e: i64) -> DiffOp {
        DiffOp::function(RatFunc::monomial(int(c), e), Var::X)
    }
    fn konst(c: i64) -> DiffOp {
        DiffOp::constant(int(c), Var::X)
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(commutator(&d(), &x()).unwrap(), konst(1));
        assert_eq!(commutator(&d().pow(2), &x()).unwrap(), d().scale(&int(2)));
        let l = &d().pow(2) - &x();
        assert!(commutator(&l, &l).unwrap().is_zero());
        assert_eq!(commutator(&d(), &DiffOp::d(Var::Z)), Err(Error::VariableMismatch));
    }

    #[test]
    fn ad_condition_examples() {
        let x2 = Poly::from_ints(&[0, 0, 1]);
        let xp = Poly::x();
        assert_eq!(ad_condition_min_m(&d().pow(2), &xp, 5), Some(1));
        let airy = &d().pow(2) - &x();
        assert_eq!(ad_condition_min_m(&airy, &xp, 5), Some(2));
        assert_eq!(ad_pow(&airy, &x(), 2).unwrap(), konst(2));
        let l = &d().pow(2) - &xpow(2, -2);
        assert_eq!(ad_condition_min_m(&l, &x2, 6), Some(2));
        assert_eq!(ad_condition_min_m(&airy, &x2, 1), None);
    }

    #[test]
    fn division_examples() {
        let (q, r) = right_divide(&d().pow(2), &d()).unwrap();
        assert_eq!((q, r.is_zero()), (d(), true));
        let p = &d() - &xpow(1, -1);
        let (q, r) = right_divide(&d().pow(2), &p).unwrap();
        assert_eq!(q, &d() + &xpow(1, -1));
        assert!(r.is_zero());
        let e = DiffOp::euler(Var::X);
        let (q, r) = right_divide(&e, &d().pow(2)).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, e);
        assert_eq!(right_divide(&e, &DiffOp::zero(Var::X)), Err(Error::DivisionByZeroOperator));
        let (q, r) = right_divide(&x(), &konst(2)).unwrap();
        assert_eq!((q, r.is_zero()), (xpow(1, 1).scale(&rat(1, 2)), true));
    }

    #[test]
    fn gauge_examples() {
        let airy = &d().pow(2) - &x();
        let (n, g) = gauge_normalize(&airy).unwrap();
        assert_eq!((n, g.g_prime.is_zero()), (airy, true));
        let l = &d().pow(2) + &d().scale(&int(2));
        let (n, g) = gauge_normalize(&l).unwrap();
        assert_eq!(n, &d().pow(2) - &konst(1));
        assert_eq!(g.g_prime, RatFunc::from_int(-1));
        assert_eq!(gauge_conjugate(&n, &-&g.g_prime), l);
        let bad = &d().pow(2) + &(&xpow(1, -1) * &d());
        assert_eq!(gauge_normalize(&bad), Err(Error::NonRationalGauge));
        assert_eq!(gauge_normalize(&d().scale(&int(2))), Err(Error::NotMonic));
    }

    #[test]
    fn series_application() {
        let s = PowerSeries::from_ints(&[0, 0, 1], 20);
        assert_eq!(apply_to_series(&d(), &s).unwrap(), PowerSeries::from_ints(&[0, 2], 19));
        let e = DiffOp::euler(Var::X);
        let s = PowerSeries::from_ints(&[0, 0, 0, 1], 20);
        assert_eq!(apply_to_series(&e, &s).unwrap(), PowerSeries::from_ints(&[0, 0, 0, 3], 20));
        let airy = PowerSeries::new(vec![int(1), int(0), int(0), rat(1, 6), int(0), int(0), rat(1, 180)], 8);
        let out = apply_to_series(&(&d().pow(2) - &x()), &airy).unwrap();
        assert!(out.is_zero());
        assert_eq!(out.prec(), 6);
        let pole = apply_to_series(&xpow(1, -1), &PowerSeries::from_ints(&[1], 5));
        assert_eq!(pole, Err(Error::PoleAtOrigin));
    }
}
