//! Truncated power series at the origin.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::ratfunc::RatFunc;
use super::scalar::{int, Scalar};

/// `Σ c_k x^k` with every coefficient of degree `<= prec` exact.
#[derive(Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Scalar>,
    prec: i64,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Scalar>, prec: i64) -> Self {
        let mut coeffs = coeffs;
        coeffs.truncate((prec + 1).max(0) as usize);
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PowerSeries { coeffs, prec }
    }

    pub fn from_ints(coeffs: &[i64], prec: i64) -> Self {
        PowerSeries::new(coeffs.iter().map(|&c| int(c)).collect(), prec)
    }

    pub fn monomial(c: Scalar, k: usize, prec: i64) -> Self {
        let mut coeffs = vec![Scalar::zero(); k + 1];
        coeffs[k] = c;
        PowerSeries::new(coeffs, prec)
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// True when no known coefficient is nonzero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, prec: i64) -> PowerSeries {
        PowerSeries::new(self.coeffs.clone(), prec.min(self.prec))
    }

    pub fn derivative(&self) -> PowerSeries {
        PowerSeries::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
            self.prec - 1,
        )
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{c}*x^{k}"))
            .collect();
        write!(f, "{} + O(x^{})", parts.join(" + "), self.prec + 1)
    }
}

/// Expansion of `f` at the origin, as exponent map exact through `x^upto`.
pub fn expand_at_zero(f: &RatFunc, upto: i64) -> BTreeMap<i64, Scalar> {
    let mut out = BTreeMap::new();
    if f.is_zero() {
        return out;
    }
    let v = f.den().valuation().unwrap();
    let num = f.num().coeffs();
    let den = &f.den().coeffs()[v..];
    let shift = -(v as i64);
    let count = upto - shift + 1;
    if count <= 0 {
        return out;
    }
    let d0_inv = den[0].recip();
    let mut s: Vec<Scalar> = Vec::with_capacity(count as usize);
    for k in 0..count as usize {
        let mut acc = num.get(k).cloned().unwrap_or_default();
        for i in 1..=k.min(den.len() - 1) {
            acc -= &den[i] * &s[k - i];
        }
        s.push(acc * &d0_inv);
    }
    for (k, c) in s.into_iter().enumerate() {
        if !c.is_zero() {
            out.insert(k as i64 + shift, c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::Poly;

    #[test]
    fn geometric_series_at_zero() {
        let f = RatFunc::new(Poly::one(), Poly::from_ints(&[0, 1, -1])).unwrap();
        let got = expand_at_zero(&f, 2);
        let expect: BTreeMap<i64, Scalar> = (-1..=2).map(|k| (k, int(1))).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn derivative_loses_one_degree() {
        let s = PowerSeries::from_ints(&[1, 2, 3], 2);
        assert_eq!(s.derivative(), PowerSeries::from_ints(&[2, 6], 1));
    }
}
