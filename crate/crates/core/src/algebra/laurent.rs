//! Truncated Laurent expansions at infinity.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::linalg;
use super::poly::{forward_owned, Poly};
use super::ratfunc::RatFunc;
use super::scalar::{int, Scalar};
use crate::error::{Error, Result};

/// `Σ c_e x^e`, exact for every exponent `e >= -prec`. Terms below that
/// bound are unknown and never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentTail {
    terms: BTreeMap<i64, Scalar>,
    prec: i64,
}

impl LaurentTail {
    pub fn new(terms: impl IntoIterator<Item = (i64, Scalar)>, prec: i64) -> Self {
        let mut out = LaurentTail {
            terms: BTreeMap::new(),
            prec,
        };
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn zero(prec: i64) -> Self {
        LaurentTail {
            terms: BTreeMap::new(),
            prec,
        }
    }

    pub fn monomial(c: Scalar, e: i64, prec: i64) -> Self {
        LaurentTail::new([(e, c)], prec)
    }

    fn add_term(&mut self, e: i64, c: Scalar) {
        if e < -self.prec || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Exact through `x^-prec`.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exponent of the leading term, `None` when no known term is nonzero.
    pub fn lead_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading(&self) -> Option<(i64, &Scalar)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    /// Start order `r` of the leading term `x^-r`.
    pub fn start_order(&self) -> Option<i64> {
        self.lead_exponent().map(|e| -e)
    }

    /// Coefficient of `x^e`, or `None` when it lies below the precision.
    pub fn coeff(&self, e: i64) -> Option<Scalar> {
        (e >= -self.prec).then(|| self.terms.get(&e).cloned().unwrap_or_else(Scalar::zero))
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn truncate(&self, prec: i64) -> LaurentTail {
        LaurentTail::new(self.terms.iter().map(|(e, c)| (*e, c.clone())), prec.min(self.prec))
    }

    pub fn scale(&self, c: &Scalar) -> LaurentTail {
        LaurentTail::new(self.terms.iter().map(|(e, a)| (*e, a * c)), self.prec)
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: i64) -> LaurentTail {
        LaurentTail::new(self.terms.iter().map(|(e, c)| (e + k, c.clone())), self.prec - k)
    }

    // Largest exponent that may be nonzero, counting unknown terms.
    fn effective_lead(&self) -> i64 {
        self.lead_exponent().unwrap_or(-self.prec - 1)
    }

    pub fn derivative(&self) -> LaurentTail {
        LaurentTail::new(
            self.terms.iter().map(|(e, c)| (e - 1, c * int(*e))),
            self.prec + 1,
        )
    }

    /// Term-by-term antiderivative with zero constant of integration.
    pub fn antiderivative(&self) -> Result<LaurentTail> {
        if let Some(c) = self.terms.get(&-1) {
            return Err(Error::LogObstruction(format!("x^-1 coefficient {c}")));
        }
        Ok(LaurentTail::new(
            self.terms.iter().map(|(e, c)| (e + 1, c / int(e + 1))),
            self.prec - 1,
        ))
    }

    /// True when both agree on every exponent known to both.
    pub fn agrees_with(&self, other: &LaurentTail) -> bool {
        let p = self.prec.min(other.prec);
        self.truncate(p) == other.truncate(p)
    }

    /// The polynomial formed by the nonnegative exponents.
    pub fn polynomial_part(&self) -> Poly {
        let top = self.lead_exponent().unwrap_or(-1);
        if top < 0 {
            return Poly::zero();
        }
        Poly::from_coeffs((0..=top).map(|e| self.coeff(e).unwrap_or_default()).collect())
    }
}

impl fmt::Debug for LaurentTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} + O(x^{})", -self.prec - 1)
    }
}

impl fmt::Display for LaurentTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| match e {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &LaurentTail {
    type Output = LaurentTail;
    fn add(self, rhs: &LaurentTail) -> LaurentTail {
        let mut out = self.truncate(self.prec.min(rhs.prec));
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentTail {
    type Output = LaurentTail;
    fn sub(self, rhs: &LaurentTail) -> LaurentTail {
        self + &(-rhs)
    }
}

impl Mul for &LaurentTail {
    type Output = LaurentTail;
    fn mul(self, rhs: &LaurentTail) -> LaurentTail {
        let prec = (self.prec - rhs.effective_lead()).min(rhs.prec - self.effective_lead());
        let mut out = LaurentTail::zero(prec);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                if a + b >= -prec {
                    out.add_term(a + b, ca * cb);
                }
            }
        }
        out
    }
}

impl Neg for &LaurentTail {
    type Output = LaurentTail;
    fn neg(self) -> LaurentTail {
        LaurentTail {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            prec: self.prec,
        }
    }
}

impl Neg for LaurentTail {
    type Output = LaurentTail;
    fn neg(self) -> LaurentTail {
        -&self
    }
}

forward_owned!(LaurentTail, Add add, Sub sub, Mul mul);

/// Expansion of `f` at infinity, exact through `x^-m`.
pub fn laurent_expand(f: &RatFunc, m: i64) -> LaurentTail {
    if f.is_zero() {
        return LaurentTail::zero(m);
    }
    let dn = f.num().degree().unwrap();
    let dd = f.den().degree().unwrap();
    let lead = dn as i64 - dd as i64;
    // f = x^lead * n(y) / d(y) with y = 1/x and n, d the reversed polynomials
    let n: Vec<Scalar> = f.num().coeffs().iter().rev().cloned().collect();
    let d: Vec<Scalar> = f.den().coeffs().iter().rev().cloned().collect();
    let count = lead + m + 1;
    if count <= 0 {
        return LaurentTail::zero(m);
    }
    let d0_inv = d[0].recip();
    let mut s: Vec<Scalar> = Vec::with_capacity(count as usize);
    for k in 0..count as usize {
        let mut acc = n.get(k).cloned().unwrap_or_default();
        for i in 1..=k.min(d.len() - 1) {
            acc -= &d[i] * &s[k - i];
        }
        s.push(acc * &d0_inv);
    }
    LaurentTail::new(
        s.into_iter().enumerate().map(|(k, c)| (lead - k as i64, c)),
        m,
    )
}

/// Antiderivative of a Laurent tail; see [`LaurentTail::antiderivative`].
pub fn antiderivative(t: &LaurentTail) -> Result<LaurentTail> {
    t.antiderivative()
}

/// Find `N / D` with `deg N <= deg_n`, `deg D <= deg_d` whose expansion
/// matches every known coefficient of `t`.
pub fn rational_reconstruct(t: &LaurentTail, deg_n: usize, deg_d: usize) -> Result<Option<RatFunc>> {
    let known = t.prec() + deg_n as i64 + 1;
    let needed = (deg_n + deg_d + 2) as i64;
    if known < needed {
        return Err(Error::InsufficientPrecision {
            needed,
            available: known.max(0),
        });
    }
    if t.is_zero() {
        return Ok(Some(RatFunc::zero()));
    }
    if t.lead_exponent().unwrap() > deg_n as i64 {
        return Ok(None);
    }
    let coeff = |e: i64| t.coeff(e).unwrap_or_default();
    for dd in 0..=deg_d {
        // (D t)_e = Σ_i d_i t_{e-i} must vanish for -prec + dd <= e <= -1
        let lo = -t.prec() + dd as i64;
        let rows: Vec<i64> = (lo..0).collect();
        let matrix: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|&e| (0..dd).map(|i| coeff(e - i as i64)).collect())
            .collect();
        let rhs: Vec<Scalar> = rows.iter().map(|&e| -coeff(e - dd as i64)).collect();
        let Some(sol) = linalg::solve(&matrix, &rhs, dd) else {
            continue;
        };
        let mut dcoeffs = sol;
        dcoeffs.push(Scalar::one());
        let den = Poly::from_coeffs(dcoeffs);
        let product = &LaurentTail::new(
            den.coeffs().iter().enumerate().map(|(i, c)| (i as i64, c.clone())),
            i64::MAX / 4,
        ) * t;
        let num = product.polynomial_part();
        if num.degree().is_some_and(|d| d > deg_n) {
            continue;
        }
        let cand = RatFunc::new(num, den)?;
        if laurent_expand(&cand, t.prec()).agrees_with(t) {
            return Ok(Some(cand));
        }
    }
    Ok(None)
}
