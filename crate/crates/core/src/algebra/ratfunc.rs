//! Rational functions in one variable over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::linalg;
use super::poly::{forward_owned, Poly};
use super::scalar::{int, Scalar};
use crate::error::{Error, Result};

/// Reduced fraction `num / den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let lead = den.leading();
        let (num, den) = if lead.is_one() {
            (num, den)
        } else {
            let inv = lead.recip();
            (num.scale(&inv), den.scale(&inv))
        };
        if den.is_one() {
            return RatFunc { num, den };
        }
        if den.is_monomial() {
            let k = den.degree().unwrap();
            let v = num.valuation().unwrap().min(k);
            return RatFunc {
                num: num.unshift(v),
                den: Poly::monomial(Scalar::one(), k - v),
            };
        }
        let g = num.gcd(&den);
        if g.is_one() {
            RatFunc { num, den }
        } else {
            RatFunc {
                num: num.exact_div(&g),
                den: den.exact_div(&g),
            }
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        RatFunc {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        RatFunc::constant(int(c))
    }

    pub fn x() -> Self {
        RatFunc::from_poly(Poly::x())
    }

    /// `c * x^k` for any integer `k`.
    pub fn monomial(c: Scalar, k: i64) -> Self {
        if k >= 0 {
            RatFunc::from_poly(Poly::monomial(c, k as usize))
        } else {
            RatFunc::canonical(Poly::constant(c), Poly::monomial(Scalar::one(), (-k) as usize))
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// True when the denominator is a power of `x`.
    pub fn is_laurent_polynomial(&self) -> bool {
        self.den.is_monomial()
    }

    /// Exponent of the leading term of the expansion at infinity.
    pub fn order_at_infinity(&self) -> Option<i64> {
        let n = self.num.degree()? as i64;
        Some(n - self.den.degree().unwrap() as i64)
    }

    /// Coefficient of the leading term at infinity (zero for the zero function).
    pub fn leading_at_infinity(&self) -> Scalar {
        self.num.leading()
    }

    /// Order of vanishing at the origin (negative for a pole).
    pub fn valuation_at_zero(&self) -> Option<i64> {
        let v = self.num.valuation()? as i64;
        Some(v - self.den.valuation().unwrap() as i64)
    }

    pub fn scale(&self, c: &Scalar) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Option<RatFunc> {
        (!self.is_zero()).then(|| RatFunc::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        let inv = rhs.inv().ok_or(Error::ZeroDenominator)?;
        Ok(self * &inv)
    }

    pub fn pow(&self, n: i64) -> RatFunc {
        if n < 0 {
            return self.inv().expect("negative power of zero").pow(-n);
        }
        RatFunc {
            num: self.num.pow(n as usize),
            den: self.den.pow(n as usize),
        }
    }

    pub fn derivative(&self) -> RatFunc {
        if self.den.is_one() {
            return RatFunc::from_poly(self.num.derivative());
        }
        if self.den.is_monomial() {
            // (n / x^k)' = (x n' - k n) / x^(k+1)
            let k = self.den.degree().unwrap();
            let top = &self.num.derivative().shift(1) - &self.num.scale(&int(k as i64));
            return RatFunc::canonical(top, Poly::monomial(Scalar::one(), k + 1));
        }
        let top = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::canonical(top, &self.den * &self.den)
    }

    pub fn nth_derivative(&self, n: usize) -> RatFunc {
        (0..n).fold(self.clone(), |acc, _| acc.derivative())
    }

    pub fn eval(&self, at: &Scalar) -> Option<Scalar> {
        let d = self.den.eval(at);
        (!d.is_zero()).then(|| self.num.eval(at) / d)
    }

    /// Rational antiderivative with zero constant of integration, found by
    /// Horowitz-Ostrogradsky reduction. Fails when a logarithm is needed.
    pub fn integrate(&self) -> Result<RatFunc> {
        let (poly, rem) = self.num.div_rem(&self.den);
        let poly_part = Poly::from_coeffs(
            std::iter::once(Scalar::zero())
                .chain(
                    poly.coeffs()
                        .iter()
                        .enumerate()
                        .map(|(i, c)| c / int(i as i64 + 1)),
                )
                .collect(),
        );
        if rem.is_zero() {
            return Ok(RatFunc::from_poly(poly_part));
        }
        let d = &self.den;
        let d_minus = d.gcd(&d.derivative());
        let d_star = d.exact_div(&d_minus);
        let m = d_minus.degree().unwrap();
        let n = d_star.degree().unwrap();
        if m == 0 {
            return Err(Error::LogObstruction(format!(
                "integrand {self} has only simple poles"
            )));
        }
        // rem = B' D* - B T + C D-, with T = D* (D-)' / D-
        let t = (&d_star * &d_minus.derivative()).exact_div(&d_minus);
        let size = m + n;
        let mut cols: Vec<Poly> = Vec::with_capacity(size);
        for i in 0..m {
            let b = Poly::monomial(Scalar::one(), i);
            cols.push(&(&b.derivative() * &d_star) - &(&b * &t));
        }
        for i in 0..n {
            cols.push(&Poly::monomial(Scalar::one(), i) * &d_minus);
        }
        let matrix: Vec<Vec<Scalar>> = (0..size)
            .map(|row| cols.iter().map(|c| c.coeff(row)).collect())
            .collect();
        let rhs: Vec<Scalar> = (0..size).map(|row| rem.coeff(row)).collect();
        let sol = linalg::solve(&matrix, &rhs, size)
            .expect("Horowitz system is always solvable");
        if sol[m..].iter().any(|c| !c.is_zero()) {
            return Err(Error::LogObstruction(format!(
                "integrand {self} has nonzero residues"
            )));
        }
        let b = Poly::from_coeffs(sol[..m].to_vec());
        Ok(&RatFunc::from_poly(poly_part) + &RatFunc::canonical(b, d_minus))
    }

    /// Format with a chosen variable name, as a parseable expression.
    pub fn fmt_with(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.fmt_with(var);
        }
        let num = self.num.fmt_with(var);
        let single = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
        if single && !num.starts_with('-') {
            format!("{num}/({})", self.den.fmt_with(var))
        } else {
            format!("({num})/({})", self.den.fmt_with(var))
        }
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<Scalar> for RatFunc {
    fn from(c: Scalar) -> Self {
        RatFunc::constant(c)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with("x"))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with("x"))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::canonical(&self.num + &rhs.num, self.den.clone());
        }
        if self.den.is_monomial() && rhs.den.is_monomial() {
            let (a, b) = (self.den.degree().unwrap(), rhs.den.degree().unwrap());
            let k = a.max(b);
            let top = &self.num.shift(k - a) + &rhs.num.shift(k - b);
            return RatFunc::canonical(top, Poly::monomial(Scalar::one(), k));
        }
        let g = self.den.gcd(&rhs.den);
        let left = rhs.den.exact_div(&g);
        let right = self.den.exact_div(&g);
        let top = &(&self.num * &left) + &(&rhs.num * &right);
        RatFunc::canonical(top, &self.den * &left)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        if self.den.is_monomial() && rhs.den.is_monomial() {
            return RatFunc::canonical(&self.num * &rhs.num, &self.den * &rhs.den);
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let num = &self.num.exact_div(&g1) * &rhs.num.exact_div(&g2);
        let den = &self.den.exact_div(&g2) * &rhs.den.exact_div(&g1);
        RatFunc::canonical(num, den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

forward_owned!(RatFunc, Add add, Sub sub, Mul mul);

/// Build the canonical representative of `num / den`.
pub fn ratfunc_canonicalize(num: &Poly, den: &Poly) -> Result<RatFunc> {
    RatFunc::new(num.clone(), den.clone())
}
