//! Normal-ordered differential operators `Σ V_j(x) ∂^j` with rational coefficients.

mod euler;
mod ops;

pub use euler::{euler_coefficients, euler_symbol, from_euler, p_form_check, stirling_first};
pub use ops::{
    ad_chain, ad_condition_min_m, ad_pow, apply_to_series, commutator, dop_mul, gauge_conjugate,
    gauge_normalize, left_divide, right_divide, Gauge,
};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::algebra::poly::forward_owned;
use crate::algebra::scalar::{binomial, bit_size, Scalar};
use crate::algebra::{Poly, RatFunc};

/// Which variable an operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Z,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Z => "z",
        }
    }

    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Z,
            Var::Z => Var::X,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffOp {
    var: Var,
    coeffs: BTreeMap<usize, RatFunc>,
}

impl DiffOp {
    pub fn zero(var: Var) -> Self {
        DiffOp {
            var,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(var: Var) -> Self {
        DiffOp::function(RatFunc::one(), var)
    }

    /// Multiplication by `f`.
    pub fn function(f: RatFunc, var: Var) -> Self {
        DiffOp::monomial(f, 0, var)
    }

    pub fn constant(c: Scalar, var: Var) -> Self {
        DiffOp::function(RatFunc::constant(c), var)
    }

    /// Multiplication by the variable itself.
    pub fn variable(var: Var) -> Self {
        DiffOp::function(RatFunc::x(), var)
    }

    /// `∂` in the given variable.
    pub fn d(var: Var) -> Self {
        DiffOp::monomial(RatFunc::one(), 1, var)
    }

    /// The Euler operator `x∂`.
    pub fn euler(var: Var) -> Self {
        DiffOp::monomial(RatFunc::x(), 1, var)
    }

    pub fn monomial(f: RatFunc, j: usize, var: Var) -> Self {
        DiffOp::from_coeffs(var, [(j, f)])
    }

    pub fn from_coeffs(var: Var, coeffs: impl IntoIterator<Item = (usize, RatFunc)>) -> Self {
        let mut out = DiffOp::zero(var);
        for (j, f) in coeffs {
            out.add_term(j, f);
        }
        out
    }

    /// Constant-coefficient operator `p(∂)`.
    pub fn from_symbol(p: &Poly, var: Var) -> Self {
        DiffOp::from_coeffs(
            var,
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(j, c)| (j, RatFunc::constant(c.clone()))),
        )
    }

    pub(crate) fn add_term(&mut self, j: usize, f: RatFunc) {
        if f.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&j) {
            Some(slot) => {
                *slot = &*slot + &f;
                if slot.is_zero() {
                    self.coeffs.remove(&j);
                }
            }
            None => {
                self.coeffs.insert(j, f);
            }
        }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    /// The same coefficients read in another variable.
    pub fn retag(&self, var: Var) -> DiffOp {
        DiffOp {
            var,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, j: usize) -> RatFunc {
        self.coeffs.get(&j).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl DoubleEndedIterator<Item = (usize, &RatFunc)> {
        self.coeffs.iter().map(|(j, f)| (*j, f))
    }

    pub fn leading(&self) -> RatFunc {
        self.coeffs.values().next_back().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// Order-zero operators are functions.
    pub fn as_function(&self) -> Option<RatFunc> {
        match self.order() {
            None => Some(RatFunc::zero()),
            Some(0) => Some(self.coeff(0)),
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        self.as_function().and_then(|f| f.as_constant())
    }

    /// All coefficients are constants.
    pub fn is_constant_coefficient(&self) -> bool {
        self.coeffs.values().all(|f| f.as_constant().is_some())
    }

    /// The symbol `Σ c_j z^j` of a constant-coefficient operator.
    pub fn constant_symbol(&self) -> Option<Poly> {
        let top = match self.order() {
            None => return Some(Poly::zero()),
            Some(n) => n,
        };
        let mut cs = Vec::with_capacity(top + 1);
        for j in 0..=top {
            cs.push(self.coeff(j).as_constant()?);
        }
        Some(Poly::from_coeffs(cs))
    }

    /// All coefficients are polynomials, so the operator lies in the Weyl algebra.
    pub fn is_weyl(&self) -> bool {
        self.coeffs.values().all(|f| f.is_polynomial())
    }

    pub fn scale(&self, c: &Scalar) -> DiffOp {
        DiffOp::from_coeffs(self.var, self.coeffs.iter().map(|(j, f)| (*j, f.scale(c))))
    }

    /// `f · L`.
    pub fn mul_left(&self, f: &RatFunc) -> DiffOp {
        DiffOp::from_coeffs(self.var, self.coeffs.iter().map(|(j, g)| (*j, f * g)))
    }

    pub fn pow(&self, n: usize) -> DiffOp {
        let mut acc = DiffOp::one(self.var);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Largest bit size of any rational number appearing in a coefficient.
    pub fn max_bit_size(&self) -> u64 {
        self.coeffs
            .values()
            .flat_map(|f| f.num().coeffs().iter().chain(f.den().coeffs()))
            .map(bit_size)
            .max()
            .unwrap_or(0)
    }

    /// Apply `g` to every coefficient.
    pub fn map_coeffs(&self, mut g: impl FnMut(usize, &RatFunc) -> RatFunc) -> DiffOp {
        DiffOp::from_coeffs(self.var, self.coeffs.iter().map(|(j, f)| (*j, g(*j, f))))
    }

    /// Canonical text form, e.g. `d^2 - 2*x^-2`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let v = self.var.name();
        let mut pieces: Vec<(bool, String)> = Vec::new();
        for (j, f) in self.coeffs.iter().rev() {
            let dpart = match j {
                0 => None,
                1 => Some("d".to_string()),
                _ => Some(format!("d^{j}")),
            };
            if f.is_laurent_polynomial() {
                let k = f.den().degree().unwrap() as i64;
                for (i, c) in f.num().coeffs().iter().enumerate().rev() {
                    if c.is_zero() {
                        continue;
                    }
                    let e = i as i64 - k;
                    let xpart = match e {
                        0 => None,
                        1 => Some(v.to_string()),
                        _ => Some(format!("{v}^{e}")),
                    };
                    let mut factors: Vec<String> = Vec::new();
                    let abs = c.abs();
                    if !abs.is_one() || (xpart.is_none() && dpart.is_none()) {
                        factors.push(abs.to_string());
                    }
                    factors.extend(xpart);
                    factors.extend(dpart.clone());
                    pieces.push((c.is_negative(), factors.join("*")));
                }
            } else {
                let mut s = f.fmt_with(v);
                if let Some(d) = &dpart {
                    s = format!("{s}*{d}");
                }
                pieces.push((false, s));
            }
        }
        let mut out = String::new();
        for (i, (neg, s)) in pieces.into_iter().enumerate() {
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&s);
        }
        out
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

fn same_var(a: &DiffOp, b: &DiffOp) -> Var {
    assert_eq!(a.var, b.var, "operators act on different variables");
    a.var
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        same_var(self, rhs);
        let mut out = self.clone();
        for (j, f) in &rhs.coeffs {
            out.add_term(*j, f.clone());
        }
        out
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        self + &(-rhs)
    }
}

impl Mul for &DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: &DiffOp) -> DiffOp {
        let var = same_var(self, rhs);
        let mut out = DiffOp::zero(var);
        let max_i = self.order().unwrap_or(0);
        for (j, b) in &rhs.coeffs {
            // b^(k) for k = 0..=max_i
            let mut derivs = Vec::with_capacity(max_i + 1);
            derivs.push(b.clone());
            for k in 1..=max_i {
                let next = derivs[k - 1].derivative();
                derivs.push(next);
            }
            for (i, a) in &self.coeffs {
                for (k, dk) in derivs.iter().enumerate().take(*i + 1) {
                    if dk.is_zero() {
                        break;
                    }
                    let c = binomial(*i as i64, k);
                    out.add_term(i + j - k, (a * dk).scale(&c));
                }
            }
        }
        out
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp {
            var: self.var,
            coeffs: self.coeffs.iter().map(|(j, f)| (*j, -f)).collect(),
        }
    }
}

impl Neg for DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        -&self
    }
}

forward_owned!(DiffOp, Add add, Sub sub, Mul mul);
