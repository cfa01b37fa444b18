//! Truncated pseudo-differential operators `Σ a_k(x) ∂^k`, `k` possibly negative.

use std::collections::BTreeMap;
use std::fmt;


use crate::algebra::scalar::binomial;
use crate::algebra::{Poly, RatFunc};
use crate::diffop::{DiffOp, Var};

/// Marker for "no truncation": finite operators are exact in every degree.
pub const EXACT: i64 = i64::MIN / 4;

/// Coefficients are exact for every `∂`-degree `>= low`; lower terms are unknown.
#[derive(Clone, PartialEq, Eq)]
pub struct Pdo {
    var: Var,
    coeffs: BTreeMap<i64, RatFunc>,
    low: i64,
}

impl Pdo {
    pub fn new(var: Var, coeffs: impl IntoIterator<Item = (i64, RatFunc)>, low: i64) -> Self {
        let mut out = Pdo {
            var,
            coeffs: BTreeMap::new(),
            low,
        };
        for (k, f) in coeffs {
            out.add_term(k, f);
        }
        out
    }

    pub fn one(var: Var) -> Self {
        Pdo::new(var, [(0, RatFunc::one())], EXACT)
    }

    pub fn from_diffop(l: &DiffOp) -> Self {
        Pdo::new(l.var(), l.coeffs().map(|(j, f)| (j as i64, f.clone())), EXACT)
    }

    pub fn function(f: RatFunc, var: Var) -> Self {
        Pdo::new(var, [(0, f)], EXACT)
    }

    fn add_term(&mut self, k: i64, f: RatFunc) {
        if k < self.low || f.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&k) {
            Some(slot) => {
                *slot = &*slot + &f;
                if slot.is_zero() {
                    self.coeffs.remove(&k);
                }
            }
            None => {
                self.coeffs.insert(k, f);
            }
        }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn top(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    fn effective_top(&self) -> i64 {
        self.top().unwrap_or(self.low - 1)
    }

    pub fn coeff(&self, k: i64) -> Option<RatFunc> {
        (k >= self.low).then(|| self.coeffs.get(&k).cloned().unwrap_or_default())
    }

    pub fn coeffs(&self) -> impl DoubleEndedIterator<Item = (i64, &RatFunc)> {
        self.coeffs.iter().map(|(k, f)| (*k, f))
    }

    pub fn truncate(&self, low: i64) -> Pdo {
        Pdo::new(self.var, self.coeffs.iter().map(|(k, f)| (*k, f.clone())), low.max(self.low))
    }

    pub fn add(&self, rhs: &Pdo) -> Pdo {
        let mut out = self.truncate(rhs.low);
        for (k, f) in &rhs.coeffs {
            out.add_term(*k, f.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Pdo) -> Pdo {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Pdo {
        Pdo {
            var: self.var,
            coeffs: self.coeffs.iter().map(|(k, f)| (*k, -f)).collect(),
            low: self.low,
        }
    }

    /// Product by the Leibniz rule `∂^i b = Σ_k C(i,k) b^(k) ∂^(i-k)`.
    pub fn mul(&self, rhs: &Pdo) -> Pdo {
        assert_eq!(self.var, rhs.var, "operators act on different variables");
        let low = (self.effective_top() + rhs.low).max(rhs.effective_top() + self.low);
        assert!(
            low > EXACT / 2
                || self.coeffs.keys().all(|&i| i >= 0)
                || rhs.coeffs.values().all(|b| b.is_polynomial()),
            "untruncated product of pseudo-differential operators"
        );
        let mut out = Pdo {
            var: self.var,
            coeffs: BTreeMap::new(),
            low,
        };
        for (j, b) in &rhs.coeffs {
            let mut deriv = b.clone();
            let mut k = 0i64;
            let max_i = self.effective_top();
            while !deriv.is_zero() && max_i + j - k >= low {
                for (i, a) in &self.coeffs {
                    if *i >= 0 && k > *i {
                        continue;
                    }
                    let deg = i + j - k;
                    if deg < low {
                        continue;
                    }
                    let c = binomial(*i, k as usize);
                    out.add_term(deg, (a * &deriv).scale(&c));
                }
                deriv = deriv.derivative();
                k += 1;
            }
        }
        out
    }

    /// Coefficient of `∂^deg` in `self · rhs`, treating both as finite sums.
    pub fn product_coeff(&self, rhs: &Pdo, deg: i64) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (i, a) in &self.coeffs {
            for (j, b) in &rhs.coeffs {
                let k = i + j - deg;
                if k < 0 || (*i >= 0 && k > *i) {
                    continue;
                }
                let dk = b.nth_derivative(k as usize);
                if !dk.is_zero() {
                    acc = &acc + &(a * &dk).scale(&binomial(*i, k as usize));
                }
            }
        }
        acc
    }

    /// Inverse of `1 + Σ_{j>0} a_j ∂^-j` with the same truncation.
    pub fn inverse_unipotent(&self) -> Pdo {
        debug_assert_eq!(self.top(), Some(0));
        debug_assert!(self.coeff(0).is_some_and(|c| c.is_one()));
        let mut inv = Pdo::new(self.var, [(0, RatFunc::one())], EXACT);
        let mut n = 1;
        while -n >= self.low {
            let c = self.product_coeff(&inv, -n);
            inv.add_term(-n, -c);
            n += 1;
        }
        inv.low = self.low;
        inv
    }

    /// When every exact coefficient is a polynomial, those polynomials.
    pub fn polynomial_coeffs(&self) -> Option<BTreeMap<i64, Poly>> {
        self.coeffs
            .iter()
            .map(|(k, f)| f.as_poly().map(|p| (*k, p.clone())))
            .collect()
    }

    /// The operator as a differential operator, when no negative powers occur.
    pub fn to_diffop(&self) -> Option<DiffOp> {
        if self.coeffs.keys().any(|&k| k < 0) {
            return None;
        }
        Some(DiffOp::from_coeffs(
            self.var,
            self.coeffs.iter().map(|(k, f)| (*k as usize, f.clone())),
        ))
    }
}

impl fmt::Debug for Pdo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .rev()
            .map(|(k, c)| format!("({c})*d^{k}"))
            .collect();
        if self.low == EXACT {
            write!(f, "{}", parts.join(" + "))
        } else {
            write!(f, "{} + O(d^{})", parts.join(" + "), self.low - 1)
        }
    }
}
