#![allow(dead_code)]

use std::collections::BTreeMap;

use bispec::algebra::scalar::{int, Scalar};
use bispec::algebra::RatFunc;
use bispec::diffop::{DiffOp, Var};
use num_traits::Zero;
use proptest::prelude::*;

/// Operators with Laurent-polynomial coefficients as `Σ c·x^a ∂^b`, multiplied
/// through `∂^b x^c = Σ_k C(b,k) (c)_k x^(c-k) ∂^(b-k)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Weyl(pub BTreeMap<(i64, usize), Scalar>);

fn falling(c: i64, k: usize) -> Scalar {
    (0..k as i64).fold(int(1), |acc, i| acc * int(c - i))
}

fn choose(b: usize, k: usize) -> Scalar {
    (0..k).fold(int(1), |acc, i| acc * int((b - i) as i64) / int(i as i64 + 1))
}

impl Weyl {
    pub fn term(c: i64, a: i64, b: usize) -> Self {
        let mut w = Weyl::default();
        w.push(a, b, int(c));
        w
    }

    fn push(&mut self, a: i64, b: usize, c: Scalar) {
        let slot = self.0.entry((a, b)).or_default();
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&(a, b));
        }
    }

    pub fn add(&self, rhs: &Weyl) -> Weyl {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.0 {
            out.push(a, b, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Weyl) -> Weyl {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.0 {
            out.push(a, b, -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Weyl {
        let mut out = Weyl::default();
        for (&(a, b), c) in &self.0 {
            out.push(a, b, c * s);
        }
        out
    }

    pub fn mul(&self, rhs: &Weyl) -> Weyl {
        let mut out = Weyl::default();
        for (&(a, b), c1) in &self.0 {
            for (&(c, d), c2) in &rhs.0 {
                for k in 0..=b {
                    let f = falling(c, k);
                    if f.is_zero() {
                        continue;
                    }
                    out.push(a + c - k as i64, b + d - k, c1 * c2 * choose(b, k) * f);
                }
            }
        }
        out
    }

    pub fn bracket(&self, rhs: &Weyl) -> Weyl {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn from_diffop(l: &DiffOp) -> Weyl {
        let mut out = Weyl::default();
        for (j, c) in l.coeffs() {
            assert!(c.is_laurent_polynomial(), "oracle needs Laurent coefficients");
            let shift = c.den().degree().unwrap() as i64;
            let lead = c.den().leading();
            for (i, n) in c.num().coeffs().iter().enumerate() {
                if !n.is_zero() {
                    out.push(i as i64 - shift, j, n / &lead);
                }
            }
        }
        out
    }

    pub fn to_diffop(&self, var: Var) -> DiffOp {
        let mut out = DiffOp::zero(var);
        for (&(a, b), c) in &self.0 {
            out = &out + &DiffOp::monomial(RatFunc::monomial(c.clone(), a), b, var);
        }
        out
    }
}

pub fn laurent_op(max_order: usize, lo: i64, hi: i64) -> impl Strategy<Value = DiffOp> {
    prop::collection::vec((lo..=hi, 0..=max_order, -3i64..=3), 0..6).prop_map(|terms| {
        let mut w = Weyl::default();
        for (a, b, c) in terms {
            w = w.add(&Weyl::term(c, a, b));
        }
        w.to_diffop(Var::X)
    })
}

/// Weyl-algebra operators: polynomial coefficients of degree at most 4, order at most 4.
pub fn weyl_op() -> impl Strategy<Value = DiffOp> {
    laurent_op(4, 0, 4)
}

/// Operators whose coefficients are sums of `c·x^e` and `c/(x - a)`.
pub fn rational_op() -> impl Strategy<Value = DiffOp> {
    let coeff = (-3i64..=3, -2i64..=3, -2i64..=2, 1i64..=3, 1i64..=4).prop_map(|(c, e, a, n, d)| {
        let pole = RatFunc::new(
            bispec::algebra::Poly::constant(Scalar::new(n.into(), d.into())),
            bispec::algebra::Poly::from_ints(&[-a, 1]),
        )
        .unwrap();
        &RatFunc::monomial(int(c), e) + &pole
    });
    prop::collection::vec((0usize..=3, coeff), 1..4)
        .prop_map(|cs| DiffOp::from_coeffs(Var::X, cs))
}

pub fn x() -> DiffOp {
    DiffOp::variable(Var::X)
}

pub fn d() -> DiffOp {
    DiffOp::d(Var::X)
}

pub fn xpow(c: i64, e: i64) -> DiffOp {
    DiffOp::function(RatFunc::monomial(int(c), e), Var::X)
}
