use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::scalar::{int, Scalar};
use crate::algebra::{laurent_expand, LaurentTail, Poly, RatFunc};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::pdo::{Pdo, EXACT};

/// Split `L = f(∂) + V` where `f` collects the values of the coefficients at
/// infinity and every coefficient of `V` vanishes there.
pub fn split_constant_part(l: &DiffOp) -> Result<(Poly, DiffOp)> {
    let mut cs = Vec::new();
    for (j, v) in l.coeffs() {
        match v.order_at_infinity() {
            Some(o) if o > 0 => return Err(Error::UnboundedCoefficient { index: j }),
            Some(0) => {
                cs.resize(cs.len().max(j + 1), Scalar::zero());
                cs[j] = v.leading_at_infinity();
            }
            _ => {}
        }
    }
    let f = Poly::from_coeffs(cs);
    let v = l - &DiffOp::from_symbol(&f, l.var());
    Ok((f, v))
}

/// Solution of `L K = K f(∂)` with `K = 1 + Σ_{j=1}^{J} a_j ∂^-j`.
#[derive(Clone, Debug)]
pub struct WaveData {
    pub l: DiffOp,
    pub f: Poly,
    pub k: Pdo,
    pub trunc: usize,
}

impl WaveData {
    /// The coefficient `a_j` of `∂^-j`.
    pub fn a(&self, j: usize) -> RatFunc {
        self.k.coeff(-(j as i64)).unwrap_or_default()
    }

    /// `L K - K f(∂)`, exact down to `∂^(N - J)`.
    pub fn defect(&self) -> Pdo {
        let lk = Pdo::from_diffop(&self.l).mul(&self.k);
        let kf = self.k.mul(&Pdo::from_diffop(&DiffOp::from_symbol(&self.f, self.l.var())));
        lk.sub(&kf)
    }
}

pub fn wave_operator(l: &DiffOp, f: &Poly, trunc: usize) -> Result<WaveData> {
    if !l.is_monic() {
        return Err(Error::NotMonic);
    }
    let n = l.order().unwrap();
    if f.degree() != Some(n) || !f.leading().is_one() {
        return Err(Error::NotNormalized(format!("f must be monic of degree {n}")));
    }
    let v = l - &DiffOp::from_symbol(f, l.var());
    if v.order().is_some_and(|o| o + 2 > n) {
        return Err(Error::NotNormalized(format!("L - f(d) = {v} has order above {}", n.saturating_sub(2))));
    }
    let lp = Pdo::from_diffop(l);
    let fp = Pdo::from_diffop(&DiffOp::from_symbol(f, l.var()));
    let n_inv = int(n as i64).recip();
    let mut k = Pdo::one(l.var());
    for j in 1..=trunc as i64 {
        // N a_j' = -(coefficient of ∂^(N-1-j) in L K - K f(∂) with a_j = 0)
        let deg = n as i64 - 1 - j;
        let r = &lp.product_coeff(&k, deg) - &k.product_coeff(&fp, deg);
        let aj = r.scale(&-n_inv.clone()).integrate().map_err(|e| match e {
            Error::LogObstruction(msg) => Error::LogObstruction(format!("step {j}: {msg}")),
            other => other,
        })?;
        k = Pdo::new(l.var(), k.coeffs().map(|(i, c)| (i, c.clone())).chain([(-j, aj)]), EXACT);
    }
    let k = k.truncate(-(trunc as i64));
    let w = WaveData {
        l: l.clone(),
        f: f.clone(),
        k,
        trunc,
    };
    debug_assert!(w.defect().is_zero());
    Ok(w)
}

/// `Θ = K^-1 θ K` through `∂^-depth`.
#[derive(Clone, Debug)]
pub struct ThetaConjugate {
    pub theta: Pdo,
    pub max_degree: Option<usize>,
    /// Indices `j` whose `Θ_j` is not a polynomial.
    pub non_polynomial: Vec<usize>,
}

impl ThetaConjugate {
    /// `Θ_j` as a rational function.
    pub fn coeff(&self, j: usize) -> RatFunc {
        self.theta.coeff(-(j as i64)).unwrap_or_default()
    }
}

pub fn conjugate_theta(w: &WaveData, theta: &Poly, depth: usize) -> Result<ThetaConjugate> {
    if depth > w.trunc {
        return Err(Error::TruncationTooShort {
            have: w.trunc,
            need: depth,
        });
    }
    let t = Pdo::function(RatFunc::from_poly(theta.clone()), w.l.var());
    let big = w.k.inverse_unipotent().mul(&t.mul(&w.k)).truncate(-(depth as i64));
    let mut max_degree = None;
    let mut non_polynomial = Vec::new();
    for (k, c) in big.coeffs() {
        match c.as_poly() {
            Some(p) => max_degree = max_degree.max(p.degree()),
            None => non_polynomial.push((-k) as usize),
        }
    }
    non_polynomial.sort_unstable();
    Ok(ThetaConjugate {
        theta: big,
        max_degree,
        non_polynomial,
    })
}

/// Expansions at infinity of the wave coefficients, for reconstruction checks.
pub fn wave_tails(w: &WaveData, prec: i64) -> BTreeMap<usize, LaurentTail> {
    (1..=w.trunc).map(|j| (j, laurent_expand(&w.a(j), prec))).collect()
}
