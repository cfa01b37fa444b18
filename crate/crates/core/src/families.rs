//! Constructors for the Airy, Bessel and constant-coefficient families, and
//! Darboux transformations between operators.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::scalar::{int, is_integer, Scalar};
use crate::algebra::{Poly, RatFunc};
use crate::diffop::{euler_symbol, from_euler, p_form_check, right_divide, DiffOp, Var};
use crate::error::{Error, Result};

fn check_indices(p: usize, a: &BTreeMap<usize, Scalar>) -> Result<()> {
    if p < 2 {
        return Err(Error::BadIndex { index: p, max: 0 });
    }
    match a.keys().find(|&&j| j == 0 || j + 2 > p) {
        Some(&index) => Err(Error::BadIndex { index, max: p - 2 }),
        None => Ok(()),
    }
}

/// `∂^p + Σ a_j ∂^j - x` for `1 <= j <= p-2`.
pub fn make_airy(p: usize, a: &BTreeMap<usize, Scalar>) -> Result<DiffOp> {
    Ok(&make_constcoeff(p, a)? - &DiffOp::variable(Var::X))
}

/// `∂^p + Σ a_j ∂^j` for `1 <= j <= p-2`.
pub fn make_constcoeff(p: usize, a: &BTreeMap<usize, Scalar>) -> Result<DiffOp> {
    check_indices(p, a)?;
    let mut cs = vec![Scalar::zero(); p + 1];
    cs[p] = Scalar::one();
    for (j, c) in a {
        cs[*j] = c.clone();
    }
    Ok(DiffOp::from_symbol(&Poly::from_coeffs(cs), Var::X))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BesselSpec {
    pub beta: Vec<Scalar>,
    /// Require `Σ β_i = p(p-1)/2`.
    pub check_sum: bool,
}

impl BesselSpec {
    pub fn new(beta: Vec<Scalar>) -> Self {
        BesselSpec {
            beta,
            check_sum: false,
        }
    }

    pub fn from_ints(beta: &[i64]) -> Self {
        BesselSpec::new(beta.iter().map(|&b| int(b)).collect())
    }

    pub fn p(&self) -> usize {
        self.beta.len()
    }

    /// `b(u) = Π (u - β_i)`.
    pub fn symbol(&self) -> Poly {
        self.beta
            .iter()
            .fold(Poly::one(), |acc, b| &acc * &Poly::from_coeffs(vec![-b.clone(), Scalar::one()]))
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.p();
        if p == 0 {
            return Err(Error::BadBesselData("empty parameter list".into()));
        }
        if self.check_sum {
            let sum: Scalar = self.beta.iter().sum();
            let want = int((p * (p - 1) / 2) as i64);
            if sum != want {
                return Err(Error::BadBesselData(format!("sum of β is {sum}, expected {want}")));
            }
        }
        Ok(())
    }
}

/// `x^-p (x∂ - β_1)…(x∂ - β_p)` in normal order.
pub fn make_bessel(spec: &BesselSpec) -> Result<DiffOp> {
    spec.validate()?;
    let scale = RatFunc::monomial(Scalar::one(), -(spec.p() as i64));
    let w: BTreeMap<usize, RatFunc> = spec
        .symbol()
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| (k, scale.scale(c)))
        .collect();
    Ok(from_euler(&w, Var::X))
}

/// Some `β_i - β_j` with `i ≠ j` lies in `pℤ`.
pub fn bessel_integrality(spec: &BesselSpec) -> bool {
    let p = int(spec.p() as i64);
    let b = &spec.beta;
    (0..b.len()).any(|i| (i + 1..b.len()).any(|j| is_integer(&((&b[i] - &b[j]) / &p))))
}

/// Roots of the Euler symbol of a homogeneous operator of degree `-order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerRoots {
    /// Rational roots with multiplicity, ascending.
    pub beta: Vec<Scalar>,
    /// Factor of the symbol with no rational roots (constant when fully resolved).
    pub unresolved: Poly,
}

impl EulerRoots {
    pub fn is_resolved(&self) -> bool {
        self.unresolved.degree() == Some(0)
    }
}

/// When `x^N L = b(x∂)` for a monic `L` of order `N`, the roots of `b`.
pub fn recognize_bessel(l: &DiffOp) -> Option<EulerRoots> {
    if !l.is_monic() || l.order()? == 0 {
        return None;
    }
    let b = euler_symbol(l)?;
    let (beta, unresolved) = b.rational_roots();
    Some(EulerRoots { beta, unresolved })
}

/// If `base = B^d` for a Bessel operator `B`, its parameters. Uses
/// `B^d = x^(-dN) Π_{i<d} b(x∂ - iN)`, so the roots of the symbol of `base`
/// split into `d` translates of the roots of `b`.
pub fn bessel_power_root(base: &DiffOp, d: usize) -> Option<BesselSpec> {
    let m = base.order()?;
    if d == 0 || m % d != 0 {
        return None;
    }
    let n = m / d;
    let roots = recognize_bessel(base)?;
    if !roots.is_resolved() {
        return None;
    }
    let step = int(n as i64);
    let mut pool = roots.beta;
    let mut beta = Vec::with_capacity(n);
    while let Some(r) = pool.first().cloned() {
        for i in 0..d {
            let want = &r + &step * int(i as i64);
            let pos = pool.iter().position(|c| *c == want)?;
            pool.remove(pos);
        }
        beta.push(r);
    }
    let spec = BesselSpec::new(beta);
    (make_bessel(&spec).ok()?.pow(d) == *base).then_some(spec)
}

#[derive(Clone, Debug, Default)]
pub struct DarbouxOptions {
    /// Declares `base = B^d` for a Bessel operator `B`.
    pub monomial_power: Option<usize>,
    /// Bessel order `N` used to test the shape of `P`.
    pub form_order: Option<usize>,
    /// Fail with `FormViolation` instead of recording the failed shape test.
    pub strict_form: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxResult {
    pub p: DiffOp,
    pub q: DiffOp,
    pub base: DiffOp,
    pub transformed: DiffOp,
    pub monomial: bool,
    pub power: Option<usize>,
    /// The Bessel operator whose power is `base`, for monomial transformations.
    pub root: Option<DiffOp>,
    pub form_ok: Option<bool>,
}

impl DarbouxResult {
    /// Recompute both products.
    pub fn verify(&self) -> bool {
        &self.q * &self.p == self.base
            && &self.p * &self.q == self.transformed
            && match (&self.root, self.power) {
                (Some(b), Some(d)) => b.pow(d) == self.base,
                _ => true,
            }
    }

    /// Chain `self` with a transformation whose base is `self.transformed^d`.
    /// With `P = P2 P1` and `Q = Q1 Q2`, `QP = B^(d1 (d2 + 1))`.
    pub fn then(&self, next: &DarbouxResult) -> Result<DarbouxResult> {
        let d2 = next.power.unwrap_or(1);
        if next.base != self.transformed.pow(d2) {
            return Err(Error::NotAFactor);
        }
        let p = &next.p * &self.p;
        let q = &self.q * &next.q;
        let power = self.power.map(|d1| d1 * (d2 + 1));
        Ok(DarbouxResult {
            base: &q * &p,
            transformed: &p * &q,
            monomial: self.monomial,
            power,
            root: self.root.clone(),
            form_ok: None,
            p,
            q,
        })
    }
}

/// Factor `base = Q P` for the given `P` and exchange to `P Q`.
pub fn darboux(base: &DiffOp, p: &DiffOp, opts: &DarbouxOptions) -> Result<DarbouxResult> {
    if base.var() != p.var() {
        return Err(Error::VariableMismatch);
    }
    if base.is_zero() || p.is_zero() {
        return Err(Error::DivisionByZeroOperator);
    }
    let (q, r) = right_divide(base, p)?;
    if !r.is_zero() {
        return Err(Error::NotAFactor);
    }
    let form_ok = opts.form_order.map(|n| p_form_check(p, n));
    if opts.strict_form && form_ok == Some(false) {
        return Err(Error::FormViolation);
    }
    let root = match opts.monomial_power {
        Some(d) => Some(
            bessel_power_root(base, d)
                .and_then(|s| make_bessel(&s).ok())
                .ok_or_else(|| Error::BadBesselData(format!("base is not a Bessel operator to the power {d}")))?,
        ),
        None => None,
    };
    Ok(DarbouxResult {
        transformed: p * &q,
        monomial: opts.monomial_power.is_some(),
        power: opts.monomial_power,
        root,
        form_ok,
        p: p.clone(),
        q,
        base: base.clone(),
    })
}
