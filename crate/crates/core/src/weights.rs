//! Weight filtrations on operators: Newton polygons, `(ρ,σ)`-orders,
//! associated polynomials and the normal forms of their leading parts.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::airy::split_airy;
use crate::algebra::scalar::{int, Scalar};
use crate::algebra::{Poly, RatFunc};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};

/// Exponent pairs `(m, j)`: `m` is the order at infinity of the coefficient
/// of `∂^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub points: Vec<(i64, usize)>,
    /// Vertices of the convex hull, counterclockwise.
    pub hull: Vec<(i64, usize)>,
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn convex_hull(points: &[(i64, usize)]) -> Vec<(i64, usize)> {
    let mut pts: Vec<(i64, i64)> = points.iter().map(|&(m, j)| (m, j as i64)).collect();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts.into_iter().map(|(m, j)| (m, j as usize)).collect();
    }
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pass in [false, true] {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i64, i64)>> = if pass {
            Box::new(pts.iter().rev())
        } else {
            Box::new(pts.iter())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull.into_iter().map(|(m, j)| (m, j as usize)).collect()
}

pub fn exponent_set(l: &DiffOp) -> NewtonPolygon {
    let points: Vec<(i64, usize)> = l
        .coeffs()
        .filter_map(|(j, c)| c.order_at_infinity().map(|m| (m, j)))
        .collect();
    let hull = convex_hull(&points);
    NewtonPolygon { points, hull }
}

/// Weights `wt(x) = ρ`, `wt(∂) = σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightPair {
    pub rho: i64,
    pub sigma: i64,
    /// Points `(k, j)` with `k > 0` on the supporting line through `(0, N)`.
    pub support: Vec<(i64, usize)>,
}

impl WeightPair {
    pub fn new(rho: i64, sigma: i64) -> Self {
        WeightPair {
            rho,
            sigma,
            support: Vec::new(),
        }
    }

    pub fn weight(&self, m: i64, j: usize) -> i64 {
        self.rho * m + self.sigma * j as i64
    }

    /// Every point of `E(L)` lies on or below the line through `(0, N)`.
    pub fn supports(&self, l: &DiffOp) -> bool {
        let Some(n) = l.order() else {
            return false;
        };
        let top = self.weight(0, n);
        exponent_set(l).points.iter().all(|&(m, j)| self.weight(m, j) <= top)
    }
}

pub fn choose_weights(l: &DiffOp) -> Result<WeightPair> {
    if !l.is_monic() {
        return Err(Error::NotMonic);
    }
    let n = l.order().unwrap();
    let poly = exponent_set(l);
    let slope = poly
        .points
        .iter()
        .filter(|&&(m, j)| m > 0 && j < n)
        .map(|&(m, j)| Scalar::new(((n - j) as i64).into(), m.into()))
        .min()
        .ok_or(Error::NotIncreasing)?;
    let rho = i64::try_from(slope.numer()).expect("small weight");
    let sigma = i64::try_from(slope.denom()).expect("small weight");
    let mut w = WeightPair::new(rho, sigma);
    let top = w.weight(0, n);
    w.support = poly
        .points
        .iter()
        .copied()
        .filter(|&(m, j)| m > 0 && w.weight(m, j) == top)
        .collect();
    Ok(w)
}

pub fn weighted_order(l: &DiffOp, w: &WeightPair) -> Result<i64> {
    exponent_set(l)
        .points
        .iter()
        .map(|&(m, j)| w.weight(m, j))
        .max()
        .ok_or(Error::ZeroOperand)
}

/// Sparse `Σ c x^a y^b` with `a` possibly negative.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiHomPoly {
    terms: BTreeMap<(i64, usize), Scalar>,
}

impl BiHomPoly {
    pub fn new(terms: impl IntoIterator<Item = ((i64, usize), Scalar)>) -> Self {
        let mut out = BiHomPoly::default();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: (i64, usize), c: Scalar) {
        let slot = self.terms.entry(e).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn one() -> Self {
        BiHomPoly::new([((0, 0), Scalar::one())])
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, usize), &Scalar)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, rhs: &BiHomPoly) -> BiHomPoly {
        let mut out = BiHomPoly::default();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: usize) -> BiHomPoly {
        (0..n).fold(BiHomPoly::one(), |acc, _| acc.mul(self))
    }

    /// The common weight of all terms, if there is one.
    pub fn weight(&self, w: &WeightPair) -> Option<i64> {
        let mut ws = self.terms.keys().map(|&(a, b)| w.weight(a, b));
        let first = ws.next()?;
        ws.all(|x| x == first).then_some(first)
    }
}

fn monomial_text(a: i64, b: usize) -> String {
    let mut parts = Vec::new();
    match a {
        0 => {}
        1 => parts.push("x".to_string()),
        _ => parts.push(format!("x^{a}")),
    }
    match b {
        0 => {}
        1 => parts.push("y".to_string()),
        _ => parts.push(format!("y^{b}")),
    }
    parts.join("*")
}

impl fmt::Display for BiHomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by_key(|t| std::cmp::Reverse((t.0 .1, t.0 .0)));
        for (i, (&(a, b), c)) in ordered.into_iter().enumerate() {
            let mono = monomial_text(a, b);
            let mag = c.abs();
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => mono,
                (false, false) => format!("{mag}*{mono}"),
            };
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

pub fn associated_polynomial(l: &DiffOp, w: &WeightPair) -> Result<BiHomPoly> {
    let top = weighted_order(l, w)?;
    Ok(BiHomPoly::new(l.coeffs().filter_map(|(j, c)| {
        let m = c.order_at_infinity()?;
        (w.weight(m, j) == top).then(|| ((m, j), c.leading_at_infinity()))
    })))
}

/// `:f(x, ∂):` for the associated polynomial `f`.
pub fn homogeneous_part(l: &DiffOp, w: &WeightPair) -> Result<DiffOp> {
    let f = associated_polynomial(l, w)?;
    Ok(DiffOp::from_coeffs(
        l.var(),
        f.terms().map(|((a, b), c)| (b, RatFunc::monomial(c.clone(), a))),
    ))
}

/// Which leading-form shape the associated polynomial takes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormCase {
    /// A single term; the shape analysis needs at least two.
    Monomial,
    /// `X^n (X^m + μY)^k` with `σ > ρ = 1`.
    B { n: usize, m: usize, k: usize, mu: Scalar },
    /// `Y^n (Y^m + μX)^k` with `ρ > σ = 1`.
    C { n: usize, m: usize, k: usize, mu: Scalar },
    /// `Π (Y + λX)^e` over at most two factors, with `ρ = σ = 1`.
    D { factors: Vec<(Scalar, usize)> },
    /// A factor is irreducible over the rationals, so no shape is decided.
    UnresolvedOverQ,
    NoMatch,
}

impl fmt::Display for FormCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormCase::Monomial => write!(f, "monomial"),
            FormCase::B { n, m, k, mu } => write!(f, "x^{n}*(x^{m} + ({mu})*y)^{k}"),
            FormCase::C { n, m, k, mu } => write!(f, "y^{n}*(y^{m} + ({mu})*x)^{k}"),
            FormCase::D { factors } => {
                let parts: Vec<String> = factors.iter().map(|(l, e)| format!("(y + ({l})*x)^{e}")).collect();
                write!(f, "{}", parts.join("*"))
            }
            FormCase::UnresolvedOverQ => write!(f, "unresolved over Q"),
            FormCase::NoMatch => write!(f, "no match"),
        }
    }
}

/// `f = scale · (y^r - λx)^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AiryForm {
    pub r: usize,
    pub k: usize,
    pub lambda: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    /// Overall constant multiplying the matched shape.
    pub scale: Scalar,
    pub case: FormCase,
    pub airy: Option<AiryForm>,
    /// `f = y^n (y^r - λx)^k` with `n, k >= 1`: such an `L` cannot act nilpotently.
    pub not_bispectral_by_nilpotency: bool,
    pub weight: i64,
    /// `v(L) > ρ + σ`, the hypothesis under which the shape list is complete.
    pub exceeds_rho_plus_sigma: bool,
}

pub fn normal_form_test(f: &BiHomPoly, w: &WeightPair) -> Result<NormalForm> {
    if f.is_empty() {
        return Err(Error::ZeroOperand);
    }
    let weight = f.weight(w).ok_or(Error::NotHomogeneous)?;
    let mut out = NormalForm {
        scale: Scalar::one(),
        case: FormCase::Monomial,
        airy: None,
        not_bispectral_by_nilpotency: false,
        weight,
        exceeds_rho_plus_sigma: weight > w.rho + w.sigma,
    };
    let a_min = f.terms().map(|((a, _), _)| a).min().unwrap();
    let b_min = f.terms().map(|((_, b), _)| b).min().unwrap();
    let (rho, sigma) = (w.rho, w.sigma);
    if rho <= 0 || sigma <= 0 || rho.gcd(&sigma) != 1 {
        return Err(Error::NotHomogeneous);
    }
    // f = x^a_min y^b_min Σ_t c_t x^(σt) y^(ρ(T-t))
    let mut cs: BTreeMap<usize, Scalar> = BTreeMap::new();
    for ((a, _), c) in f.terms() {
        cs.insert(((a - a_min) / sigma) as usize, c.clone());
    }
    let t_top = *cs.keys().next_back().unwrap();
    let p = Poly::from_coeffs((0..=t_top).map(|t| cs.get(&t).cloned().unwrap_or_default()).collect());
    out.scale = p.leading();
    if t_top == 0 {
        out.scale = f.terms().next().unwrap().1.clone();
        return Ok(out);
    }
    let (roots, rest) = p.rational_roots();
    let unresolved = rest.degree().unwrap_or(0) > 0;
    let mut distinct: Vec<(Scalar, usize)> = Vec::new();
    for r in roots {
        match distinct.last_mut() {
            Some((last, e)) if *last == r => *e += 1,
            _ => distinct.push((r, 1)),
        }
    }
    let single = (!unresolved && distinct.len() == 1).then(|| distinct[0].0.clone());
    let k = t_top;
    let neg_r_pow = |r: &Scalar| (-r.clone()).pow(k as i32);
    out.case = if unresolved {
        FormCase::UnresolvedOverQ
    } else if rho > sigma && sigma == 1 && a_min == 0 && single.is_some() {
        let r = single.clone().unwrap();
        out.scale = &out.scale * neg_r_pow(&r);
        FormCase::C {
            n: b_min,
            m: rho as usize,
            k,
            mu: -r.recip(),
        }
    } else if sigma > rho && rho == 1 && b_min == 0 && single.is_some() {
        let r = single.clone().unwrap();
        FormCase::B {
            n: a_min as usize,
            m: sigma as usize,
            k,
            mu: -r,
        }
    } else if rho == 1 && sigma == 1 && a_min == 0 && distinct.len() + usize::from(b_min > 0) <= 2 {
        let mut factors: Vec<(Scalar, usize)> = Vec::new();
        if b_min > 0 {
            factors.push((Scalar::zero(), b_min));
        }
        for (r, e) in &distinct {
            out.scale = &out.scale * (-r.clone()).pow(*e as i32);
            factors.push((-r.recip(), *e));
        }
        factors.sort();
        FormCase::D { factors }
    } else {
        FormCase::NoMatch
    };
    if let (Some(r), true, true) = (&single, sigma == 1, a_min == 0) {
        if b_min == 0 && rho >= 2 {
            out.airy = Some(AiryForm {
                r: rho as usize,
                k,
                lambda: r.recip(),
            });
        } else if b_min >= 1 {
            out.not_bispectral_by_nilpotency = true;
        }
    }
    Ok(out)
}

/// The alternative `f^s = g^r` with `r`, `s` the weights of `f` and `g`.
pub fn power_relation(f: &BiHomPoly, g: &BiHomPoly, w: &WeightPair) -> Result<bool> {
    let r = f.weight(w).ok_or(Error::NotHomogeneous)?;
    let s = g.weight(w).ok_or(Error::NotHomogeneous)?;
    if r <= 0 || s <= 0 {
        return Ok(false);
    }
    Ok(f.pow(s as usize) == g.pow(r as usize))
}

/// Split `L = A + V` after checking that its associated polynomial is `(y^N - λx)^1`.
pub fn principal_part(l: &DiffOp) -> Result<(DiffOp, DiffOp)> {
    let n = l.order().ok_or(Error::ZeroOperand)?;
    let w = choose_weights(l)?;
    let f = associated_polynomial(l, &w)?;
    let nf = normal_form_test(&f, &w)?;
    match nf.airy {
        Some(AiryForm { r, k: 1, .. }) if r == n && nf.scale == int(1) => split_airy(l),
        _ => Err(Error::NotAiryShape(format!(
            "associated polynomial {f} under weights ({}, {})",
            w.rho, w.sigma
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;
    use crate::diffop::Var;

    fn d() -> DiffOp {
        DiffOp::d(Var::X)
    }
    fn xpow(c: i64, e: i64) -> DiffOp {
        DiffOp::function(RatFunc::monomial(int(c), e), Var::X)
    }
    fn bi(terms: &[(i64, usize, i64)]) -> BiHomPoly {
        BiHomPoly::new(terms.iter().map(|&(a, b, c)| ((a, b), int(c))))
    }

    #[test]
    fn exponent_sets() {
        let mut pts = exponent_set(&(&d().pow(2) - &xpow(1, 1))).points;
        pts.sort();
        assert_eq!(pts, vec![(0, 2), (1, 0)]);
        assert_eq!(exponent_set(&d().pow(2)).points, vec![(0, 2)]);
        let mut pts = exponent_set(&(&(&xpow(1, 2) * &d()) + &xpow(1, 1))).points;
        pts.sort();
        assert_eq!(pts, vec![(1, 0), (2, 1)]);
        let hull = exponent_set(&(&(&d().pow(3) - &xpow(1, 2)) + &(&xpow(1, -1) * &d()))).hull;
        assert_eq!(hull.len(), 3);
    }

    #[test]
    fn weight_choice() {
        let w = choose_weights(&(&d().pow(2) - &xpow(1, 1))).unwrap();
        assert_eq!((w.rho, w.sigma, w.support.clone()), (2, 1, vec![(1, 0)]));
        let w = choose_weights(&(&d().pow(3) - &xpow(1, 1))).unwrap();
        assert_eq!((w.rho, w.sigma), (3, 1));
        let l = &d().pow(3) - &(&xpow(1, 2) * &d());
        let w = choose_weights(&l).unwrap();
        assert_eq!((w.rho, w.sigma, w.support.clone()), (1, 1, vec![(2, 1)]));
        assert!(w.supports(&l));
        assert_eq!(choose_weights(&d().pow(2)), Err(Error::NotIncreasing));
    }

    #[test]
    fn orders_and_polynomials() {
        let airy = &d().pow(2) - &xpow(1, 1);
        assert_eq!(weighted_order(&airy, &WeightPair::new(2, 1)), Ok(2));
        assert_eq!(weighted_order(&(&xpow(1, 1) * &d()), &WeightPair::new(1, 1)), Ok(2));
        assert_eq!(weighted_order(&(&xpow(1, 1) * &d().pow(3)), &WeightPair::new(2, 1)), Ok(5));
        let w21 = WeightPair::new(2, 1);
        assert_eq!(associated_polynomial(&airy, &w21).unwrap().to_string(), "y^2 - x");
        let l = &airy + &(&xpow(1, -1) * &d());
        assert_eq!(associated_polynomial(&l, &w21).unwrap().to_string(), "y^2 - x");
        assert_eq!(homogeneous_part(&l, &w21).unwrap(), airy);
        let euler = &(&xpow(1, 1) * &d()) + &DiffOp::one(Var::X);
        assert_eq!(associated_polynomial(&euler, &WeightPair::new(1, 1)).unwrap().to_string(), "x*y");
    }

    #[test]
    fn normal_forms() {
        let w21 = WeightPair::new(2, 1);
        let nf = normal_form_test(&bi(&[(0, 2, 1), (1, 0, -1)]), &w21).unwrap();
        assert_eq!(nf.case, FormCase::C { n: 0, m: 2, k: 1, mu: int(-1) });
        assert_eq!(nf.airy, Some(AiryForm { r: 2, k: 1, lambda: int(1) }));
        assert_eq!(nf.scale, int(1));
        assert!(!nf.exceeds_rho_plus_sigma);
        let nf = normal_form_test(&bi(&[(0, 3, 1), (1, 1, -1)]), &w21).unwrap();
        assert_eq!(nf.case, FormCase::C { n: 1, m: 2, k: 1, mu: int(-1) });
        assert!(nf.not_bispectral_by_nilpotency);
        assert!(nf.airy.is_none());
        let nf = normal_form_test(&bi(&[(0, 2, 1), (1, 1, 3), (2, 0, 2)]), &WeightPair::new(1, 1)).unwrap();
        assert_eq!(nf.case, FormCase::D { factors: vec![(int(1), 1), (int(2), 1)] });
        let nf = normal_form_test(&bi(&[(0, 2, 1), (2, 0, -2)]), &WeightPair::new(1, 1)).unwrap();
        assert_eq!(nf.case, FormCase::UnresolvedOverQ);
        let nf = normal_form_test(&bi(&[(0, 1, 2), (3, 0, 1)]), &WeightPair::new(1, 3)).unwrap();
        assert_eq!(nf.case, FormCase::B { n: 0, m: 3, k: 1, mu: int(2) });
        assert_eq!(normal_form_test(&bi(&[(0, 2, 1), (1, 1, 1)]), &w21), Err(Error::NotHomogeneous));
    }

    #[test]
    fn power_relations() {
        let w = WeightPair::new(1, 1);
        let g = bi(&[(1, 0, 1), (0, 1, 1)]);
        assert!(power_relation(&g.pow(2), &g, &w).unwrap());
        assert!(!power_relation(&g.pow(2), &bi(&[(1, 0, 1)]), &w).unwrap());
    }

    #[test]
    fn principal_parts() {
        let airy = &d().pow(2) - &xpow(1, 1);
        assert_eq!(principal_part(&(&airy + &xpow(1, -1))).unwrap(), (airy, xpow(1, -1)));
        let a3 = &(&d().pow(3) + &d().scale(&int(5))) - &xpow(1, 1);
        assert_eq!(principal_part(&a3).unwrap(), (a3, DiffOp::zero(Var::X)));
        assert!(matches!(principal_part(&(&d().pow(4) - &xpow(1, 2))), Err(Error::NotAiryShape(_))));
    }
}
