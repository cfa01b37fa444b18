//! Family classification of monic operators, with certificates that can be
//! re-checked independently.

use std::fmt;

use serde_json::{json, Map, Value};

use crate::airy::{perturbation_obstruction, ObstructionTrace, Verdict};
use crate::algebra::scalar::{int, Scalar};
use crate::algebra::Poly;
use crate::bispectral::{
    bounded_test, build_lambda, centralizer_search, split_constant_part, BoundedReport, CentralizerBounds,
    CentralizerResult, LambdaBounds,
};
use crate::algebra::RatFunc;
use crate::diffop::{ad_condition_min_m, commutator, gauge_conjugate, gauge_normalize, left_divide, DiffOp, Var};
use crate::error::{Error, Result};
use crate::families::{
    bessel_integrality, bessel_power_root, darboux, make_bessel, recognize_bessel, BesselSpec, DarbouxOptions,
    DarbouxResult, EulerRoots,
};
use crate::weights::{associated_polynomial, choose_weights, normal_form_test, principal_part, BiHomPoly, NormalForm, WeightPair};

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub theta: Option<Poly>,
    /// Candidate factor `P` with `L = P Q` for a Darboux certificate.
    pub p: Option<DiffOp>,
    pub ad_budget: usize,
    /// Largest `k` tried for `θ = x^k` when no `θ` is given.
    pub theta_degree: usize,
    pub trunc: usize,
    pub obstruction_steps: usize,
    /// Largest order searched in the centralizer; `None` means `N + 1`.
    pub centralizer_order: Option<usize>,
    pub centralizer_bounds: CentralizerBounds,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            theta: None,
            p: None,
            ad_budget: 8,
            theta_degree: 4,
            trunc: 8,
            obstruction_steps: 16,
            centralizer_order: None,
            centralizer_bounds: CentralizerBounds::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Bounded,
    Increasing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Airy,
    Bessel,
    ConstantCoeff,
    MonomialDarbouxCandidate,
    PolynomialDarbouxCandidate,
    Obstructed,
    Inconclusive,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Airy => "Airy(1)",
            Family::Bessel => "Bessel(2)",
            Family::ConstantCoeff => "ConstantCoeff(3)",
            Family::MonomialDarbouxCandidate => "MonomialDarbouxCandidate(4)",
            Family::PolynomialDarbouxCandidate => "PolynomialDarbouxCandidate(5)",
            Family::Obstructed => "Obstructed",
            Family::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Bounded => "bounded",
            Branch::Increasing => "increasing",
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct Certificates {
    /// `g'` of the normalizing conjugation `e^(-g) L e^g`.
    pub gauge: Option<RatFunc>,
    /// `g` itself, when it is rational.
    pub gauge_primitive: Option<RatFunc>,
    pub weights: Option<WeightPair>,
    pub associated: Option<BiHomPoly>,
    pub normal_form: Option<NormalForm>,
    pub principal_part: Option<(DiffOp, DiffOp)>,
    /// Whether every coefficient of the remainder `V` is `O(x^-2)`.
    pub remainder_decays: Option<bool>,
    pub obstruction: Option<ObstructionTrace>,
    /// `f` with `L = f(∂) + V` and `V` vanishing at infinity.
    pub constant_part: Option<Poly>,
    /// `[x∂, L] + N L`, zero for Euler-homogeneous operators.
    pub homogeneity_defect: Option<DiffOp>,
    pub bessel_roots: Option<EulerRoots>,
    pub bessel: Option<BesselSpec>,
    pub bessel_integrality: Option<bool>,
    pub theta: Option<Poly>,
    /// Every `x^k` within the search degree meeting the ad-condition, with its minimal `m`.
    pub theta_candidates: Vec<(Poly, usize)>,
    pub ad_m: Option<usize>,
    pub bounded: Option<BoundedReport>,
    pub lambda: Option<DiffOp>,
    pub darboux: Option<DarbouxResult>,
    pub centralizer: Option<CentralizerResult>,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub input: DiffOp,
    /// The operator after removing the `∂^(N-1)` term by a gauge.
    pub normalized: DiffOp,
    pub order: usize,
    pub prime_order: bool,
    pub branch: Branch,
    pub verdict: Family,
    pub certificates: Certificates,
    pub errors: Vec<String>,
    /// Largest numerator or denominator bit length among input coefficients.
    pub input_bits: u64,
    pub certificate_bits: u64,
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn classify(l: &DiffOp, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    if !l.is_monic() {
        return Err(Error::NotMonic);
    }
    let order = l.order().unwrap();
    if order < 2 {
        return Err(Error::NotNormalized("order must be at least 2".into()));
    }
    if l.var() != Var::X {
        return Err(Error::VariableMismatch);
    }
    let mut report = ClassificationReport {
        input: l.clone(),
        normalized: l.clone(),
        order,
        prime_order: is_prime(order),
        branch: Branch::Bounded,
        verdict: Family::Inconclusive,
        certificates: Certificates::default(),
        errors: Vec::new(),
        input_bits: l.max_bit_size(),
        certificate_bits: 0,
    };
    if !l.coeff(order - 1).is_zero() {
        // a logarithmic g still gives a rational conjugate, by a power of x
        let g_prime = l.coeff(order - 1).scale(&int(-(order as i64)).recip());
        match gauge_normalize(l) {
            Ok((n, g)) => {
                report.normalized = n;
                report.certificates.gauge_primitive = Some(g.g);
            }
            Err(e) => {
                report.errors.push(format!("normalization: {e}; conjugated through g' = {g_prime}"));
                report.normalized = gauge_conjugate(l, &g_prime);
            }
        }
        report.certificates.gauge = Some(g_prime);
    }
    let increasing = report
        .normalized
        .coeffs()
        .any(|(_, c)| c.order_at_infinity().is_some_and(|o| o > 0));
    if increasing {
        report.branch = Branch::Increasing;
        classify_increasing(&mut report, opts);
    } else {
        classify_bounded(&mut report, opts);
    }
    report.certificate_bits = report.certificate_operators().iter().map(|o| o.max_bit_size()).max().unwrap_or(0);
    Ok(report)
}

fn classify_increasing(report: &mut ClassificationReport, opts: &ClassifyOptions) {
    let l = report.normalized.clone();
    let certs = &mut report.certificates;
    let w = match choose_weights(&l) {
        Ok(w) => w,
        Err(e) => return report.errors.push(format!("weights: {e}")),
    };
    let f = match associated_polynomial(&l, &w) {
        Ok(f) => f,
        Err(e) => return report.errors.push(format!("associated polynomial: {e}")),
    };
    certs.normal_form = normal_form_test(&f, &w).map_err(|e| report.errors.push(format!("normal form: {e}"))).ok();
    certs.weights = Some(w);
    certs.associated = Some(f);
    match principal_part(&l) {
        Ok(pp) => {
            certs.remainder_decays = Some(decays_as_inverse_square(&pp.1));
            certs.principal_part = Some(pp);
        }
        Err(e) => {
            report.errors.push(format!("principal part: {e}"));
            // a prime-order operator of this branch must have an Airy leading form
            if report.prime_order && matches!(e, Error::NotAiryShape(_)) {
                report.verdict = Family::Obstructed;
            }
            return;
        }
    }
    match perturbation_obstruction(&l, opts.obstruction_steps) {
        Ok(trace) => {
            report.verdict = match trace.verdict {
                Verdict::Clean => Family::Airy,
                Verdict::Obstructed { .. } if report.prime_order => Family::Obstructed,
                _ => Family::Inconclusive,
            };
            certs.obstruction = Some(trace);
        }
        Err(e) => report.errors.push(format!("obstruction: {e}")),
    }
}

fn classify_bounded(report: &mut ClassificationReport, opts: &ClassifyOptions) {
    let l = report.normalized.clone();
    let n = report.order;
    let certs = &mut report.certificates;
    let (f, v) = match split_constant_part(&l) {
        Ok(split) => split,
        Err(e) => return report.errors.push(format!("constant part: {e}")),
    };
    certs.constant_part = Some(f);
    if v.is_zero() {
        report.verdict = Family::ConstantCoeff;
        return;
    }
    let euler = DiffOp::euler(Var::X);
    if let Ok(c) = commutator(&euler, &l) {
        let defect = &c + &l.scale(&int(n as i64));
        let homogeneous = defect.is_zero();
        certs.homogeneity_defect = Some(defect);
        if homogeneous {
            if let Some(roots) = recognize_bessel(&l) {
                if roots.is_resolved() {
                    let spec = BesselSpec::new(roots.beta.clone());
                    certs.bessel_integrality = Some(bessel_integrality(&spec));
                    certs.bessel = Some(spec);
                } else {
                    report.errors.push(format!("Bessel parameters unresolved over Q: {}", roots.unresolved));
                }
                certs.bessel_roots = Some(roots);
                report.verdict = Family::Bessel;
                // a supplied factor asks for the Darboux certificate instead
                if opts.p.is_none() {
                    return;
                }
            }
        }
    }
    let theta = match &opts.theta {
        Some(t) => Some(t.clone()),
        None => {
            certs.theta_candidates = (1..=opts.theta_degree)
                .map(|k| Poly::monomial(Scalar::from(int(1)), k))
                .filter_map(|t| ad_condition_min_m(&l, &t, opts.ad_budget).map(|m| (t, m)))
                .collect();
            certs.theta_candidates.first().map(|(t, _)| t.clone())
        }
    };
    if let Some(theta) = &theta {
        certs.ad_m = ad_condition_min_m(&l, theta, opts.ad_budget);
        match bounded_test(&l, theta, opts.ad_budget) {
            Ok(r) => certs.bounded = Some(r),
            Err(e) => report.errors.push(format!("bounded test: {e}")),
        }
        if certs.ad_m.is_some() {
            match build_lambda(&l, theta, opts.trunc, LambdaBounds::default()) {
                Ok(dual) => certs.lambda = Some(dual.lambda),
                Err(e) => report.errors.push(format!("dual operator: {e}")),
            }
        }
    } else {
        report.errors.push(format!("no θ = x^k with k <= {} meets the ad-condition", opts.theta_degree));
    }
    certs.theta = theta;
    let max_ord = opts.centralizer_order.unwrap_or(n + 1);
    let cent = centralizer_search(&l, max_ord, opts.centralizer_bounds);
    let rank = cent.rank;
    certs.centralizer = Some(cent);
    if let Some(p) = &opts.p {
        match darboux_certificate(&l, p) {
            Ok((res, family)) => {
                certs.darboux = Some(res);
                report.verdict = family;
                return;
            }
            Err(e) => report.errors.push(format!("Darboux certificate: {e}")),
        }
    }
    if report.verdict == Family::Bessel {
        return;
    }
    let bounded_ok = certs.bounded.as_ref().is_some_and(BoundedReport::passed);
    report.verdict = if bounded_ok {
        Family::MonomialDarbouxCandidate
    } else if rank == 1 {
        Family::PolynomialDarbouxCandidate
    } else {
        Family::Inconclusive
    };
}

/// With `L = P Q`, exchange to the base `Q P` and identify it.
fn darboux_certificate(l: &DiffOp, p: &DiffOp) -> Result<(DarbouxResult, Family)> {
    let (q, r) = left_divide(l, p)?;
    if !r.is_zero() {
        return Err(Error::NotAFactor);
    }
    let base = &q * p;
    let m = base.order().unwrap_or(0);
    for d in (1..=m).filter(|d| m.is_multiple_of(*d)) {
        if bessel_power_root(&base, d).is_some() {
            let opts = DarbouxOptions {
                monomial_power: Some(d),
                ..Default::default()
            };
            return Ok((darboux(&base, p, &opts)?, Family::MonomialDarbouxCandidate));
        }
    }
    if base.is_constant_coefficient() {
        return Ok((darboux(&base, p, &DarbouxOptions::default())?, Family::PolynomialDarbouxCandidate));
    }
    Err(Error::NotAFactor)
}

impl ClassificationReport {
    fn certificate_operators(&self) -> Vec<DiffOp> {
        let c = &self.certificates;
        let mut ops = Vec::new();
        if let Some((a, v)) = &c.principal_part {
            ops.extend([a.clone(), v.clone()]);
        }
        ops.extend(c.lambda.clone());
        if let Some(d) = &c.darboux {
            ops.extend([d.p.clone(), d.q.clone(), d.base.clone()]);
        }
        if let Some(b) = &c.bounded {
            ops.push(b.q_operator.clone());
        }
        ops
    }

    /// Re-run every attached certificate through the modules that produced it.
    pub fn reverify(&self) -> bool {
        let l = &self.normalized;
        let c = &self.certificates;
        let mut ok = true;
        if let Some(g) = &c.gauge {
            ok &= gauge_conjugate(&self.input, g) == *l;
            ok &= c.gauge_primitive.as_ref().is_none_or(|p| p.derivative() == *g);
        }
        if let Some(w) = &c.weights {
            ok &= w.supports(l);
            ok &= c.associated.as_ref() == associated_polynomial(l, w).ok().as_ref();
        }
        if let Some((a, v)) = &c.principal_part {
            ok &= &(a + v) == l && crate::airy::airy_shape(a).is_ok();
        }
        if let (Some(d), Some((_, v))) = (c.remainder_decays, &c.principal_part) {
            ok &= d == decays_as_inverse_square(v);
        }
        for (t, m) in &c.theta_candidates {
            ok &= ad_condition_min_m(l, t, *m) == Some(*m);
        }
        if let Some(t) = &c.obstruction {
            ok &= perturbation_obstruction(l, t.steps.len().max(1) + 1)
                .is_ok_and(|again| again.verdict == t.verdict && again.steps == t.steps)
                && t.follows_recursion();
        }
        if let Some(f) = &c.constant_part {
            let (f2, v) = split_constant_part(l).unwrap_or((Poly::zero(), l.clone()));
            ok &= *f == f2;
            if self.verdict == Family::ConstantCoeff {
                ok &= v.is_zero();
            }
        }
        if let Some(spec) = &c.bessel {
            ok &= make_bessel(spec).is_ok_and(|b| b == *l);
        }
        if let (Some(theta), Some(m)) = (&c.theta, c.ad_m) {
            ok &= ad_condition_min_m(l, theta, m) == Some(m);
        }
        if let (Some(b), Some(theta)) = (&c.bounded, &c.theta) {
            ok &= bounded_test(l, theta, b.m).is_ok_and(|again| again == *b);
        }
        if let Some(lambda) = &c.lambda {
            let m = lambda.order().unwrap_or(0);
            ok &= lambda.coeff(m).is_one() && (m == 0 || lambda.coeff(m - 1).is_zero());
        }
        if let Some(d) = &c.darboux {
            ok &= d.verify() && d.transformed == *l;
        }
        if let Some(cent) = &c.centralizer {
            ok &= cent.verify(l);
        }
        ok
    }

    pub fn to_json(&self) -> Value {
        let c = &self.certificates;
        let op = |d: &DiffOp| Value::String(d.to_text());
        let scalar = |s: &Scalar| Value::String(s.to_string());
        let mut certs = Map::new();
        if let Some(g) = &c.gauge {
            certs.insert("gauge_g_prime".into(), Value::String(g.to_string()));
        }
        if let Some(g) = &c.gauge_primitive {
            certs.insert("gauge_g".into(), Value::String(g.to_string()));
        }
        if let Some(w) = &c.weights {
            certs.insert("weights".into(), json!({"rho": w.rho, "sigma": w.sigma}));
        }
        if let Some(f) = &c.associated {
            certs.insert("associated_polynomial".into(), Value::String(f.to_string()));
        }
        if let Some(nf) = &c.normal_form {
            certs.insert(
                "normal_form".into(),
                json!({
                    "case": nf.case.to_string(),
                    "airy_shape": nf.airy.as_ref().map(|a| json!({"r": a.r, "k": a.k, "lambda": scalar(&a.lambda)})),
                    "not_bispectral_by_nilpotency": nf.not_bispectral_by_nilpotency,
                    "weight": nf.weight,
                    "exceeds_rho_plus_sigma": nf.exceeds_rho_plus_sigma,
                }),
            );
        }
        if let Some((a, v)) = &c.principal_part {
            certs.insert("principal_part".into(), json!({"A": op(a), "V": op(v)}));
        }
        if let Some(d) = c.remainder_decays {
            certs.insert("remainder_decays_as_x^-2".into(), Value::Bool(d));
        }
        if let Some(t) = &c.obstruction {
            let steps: Vec<Value> = t
                .steps
                .iter()
                .map(|s| json!({"j": s.j, "s": s.s, "k": s.k, "alpha": scalar(&s.alpha)}))
                .collect();
            certs.insert("obstruction".into(), json!({"verdict": format!("{:?}", t.verdict), "steps": steps}));
        }
        if let Some(f) = &c.constant_part {
            certs.insert("constant_part".into(), Value::String(f.fmt_with("z")));
        }
        if let Some(roots) = &c.bessel_roots {
            certs.insert(
                "bessel_beta".into(),
                Value::Array(roots.beta.iter().map(scalar).collect()),
            );
            if !roots.is_resolved() {
                certs.insert("bessel_unresolved".into(), Value::String(roots.unresolved.fmt_with("u")));
            }
        }
        if let Some(b) = c.bessel_integrality {
            certs.insert("bessel_integrality".into(), Value::Bool(b));
        }
        if let Some(t) = &c.theta {
            certs.insert("theta".into(), Value::String(t.to_string()));
        }
        if !c.theta_candidates.is_empty() {
            certs.insert(
                "theta_candidates".into(),
                Value::Array(c.theta_candidates.iter().map(|(t, m)| json!({"theta": t.to_string(), "m": m})).collect()),
            );
        }
        if let Some(m) = c.ad_m {
            certs.insert("ad_m".into(), json!(m));
        }
        if let Some(b) = &c.bounded {
            certs.insert(
                "bounded_test".into(),
                json!({
                    "q_operator": op(&b.q_operator),
                    "q": b.q.as_ref().map(|q| q.iter().map(scalar).collect::<Vec<_>>()),
                    "passed": b.passed(),
                }),
            );
        }
        if let Some(lambda) = &c.lambda {
            certs.insert("lambda".into(), op(lambda));
        }
        if let Some(d) = &c.darboux {
            certs.insert(
                "darboux".into(),
                json!({"P": op(&d.p), "Q": op(&d.q), "base": op(&d.base), "power": d.power}),
            );
        }
        if let Some(cent) = &c.centralizer {
            certs.insert("centralizer".into(), json!({"orders": cent.orders, "rank": cent.rank}));
        }
        json!({
            "input": op(&self.input),
            "order": self.order,
            "prime_order": self.prime_order,
            "branch": self.branch.to_string(),
            "verdict": self.verdict.to_string(),
            "certificates": Value::Object(certs),
            "errors": self.errors,
            "bits": {"input": self.input_bits, "certificates": self.certificate_bits},
        })
    }
}

fn decays_as_inverse_square(v: &DiffOp) -> bool {
    v.coeffs().all(|(_, c)| c.order_at_infinity().is_none_or(|o| o <= -2))
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "input:   {}", self.input)?;
        if self.normalized != self.input {
            writeln!(f, "normalized: {}", self.normalized)?;
        }
        writeln!(f, "branch:  {}", self.branch)?;
        writeln!(f, "verdict: {}", self.verdict)?;
        let c = &self.certificates;
        if let (Some(w), Some(a)) = (&c.weights, &c.associated) {
            writeln!(f, "weights: ({}, {}), f = {a}", w.rho, w.sigma)?;
        }
        if let Some((a, v)) = &c.principal_part {
            writeln!(f, "principal part: {a}; remainder: {v}")?;
        }
        if let Some(false) = c.remainder_decays {
            writeln!(f, "remainder is not O(x^-2)")?;
        }
        if let Some(t) = &c.obstruction {
            writeln!(f, "obstruction: {:?} after {} steps", t.verdict, t.steps.len())?;
        }
        if let Some(spec) = &c.bessel {
            let beta: Vec<String> = spec.beta.iter().map(ToString::to_string).collect();
            writeln!(f, "beta: ({})", beta.join(", "))?;
        }
        if let Some(b) = c.bessel_integrality {
            writeln!(f, "integrality: {b}")?;
        }
        if let (Some(t), Some(m)) = (&c.theta, c.ad_m) {
            writeln!(f, "ad-condition: theta = {t}, m = {m}")?;
        }
        if c.theta_candidates.len() > 1 {
            let all: Vec<String> = c.theta_candidates.iter().map(|(t, m)| format!("{t} (m = {m})")).collect();
            writeln!(f, "admissible theta: {}", all.join(", "))?;
        }
        if let Some(lambda) = &c.lambda {
            writeln!(f, "Lambda: {lambda}")?;
        }
        if let Some(d) = &c.darboux {
            writeln!(f, "Darboux: P = {}, Q = {}, base = {}", d.p, d.q, d.base)?;
        }
        if let Some(cent) = &c.centralizer {
            writeln!(f, "centralizer orders: {:?}, rank {}", cent.orders, cent.rank)?;
        }
        for e in &self.errors {
            writeln!(f, "note: {e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::rat;
    use crate::expr::parse_operator;

    fn run(s: &str) -> ClassificationReport {
        classify(&parse_operator(s).unwrap(), &ClassifyOptions::default()).unwrap()
    }

    #[test]
    fn canonical_examples() {
        let r = run("d^3 - x");
        assert_eq!(r.verdict, Family::Airy);
        assert_eq!(r.certificates.associated.as_ref().unwrap().to_string(), "y^3 - x");
        assert!(r.reverify());
        let r = run("d^5 + d");
        assert_eq!(r.verdict, Family::ConstantCoeff);
        assert!(r.reverify());
        let r = run("x^-2*(x*d-1/2)*(x*d-1/2)");
        assert_eq!(r.verdict, Family::Bessel);
        assert_eq!(r.certificates.bessel.as_ref().unwrap().beta, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(r.certificates.bessel_integrality, Some(true));
        assert!(r.reverify());
        let r = run("d^2 - x + x^-2");
        assert_eq!(r.verdict, Family::Obstructed);
        assert!(r.reverify());
    }

    #[test]
    fn darboux_example() {
        let opts = ClassifyOptions {
            p: Some(parse_operator("d - x^-1").unwrap()),
            ..Default::default()
        };
        let r = classify(&parse_operator("d^2 - 2*x^-2").unwrap(), &opts).unwrap();
        assert_eq!(r.verdict, Family::MonomialDarbouxCandidate);
        let d = r.certificates.darboux.as_ref().unwrap();
        assert_eq!(d.q, parse_operator("d + x^-1").unwrap());
        assert_eq!(d.base, parse_operator("d^2").unwrap());
        assert_eq!(r.certificates.ad_m, Some(2));
        assert_eq!(r.certificates.lambda, Some(parse_operator("d^2 - 2*z^-2").unwrap()));
        assert!(r.reverify());
        let json = r.to_json();
        assert_eq!(json["verdict"], "MonomialDarbouxCandidate(4)");
    }

    #[test]
    fn gauge_is_applied_first() {
        let r = run("d^2 + 2*d + 1 - x");
        assert_eq!(r.normalized, parse_operator("d^2 - x").unwrap());
        assert_eq!(r.verdict, Family::Airy);
        assert!(r.reverify());
    }

    #[test]
    fn every_admissible_theta_is_listed() {
        let r = run("d^3 + x^-2*d + 1");
        let l = &r.normalized;
        let cands = &r.certificates.theta_candidates;
        assert_eq!(cands.first().map(|(t, m)| (t.to_string(), *m)), Some(("x^3".to_string(), 3)));
        for (t, m) in cands {
            let g = DiffOp::function(RatFunc::from_poly(t.clone()), l.var());
            assert!(!crate::diffop::ad_pow(l, &g, *m).unwrap().is_zero());
            assert!(crate::diffop::ad_pow(l, &g, m + 1).unwrap().is_zero());
        }
        assert!(r.reverify());
    }

    #[test]
    fn remainder_decay_is_reported() {
        let slow = run("d^2 - x + x^-1");
        assert_eq!(slow.certificates.remainder_decays, Some(false));
        let fast = run("d^3 - x + x^-2*d");
        assert_eq!(fast.certificates.remainder_decays, Some(true));
        assert!(slow.reverify() && fast.reverify());
    }
}
