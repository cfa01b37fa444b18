//! Acceptance criteria, one PASS/FAIL line each. Expected values are
//! recomputed here by independent means where they are derived.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use bispec::airy::{
    airy_bispectral_check, airy_kernel_series, airy_wave_solve, perturbation_obstruction, AiryWave, Verdict,
};
use bispec::algebra::scalar::{factorial, int, rat, Scalar};
use bispec::algebra::{Poly, RatFunc};
use bispec::bispectral::{bounded_test, build_lambda, wave_operator, LambdaBounds};
use bispec::classify::{classify, ClassifyOptions, Family};
use bispec::diffop::{ad_condition_min_m, ad_pow, commutator, dop_mul, DiffOp, Var};
use bispec::expr::{parse_operator, print_operator};
use bispec::families::{darboux, make_airy, make_bessel, BesselSpec, DarbouxOptions};
use bispec::weights::{associated_polynomial, choose_weights, normal_form_test, BiHomPoly, WeightPair};
use bispec::Error;
use common::{d, laurent_op, rational_op, weyl_op, x, xpow, Weyl};
use num_traits::Zero;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn runner() -> TestRunner {
    TestRunner::new_with_rng(Config::default(), TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn sample<S: Strategy>(runner: &mut TestRunner, s: &S) -> S::Value {
    s.new_tree(runner).expect("strategy").current()
}

fn oracle_mul(a: &DiffOp, b: &DiffOp) -> DiffOp {
    Weyl::from_diffop(a).mul(&Weyl::from_diffop(b)).to_diffop(a.var())
}

fn oracle_bracket(a: &DiffOp, b: &DiffOp) -> DiffOp {
    Weyl::from_diffop(a).bracket(&Weyl::from_diffop(b)).to_diffop(a.var())
}

fn weyl_ring() -> Outcome {
    let mut r = runner();
    let s = weyl_op();
    for case in 0..200 {
        let (a, b, c) = (sample(&mut r, &s), sample(&mut r, &s), sample(&mut r, &s));
        let ab = dop_mul(&a, &b).map_err(|e| e.to_string())?;
        ensure(ab == oracle_mul(&a, &b), || format!("case {case}: product disagrees with the oracle"))?;
        ensure(&ab * &c == &a * &(&b * &c), || format!("case {case}: associativity"))?;
        ensure(&a * &(&b + &c) == &ab + &(&a * &c), || format!("case {case}: left distributivity"))?;
        ensure(&(&a + &b) * &c == &(&a * &c) + &(&b * &c), || format!("case {case}: right distributivity"))?;
        let br = |p: &DiffOp, q: &DiffOp| commutator(p, q).unwrap();
        let jacobi = &(&br(&a, &br(&b, &c)) + &br(&b, &br(&c, &a))) + &br(&c, &br(&a, &b));
        ensure(jacobi.is_zero(), || format!("case {case}: Jacobi identity"))?;
    }
    Ok(())
}

fn bessel_identity() -> Outcome {
    for p in [2usize, 3, 5] {
        let beta: Vec<i64> = (0..p as i64).collect();
        let got = make_bessel(&BesselSpec::from_ints(&beta)).map_err(|e| e.to_string())?;
        // x^-p Π (x∂ - i) by oracle products
        let theta = Weyl::term(1, 1, 1);
        let mut prod = Weyl::term(1, -(p as i64), 0);
        for i in &beta {
            prod = prod.mul(&theta.sub(&Weyl::term(*i, 0, 0)));
        }
        ensure(got == d().pow(p), || format!("p = {p}: {got}"))?;
        ensure(prod.to_diffop(Var::X) == d().pow(p), || format!("p = {p}: oracle expansion differs"))?;
    }
    Ok(())
}

fn darboux_round_trip() -> Outcome {
    let p = &d() - &xpow(1, -1);
    let r = darboux(&d().pow(2), &p, &DarbouxOptions::default()).map_err(|e| e.to_string())?;
    ensure(r.q == &d() + &xpow(1, -1), || format!("Q = {}", r.q))?;
    ensure(r.transformed == &d().pow(2) - &xpow(2, -2), || format!("transformed = {}", r.transformed))?;
    ensure(oracle_mul(&r.q, &r.p) == d().pow(2), || "Q·P differs from the base".into())?;
    ensure(oracle_mul(&r.p, &r.q) == r.transformed, || "P·Q differs from the transformed operator".into())?;
    ensure(r.verify(), || "DarbouxResult::verify".into())
}

/// Length of the oracle ad-chain before it vanishes, minus one.
fn oracle_min_m(l: &DiffOp, theta: &DiffOp) -> (usize, DiffOp) {
    let mut chain = vec![theta.clone()];
    while !chain.last().unwrap().is_zero() {
        let next = oracle_bracket(l, chain.last().unwrap());
        chain.push(next);
        assert!(chain.len() < 32, "oracle chain does not terminate");
    }
    let m = chain.len() - 2;
    (m, chain[m].clone())
}

fn ad_condition() -> Outcome {
    let l1 = d().pow(2);
    let l2 = &d().pow(2) - &x();
    let l3 = &d().pow(2) - &xpow(2, -2);
    let cases = [
        (l1.clone(), Poly::x(), 1usize, None),
        (l2.clone(), Poly::x(), 2, Some(DiffOp::constant(int(2), Var::X))),
        (l3.clone(), Poly::monomial(int(1), 2), 2, Some(l3.scale(&int(8)))),
    ];
    for (l, theta, want_m, want_top) in cases {
        let theta_op = DiffOp::function(theta.clone().into(), Var::X);
        let (oracle_m, oracle_top) = oracle_min_m(&l, &theta_op);
        ensure(oracle_m == want_m, || format!("oracle m = {oracle_m} for {l}"))?;
        let m = ad_condition_min_m(&l, &theta, 8);
        ensure(m == Some(want_m), || format!("m = {m:?} for {l}, θ = {theta}"))?;
        let top = ad_pow(&l, &theta_op, want_m).map_err(|e| e.to_string())?;
        ensure(top == oracle_top, || format!("ad^m disagrees with the oracle for {l}"))?;
        if let Some(w) = want_top {
            ensure(top == w, || format!("ad^{want_m} = {top}"))?;
        }
    }
    Ok(())
}

fn rank_order_chain() -> Outcome {
    let l = &d().pow(2) - &xpow(2, -2);
    let theta = Poly::monomial(int(1), 2);
    let r = bounded_test(&l, &theta, 8).map_err(|e| e.to_string())?;
    let (n, m) = (2usize, r.m);
    ensure(m == 2, || format!("m = {m}"))?;
    ensure(r.q_operator == l.scale(&int(8)), || format!("Q = {}", r.q_operator))?;
    ensure(r.q == Some(vec![int(0), int(8)]), || format!("q = {:?}", r.q))?;
    // Σ q_j f^j against m! (f')^m with f = z²
    let f = Poly::monomial(int(1), 2);
    let lhs = f.scale(&int(8));
    let rhs = f.derivative().pow(m).scale(&Scalar::from_integer(factorial(m)));
    ensure(lhs == rhs && r.identity_holds, || "8z² = 2!(2z)²".into())?;
    ensure(m % n == 0 && r.s == Some(m / n) && r.s == Some(1), || format!("s = {:?}", r.s))?;
    ensure(r.r == Some(1) && r.degree_relation, || format!("r = {:?}", r.r))?;
    let q_r = Scalar::from_integer(factorial(m)) * int(n as i64).pow(m as i32);
    ensure(q_r == int(8) && r.leading_ok, || "q_r = m! N^m".into())?;
    ensure(r.passed(), || "report not passed".into())
}

/// Bivariate Laurent polynomial `Σ c x^a z^b`.
type Bi = BTreeMap<(i64, i64), Scalar>;

/// `e^(-xz) P e^(xz) g` for `P` acting on the `x` slot (or the `z` slot).
fn conj_apply(p: &Weyl, g: &Bi, on_x: bool) -> Bi {
    let mut out = Bi::new();
    for (&(a, b), c) in &p.0 {
        // (∂ + other)^b applied to g, then multiply by the coefficient
        let mut cur = g.clone();
        for _ in 0..b {
            let mut next = Bi::new();
            for (&(i, j), v) in &cur {
                let (e, shift) = if on_x { (i, (i - 1, j)) } else { (j, (i, j - 1)) };
                if e != 0 {
                    *next.entry(shift).or_default() += v * int(e);
                }
                let other = if on_x { (i, j + 1) } else { (i + 1, j) };
                *next.entry(other).or_default() += v.clone();
            }
            cur = next;
        }
        for ((i, j), v) in cur {
            let key = if on_x { (i + a, j) } else { (i, j + a) };
            *out.entry(key).or_default() += v * c;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn lambda_reconstruction() -> Outcome {
    let l = &d().pow(2) - &xpow(2, -2);
    let dual = build_lambda(&l, &Poly::monomial(int(1), 2), 8, LambdaBounds::default()).map_err(|e| e.to_string())?;
    let want = &DiffOp::d(Var::Z).pow(2) - &DiffOp::function(RatFunc::monomial(int(2), -2), Var::Z);
    ensure(dual.lambda == want, || format!("Λ = {}", dual.lambda))?;
    ensure(dual.lambda.coeff(2).is_one() && dual.lambda.coeff(1).is_zero(), || "Λ normalization".into())?;
    // ψ = e^{xz}(1 - 1/(xz)) satisfies Lψ = z²ψ and Λψ = x²ψ
    let g: Bi = [((0, 0), int(1)), ((-1, -1), int(-1))].into_iter().collect();
    let times = |g: &Bi, x_pow: i64, z_pow: i64| -> Bi { g.iter().map(|(&(i, j), v)| ((i + x_pow, j + z_pow), v.clone())).collect() };
    ensure(conj_apply(&Weyl::from_diffop(&l), &g, true) == times(&g, 0, 2), || "Lψ ≠ z²ψ".into())?;
    ensure(conj_apply(&Weyl::from_diffop(&dual.lambda), &g, false) == times(&g, 2, 0), || "Λψ ≠ x²ψ".into())
}

/// Taylor coefficients of `∂^N φ = xφ` from `c_{k+N} = c_{k-1} k!/(k+N)!`.
fn hand_series(n: usize, init: &[Scalar], upto: usize) -> Vec<Scalar> {
    let mut c: Vec<Scalar> = init.iter().enumerate().map(|(i, v)| v / Scalar::from_integer(factorial(i))).collect();
    for t in n..=upto {
        let k = t - n;
        let prev = if k == 0 { Scalar::zero() } else { c[k - 1].clone() };
        c.push(prev * Scalar::from_integer(factorial(k)) / Scalar::from_integer(factorial(t)));
    }
    c.truncate(upto + 1);
    c
}

fn airy_bispectrality() -> Outcome {
    for n in [2usize, 3] {
        let a = &d().pow(n) - &x();
        let check = airy_bispectral_check(&a, 10 + n).map_err(|e| e.to_string())?;
        ensure(check.passed() && check.degree == 10, || format!("N = {n}: {check:?}"))?;
        for i in 0..n {
            let mut init = vec![int(0); n];
            init[i] = int(1);
            let s = airy_kernel_series(&a, &init, 12).map_err(|e| e.to_string())?;
            let got: Vec<Scalar> = (0..=12).map(|k| s.coeff(k)).collect();
            ensure(got == hand_series(n, &init, 12), || format!("N = {n}, e_{i}: series differs"))?;
        }
    }
    let a2 = airy_kernel_series(&(&d().pow(2) - &x()), &[int(1), int(0)], 6).unwrap();
    let want2 = [int(1), int(0), int(0), rat(1, 6), int(0), int(0), rat(1, 180)];
    ensure(a2.coeffs() == want2, || "1 + x³/6 + x⁶/180".into())?;
    let a3 = airy_kernel_series(&(&d().pow(3) - &x()), &[int(1), int(0), int(0)], 4).unwrap();
    let want3 = [int(1), int(0), int(0), int(0), rat(1, 24)];
    ensure(a3.coeffs() == want3, || "1 + x⁴/24".into())
}

fn filtration() -> Outcome {
    for (n, text) in [(2i64, "y^2 - x"), (3, "y^3 - x")] {
        let l = &d().pow(n as usize) - &x();
        let w = choose_weights(&l).map_err(|e| e.to_string())?;
        ensure((w.rho, w.sigma) == (n, 1), || format!("weights ({}, {})", w.rho, w.sigma))?;
        let f = associated_polynomial(&l, &w).map_err(|e| e.to_string())?;
        ensure(f.to_string() == text, || format!("f = {f}"))?;
        let nf = normal_form_test(&f, &w).map_err(|e| e.to_string())?;
        let airy = nf.airy.ok_or("no Airy shape")?;
        ensure(airy.r == n as usize && airy.k == 1 && airy.lambda == int(1), || format!("{airy:?}"))?;
    }
    let f = BiHomPoly::new([((0, 3), int(1)), ((1, 1), int(-1))]);
    let nf = normal_form_test(&f, &WeightPair::new(2, 1)).map_err(|e| e.to_string())?;
    ensure(nf.not_bispectral_by_nilpotency, || "y(y² - x) not flagged".into())
}

fn obstruction() -> Outcome {
    let perturbed = [
        &(&d().pow(2) - &x()) + &xpow(1, -2),
        &(&(&d().pow(3) + &d()) - &x()) + &(&xpow(1, -1) * &d()),
    ];
    for l in &perturbed {
        let t = perturbation_obstruction(l, 10).map_err(|e| e.to_string())?;
        ensure(t.is_obstructed() && t.follows_recursion(), || format!("{l}: {:?}", t.verdict))?;
    }
    let mut r = runner();
    let coeff = -4i64..=4;
    for case in 0..20 {
        let n = 2 + case % 5;
        let a: BTreeMap<usize, Scalar> = (1..=n - 2).map(|j| (j, int(sample(&mut r, &coeff)))).collect();
        let l = make_airy(n, &a).map_err(|e| e.to_string())?;
        let t = perturbation_obstruction(&l, 10).map_err(|e| e.to_string())?;
        ensure(t.verdict == Verdict::Clean, || format!("{l}: {:?}", t.verdict))?;
        // a solvable truncation with a genuine perturbation as well
        let v = DiffOp::monomial(RatFunc::monomial(int(1 + case as i64 % 3), -(4 + n as i64)), (case % 2).min(n - 2), Var::X);
        for op in [l.clone(), &l + &v] {
            if let AiryWave::Solved(k) = airy_wave_solve(&op, 3).map_err(|e| e.to_string())? {
                let cleared = k.cleared();
                let residual = &oracle_mul(&op, &cleared) - &oracle_mul(&cleared, &k.a);
                ensure(residual.order().is_none_or(|o| o + 1 < n), || format!("{op}: residual {residual}"))?;
            }
        }
    }
    Ok(())
}

fn wave_recursion() -> Outcome {
    let l = &d().pow(2) - &xpow(2, -2);
    let w = wave_operator(&l, &Poly::monomial(int(1), 2), 5).map_err(|e| e.to_string())?;
    ensure(w.a(1) == RatFunc::monomial(int(-1), -1), || format!("a_1 = {}", w.a(1)))?;
    // ψ = e^{xz}(1 - 1/(xz)) makes K = 1 - x^-1 ∂^-1 exactly
    for j in 2..=5 {
        ensure(w.a(j).is_zero(), || format!("a_{j} = {}", w.a(j)))?;
    }
    ensure(w.defect().coeffs().all(|(k, c)| k < 2 - 5 || c.is_zero()), || "defect".into())?;
    match wave_operator(&(&d().pow(2) + &xpow(1, -1)), &Poly::monomial(int(1), 2), 2) {
        Err(Error::LogObstruction(_)) => Ok(()),
        other => Err(format!("expected LogObstruction, got {other:?}")),
    }
}

fn classification() -> Outcome {
    let cases = [
        ("d^3 - x", Family::Airy),
        ("d^5 + d", Family::ConstantCoeff),
        ("x^-2*(x*d-1/2)*(x*d-1/2)", Family::Bessel),
        ("d^2 - x + x^-2", Family::Obstructed),
    ];
    for (text, want) in cases {
        let l = parse_operator(text).map_err(|e| e.to_string())?;
        let r = classify(&l, &ClassifyOptions::default()).map_err(|e| e.to_string())?;
        ensure(r.verdict == want, || format!("{text}: {}", r.verdict))?;
        ensure(r.reverify(), || format!("{text}: certificates do not re-verify"))?;
        if want == Family::Bessel {
            let spec = r.certificates.bessel.as_ref().ok_or("no β")?;
            ensure(spec.beta == vec![rat(1, 2), rat(1, 2)], || format!("β = {:?}", spec.beta))?;
            ensure(r.certificates.bessel_integrality == Some(true), || "integrality".into())?;
        }
    }
    Ok(())
}

fn parser() -> Outcome {
    let mut corpus: Vec<String> = [
        "d^2 - x", "d^3 - x", "d^5 + d", "d^2 - 2*x^-2", "d^2 + 1/4*x^-2", "x*d + 1", "-d^3 + 5", "1/4*x^-2*d",
        "(z + 1)/(z - 1)*d - z", "d^2 - x + x^-2", "d^3 + d + x^-1*d - x", "0", "1", "x", "d", "z^3*d^2 - 7/3",
        "(x^2 + 1)/(x - 2)*d^4", "-x^-3", "d^7 - 2*d^5 + x^6", "1/(x + 1)", "3*x^2/(x^2 + 1)*d",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut r = runner();
    let (laurent, rational) = (laurent_op(4, -6, 6), rational_op());
    while corpus.len() < 100 {
        let l = if corpus.len().is_multiple_of(2) { sample(&mut r, &laurent) } else { sample(&mut r, &rational) };
        corpus.push(print_operator(&l));
    }
    for text in &corpus {
        let l = parse_operator(text).map_err(|e| format!("{text}: {e}"))?;
        ensure(print_operator(&l) == *text, || format!("{text} printed as {}", print_operator(&l)))?;
        ensure(parse_operator(&print_operator(&l)) == Ok(l.clone()), || format!("{text}: parse∘print"))?;
    }
    let malformed: [(&str, usize); 10] = [
        ("d^-1", 2),
        ("d + * x", 4),
        ("(d + x", 6),
        ("x + z", 4),
        ("d / d", 4),
        ("x # 2", 2),
        ("1/0", 2),
        ("d^", 2),
        ("x)", 1),
        ("", 0),
    ];
    for (text, pos) in malformed {
        let got = match parse_operator(text) {
            Err(Error::Syntax { pos, .. }) | Err(Error::NegativeDerivativeExponent { pos }) => Some(pos),
            _ => None,
        };
        ensure(got == Some(pos), || format!("{text:?}: position {got:?}, expected {pos}"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("Weyl-ring suite", weyl_ring),
        ("Bessel identity", bessel_identity),
        ("Darboux round-trip", darboux_round_trip),
        ("ad-condition", ad_condition),
        ("rank-equals-order chain", rank_order_chain),
        ("Lambda reconstruction", lambda_reconstruction),
        ("Airy bispectrality", airy_bispectrality),
        ("filtration", filtration),
        ("Airy obstruction", obstruction),
        ("wave recursion", wave_recursion),
        ("end-to-end classification", classification),
        ("parser", parser),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({ms} ms): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
