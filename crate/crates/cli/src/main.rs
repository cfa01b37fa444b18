use std::fmt::Write as _;
use std::process::ExitCode;

use bispec::airy::{airy_wave_solve, AiryWave, ObstructionTrace};
use bispec::algebra::{Poly, RatFunc, Scalar};
use bispec::bispectral::{
    bounded_test, centralizer_search, split_constant_part, wave_operator, BoundedReport, CentralizerBounds,
};
use bispec::classify::{classify, ClassifyOptions};
use bispec::diffop::{ad_pow, commutator, dop_mul, left_divide, right_divide, DiffOp, Var};
use bispec::expr::{parse_function, parse_operator, print_operator};
use bispec::families::{darboux, DarbouxOptions};
use bispec::weights::{associated_polynomial, choose_weights, exponent_set, normal_form_test};
use bispec::Error;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bispec", version, about = "Exact computations with bispectral differential operators")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Budget for ad-chains, or the largest order searched by `centralizer`.
    #[arg(long, global = true)]
    order_budget: Option<usize>,
    /// Truncation order J of formal series.
    #[arg(long, global = true, default_value_t = 8)]
    trunc: usize,
    /// Polynomial θ(x) for the ad-condition.
    #[arg(long, global = true)]
    theta: Option<String>,
    /// Right factor P for Darboux transformations.
    #[arg(long, global = true)]
    p: Option<String>,
    /// Print a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an operator and print its normal-ordered form.
    Parse { expr: String },
    /// Product of two operators.
    Mul { a: String, b: String },
    /// Commutator [a, b].
    Commutator { a: String, b: String },
    /// Minimal m with ad_L^(m+1)(θ) = 0, and the rank-equals-order chain.
    AdTest { l: String },
    /// Division with remainder, L = Q·P + R (or P·Q + R with --left).
    Divide {
        l: String,
        divisor: String,
        #[arg(long)]
        left: bool,
    },
    /// Exchange a factorization base = Q·P to P·Q.
    Darboux {
        base: String,
        /// Declare base = B^d for a Bessel operator B.
        #[arg(long)]
        power: Option<usize>,
    },
    /// Wave operator K with L K = K f(∂) for a bounded operator.
    Wave { l: String },
    /// Airy-adic wave operator, or the obstruction trace.
    AiryWave { l: String },
    /// Newton polygon, weights, associated polynomial and normal form.
    Weights { l: String },
    /// Family classification with certificates.
    Classify { l: String },
    /// Operators commuting with L up to the order budget.
    Centralizer { l: String },
}

enum Failure {
    Syntax { input: String, err: Error },
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::Domain(err)
    }
}

struct Output {
    text: String,
    json: Value,
    /// A recomputed identity failed.
    violation: Option<String>,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Output { text, json, violation: None }
    }

    fn check(mut self, ok: bool, what: &str) -> Self {
        if !ok && self.violation.is_none() {
            self.violation = Some(what.to_string());
        }
        self
    }
}

fn op(input: &str) -> Result<DiffOp, Failure> {
    parse_operator(input).map_err(|err| Failure::Syntax { input: input.to_string(), err })
}

fn theta(common: &Common) -> Result<Option<Poly>, Failure> {
    let Some(text) = &common.theta else {
        return Ok(None);
    };
    let f = parse_function(text).map_err(|err| Failure::Syntax { input: text.clone(), err })?;
    match f.as_poly() {
        Some(p) => Ok(Some(p.clone())),
        None => Err(Failure::Domain(Error::NotInDomain(format!("θ = {f} is not a polynomial")))),
    }
}

fn scalars(xs: &[Scalar]) -> Value {
    Value::Array(xs.iter().map(|c| Value::String(c.to_string())).collect())
}

fn bounded_json(r: &BoundedReport) -> Value {
    json!({
        "m": r.m,
        "q_operator": print_operator(&r.q_operator),
        "q": r.q.as_deref().map(scalars),
        "not_rank_order_case": r.not_rank_order_case(),
        "identity_holds": r.identity_holds,
        "degree_relation": r.degree_relation,
        "s": r.s,
        "r": r.r,
        "leading_ok": r.leading_ok,
        "passed": r.passed(),
    })
}

fn trace_json(t: &ObstructionTrace) -> Value {
    let steps: Vec<Value> = t
        .steps
        .iter()
        .map(|s| json!({"j": s.j, "s": s.s, "k": s.k, "alpha": s.alpha.to_string()}))
        .collect();
    json!({"verdict": format!("{:?}", t.verdict), "steps": steps})
}

fn trace_text(t: &ObstructionTrace, out: &mut String) {
    writeln!(out, "verdict: {:?}", t.verdict).unwrap();
    for s in &t.steps {
        let term = DiffOp::monomial(RatFunc::monomial(s.alpha.clone(), s.s), s.k, Var::X);
        writeln!(out, "  b_{} leading term: {term}", s.j).unwrap();
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let common = &cli.common;
    match &cli.command {
        Command::Parse { expr } => {
            let l = op(expr)?;
            let printed = print_operator(&l);
            let order = l.order();
            let text = format!("{printed}\norder: {}\nvariable: {}", order.map_or("-".into(), |o| o.to_string()), l.var().name());
            Ok(Output::new(text, json!({"input": expr, "printed": printed, "order": order, "variable": l.var().name()})))
        }
        Command::Mul { a, b } => {
            let prod = dop_mul(&op(a)?, &op(b)?)?;
            let printed = print_operator(&prod);
            Ok(Output::new(printed.clone(), json!({"product": printed})))
        }
        Command::Commutator { a, b } => {
            let c = commutator(&op(a)?, &op(b)?)?;
            let printed = print_operator(&c);
            Ok(Output::new(printed.clone(), json!({"commutator": printed})))
        }
        Command::AdTest { l } => {
            let l = op(l)?;
            let budget = common.order_budget.unwrap_or(8);
            let theta = theta(common)?.unwrap_or_else(Poly::x);
            let report = bounded_test(&l, &theta, budget)?;
            let g = DiffOp::function(theta.clone().into(), l.var());
            let recomputed = ad_pow(&l, &g, report.m)? == report.q_operator
                && ad_pow(&l, &g, report.m + 1)?.is_zero();
            let mut text = format!("theta: {theta}\nm: {}\nad^m: {}\n", report.m, report.q_operator);
            match &report.q {
                Some(q) => {
                    let qs: Vec<String> = q.iter().map(ToString::to_string).collect();
                    writeln!(text, "q: [{}]", qs.join(", ")).unwrap();
                    writeln!(text, "rank-equals-order chain: {}", if report.passed() { "holds" } else { "fails" }).unwrap();
                }
                None => writeln!(text, "ad^m is not a polynomial in L: rank below order").unwrap(),
            }
            let json = json!({"input": print_operator(&l), "theta": theta.to_string(), "report": bounded_json(&report)});
            Ok(Output::new(text.trim_end().into(), json).check(recomputed, "ad-chain does not recompute"))
        }
        Command::Divide { l, divisor, left } => {
            let (l, p) = (op(l)?, op(divisor)?);
            let (q, r) = if *left { left_divide(&l, &p)? } else { right_divide(&l, &p)? };
            let back = if *left { &(&p * &q) + &r } else { &(&q * &p) + &r };
            let text = format!("Q: {q}\nR: {r}");
            let json = json!({"quotient": print_operator(&q), "remainder": print_operator(&r), "exact": r.is_zero()});
            Ok(Output::new(text, json).check(back == l, "quotient and remainder do not rebuild L"))
        }
        Command::Darboux { base, power } => {
            let base = op(base)?;
            let p_text = common.p.as_deref().ok_or_else(|| Failure::Domain(Error::NotInDomain("--p is required".into())))?;
            let p = op(p_text)?;
            let opts = DarbouxOptions { monomial_power: *power, ..Default::default() };
            let r = darboux(&base, &p, &opts)?;
            let mut text = format!("P: {}\nQ: {}\nbase = QP: {}\ntransformed = PQ: {}", r.p, r.q, r.base, r.transformed);
            if let Some(root) = &r.root {
                write!(text, "\nbase = ({root})^{}", r.power.unwrap_or(1)).unwrap();
            }
            let json = json!({
                "P": print_operator(&r.p),
                "Q": print_operator(&r.q),
                "base": print_operator(&r.base),
                "transformed": print_operator(&r.transformed),
                "monomial": r.monomial,
                "power": r.power,
                "root": r.root.as_ref().map(print_operator),
            });
            Ok(Output::new(text, json).check(r.verify(), "Darboux products do not re-verify"))
        }
        Command::Wave { l } => {
            let l = op(l)?;
            let (f, _) = split_constant_part(&l)?;
            let w = wave_operator(&l, &f, common.trunc)?;
            let n = l.order().unwrap_or(0) as i64;
            let clean = w.defect().coeffs().all(|(k, c)| k < n - common.trunc as i64 || c.is_zero());
            let mut text = format!("f: {}\n", f.fmt_with("d"));
            let mut coeffs = Vec::new();
            for j in 1..=common.trunc {
                let a = print_operator(&DiffOp::function(w.a(j).clone(), Var::X));
                writeln!(text, "a_{j}: {a}").unwrap();
                coeffs.push(Value::String(a));
            }
            let json = json!({"input": print_operator(&l), "f": f.fmt_with("d"), "a": coeffs, "trunc": common.trunc});
            Ok(Output::new(text.trim_end().into(), json).check(clean, "wave defect does not vanish"))
        }
        Command::AiryWave { l } => {
            let l = op(l)?;
            match airy_wave_solve(&l, common.trunc)? {
                AiryWave::Solved(k) => {
                    let mut text = format!("A: {}\n", k.a);
                    let mut ms = Vec::new();
                    for j in 1..=k.trunc {
                        writeln!(text, "m_{j}: {}", k.m(j)).unwrap();
                        ms.push(Value::String(print_operator(&k.m(j))));
                    }
                    let json = json!({"input": print_operator(&l), "A": print_operator(&k.a), "m": ms, "uniform_order": k.uniform_order()});
                    Ok(Output::new(text.trim_end().into(), json).check(k.verify(), "LK - KA does not vanish"))
                }
                AiryWave::Obstructed(t) => {
                    let mut text = String::new();
                    trace_text(&t, &mut text);
                    let json = json!({"input": print_operator(&l), "obstruction": trace_json(&t)});
                    Ok(Output::new(text.trim_end().into(), json).check(t.follows_recursion(), "trace breaks the recursion"))
                }
            }
        }
        Command::Weights { l } => {
            let l = op(l)?;
            let poly = exponent_set(&l);
            let w = choose_weights(&l)?;
            let f = associated_polynomial(&l, &w)?;
            let nf = normal_form_test(&f, &w)?;
            let mut text = format!("points: {:?}\nhull: {:?}\nweights: ({}, {})\nsupport: {:?}\nassociated: {f}\n", poly.points, poly.hull, w.rho, w.sigma, w.support);
            writeln!(text, "shape: {} (scale {})", nf.case, nf.scale).unwrap();
            if let Some(a) = &nf.airy {
                let lx = print_operator(&DiffOp::function(RatFunc::monomial(a.lambda.clone(), 1), Var::X));
                writeln!(text, "Airy form: (y^{} - ({lx}))^{}", a.r, a.k).unwrap();
            }
            if nf.not_bispectral_by_nilpotency {
                writeln!(text, "not bispectral: nilpotency").unwrap();
            }
            let json = json!({
                "input": print_operator(&l),
                "points": poly.points,
                "hull": poly.hull,
                "weights": {"rho": w.rho, "sigma": w.sigma},
                "support": w.support,
                "associated_polynomial": f.to_string(),
                "shape": nf.case.to_string(),
                "scale": nf.scale.to_string(),
                "airy_form": nf.airy.as_ref().map(|a| json!({"r": a.r, "k": a.k, "lambda": a.lambda.to_string()})),
                "not_bispectral_by_nilpotency": nf.not_bispectral_by_nilpotency,
                "weight": nf.weight,
                "exceeds_rho_plus_sigma": nf.exceeds_rho_plus_sigma,
            });
            Ok(Output::new(text.trim_end().into(), json).check(w.supports(&l), "weights do not support E(L)"))
        }
        Command::Classify { l } => {
            let l = op(l)?;
            let p = common.p.as_deref().map(op).transpose()?;
            let mut opts = ClassifyOptions { theta: theta(common)?, p, trunc: common.trunc, ..Default::default() };
            if let Some(b) = common.order_budget {
                opts.ad_budget = b;
            }
            let report = classify(&l, &opts)?;
            let ok = report.reverify();
            Ok(Output::new(report.to_string().trim_end().into(), report.to_json()).check(ok, "certificates do not re-verify"))
        }
        Command::Centralizer { l } => {
            let l = op(l)?;
            let max = common.order_budget.unwrap_or(l.order().unwrap_or(0) + 1);
            let c = centralizer_search(&l, max, CentralizerBounds::default());
            let mut text = String::new();
            for g in &c.generators {
                writeln!(text, "{g}").unwrap();
            }
            writeln!(text, "orders: {:?}\nrank: {}", c.orders, c.rank).unwrap();
            let json = json!({
                "input": print_operator(&l),
                "generators": c.generators.iter().map(print_operator).collect::<Vec<_>>(),
                "orders": c.orders,
                "rank": c.rank,
            });
            Ok(Output::new(text.trim_end().into(), json).check(c.verify(&l), "a generator does not commute with L"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let emit_json = cli.common.json;
    match run(&cli) {
        Ok(out) => {
            if emit_json {
                let mut doc = out.json;
                if let (Some(v), Value::Object(map)) = (&out.violation, &mut doc) {
                    map.insert("invariant_violation".into(), Value::String(v.clone()));
                }
                println!("{doc}");
            } else {
                println!("{}", out.text);
            }
            match out.violation {
                Some(v) => {
                    eprintln!("invariant violation: {v}");
                    ExitCode::from(3)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Syntax { input, err }) => {
            let pos = match &err {
                Error::Syntax { pos, .. } | Error::NegativeDerivativeExponent { pos } => *pos,
                _ => 0,
            };
            if emit_json {
                println!("{}", json!({"input": input, "errors": [err.to_string()], "position": pos}));
            } else {
                eprintln!("error: {err}\n  {input}\n  {}^", " ".repeat(pos));
            }
            ExitCode::from(2)
        }
        Err(Failure::Domain(err)) => {
            if emit_json {
                println!("{}", json!({"errors": [err.to_string()]}));
            } else {
                eprintln!("error: {err}");
            }
            ExitCode::from(1)
        }
    }
}
