use num_traits::Zero;

use crate::algebra::scalar::{int, Scalar};
use crate::algebra::RatFunc;
use crate::diffop::DiffOp;
use crate::error::{Error, Result};

use super::{airy_shape, bracket_decompose, height, split_airy, v_decompose};

/// Leading term `alpha·x^s·∂^k` of `b_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub j: usize,
    pub s: i64,
    pub k: usize,
    pub alpha: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Clean,
    /// `b_step` would need a leading term `x^-1`, which has no rational antiderivative.
    Obstructed { step: usize },
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionTrace {
    pub order: usize,
    pub lambda: Scalar,
    pub steps: Vec<TraceStep>,
    pub verdict: Verdict,
}

impl ObstructionTrace {
    pub fn is_obstructed(&self) -> bool {
        matches!(self.verdict, Verdict::Obstructed { .. })
    }

    /// The leading term recursion between consecutive steps:
    /// `s_{j+1} = s_j + 1` and `α_{j+1} = -λ α_j (N(s_j+1) + k + 1) / (N(s_j+1))`.
    pub fn follows_recursion(&self) -> bool {
        let n = int(self.order as i64);
        let chain_ok = self.steps.windows(2).all(|w| {
            let (a, b) = (&w[0], &w[1]);
            let ns = &n * int(a.s + 1);
            b.j == a.j + 1
                && b.s == a.s + 1
                && b.k == a.k
                && !ns.is_zero()
                && b.alpha == -&self.lambda * &a.alpha * (&ns + int(a.k as i64 + 1)) / &ns
        });
        let end_ok = match self.verdict {
            Verdict::Obstructed { step } => self.steps.last().is_some_and(|t| t.j == step && t.s == -1),
            Verdict::Clean => self.steps.is_empty(),
            Verdict::Inconclusive => self.steps.iter().all(|t| t.s != -1),
        };
        chain_ok && end_ok
    }
}

fn step_of(j: usize, b: &DiffOp) -> Result<TraceStep> {
    let h = height(b)?;
    Ok(TraceStep {
        j,
        s: h.height,
        k: h.d_degree,
        alpha: h.coeff,
    })
}

/// Follow only the leading term of `b_j` for `L = A + V`.
pub fn perturbation_obstruction(l: &DiffOp, max_steps: usize) -> Result<ObstructionTrace> {
    let (a, v) = split_airy(l)?;
    let shape = airy_shape(&a)?;
    let mut trace = ObstructionTrace {
        order: shape.order,
        lambda: shape.lambda.clone(),
        steps: Vec::new(),
        verdict: Verdict::Clean,
    };
    if v.is_zero() {
        return Ok(trace);
    }
    trace.verdict = Verdict::Inconclusive;
    let mut cur = step_of(1, &-&v)?;
    let n = int(shape.order as i64);
    while cur.j <= max_steps {
        trace.steps.push(cur.clone());
        if cur.s == -1 {
            trace.verdict = Verdict::Obstructed { step: cur.j };
            break;
        }
        let ns = &n * int(cur.s + 1);
        let alpha = -&shape.lambda * &cur.alpha * (&ns + int(cur.k as i64 + 1)) / &ns;
        cur = TraceStep {
            j: cur.j + 1,
            s: cur.s + 1,
            k: cur.k,
            alpha,
        };
    }
    Ok(trace)
}

/// `K = 1 + Σ_{j=1}^{J} m_j A^-j` with `L K = K A` through `A^-(J-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AiryPdo {
    pub l: DiffOp,
    pub a: DiffOp,
    pub m: Vec<DiffOp>,
    pub trunc: usize,
}

impl AiryPdo {
    pub fn m(&self, j: usize) -> DiffOp {
        match j {
            0 => DiffOp::one(self.a.var()),
            _ => self.m.get(j - 1).cloned().unwrap_or_else(|| DiffOp::zero(self.a.var())),
        }
    }

    pub fn alpha(&self, j: usize, k: usize) -> RatFunc {
        self.m(j).coeff(k)
    }

    /// `K·A^J = Σ_{j=0}^{J} m_j A^(J-j)`, a differential operator.
    pub fn cleared(&self) -> DiffOp {
        let mut out = DiffOp::zero(self.a.var());
        for j in 0..=self.trunc {
            out = &out + &(&self.m(j) * &self.a.pow(self.trunc - j));
        }
        out
    }

    /// `L·(K A^J) - (K A^J)·A`, which is `(LK - KA) A^J` and so of order below `N - 1`
    /// exactly when the solved equations hold.
    pub fn residual(&self) -> DiffOp {
        let k = self.cleared();
        &(&self.l * &k) - &(&k * &self.a)
    }

    pub fn verify(&self) -> bool {
        let n = self.a.order().unwrap_or(0);
        self.residual().order().is_none_or(|o| o + 1 < n)
    }

    /// Largest order at infinity among the `α_{j,k}`, a uniform bound on their growth.
    pub fn uniform_order(&self) -> Option<i64> {
        self.m
            .iter()
            .flat_map(|m| m.coeffs().filter_map(|(_, c)| c.order_at_infinity()).collect::<Vec<_>>())
            .max()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AiryWave {
    Solved(AiryPdo),
    Obstructed(ObstructionTrace),
}

/// Solve `L K = K A` for `m_1..m_J`.
///
/// At step `j` the `∂^(k-1)` part of `b_j + U_j + T` (with `T = V` for `j = 1`,
/// else `c_{j-1} + W_{j-1}`) is `N α_{j,k}'` plus terms in `α_{j,k'}` with
/// `k' > k`, so `α_{j,N-1}, …, α_{j,1}` follow by one integration each; the
/// `∂^(N-1)` part of `c_j + W_j` then fixes `α_{j,0}`.
pub fn airy_wave_solve(l: &DiffOp, trunc: usize) -> Result<AiryWave> {
    let (a, v) = split_airy(l)?;
    let shape = airy_shape(&a)?;
    let n = shape.order;
    let var = l.var();
    let n_inv = int(n as i64).recip();
    let mut steps = Vec::new();
    let mut ms = Vec::new();
    let mut t = v.clone();
    for j in 1..=trunc {
        let mut m = DiffOp::zero(var);
        for k in (1..n).rev() {
            let (b, _) = bracket_decompose(&a, &m)?;
            let (u, _) = v_decompose(&v, &m, &a)?;
            let e = (&(&t + &b) + &u).coeff(k - 1);
            let integrand = e.scale(&-n_inv.clone());
            match integrand.integrate() {
                Ok(alpha) => m = &m + &DiffOp::monomial(alpha, k, var),
                Err(Error::LogObstruction(_)) if integrand.order_at_infinity() == Some(-1) => {
                    // parts of b_j = -(T + U_j) at ∂-degree >= k-1 are already final
                    let b_known = (-&(&t + &u)).map_coeffs(|i, c| if i + 1 >= k { c.clone() } else { RatFunc::zero() });
                    steps.push(step_of(j, &b_known)?);
                    return Ok(AiryWave::Obstructed(ObstructionTrace {
                        order: n,
                        lambda: shape.lambda,
                        steps,
                        verdict: Verdict::Obstructed { step: j },
                    }));
                }
                Err(Error::LogObstruction(msg)) => {
                    return Err(Error::LogObstruction(format!("step {j}, alpha_{k}: {msg}")));
                }
                Err(e) => return Err(e),
            }
        }
        let (b, c) = bracket_decompose(&a, &m)?;
        let (u, w) = v_decompose(&v, &m, &a)?;
        debug_assert!((&(&t + &b) + &u).is_zero());
        if !b.is_zero() {
            steps.push(step_of(j, &b)?);
        }
        let f = (&c + &w).coeff(n - 1);
        let alpha0 = f
            .scale(&-n_inv.clone())
            .integrate()
            .map_err(|e| Error::LogObstruction(format!("step {j}, alpha_0: {e}")))?;
        let m0 = DiffOp::function(alpha0, var);
        m = &m + &m0;
        let (_, c0) = bracket_decompose(&a, &m0)?;
        let (_, w0) = v_decompose(&v, &m0, &a)?;
        t = &(&(&c + &w) + &c0) + &w0;
        debug_assert!(t.coeff(n - 1).is_zero());
        ms.push(m);
    }
    let pdo = AiryPdo {
        l: l.clone(),
        a,
        m: ms,
        trunc,
    };
    debug_assert!(pdo.verify());
    Ok(AiryWave::Solved(pdo))
}

impl AiryWave {
    pub fn solved(&self) -> Option<&AiryPdo> {
        match self {
            AiryWave::Solved(k) => Some(k),
            AiryWave::Obstructed(_) => None,
        }
    }
}

impl AiryPdo {
    /// True when every `m_j` vanishes, i.e. `K = 1`.
    pub fn is_identity(&self) -> bool {
        self.m.iter().all(DiffOp::is_zero)
    }
}
