use num_traits::{One, Zero};

use crate::algebra::scalar::{factorial, int, Scalar};
use crate::algebra::Poly;
use crate::diffop::{ad_condition_min_m, ad_pow, commutator, DiffOp};
use crate::error::{Error, Result};

use super::wave::split_constant_part;

/// Coefficients `q_0..q_r` with `Q = Σ q_j L^j`, or `None` when `Q` is not
/// a polynomial in `L`.
pub fn q_polynomial_in_l(q: &DiffOp, l: &DiffOp) -> Result<Option<Vec<Scalar>>> {
    if !commutator(l, q)?.is_zero() {
        return Err(Error::NotCommuting);
    }
    let Some(n) = l.order().filter(|&n| n > 0) else {
        return Ok(q.as_constant().map(|c| vec![c]));
    };
    let lead = l.leading();
    let mut rem = q.clone();
    let mut out: Vec<Scalar> = Vec::new();
    while let Some(k) = rem.order() {
        if k % n != 0 {
            return Ok(None);
        }
        let e = k / n;
        let Some(c) = (&rem.leading() * &lead.pow(-(e as i64))).as_constant() else {
            return Ok(None);
        };
        if out.len() <= e {
            out.resize(e + 1, Scalar::zero());
        }
        rem = &rem - &l.pow(e).scale(&c);
        out[e] = c;
    }
    Ok(Some(out))
}

/// Outcome of checking the rank-equals-order chain for a bounded operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedReport {
    pub f: Poly,
    pub m: usize,
    /// `ad_L^m(θ)`.
    pub q_operator: DiffOp,
    /// `None` when `Q` is not a polynomial in `L`: the rank is below the order.
    pub q: Option<Vec<Scalar>>,
    /// `Σ q_j f^j = m! (f')^m`.
    pub identity_holds: bool,
    /// `(N-1) m = r N`.
    pub degree_relation: bool,
    pub s: Option<usize>,
    pub r: Option<usize>,
    /// `q_r = m! N^m`.
    pub leading_ok: bool,
    /// Every constant `c_j` below the top of `f` is zero.
    pub constants_zero: bool,
}

impl BoundedReport {
    pub fn not_rank_order_case(&self) -> bool {
        self.q.is_none()
    }

    pub fn passed(&self) -> bool {
        self.q.is_some() && self.identity_holds && self.degree_relation && self.leading_ok && self.constants_zero
    }
}

pub fn bounded_test(l: &DiffOp, theta: &Poly, m_max: usize) -> Result<BoundedReport> {
    let (f, _) = split_constant_part(l)?;
    let n = l.order().ok_or(Error::ZeroOperand)?;
    let m = ad_condition_min_m(l, theta, m_max).ok_or(Error::AdBudgetExceeded(m_max))?;
    let theta_op = DiffOp::function(theta.clone().into(), l.var());
    let q_operator = ad_pow(l, &theta_op, m)?;
    let q = q_polynomial_in_l(&q_operator, l)?;
    let m_fact = Scalar::from_integer(factorial(m));
    let rhs = f.derivative().pow(m).scale(&m_fact);
    let constants_zero = f == Poly::monomial(Scalar::one(), n);
    let mut report = BoundedReport {
        f: f.clone(),
        m,
        q_operator,
        q: q.clone(),
        identity_holds: false,
        degree_relation: false,
        s: None,
        r: None,
        leading_ok: false,
        constants_zero,
    };
    if let Some(q) = q {
        let lhs = q
            .iter()
            .enumerate()
            .fold(Poly::zero(), |acc, (j, c)| &acc + &f.pow(j).scale(c));
        let r = q.len() - 1;
        report.identity_holds = lhs == rhs;
        report.r = Some(r);
        report.degree_relation = (n - 1) * m == r * n;
        report.s = (m % n == 0).then_some(m / n);
        report.leading_ok = q[r] == m_fact * int(n as i64).pow(m as i32);
    }
    Ok(report)
}
