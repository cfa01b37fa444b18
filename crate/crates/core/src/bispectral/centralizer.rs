use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::algebra::linalg::nullspace;
use crate::algebra::scalar::{int, Scalar};
use crate::algebra::{Poly, RatFunc};
use crate::diffop::{commutator, DiffOp};

/// Candidate coefficients are `Σ c_e x^e` with `-pole <= e <= degree - pole`.
#[derive(Clone, Copy, Debug)]
pub struct CentralizerBounds {
    pub pole: usize,
    pub degree: usize,
}

impl Default for CentralizerBounds {
    fn default() -> Self {
        CentralizerBounds { pole: 4, degree: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerResult {
    pub generators: Vec<DiffOp>,
    pub orders: Vec<usize>,
    /// gcd of the positive orders found, zero when there are none.
    pub rank: usize,
}

impl CentralizerResult {
    pub fn verify(&self, l: &DiffOp) -> bool {
        self.generators
            .iter()
            .zip(&self.orders)
            .all(|(m, &o)| m.order().unwrap_or(0) == o && commutator(l, m).is_ok_and(|c| c.is_zero()))
    }
}

/// Solve `[L, M] = 0` over operators of order `<= max_ord` whose coefficients
/// are Laurent polynomials within the bounds.
pub fn centralizer_search(l: &DiffOp, max_ord: usize, bounds: CentralizerBounds) -> CentralizerResult {
    let var = l.var();
    let mut unknowns: Vec<DiffOp> = Vec::new();
    for j in 0..=max_ord {
        for e in 0..=bounds.degree {
            let e = e as i64 - bounds.pole as i64;
            unknowns.push(DiffOp::monomial(RatFunc::monomial(int(1), e), j, var));
        }
    }
    let images: Vec<DiffOp> = unknowns
        .iter()
        .map(|u| commutator(l, u).expect("same variable"))
        .collect();
    // clear denominators per ∂-degree, then equate polynomial coefficients
    let mut dens: BTreeMap<usize, Poly> = BTreeMap::new();
    for img in &images {
        for (k, f) in img.coeffs() {
            let slot = dens.entry(k).or_insert_with(Poly::one);
            let g = slot.gcd(f.den());
            *slot = &*slot * &f.den().exact_div(&g);
        }
    }
    let mut rows: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
    let ncols = unknowns.len();
    for (col, img) in images.iter().enumerate() {
        for (k, f) in img.coeffs() {
            let cleared = f.num() * &dens[&k].exact_div(f.den());
            for (i, c) in cleared.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                rows.entry((k, i)).or_insert_with(|| vec![Scalar::zero(); ncols])[col] = c.clone();
            }
        }
    }
    let matrix: Vec<Vec<Scalar>> = rows.into_values().collect();
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    for v in nullspace(&matrix, ncols) {
        let mut m = DiffOp::zero(var);
        for (c, u) in v.iter().zip(&unknowns) {
            if !c.is_zero() {
                m = &m + &u.scale(c);
            }
        }
        orders.push(m.order().unwrap_or(0));
        generators.push(m);
    }
    let rank = orders
        .iter()
        .filter(|&&o| o > 0)
        .fold(BigInt::zero(), |acc, &o| acc.gcd(&BigInt::from(o)));
    CentralizerResult {
        generators,
        orders,
        rank: usize::try_from(rank).unwrap_or(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::Var;

    #[test]
    fn free_operator_has_rank_one() {
        let d = DiffOp::d(Var::X);
        let res = centralizer_search(&d.pow(2), 3, CentralizerBounds::default());
        assert!(res.generators.contains(&d));
        assert_eq!(res.rank, 1);
        assert!(res.verify(&d.pow(2)));
    }

    #[test]
    fn rational_potential_has_order_three_partner() {
        let d = DiffOp::d(Var::X);
        let l = &d.pow(2) - &DiffOp::function(RatFunc::monomial(int(2), -2), Var::X);
        let res = centralizer_search(&l, 3, CentralizerBounds::default());
        assert!(res.orders.contains(&3));
        assert!(res.orders.contains(&0));
        assert!(res.orders.contains(&2));
        assert_eq!(res.rank, 1);
        assert!(res.verify(&l));
    }
}
