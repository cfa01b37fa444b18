//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use super::scalar::Scalar;

/// Reduced row echelon form in place. Returns the pivot columns.
pub fn rref(rows: &mut [Vec<Scalar>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solve `a * u = b`. Free variables are set to zero; `None` if inconsistent.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar], ncols: usize) -> Option<Vec<Scalar>> {
    let mut rows: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut sol = vec![Scalar::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = rows[r][ncols].clone();
    }
    Some(sol)
}

/// Basis of the right null space. The basis vector attached to free column
/// `f` has a one at `f` and is supported on `f` and pivot columns left of it.
pub fn nullspace(a: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    let mut rows = a.to_vec();
    let pivots = rref(&mut rows, ncols);
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Scalar::zero(); ncols];
        v[f] = Scalar::one();
        for (r, &p) in pivots.iter().enumerate() {
            if p < f {
                v[p] = -rows[r][f].clone();
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;

    #[test]
    fn solves_and_detects_inconsistency() {
        let a = vec![vec![int(1), int(1)], vec![int(1), int(-1)]];
        assert_eq!(solve(&a, &[int(3), int(1)], 2), Some(vec![int(2), int(1)]));
        let a = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert_eq!(solve(&a, &[int(1), int(3)], 2), None);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)]];
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &a {
                let dot: Scalar = row.iter().zip(v).map(|(x, y)| x * y).sum();
                assert!(dot.is_zero());
            }
        }
    }
}
