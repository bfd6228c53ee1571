//! Exact LP feasibility `A x = b, x ≥ 0` over the rationals: phase-one simplex
//! with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::RatMatrix;

/// A nonnegative solution of `a x = b`, or `None` when infeasible.
pub fn feasible_point(a: &RatMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(b.len(), m, "right-hand side length");
    if m == 0 {
        return Some(vec![BigRational::zero(); n]);
    }
    // tableau columns: n originals, m artificials, rhs
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let flip = b[i].is_negative();
            let mut row = vec![BigRational::zero(); width];
            for j in 0..n {
                row[j] = if flip { -a[(i, j)].clone() } else { a[(i, j)].clone() };
            }
            row[n + i] = BigRational::one();
            row[width - 1] = b[i].abs();
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    // reduced costs of the phase-one objective Σ artificials
    let mut cost = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }
    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) {
        // ratio test, ties broken by smallest basic index (Bland)
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave.expect("phase-one objective is bounded below");
        pivot(&mut t, &mut cost, r, enter);
        basis[r] = enter;
    }
    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            x[bi] = t[i][width - 1].clone();
        }
    }
    debug_assert!((0..m).all(|i| {
        let lhs = (0..n).fold(BigRational::zero(), |acc, j| acc + &a[(i, j)] * &x[j]);
        lhs == b[i]
    }));
    Some(x)
}

fn pivot(t: &mut [Vec<BigRational>], cost: &mut [BigRational], r: usize, c: usize) {
    let inv = t[r][c].recip();
    for v in t[r].iter_mut() {
        *v *= &inv;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                *v -= &f * p;
            }
        }
    }
    if !cost[c].is_zero() {
        let f = cost[c].clone();
        for (v, p) in cost.iter_mut().zip(&prow) {
            *v -= &f * p;
        }
    }
}

pub fn is_feasible(a: &RatMatrix, b: &[BigRational]) -> bool {
    feasible_point(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, Matrix};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()).unwrap()
    }

    #[test]
    fn simple_systems() {
        let a = m(&[&[1, 1], &[0, 1]]);
        let x = feasible_point(&a, &[rat(2, 1), rat(1, 1)]).unwrap();
        assert_eq!(x, vec![rat(1, 1), rat(1, 1)]);
        assert!(feasible_point(&a, &[rat(1, 1), rat(2, 1)]).is_none());
        assert!(feasible_point(&m(&[&[1, -1]]), &[rat(-3, 1)]).is_some());
        assert!(feasible_point(&m(&[&[1, 1]]), &[rat(-1, 1)]).is_none());
    }

    #[test]
    fn degenerate_and_redundant_rows() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, -1]]);
        let x = feasible_point(&a, &[rat(6, 1), rat(12, 1), rat(0, 1)]).unwrap();
        assert!(x.iter().all(|v| !v.is_negative()));
        assert!(feasible_point(&a, &[rat(6, 1), rat(11, 1), rat(0, 1)]).is_none());
    }
}
