use endodyn::linalg::{rank, Matrix, RatMatrix};
use endodyn::lp::{feasible_point, is_feasible};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

/// Feasibility of `Ax = b, x ≥ 0` by enumerating basic solutions: a feasible
/// system has a basic feasible solution supported on independent columns.
fn basic_solution_oracle(a: &RatMatrix, b: &[BigRational]) -> bool {
    let (m, n) = (a.rows(), a.cols());
    if b.iter().all(|x| x.is_zero()) {
        return true;
    }
    for mask in 1u32..(1 << n) {
        let cols: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        let sub = Matrix::from_fn(m, cols.len(), |i, k| a[(i, cols[k])].clone());
        if rank(&sub) != cols.len() {
            continue;
        }
        // solve sub·y = b by least squares normal equations, exact
        let st = sub.transpose();
        let normal = st.mul(&sub);
        let rhs = st.mul_vec(b);
        let Some(inv) = endodyn::linalg::inverse(&normal) else { continue };
        let y = inv.mul_vec(&rhs);
        if sub.mul_vec(&y) == b && y.iter().all(|v| !v.is_negative()) {
            return true;
        }
    }
    false
}

fn system() -> impl Strategy<Value = (RatMatrix, Vec<BigRational>)> {
    (1usize..=3, 1usize..=4).prop_flat_map(|(m, n)| {
        (prop::collection::vec(-3i64..=3, m * n), prop::collection::vec(-3i64..=3, m)).prop_map(move |(a, b)| {
            let r = |v: i64| BigRational::from_integer(v.into());
            (Matrix::from_fn(m, n, |i, j| r(a[i * n + j])), b.into_iter().map(r).collect())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn feasibility_matches_basic_solutions((a, b) in system()) {
        let x = feasible_point(&a, &b);
        prop_assert_eq!(x.is_some(), basic_solution_oracle(&a, &b));
        prop_assert_eq!(x.is_some(), is_feasible(&a, &b));
        if let Some(x) = x {
            prop_assert!(x.iter().all(|v| !v.is_negative()));
            prop_assert_eq!(a.mul_vec(&x), b);
        }
    }
}
