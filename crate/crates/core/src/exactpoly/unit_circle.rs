use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{cyclotomic_divisors, primitive_gcd, squarefree_part, sturm_count, sturm_count_above, IntPoly, PolyError};
use crate::linalg::rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootLocationSummary {
    pub degree: usize,
    pub distinct_unit_circle_roots: usize,
    pub distinct_real_roots_gt_one: usize,
    pub cyclotomic_divisors: BTreeSet<u64>,
    pub is_reciprocal: bool,
}

/// For a palindromic `q` of degree `2m`, the polynomial `r` of degree `m`
/// with `q(x) = x^m r(x + 1/x)`. `None` if `q` is not palindromic of even degree.
pub fn trace_polynomial(q: &IntPoly) -> Option<IntPoly> {
    if q.is_zero() || q.deg() % 2 == 1 || !q.is_reciprocal() {
        return None;
    }
    let m = q.deg() / 2;
    // D_k(y) = x^k + x^-k: D_0 = 2, D_1 = y, D_{k+1} = y D_k - D_{k-1}
    let y = IntPoly::monomial(1);
    let mut prev = IntPoly::constant(BigInt::from(2));
    let mut cur = y.clone();
    let mut r = IntPoly::constant(q.coeff(m));
    for k in 1..=m {
        r = r.add(&cur.scale(&q.coeff(m + k)));
        let next = y.mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    Some(r)
}

/// Number of distinct complex roots of `p` on the unit circle.
pub fn unit_circle_root_count(p: &IntPoly) -> usize {
    assert!(!p.is_zero(), "unit-circle count of the zero polynomial");
    let mut s = squarefree_part(p);
    let x = IntPoly::monomial(1);
    while !s.is_constant() && s.coeff(0).is_zero() {
        s = s.div_exact(&x).expect("x divides");
    }
    let mut count = 0;
    for r in [1, -1] {
        if !s.is_constant() && s.eval_i64(r).is_zero() {
            count += 1;
            s = s.div_exact(&IntPoly::linear_root(r)).expect("root divides");
        }
    }
    if s.is_constant() {
        return count;
    }
    let q = primitive_gcd(&s, &s.reciprocal().expect("nonzero"));
    if q.is_constant() {
        return count;
    }
    let r = trace_polynomial(&q).expect("self-reciprocal part without roots ±1 is palindromic");
    count + 2 * sturm_count(&r, &rat(-2, 1), &rat(2, 1))
}

pub fn root_location_summary(p: &IntPoly) -> Result<RootLocationSummary, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    Ok(RootLocationSummary {
        degree: p.deg(),
        distinct_unit_circle_roots: unit_circle_root_count(p),
        distinct_real_roots_gt_one: if p.is_constant() { 0 } else { sturm_count_above(p, &rat(1, 1)) },
        cyclotomic_divisors: cyclotomic_divisors(p),
        is_reciprocal: p.is_reciprocal(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{cyclotomic, lehmer};

    fn poly(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn examples() {
        assert_eq!(unit_circle_root_count(&poly(&[1, 0, 1])), 2);
        assert_eq!(unit_circle_root_count(&lehmer()), 8);
        assert_eq!(unit_circle_root_count(&poly(&[1, -3, 1])), 0);
        assert_eq!(trace_polynomial(&poly(&[1, -3, 1])), Some(poly(&[-3, 1])));
    }

    #[test]
    fn roots_of_unity_and_edge_cases() {
        assert_eq!(unit_circle_root_count(&poly(&[-1, 0, 0, 0, 0, 0, 1])), 6);
        assert_eq!(unit_circle_root_count(&poly(&[-1, 1]).pow(3)), 1);
        assert_eq!(unit_circle_root_count(&poly(&[0, 0, 1, 1])), 1);
        assert_eq!(unit_circle_root_count(&poly(&[5])), 0);
        assert_eq!(unit_circle_root_count(&poly(&[-2, 1])), 0);
        assert_eq!(unit_circle_root_count(&cyclotomic(105)), 48);
        // 2x^2 - 2x + 2 has roots e^{±iπ/3}; 2x^2 + x + 2 has non-root-of-unity circle roots
        assert_eq!(unit_circle_root_count(&poly(&[2, -2, 2])), 2);
        assert_eq!(unit_circle_root_count(&poly(&[2, 1, 2])), 2);
        // (x - 2)(x - 1/2) is reciprocal but has no circle roots
        assert_eq!(unit_circle_root_count(&poly(&[2, -5, 2])), 0);
    }

    #[test]
    fn summary() {
        let s = root_location_summary(&lehmer()).unwrap();
        assert_eq!(s.degree, 10);
        assert_eq!(s.distinct_unit_circle_roots, 8);
        assert_eq!(s.distinct_real_roots_gt_one, 1);
        assert!(s.cyclotomic_divisors.is_empty());
        assert!(s.is_reciprocal);
    }
}
