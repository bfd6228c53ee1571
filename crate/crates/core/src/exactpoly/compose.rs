use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::charpoly::interpolate_at_naturals;
use super::IntPoly;
use crate::linalg::{det_bareiss, Matrix};

/// Sylvester determinant of two polynomials with the given formal degrees.
fn sylvester_resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let s = Matrix::from_fn(size, size, |i, j| {
        if i < n {
            // row i holds f shifted right by i, highest coefficient first
            j.checked_sub(i).filter(|&k| k <= m).map(|k| f[m - k].clone()).unwrap_or_else(BigInt::zero)
        } else {
            let r = i - n;
            j.checked_sub(r).filter(|&k| k <= n).map(|k| g[n - k].clone()).unwrap_or_else(BigInt::zero)
        }
    });
    det_bareiss(&s)
}

/// `Res_y(p(y), y^n p(x/y))`. For monic `p` with roots `β_i` this is
/// `Π_{i,j} (x - β_i β_j)`, of degree `n²`.
pub fn pairwise_product_polynomial(p: &IntPoly) -> IntPoly {
    assert!(!p.is_zero() && !p.is_constant(), "needs a nonconstant polynomial");
    let n = p.deg();
    let f: Vec<BigInt> = p.coeffs().to_vec();
    let values: Vec<BigRational> = (0..=n * n)
        .map(|x| {
            let x = BigInt::from(x);
            // coefficient of y^k in y^n p(x/y) is a_{n-k} x^{n-k}
            let g: Vec<BigInt> = (0..=n).map(|k| p.coeff(n - k) * num_traits::pow(x.clone(), n - k)).collect();
            BigRational::from_integer(sylvester_resultant(&f, &g))
        })
        .collect();
    let q = interpolate_at_naturals(&values);
    IntPoly::new(q.coeffs().iter().map(|c| c.to_integer()).collect())
}

/// Polynomial whose roots are the squares of the roots of `p`:
/// `(-1)^n p(√x) p(-√x)`.
pub fn root_squares_polynomial(p: &IntPoly) -> IntPoly {
    let prod = p.mul(&p.negate_variable());
    let q = IntPoly::new(prod.coeffs().iter().step_by(2).cloned().collect());
    if p.deg() % 2 == 1 {
        q.neg()
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_of_roots() {
        // roots 2, 3: products 4, 6, 6, 9
        let p = IntPoly::from_i64(&[6, -5, 1]);
        let expected =
            IntPoly::from_i64(&[-4, 1]).mul(&IntPoly::from_i64(&[-6, 1]).pow(2)).mul(&IntPoly::from_i64(&[-9, 1]));
        assert_eq!(pairwise_product_polynomial(&p), expected);
    }

    #[test]
    fn squares() {
        let p = IntPoly::from_i64(&[6, -5, 1]);
        assert_eq!(root_squares_polynomial(&p), IntPoly::from_i64(&[36, -13, 1]));
        let q = IntPoly::from_i64(&[-2, 1]);
        assert_eq!(root_squares_polynomial(&q), IntPoly::from_i64(&[-4, 1]));
    }

    #[test]
    fn zero_root() {
        // roots 0, 1: products 0, 0, 0, 1
        let p = IntPoly::from_i64(&[0, -1, 1]);
        assert_eq!(pairwise_product_polynomial(&p), IntPoly::monomial(3).mul(&IntPoly::from_i64(&[-1, 1])));
    }
}
