use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{IntPoly, PolyError, RatPoly};
use crate::linalg::{det_bareiss, det_rational, DimensionError, IntMatrix, Matrix, RatMatrix};

/// Newton interpolation through `(k, values[k])` for `k = 0..values.len()`.
pub(crate) fn interpolate_at_naturals(values: &[BigRational]) -> RatPoly {
    let n = values.len();
    if n == 0 {
        return RatPoly::zero();
    }
    let mut dd = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / BigRational::from_integer(BigInt::from(level));
        }
    }
    let mut p = RatPoly::constant(dd[n - 1].clone());
    for k in (0..n - 1).rev() {
        let factor = RatPoly::new(vec![BigRational::from_integer(-BigInt::from(k)), BigRational::one()]);
        p = p.mul(&factor).add(&RatPoly::constant(dd[k].clone()));
    }
    p
}

/// `kI - M`.
fn shifted<T>(m: &Matrix<T>, k: &T) -> Matrix<T>
where
    T: Clone + Zero,
    for<'a> &'a T: std::ops::Sub<&'a T, Output = T>,
{
    let zero = T::zero();
    Matrix::from_fn(m.rows(), m.cols(), |i, j| if i == j { k - &m[(i, j)] } else { &zero - &m[(i, j)] })
}

/// `det(xI - M)`, monic of degree `n`, by evaluation at `0..=n` and
/// interpolation.
pub fn char_poly(m: &IntMatrix) -> Result<IntPoly, PolyError> {
    let n = m.require_square()?;
    if n == 0 {
        return Err(DimensionError::Empty.into());
    }
    let values: Vec<BigRational> =
        (0..=n).map(|k| BigRational::from_integer(det_bareiss(&shifted(m, &BigInt::from(k))))).collect();
    let p = interpolate_at_naturals(&values);
    Ok(IntPoly::new(
        p.coeffs()
            .iter()
            .map(|c| {
                debug_assert!(c.is_integer());
                c.to_integer()
            })
            .collect(),
    ))
}

/// `det(xI - M)` for a rational matrix.
pub fn char_poly_rational(m: &RatMatrix) -> Result<RatPoly, PolyError> {
    let n = m.require_square()?;
    if n == 0 {
        return Err(DimensionError::Empty.into());
    }
    let values: Vec<BigRational> =
        (0..=n).map(|k| det_rational(&shifted(m, &BigRational::from_integer(BigInt::from(k))))).collect();
    Ok(interpolate_at_naturals(&values))
}

/// Companion matrix of a monic polynomial, with the negated low coefficients
/// in the last column.
pub fn companion(p: &IntPoly) -> Result<IntMatrix, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !p.is_monic() {
        return Err(PolyError::NotMonic);
    }
    let n = p.deg();
    if n == 0 {
        return Err(DimensionError::Empty.into());
    }
    Ok(Matrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -p.coeff(i)
        } else if i == j + 1 {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::lehmer;
    use crate::linalg::{int_matrix, rat};

    #[test]
    fn small_examples() {
        let m = int_matrix(&[&[2, 1], &[1, 1]]);
        assert_eq!(char_poly(&m).unwrap(), IntPoly::from_i64(&[1, -3, 1]));
        let id = IntMatrix::identity(3);
        assert_eq!(char_poly(&id).unwrap(), IntPoly::from_i64(&[-1, 1]).pow(3));
    }

    #[test]
    fn lehmer_companion() {
        let c = companion(&lehmer()).unwrap();
        assert_eq!(char_poly(&c).unwrap(), lehmer());
    }

    #[test]
    fn non_square_rejected() {
        let m = Matrix::from_fn(2, 3, |_, _| BigInt::zero());
        assert!(matches!(char_poly(&m), Err(PolyError::Dimension(_))));
    }

    #[test]
    fn trace_and_determinant_coefficients() {
        let m = int_matrix(&[&[1, -2, 3], &[0, 4, 5], &[-1, 2, 2]]);
        let p = char_poly(&m).unwrap();
        assert_eq!(p.coeff(2), BigInt::from(-7));
        assert_eq!(p.coeff(0), -det_bareiss(&m));
    }

    #[test]
    fn rational_matrix() {
        let m = Matrix::from_rows(vec![vec![rat(1, 2), rat(0, 1)], vec![rat(3, 1), rat(1, 3)]]).unwrap();
        let p = char_poly_rational(&m).unwrap();
        assert_eq!(p, RatPoly::new(vec![rat(1, 6), rat(-5, 6), rat(1, 1)]));
    }
}
