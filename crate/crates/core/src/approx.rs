//! Rational approximation of floating values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};

pub const MAX_DENOMINATOR: u64 = 1_000_000;

/// Last continued-fraction convergent of `x` whose denominator is at most `max_den`.
pub fn best_rational(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let bound = BigInt::from(max_den);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        let ai = BigInt::from_f64(a)?;
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        if q2 > bound {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = y - a;
        if frac.abs() < 1e-12 {
            break;
        }
        y = 1.0 / frac;
    }
    if q1.is_zero() {
        return None;
    }
    Some(BigRational::new(p1, q1))
}

/// Smallest dyadic `k/2^bits` that is at least `x`.
pub fn dyadic_upper(x: f64, bits: u32) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let scaled = (x * 2f64.powi(bits as i32)).ceil();
    Some(BigRational::new(BigInt::from_f64(scaled)?, BigInt::one() << bits))
}

/// Dyadic rounding of `x` to `bits` fractional bits.
pub fn dyadic_nearest(x: f64, bits: u32) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let scaled = (x * 2f64.powi(bits as i32)).round();
    Some(BigRational::new(BigInt::from_f64(scaled)?, BigInt::one() << bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn convergents() {
        assert_eq!(best_rational(0.75, 100), Some(rat(3, 4)));
        assert_eq!(best_rational(-2.5, 10), Some(rat(-5, 2)));
        assert_eq!(best_rational(std::f64::consts::PI, 1000), Some(rat(355, 113)));
        assert_eq!(best_rational(f64::NAN, 10), None);
        let r = best_rational(std::f64::consts::SQRT_2, MAX_DENOMINATOR).unwrap();
        assert!(r.denom() <= &BigInt::from(MAX_DENOMINATOR));
    }

    #[test]
    fn dyadics() {
        assert_eq!(dyadic_upper(0.3, 2), Some(rat(2, 4)));
        assert_eq!(dyadic_nearest(0.3, 2), Some(rat(1, 4)));
    }
}
