//! Exact univariate polynomials with big-integer coefficients, and the
//! root-location primitives built on them: Sturm counting, unit-circle
//! counting, cyclotomic detection, mod-p factor degrees and the Salem test.

mod charpoly;
mod compose;
mod cyclotomic;
mod gcd;
mod modp;
mod ratpoly;
mod roots;
mod salem;
mod sturm;
mod unit_circle;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use charpoly::{char_poly, char_poly_rational, companion};
pub use compose::{pairwise_product_polynomial, root_squares_polynomial};
pub use cyclotomic::{
    cyclotomic, cyclotomic_by_division, cyclotomic_divisors, euler_phi, indices_with_phi_at_most,
    is_cyclotomic_product, strip_cyclotomic_factors,
};
pub use gcd::{primitive_gcd, squarefree_part};
pub use modp::{factor_degrees_mod_prime, ModPError};
pub use ratpoly::RatPoly;
pub use roots::{largest_real_root, real_roots, RealAlgebraic};
pub use salem::{irreducibility_certificate, salem_check, Irreducibility, SalemVerdict};
pub use sturm::{sturm_count, sturm_count_above, Endpoint, SturmSequence};
pub use unit_circle::{root_location_summary, trace_polynomial, unit_circle_root_count, RootLocationSummary};

use crate::linalg::DimensionError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial must be monic")]
    NotMonic,
    #[error(transparent)]
    Dimension(#[from] DimensionError),
}

/// Integer polynomial; `coeffs[i]` is the coefficient of `x^i`. The last
/// stored coefficient is nonzero; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        IntPoly { coeffs: c }
    }

    /// `x - r`.
    pub fn linear_root(r: i64) -> Self {
        IntPoly::from_i64(&[-r, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Content-free part with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        (0..e).fold(IntPoly::one(), |acc, _| acc.mul(self))
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs: c }
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// `p(-x)`.
    pub fn negate_variable(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect())
    }

    /// `x^deg · p(1/x)`.
    pub fn reciprocal(&self) -> Result<IntPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(IntPoly::new(self.coeffs.iter().rev().cloned().collect()))
    }

    pub fn is_reciprocal(&self) -> bool {
        !self.is_zero() && self.reciprocal().is_ok_and(|r| r == *self)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// Sign of `p(x)` computed on the cleared-denominator form
    /// `Σ a_i n^i d^(deg-i)` with `x = n/d`, `d > 0`.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let (n, d) = (x.numer(), x.denom());
        let deg = self.coeffs.len() - 1;
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        // Horner over numerator while tracking denominator powers.
        let mut terms = Vec::with_capacity(deg + 1);
        for _ in 0..=deg {
            terms.push(dpow.clone());
            dpow *= d;
        }
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * n + c * &terms[deg - i];
        }
        sign_of(&acc)
    }

    pub fn sign_at_i64(&self, x: i64) -> i8 {
        sign_of(&self.eval_i64(x))
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) · a mod b`.
    pub fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        assert!(!b.is_zero(), "pseudo-division by zero");
        let db = b.deg();
        if self.is_zero() || self.deg() < db {
            return self.clone();
        }
        let lb = b.leading();
        let mut r = self.coeffs.clone();
        let mut steps = self.deg() - db + 1;
        while r.len() > db && !r.is_empty() {
            let lr = r.last().unwrap().clone();
            let shift = r.len() - 1 - db;
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[shift + j] -= &lr * bc;
            }
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            steps -= 1;
        }
        let mut out = IntPoly::new(r);
        if steps > 0 {
            out = out.scale(&num_traits::pow(lb, steps));
        }
        out
    }

    /// Quotient and remainder over the integers when `b` is monic up to sign.
    pub fn div_rem_unit(&self, b: &IntPoly) -> (IntPoly, IntPoly) {
        let lb = b.leading();
        assert!(lb.abs().is_one(), "divisor must have unit leading coefficient");
        let db = b.deg();
        if self.is_zero() || self.deg() < db {
            return (IntPoly::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - db + 1];
        while r.len() > db && !r.is_empty() {
            let shift = r.len() - 1 - db;
            let c = r.last().unwrap() * &lb;
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[shift + j] -= &c * bc;
            }
            q[shift] = c;
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        (IntPoly::new(q), IntPoly::new(r))
    }

    /// Exact quotient `self / b` when it exists in `Z[x]`.
    pub fn div_exact(&self, b: &IntPoly) -> Option<IntPoly> {
        assert!(!b.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.deg() < b.deg() {
            return None;
        }
        let lb = b.leading();
        let db = b.deg();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - db + 1];
        while r.len() > db && !r.is_empty() {
            let shift = r.len() - 1 - db;
            let (c, rem) = r.last().unwrap().div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[shift + j] -= &c * bc;
            }
            q[shift] = c;
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        if r.is_empty() {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    pub fn divides(&self, other: &IntPoly) -> bool {
        other.div_exact(self).is_some()
    }

    pub fn to_ratpoly(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }
}

pub(crate) fn sign_of(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

/// The Lehmer polynomial `x^10 + x^9 - x^7 - x^6 - x^5 - x^4 - x^3 + x + 1`.
pub fn lehmer() -> IntPoly {
    IntPoly::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_and_degree() {
        let p = IntPoly::from_i64(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(IntPoly::from_i64(&[0, 0]).degree(), None);
        assert!(IntPoly::from_i64(&[]).is_zero());
    }

    #[test]
    fn reciprocal_examples() {
        let p = IntPoly::from_i64(&[1, -3, 1]);
        assert_eq!(p.reciprocal().unwrap(), p);
        assert_eq!(IntPoly::from_i64(&[-2, 1]).reciprocal().unwrap(), IntPoly::from_i64(&[1, -2]));
        assert_eq!(lehmer().reciprocal().unwrap(), lehmer());
        assert_eq!(IntPoly::zero().reciprocal(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn exact_division() {
        let a = IntPoly::from_i64(&[-1, 1]).mul(&IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(a.div_exact(&IntPoly::from_i64(&[1, 0, 1])), Some(IntPoly::from_i64(&[-1, 1])));
        assert_eq!(a.div_exact(&IntPoly::from_i64(&[2, 1])), None);
        // integer content obstruction
        assert_eq!(IntPoly::from_i64(&[1, 1]).div_exact(&IntPoly::from_i64(&[2, 2])), None);
    }

    #[test]
    fn pseudo_remainder_identity() {
        let a = IntPoly::from_i64(&[3, 0, 2, 5]);
        let b = IntPoly::from_i64(&[1, 2]);
        let r = a.pseudo_rem(&b);
        // lc(b)^3 · a(-1/2) = r (constant)
        let x = BigRational::new((-1).into(), 2.into());
        let lhs = a.eval_rational(&x) * BigRational::from_integer(8.into());
        assert_eq!(BigRational::from_integer(r.coeff(0)), lhs);
        assert_eq!(r.degree(), Some(0));
    }

    #[test]
    fn sign_at_rational() {
        let p = IntPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(p.sign_at(&BigRational::new(3.into(), 2.into())), 1);
        assert_eq!(p.sign_at(&BigRational::new(7.into(), 5.into())), -1);
        assert_eq!(p.sign_at(&BigRational::from_integer(0.into())), -1);
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::from_i64(&[1, -3, 1]).to_string(), "x^2 - 3x + 1");
        assert_eq!(IntPoly::from_i64(&[0, -1]).to_string(), "-x");
    }
}
