use std::collections::BTreeSet;

use num_traits::One;

use super::{IntPoly, PolyError};

pub fn euler_phi(mut n: u64) -> u64 {
    assert!(n >= 1);
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn mobius(mut n: u64) -> i8 {
    let mut k = 0;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            k += 1;
        }
        p += 1;
    }
    if n > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn x_pow_minus_one(e: u64) -> IntPoly {
    IntPoly::monomial(e as usize).sub(&IntPoly::one())
}

/// `Φ_d` via the Möbius product `Π_{e | d} (x^e - 1)^{μ(d/e)}`.
pub fn cyclotomic(d: u64) -> IntPoly {
    assert!(d >= 1, "cyclotomic index must be positive");
    let divisors: Vec<u64> = (1..=d).filter(|e| d.is_multiple_of(*e)).collect();
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for &e in &divisors {
        match mobius(d / e) {
            1 => num = num.mul(&x_pow_minus_one(e)),
            -1 => den = den.mul(&x_pow_minus_one(e)),
            _ => {}
        }
    }
    num.div_exact(&den).expect("Möbius product is exact")
}

/// `Φ_d` by dividing `x^d - 1` by `Φ_e` for every proper divisor `e`.
pub fn cyclotomic_by_division(d: u64) -> IntPoly {
    assert!(d >= 1);
    let mut p = x_pow_minus_one(d);
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        p = p.div_exact(&cyclotomic_by_division(e)).expect("lower cyclotomic divides");
    }
    p
}

/// Every `d` with `φ(d) <= n`. Uses `φ(d) >= sqrt(d/2)`.
pub fn indices_with_phi_at_most(n: usize) -> Vec<u64> {
    let n = n as u64;
    let bound = (2 * n * n).max(2);
    (1..=bound).filter(|&d| euler_phi(d) <= n).collect()
}

/// The set of `d` with `Φ_d | p`.
pub fn cyclotomic_divisors(p: &IntPoly) -> BTreeSet<u64> {
    assert!(!p.is_zero(), "cyclotomic divisors of the zero polynomial");
    indices_with_phi_at_most(p.deg()).into_iter().filter(|&d| cyclotomic(d).divides(p)).collect()
}

/// Splits `p = c · r` with `c` the largest product of cyclotomic polynomials
/// dividing `p`. Returns `(c, r, indices with multiplicity)`.
pub fn strip_cyclotomic_factors(p: &IntPoly) -> (IntPoly, IntPoly, Vec<u64>) {
    assert!(!p.is_zero());
    let mut rest = p.clone();
    let mut cyc = IntPoly::one();
    let mut found = Vec::new();
    for d in indices_with_phi_at_most(p.deg()) {
        let phi = cyclotomic(d);
        while !rest.is_constant() {
            match rest.div_exact(&phi) {
                Some(q) => {
                    rest = q;
                    cyc = cyc.mul(&phi);
                    found.push(d);
                }
                None => break,
            }
        }
    }
    (cyc, rest, found)
}

/// Whether a monic polynomial is a product of cyclotomic polynomials, i.e.
/// whether all of its roots are roots of unity.
pub fn is_cyclotomic_product(p: &IntPoly) -> Result<bool, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !p.is_monic() {
        return Err(PolyError::NotMonic);
    }
    let (_, rest, _) = strip_cyclotomic_factors(p);
    Ok(rest.is_constant() && rest.coeff(0).is_one())
}
