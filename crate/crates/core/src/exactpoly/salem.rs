use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modp::is_prime;
use super::{
    cyclotomic_divisors, factor_degrees_mod_prime, squarefree_part, sturm_count_above, unit_circle_root_count, IntPoly,
};
use crate::linalg::rat;

const MAX_PRIMES: usize = 20;
const PRIME_SCAN_LIMIT: u64 = 2000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility {
    /// Irreducible over the rationals; `primes` are the reductions used.
    Certified { primes: Vec<u64> },
    /// A proper factor was exhibited.
    Reducible,
    /// No decision from the available evidence.
    Uncertified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SalemVerdict {
    Salem,
    NotSalem,
    SalemConfigurationOnly,
}

fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    Some(out)
}

fn has_rational_root(p: &IntPoly) -> Option<bool> {
    if p.coeff(0).is_zero() {
        return Some(true);
    }
    let num = divisors(&p.coeff(0))?;
    let den = divisors(&p.leading())?;
    for a in &num {
        for b in &den {
            if a.gcd(b) != 1 {
                continue;
            }
            for s in [1i64, -1] {
                let x = BigRational::new(BigInt::from(*a) * s, BigInt::from(*b));
                if p.sign_at(&x) == 0 {
                    return Some(true);
                }
            }
        }
    }
    Some(false)
}

/// Proper subset sums of a degree multiset.
fn subset_sums(degrees: &[usize]) -> BTreeSet<usize> {
    let total: usize = degrees.iter().sum();
    let mut reach = vec![false; total + 1];
    reach[0] = true;
    for &d in degrees {
        for s in (d..=total).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    (1..total).filter(|&s| reach[s]).collect()
}

/// Certifies irreducibility over the rationals from factor-degree patterns
/// modulo up to 20 primes: a rational factor of degree `d` forces `d` to be a
/// subset sum of the factor degrees modulo every good prime.
pub fn irreducibility_certificate(p: &IntPoly) -> Irreducibility {
    assert!(!p.is_zero());
    let n = p.deg();
    if n == 0 {
        return Irreducibility::Reducible;
    }
    if n == 1 {
        return Irreducibility::Certified { primes: Vec::new() };
    }
    if !p.content().abs().is_one() {
        // nonunit content is a constant factor; irreducibility of the primitive
        // part is what callers care about
        return irreducibility_certificate(&p.primitive_part());
    }
    if squarefree_part(p).deg() < n {
        return Irreducibility::Reducible;
    }
    let cyc = cyclotomic_divisors(p);
    if !cyc.is_empty() {
        return if cyc.len() == 1 && super::cyclotomic(*cyc.first().unwrap()).deg() == n {
            Irreducibility::Certified { primes: Vec::new() }
        } else {
            Irreducibility::Reducible
        };
    }
    if n <= 3 {
        return match has_rational_root(p) {
            Some(true) => Irreducibility::Reducible,
            Some(false) => Irreducibility::Certified { primes: Vec::new() },
            None => Irreducibility::Uncertified,
        };
    }
    let mut possible: BTreeSet<usize> = (1..n).collect();
    let mut used = Vec::new();
    for q in (2..PRIME_SCAN_LIMIT).filter(|&q| is_prime(q)) {
        if used.len() == MAX_PRIMES {
            break;
        }
        let Ok(degrees) = factor_degrees_mod_prime(p, q) else {
            continue;
        };
        used.push(q);
        let sums = subset_sums(&degrees);
        possible.retain(|d| sums.contains(d));
        if possible.is_empty() {
            return Irreducibility::Certified { primes: used };
        }
    }
    Irreducibility::Uncertified
}

/// Three-valued Salem test: the root configuration is decided exactly,
/// irreducibility only when certified.
pub fn salem_check(p: &IntPoly) -> SalemVerdict {
    if p.is_zero() || !p.is_monic() || !p.is_reciprocal() {
        return SalemVerdict::NotSalem;
    }
    let n = p.deg();
    if n < 4 || n % 2 == 1 {
        return SalemVerdict::NotSalem;
    }
    if !cyclotomic_divisors(p).is_empty() {
        return SalemVerdict::NotSalem;
    }
    if sturm_count_above(p, &rat(1, 1)) != 1 || unit_circle_root_count(p) != n - 2 {
        return SalemVerdict::NotSalem;
    }
    match irreducibility_certificate(p) {
        Irreducibility::Certified { .. } => SalemVerdict::Salem,
        Irreducibility::Reducible => SalemVerdict::NotSalem,
        Irreducibility::Uncertified => SalemVerdict::SalemConfigurationOnly,
    }
}
