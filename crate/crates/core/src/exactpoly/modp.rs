use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use thiserror::Error;

use super::IntPoly;

/// Reasons a prime is unusable; the caller should try another prime.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModPError {
    #[error("{0} is not a prime below 2^62")]
    NotPrime(u64),
    #[error("prime divides the leading coefficient")]
    LeadingCoefficientVanishes,
    #[error("reduction is not squarefree")]
    NotSquarefree,
    #[error("polynomial is constant")]
    Constant,
}

/// Polynomial over F_p, low degree first, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Fp {
    p: u64,
}

impl Fp {
    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub(crate) fn reduce(&self, f: &IntPoly) -> Vec<u64> {
        let p = BigInt::from(self.p);
        let mut v: Vec<u64> = f.coeffs().iter().map(|c| c.mod_floor(&p).to_u64().expect("residue fits")).collect();
        Fp::trim(&mut v);
        v
    }

    fn monic(&self, f: &[u64]) -> Vec<u64> {
        let inv = self.inv(*f.last().expect("nonzero"));
        f.iter().map(|&c| self.mul(c, inv)).collect()
    }

    pub(crate) fn rem(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut r = a.to_vec();
        Fp::trim(&mut r);
        let db = b.len() - 1;
        let inv = self.inv(b[db]);
        while r.len() > db {
            let shift = r.len() - 1 - db;
            let c = self.mul(*r.last().unwrap(), inv);
            for (j, &bc) in b.iter().enumerate() {
                r[shift + j] = self.sub(r[shift + j], self.mul(c, bc));
            }
            Fp::trim(&mut r);
        }
        r
    }

    fn div(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let inv = self.inv(b[db]);
        let mut q = vec![0; a.len().saturating_sub(db)];
        while r.len() > db {
            let shift = r.len() - 1 - db;
            let c = self.mul(*r.last().unwrap(), inv);
            for (j, &bc) in b.iter().enumerate() {
                r[shift + j] = self.sub(r[shift + j], self.mul(c, bc));
            }
            q[shift] = c;
            r.pop();
        }
        Fp::trim(&mut q);
        q
    }

    pub(crate) fn mulmod(&self, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        self.rem(&out, m)
    }

    pub(crate) fn powmod(&self, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
        let mut result = self.rem(&[1], m);
        let mut b = self.rem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                result = self.mulmod(&result, &b, m);
            }
            b = self.mulmod(&b, &b, m);
            e >>= 1;
        }
        result
    }

    fn gcd(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        Fp::trim(&mut a);
        Fp::trim(&mut b);
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            self.monic(&a)
        }
    }

    fn derivative(&self, f: &[u64]) -> Vec<u64> {
        let mut d: Vec<u64> = f.iter().enumerate().skip(1).map(|(i, &c)| self.mul(c, i as u64 % self.p)).collect();
        Fp::trim(&mut d);
        d
    }

    fn sub_poly(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut v: Vec<u64> = (0..n).map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect();
        Fp::trim(&mut v);
        v
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn field(p: u64) -> Result<Fp, ModPError> {
    if p >= 1 << 62 || !is_prime(p) {
        return Err(ModPError::NotPrime(p));
    }
    Ok(Fp { p })
}

/// Degrees of the irreducible factors of `f mod p`, sorted, by distinct-degree
/// factorization.
pub fn factor_degrees_mod_prime(f: &IntPoly, p: u64) -> Result<Vec<usize>, ModPError> {
    let fp = field(p)?;
    if f.is_constant() {
        return Err(ModPError::Constant);
    }
    let mut g = fp.reduce(f);
    if g.len() != f.coeffs().len() {
        return Err(ModPError::LeadingCoefficientVanishes);
    }
    g = fp.monic(&g);
    let d = fp.derivative(&g);
    if d.is_empty() || fp.gcd(&g, &d).len() != 1 {
        return Err(ModPError::NotSquarefree);
    }
    let x = vec![0, 1];
    let mut degrees = Vec::new();
    let mut h = x.clone();
    let mut k = 1;
    while g.len() > 2 * k {
        h = fp.powmod(&h, p, &g);
        let c = fp.gcd(&fp.sub_poly(&h, &x), &g);
        let dc = c.len() - 1;
        if dc > 0 {
            degrees.extend(std::iter::repeat_n(k, dc / k));
            g = fp.div(&g, &c);
            h = fp.rem(&h, &g);
        }
        k += 1;
    }
    if g.len() > 1 {
        degrees.push(g.len() - 1);
    }
    degrees.sort_unstable();
    Ok(degrees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::lehmer;

    /// Berlekamp: the number of irreducible factors of a squarefree `f` over
    /// F_p equals the nullity of `Q - I`, where row `i` of `Q` is `x^{ip} mod f`.
    fn berlekamp_factor_count(f: &IntPoly, p: u64) -> usize {
        let fp = field(p).unwrap();
        let g = fp.monic(&fp.reduce(f));
        let n = g.len() - 1;
        let xp = fp.powmod(&[0, 1], p, &g);
        let mut row = vec![1u64];
        let mut q = Vec::new();
        for i in 0..n {
            let mut r = row.clone();
            r.resize(n, 0);
            r[i] = fp.sub(r[i], 1);
            q.push(r);
            row = fp.mulmod(&row, &xp, &g);
        }
        // rank over F_p
        let mut rank = 0;
        for c in 0..n {
            let Some(piv) = (rank..n).find(|&r| q[r][c] != 0) else {
                continue;
            };
            q.swap(rank, piv);
            let inv = fp.inv(q[rank][c]);
            for r in 0..n {
                if r != rank && q[r][c] != 0 {
                    let f = fp.mul(q[r][c], inv);
                    for j in 0..n {
                        let v = fp.mul(f, q[rank][j]);
                        q[r][j] = fp.sub(q[r][j], v);
                    }
                }
            }
            rank += 1;
        }
        n - rank
    }

    #[test]
    fn quadratic_examples() {
        let f = IntPoly::from_i64(&[1, 0, 1]);
        assert_eq!(factor_degrees_mod_prime(&f, 3), Ok(vec![2]));
        assert_eq!(factor_degrees_mod_prime(&f, 5), Ok(vec![1, 1]));
        assert_eq!(factor_degrees_mod_prime(&f, 2), Err(ModPError::NotSquarefree));
    }

    #[test]
    fn bad_primes() {
        let f = IntPoly::from_i64(&[1, 0, 3]);
        assert_eq!(factor_degrees_mod_prime(&f, 3), Err(ModPError::LeadingCoefficientVanishes));
        assert_eq!(factor_degrees_mod_prime(&f, 4), Err(ModPError::NotPrime(4)));
    }

    #[test]
    fn lehmer_reductions_below_200() {
        // (-1)^5 L(1) L(-1) = 1 is a square, so the Galois group sits in the
        // even-sign part of the hyperoctahedral group, which has no 10-cycle:
        // no reduction is irreducible, but the degree patterns still rule out
        // every proper factor degree.
        let l = lehmer();
        let mut seen = std::collections::BTreeSet::new();
        for p in (2..200).filter(|&p| is_prime(p)) {
            if let Ok(d) = factor_degrees_mod_prime(&l, p) {
                assert_eq!(d.len(), berlekamp_factor_count(&l, p), "p = {p}");
                assert_eq!(d.iter().sum::<usize>(), 10);
                seen.insert(d);
            }
        }
        assert!(!seen.contains(&vec![10]));
        assert!(seen.contains(&vec![2, 8]) && seen.contains(&vec![4, 6]) && seen.contains(&vec![5, 5]));
    }

    #[test]
    fn agrees_with_berlekamp_on_products() {
        let f = IntPoly::from_i64(&[1, 1, 0, 1])
            .mul(&IntPoly::from_i64(&[-2, 0, 0, 0, 1]))
            .mul(&IntPoly::from_i64(&[3, 1]));
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 101] {
            if let Ok(d) = factor_degrees_mod_prime(&f, p) {
                assert_eq!(d.len(), berlekamp_factor_count(&f, p), "p = {p}");
                assert_eq!(d.iter().sum::<usize>(), f.deg());
            }
        }
    }
}
