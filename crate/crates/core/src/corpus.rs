//! Seeded, reproducible test corpora.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::EndoSpec;
use crate::conedyn::{ConeEndo, PolyCone, RatVec};
use crate::hyperlattice::{verify_isometry, LatticeIsometry, QuadLattice};
use crate::linalg::{det_bareiss, int_matrix, inverse, to_rational, IntMatrix, Matrix, RatMatrix};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_int_matrix(r: &mut ChaCha8Rng, n: usize, bound: i64) -> IntMatrix {
    Matrix::from_fn(n, n, |_, _| BigInt::from(r.gen_range(-bound..=bound)))
}

/// `count` specs with `n` uniform in `1..=max_n`, entries in `[-bound, bound]`, `det ≠ 0`.
pub fn random_abelian(seed: u64, count: usize, max_n: usize, bound: i64) -> Vec<EndoSpec> {
    abelian_with_dims(seed, count, 1, max_n, bound)
}

pub fn abelian_with_dims(seed: u64, count: usize, min_n: usize, max_n: usize, bound: i64) -> Vec<EndoSpec> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = r.gen_range(min_n..=max_n);
        let m = random_int_matrix(&mut r, n, bound);
        if !det_bareiss(&m).is_zero() {
            out.push(EndoSpec::new(m, false).expect("det checked"));
        }
    }
    out
}

fn small_blocks() -> Vec<IntMatrix> {
    [
        &[&[1i64][..]][..],
        &[&[-1]],
        &[&[2]],
        &[&[-3]],
        &[&[0, -1], &[1, 0]],
        &[&[0, -1], &[1, 1]],
        &[&[-1, -1], &[1, 0]],
        &[&[1, 1], &[0, 1]],
        &[&[2, 1], &[1, 1]],
        &[&[0, 1], &[1, 0]],
        &[&[1, 2], &[3, 1]],
        &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]],
    ]
    .iter()
    .map(|rows| int_matrix(rows))
    .collect()
}

fn permute(m: &IntMatrix, p: &[usize]) -> IntMatrix {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| m[(p[i], p[j])].clone())
}

/// Mixture of uniform random matrices and coordinate-permuted block sums of
/// small blocks carrying roots of unity, unipotent parts and expanding parts.
/// Dimensions `≤ 4`, entries `|·| ≤ 3`, `det ≠ 0`.
pub fn abelian_suite(seed: u64, count: usize) -> Vec<EndoSpec> {
    let mut r = rng(seed);
    let blocks = small_blocks();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let m = if r.gen_bool(0.6) {
            let n = r.gen_range(1..=4);
            random_int_matrix(&mut r, n, 3)
        } else {
            let target = r.gen_range(2..=4);
            let mut m = blocks.choose(&mut r).unwrap().clone();
            while m.rows() < target {
                let b = blocks.choose(&mut r).unwrap();
                if m.rows() + b.rows() <= 4 {
                    m = m.direct_sum(b);
                }
            }
            let mut p: Vec<usize> = (0..m.rows()).collect();
            p.shuffle(&mut r);
            permute(&m, &p)
        };
        if !det_bareiss(&m).is_zero() {
            out.push(EndoSpec::new(m, false).expect("det checked"));
        }
    }
    out
}

/// Gram matrices of signature `(1, ρ-1)` used by the lattice suite.
pub fn lattice_grams() -> Vec<QuadLattice> {
    [
        &[&[1i64, 0][..], &[0, -1]][..],
        &[&[1, 0], &[0, -2]],
        &[&[0, 1], &[1, 0]],
        &[&[2, 1], &[1, -2]],
        &[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]],
        &[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]],
        &[&[2, 0, 0], &[0, -1, 0], &[0, 0, -1]],
        &[&[1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]],
        &[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, -2, 1], &[0, 0, 1, -2]],
    ]
    .iter()
    .map(|rows| QuadLattice::from_rows(rows).expect("hyperbolic Gram"))
    .collect()
}

/// Vectors with `|entries| ≤ 2` and `q(r) ∈ {±1, ±2}` whose reflection is integral.
pub fn integral_roots(lattice: &QuadLattice) -> Vec<(Vec<BigInt>, IntMatrix)> {
    let n = lattice.rank();
    let side = 5u64;
    let mut out = Vec::new();
    for mut idx in 0..side.pow(n as u32) {
        let v: Vec<BigInt> = (0..n)
            .map(|_| {
                let d = (idx % side) as i64 - 2;
                idx /= side;
                BigInt::from(d)
            })
            .collect();
        // one representative of ±r
        if !v.iter().find(|x| !x.is_zero()).is_some_and(|x| *x > BigInt::zero()) {
            continue;
        }
        let q = lattice.q(&v, &v);
        if [-2i64, -1, 1, 2].iter().any(|&t| q == BigInt::from(t)) {
            if let Some(s) = lattice.reflection(&v) {
                out.push((v, s));
            }
        }
    }
    out
}

/// Products of 1 to 6 integral reflections of `lattice`.
pub fn reflection_products(seed: u64, count: usize, lattice: &QuadLattice) -> Vec<LatticeIsometry> {
    let mut r = rng(seed);
    let roots = integral_roots(lattice);
    assert!(!roots.is_empty(), "lattice has no integral reflections in the search box");
    (0..count)
        .map(|_| {
            let len = r.gen_range(1..=6);
            let g = (0..len)
                .fold(Matrix::<BigInt>::identity(lattice.rank()), |acc, _| acc.mul(&roots.choose(&mut r).unwrap().1));
            verify_isometry(lattice, g).expect("product of reflections")
        })
        .collect()
}

/// Reflection products over every Gram of [`lattice_grams`] (rank ≤ 4).
pub fn lattice_suite(seed: u64, count: usize) -> Vec<LatticeIsometry> {
    let grams = lattice_grams();
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let l = &grams[i % grams.len()];
            reflection_products(r.gen(), 1, l).pop().unwrap()
        })
        .collect()
}

/// Product of elementary column operations with multipliers in `{-1, 1}`.
fn random_unimodular(r: &mut ChaCha8Rng, n: usize, steps: usize) -> IntMatrix {
    let mut u = Matrix::<BigInt>::identity(n);
    if n < 2 {
        return u;
    }
    for _ in 0..steps {
        let i = r.gen_range(0..n);
        let mut j = r.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = BigInt::from(if r.gen_bool(0.5) { 1 } else { -1 });
        for k in 0..n {
            let v = &u[(k, j)] + &c * &u[(k, i)];
            u[(k, j)] = v;
        }
    }
    u
}

/// `U D U⁻¹` on the simplicial cone spanned by the columns of `U`.
fn conjugated_system(u: &IntMatrix, d: &RatMatrix) -> ConeEndo {
    let ur = to_rational(u);
    let m = ur.mul(d).mul(&inverse(&ur).expect("unimodular"));
    let cone = PolyCone::new(u.rows(), (0..u.cols()).map(|j| ur.column(j)).collect()).expect("simplicial");
    ConeEndo::new(m, cone).expect("conjugate of an orthant automorphism")
}

/// A cone system with its big class and designed number of contractions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentCase {
    pub endo: ConeEndo,
    pub big_class: RatVec,
    /// Number of fixed extremal rays on which the big class vanishes.
    pub designed_fixed_rays: usize,
}

/// Simplicial cone systems of dimension 2–5. In the orthant basis the map
/// fixes `f ≥ 1` rays (possibly permuting them), scales the remaining rays by
/// integers `≥ 2`, and the big class is the sum of the expanding coordinates.
pub fn descent_cases(seed: u64, count: usize) -> Vec<DescentCase> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let dim = 2 + i % 4;
            let fixed = r.gen_range(1..dim);
            let mut d: RatMatrix = Matrix::zeros(dim, dim);
            // the fixed block is a permutation: a 2-cycle on the first two rays half the time
            let swap = fixed >= 2 && r.gen_bool(0.5);
            for k in 0..fixed {
                let image = if swap && k < 2 { 1 - k } else { k };
                d[(image, k)] = BigRational::one();
            }
            for k in fixed..dim {
                d[(k, k)] = BigRational::from_integer(BigInt::from(r.gen_range(2..=4)));
            }
            let u = random_unimodular(&mut r, dim, 2 * dim);
            let endo = conjugated_system(&u, &d);
            // B(U e_k) = 1 on expanding rays, 0 on fixed ones: B = c U⁻¹
            let uinv = inverse(&to_rational(&u)).unwrap();
            let big_class: RatVec =
                (0..dim).map(|j| (fixed..dim).fold(BigRational::zero(), |acc, k| acc + &uinv[(k, j)])).collect();
            DescentCase { endo, big_class, designed_fixed_rays: fixed }
        })
        .collect()
}

/// A cone automorphism with a unique dominant eigenvalue on a fixed ray, and an interior start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerronCase {
    pub endo: ConeEndo,
    pub start: RatVec,
    pub dominant: BigRational,
}

/// Simplicial systems of dimension 2–5: a dominant scaling on one ray, distinct
/// smaller scalings (some fractional) and a ray swap on the rest.
pub fn perron_cases(seed: u64, count: usize) -> Vec<PerronCase> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let dim = 2 + i % 4;
            let mut d: RatMatrix = Matrix::zeros(dim, dim);
            let dominant = BigRational::from_integer(BigInt::from(r.gen_range(3..=6)));
            d[(0, 0)] = dominant.clone();
            let swap = dim >= 3 && r.gen_bool(0.5);
            for k in 1..dim {
                let s = BigRational::new(BigInt::from(r.gen_range(1..=4)), BigInt::from(r.gen_range(1..=2)))
                    .min(&dominant - BigRational::one());
                if swap && k <= 2 {
                    // rays 1 and 2 are exchanged, both scaled by s: modulus s on that block
                    d[(3 - k, k)] = s.min(BigRational::from_integer(2.into()));
                } else {
                    d[(k, k)] = s;
                }
            }
            let u = random_unimodular(&mut r, dim, 2 * dim);
            let endo = conjugated_system(&u, &d);
            let start = to_rational(&u).mul_vec(&vec![BigRational::one(); dim]);
            PerronCase { endo, start, dominant }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conedyn::descend;

    #[test]
    fn reproducible() {
        assert_eq!(random_abelian(42, 10, 2, 3), random_abelian(42, 10, 2, 3));
        assert_eq!(abelian_suite(1, 30), abelian_suite(1, 30));
        assert!(abelian_suite(1, 200)
            .iter()
            .all(|s| s.n() <= 4 && s.matrix().entries().all(|x| x.magnitude() <= &3u32.into())));
    }

    #[test]
    fn pell_lattice_corpus() {
        let l = QuadLattice::from_rows(&[&[1, 0], &[0, -2]]).unwrap();
        assert_eq!(reflection_products(7, 5, &l).len(), 5);
        assert!(lattice_grams().iter().all(|l| !integral_roots(l).is_empty()));
    }

    #[test]
    fn descent_cases_descend() {
        for c in descent_cases(3, 8) {
            let t = descend(&c.endo, &c.big_class).unwrap();
            assert_eq!(t.steps.len(), c.designed_fixed_rays);
            assert!(t.verify());
        }
    }
}
