//! Integer isometries of lattices of signature `(1, ρ-1)`, a model for the
//! action of an automorphism on `N¹` of a projective hyperkähler manifold
//! with its Beauville–Bogomolov–Fujiki form.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::abelian::{largest_abs_real_root, AlgebraicRadius, Entropy};
use crate::exactpoly::{
    char_poly, largest_real_root, primitive_gcd, real_roots, salem_check, squarefree_part, strip_cyclotomic_factors,
    sturm_count_above, IntPoly, RealAlgebraic, SalemVerdict,
};
use crate::linalg::{
    det_bareiss, kernel, primitive_integer_vector, to_rational, DimensionError, IntMatrix, Matrix, RatMatrix,
};
use crate::numfield::{FieldElem, RealField};

pub const DEFAULT_MAX_DEGREE: usize = 16;
const REFERENCE_BOX: i64 = 3;
/// Above this rank the box is too large and the reference comes from elimination.
const REFERENCE_SEARCH_RANK: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error(transparent)]
    Dimension(#[from] DimensionError),
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("form does not have signature (1, rho-1)")]
    BadSignature,
    #[error("no vector with |entries| <= 3 has positive square")]
    NoReference,
    #[error("g^T Q g != Q")]
    NotIsometry,
    #[error("entropy is {0}, the witness needs the other class")]
    WrongEntropy(Entropy),
    #[error("field degree {degree} exceeds the limit {limit}")]
    FieldTooLarge { degree: usize, limit: usize },
    #[error("fixed sublattices of the powers meet only the negative locus")]
    NoneInPositiveCone,
    #[error("certificate failed: {0}")]
    CertificateFailed(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadLattice {
    gram: IntMatrix,
    reference: Vec<BigInt>,
}

fn q_int(g: &IntMatrix, v: &[BigInt], w: &[BigInt]) -> BigInt {
    let gw = g.mul_vec(w);
    v.iter().zip(&gw).map(|(a, b)| a * b).sum()
}

fn box_vectors(n: usize, r: i64) -> impl Iterator<Item = Vec<BigInt>> {
    let side = (2 * r + 1) as u64;
    (0..side.pow(n as u32)).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let d = (idx % side) as i64 - r;
                idx /= side;
                BigInt::from(d)
            })
            .collect()
    })
}

impl QuadLattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        let n = gram.require_square()?;
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        let p = char_poly(&gram).map_err(|_| LatticeError::BadSignature)?;
        if p.coeff(0).is_zero() {
            return Err(LatticeError::BadSignature);
        }
        // one positive eigenvalue, and it is simple
        let zero = BigRational::zero();
        let repeated = primitive_gcd(&p, &p.derivative());
        if sturm_count_above(&p, &zero) != 1 || (!repeated.is_constant() && sturm_count_above(&repeated, &zero) != 0) {
            return Err(LatticeError::BadSignature);
        }
        let mut e1 = vec![BigInt::zero(); n];
        e1[0] = BigInt::one();
        let reference = if q_int(&gram, &e1, &e1).is_positive() {
            e1
        } else if n > REFERENCE_SEARCH_RANK {
            let basis: Vec<Vec<BigInt>> =
                (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
            let c = nonnegative_combination(&gram, &basis).ok_or(LatticeError::NoReference)?;
            let mut v = primitive_integer_vector(&c);
            if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                v = v.into_iter().map(|x| -x).collect();
            }
            v
        } else {
            let mut best: Option<(BigInt, Vec<BigInt>)> = None;
            for v in box_vectors(n, REFERENCE_BOX) {
                let qv = q_int(&gram, &v, &v);
                let first_positive = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive());
                if qv.is_positive()
                    && first_positive
                    && best.as_ref().is_none_or(|(b, bv)| qv > *b || (qv == *b && v < *bv))
                {
                    best = Some((qv, v));
                }
            }
            best.ok_or(LatticeError::NoReference)?.1
        };
        Ok(QuadLattice { gram, reference })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self, LatticeError> {
        let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())?;
        QuadLattice::new(m)
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    /// Vector with `q(h) > 0` selecting the positive cone component.
    pub fn reference(&self) -> &[BigInt] {
        &self.reference
    }

    pub fn q(&self, v: &[BigInt], w: &[BigInt]) -> BigInt {
        q_int(&self.gram, v, w)
    }

    /// Reflection in a vector `r` with `q(r) ≠ 0`, if it is integral.
    pub fn reflection(&self, r: &[BigInt]) -> Option<IntMatrix> {
        let qr = self.q(r, r);
        if qr.is_zero() {
            return None;
        }
        let n = self.rank();
        let gr = self.gram.mul_vec(r);
        // s(v) = v - 2 q(v, r)/q(r) r
        let mut m = Matrix::<BigInt>::identity(n);
        for i in 0..n {
            for j in 0..n {
                let num = BigInt::from(2) * &gr[j] * &r[i];
                if !num.is_multiple_of(&qr) {
                    return None;
                }
                m[(i, j)] = &m[(i, j)] - num / &qr;
            }
        }
        Some(m)
    }
}

/// Negative Cartan matrix of the star `T_{p,q,r}`: three arms with `p`, `q`,
/// `r` vertices counting the shared center. Hyperbolic when `1/p + 1/q + 1/r < 1`.
pub fn star_diagram(p: usize, q: usize, r: usize) -> Result<QuadLattice, LatticeError> {
    let n = p + q + r - 2;
    let mut gram = Matrix::<BigInt>::identity(n).scale(&BigInt::from(-2));
    let mut next = 1;
    for arm in [p, q, r] {
        let mut prev = 0;
        for _ in 1..arm {
            gram[(prev, next)] = BigInt::one();
            gram[(next, prev)] = BigInt::one();
            prev = next;
            next += 1;
        }
    }
    QuadLattice::new(gram)
}

/// Product `s_{r₁} ⋯ s_{r_k}` of integral reflections.
pub fn coxeter_element(lattice: &QuadLattice, roots: &[Vec<BigInt>]) -> Option<IntMatrix> {
    roots.iter().try_fold(Matrix::<BigInt>::identity(lattice.rank()), |acc, r| Some(acc.mul(&lattice.reflection(r)?)))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeIsometry {
    matrix: IntMatrix,
    lattice: QuadLattice,
}

/// Certifies `gᵀQg = Q`.
pub fn verify_isometry(lattice: &QuadLattice, g: IntMatrix) -> Result<LatticeIsometry, LatticeError> {
    let n = g.require_square()?;
    if n != lattice.rank() {
        return Err(DimensionError::Mismatch { expected: lattice.rank(), found: n }.into());
    }
    if g.transpose().mul(&lattice.gram).mul(&g) != lattice.gram {
        return Err(LatticeError::NotIsometry);
    }
    assert!(det_bareiss(&g).abs().is_one(), "isometry of a nondegenerate form has det ±1");
    Ok(LatticeIsometry { matrix: g, lattice: lattice.clone() })
}

impl LatticeIsometry {
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn lattice(&self) -> &QuadLattice {
        &self.lattice
    }

    pub fn power(&self, k: u64) -> LatticeIsometry {
        LatticeIsometry { matrix: self.matrix.pow(k), lattice: self.lattice.clone() }
    }

    pub fn char_poly(&self) -> IntPoly {
        char_poly(&self.matrix).expect("square")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropyReport {
    pub entropy: Entropy,
    pub spectral_radius: AlgebraicRadius,
    /// Verdict on the non-cyclotomic part, for positive entropy.
    pub salem: Option<SalemVerdict>,
    pub witness: Option<LatticeWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeWitness {
    Positive(Box<PositiveEntropyWitness>),
    Null(NullFixedWitness),
}

/// `|a|` for the real root `a` of largest modulus, and whether `a < 0`. The
/// leading eigenvalue of a hyperbolic isometry is real; it is negative when `g`
/// swaps the two halves of the positive cone.
fn leading_eigenvalue(p: &IntPoly) -> (RealAlgebraic, bool) {
    let r = largest_abs_real_root(p).expect("leading eigenvalue is real");
    let negative = largest_real_root(p).is_none_or(|a| !a.same_number(&r));
    (r, negative)
}

/// Null iff the characteristic polynomial is a product of cyclotomics.
pub fn entropy_class(iso: &LatticeIsometry) -> EntropyReport {
    let p = iso.char_poly();
    let (_, rest, _) = strip_cyclotomic_factors(&p);
    let null = rest.is_constant();
    let (entropy, radius, salem) = if null {
        (Entropy::Null, RealAlgebraic::from_integer(1), None)
    } else {
        let (a, negative) = leading_eigenvalue(&rest);
        let oriented = if negative { rest.negate_variable() } else { rest };
        (Entropy::Positive, a, Some(salem_check(&oriented)))
    };
    let spectral_radius = AlgebraicRadius::new(radius);
    assert_eq!(entropy == Entropy::Positive, spectral_radius.exceeds_one(), "entropy disagrees with the radius");
    EntropyReport { entropy, spectral_radius, salem, witness: None }
}

/// [`entropy_class`] with the matching witness attached.
pub fn entropy_report_with_witness(iso: &LatticeIsometry, max_degree: usize) -> Result<EntropyReport, LatticeError> {
    let mut r = entropy_class(iso);
    r.witness = Some(match r.entropy {
        Entropy::Null => LatticeWitness::Null(null_fixed_witness(iso)?),
        Entropy::Positive => LatticeWitness::Positive(Box::new(positive_entropy_witness(iso, max_degree)?)),
    });
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NullFixedWitness {
    pub power: u64,
    pub vector: Vec<BigInt>,
    pub q_value: BigInt,
}

/// Rational Gram matrix of `q` restricted to the span of `basis`.
fn restricted_gram(gram: &IntMatrix, basis: &[Vec<BigInt>]) -> RatMatrix {
    let k = basis.len();
    Matrix::from_fn(k, k, |i, j| BigRational::from_integer(q_int(gram, &basis[i], &basis[j])))
}

/// A vector with `q(v) > 0` in the span of `basis` if one exists, else one
/// with `q(v) = 0`, else `None`; decided by exact symmetric elimination.
fn nonnegative_combination(gram: &IntMatrix, basis: &[Vec<BigInt>]) -> Option<Vec<BigRational>> {
    let k = basis.len();
    let mut g = restricted_gram(gram, basis);
    // columns of `t` express the current basis in terms of the original one
    let mut t: RatMatrix = Matrix::identity(k);
    let mut isotropic: Option<Vec<BigRational>> = None;
    let col = |t: &RatMatrix, j: usize| t.column(j);
    let mut active: Vec<usize> = (0..k).collect();
    while let Some(&i) = active.first() {
        let gii = g[(i, i)].clone();
        if gii.is_positive() {
            return Some(col(&t, i));
        }
        if gii.is_zero() {
            let partner = active.iter().copied().find(|&j| j != i && !g[(i, j)].is_zero());
            match partner {
                None => {
                    // in the radical of the restricted form
                    isotropic.get_or_insert_with(|| col(&t, i));
                    active.remove(0);
                    continue;
                }
                Some(j) => {
                    // hyperbolic plane: e_j + c e_i with q = g_jj + 2c g_ij = 1, or e_i ± e_j
                    let gij = g[(i, j)].clone();
                    let c = if g[(j, j)].is_zero() {
                        if gij.is_positive() {
                            BigRational::one()
                        } else {
                            -BigRational::one()
                        }
                    } else {
                        (BigRational::one() - &g[(j, j)]) / (BigRational::from_integer(2.into()) * &gij)
                    };
                    let v: Vec<BigRational> = col(&t, i).iter().zip(col(&t, j)).map(|(a, b)| a * &c + b).collect();
                    return Some(v);
                }
            }
        }
        // negative pivot: orthogonalize the rest against it
        for &j in active.iter().skip(1) {
            let f = &g[(i, j)] / &gii;
            if f.is_zero() {
                continue;
            }
            for r in 0..k {
                let v = &t[(r, j)] - &f * &t[(r, i)];
                t[(r, j)] = v;
            }
        }
        active.remove(0);
        // recompute the Gram matrix in the new basis
        let cols: Vec<Vec<BigRational>> = (0..k).map(|j| col(&t, j)).collect();
        let base: Vec<Vec<BigRational>> =
            basis.iter().map(|b| b.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
        let vecs: Vec<Vec<BigRational>> = cols
            .iter()
            .map(|c| {
                (0..base[0].len())
                    .map(|r| c.iter().zip(&base).fold(BigRational::zero(), |acc, (ci, b)| acc + ci * &b[r]))
                    .collect()
            })
            .collect();
        let gq = to_rational(gram);
        g = Matrix::from_fn(k, k, |a, b| {
            let w = gq.mul_vec(&vecs[b]);
            vecs[a].iter().zip(&w).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
        });
    }
    isotropic
}

/// Nonzero integer vector `v` with `gᵏv = v` and `q(v) ≥ 0`, oriented so that
/// `q(v, h) > 0`, for `k = 1, 2, …` up to `max_power`.
fn fixed_positive_cone_vector(iso: &LatticeIsometry, max_power: u64) -> Option<NullFixedWitness> {
    let lattice = &iso.lattice;
    for k in 1..=max_power {
        let fixed = kernel(&to_rational(&iso.matrix.pow(k).minus_identity()));
        if fixed.is_empty() {
            continue;
        }
        let basis: Vec<Vec<BigInt>> = fixed.iter().map(|v| primitive_integer_vector(v)).collect();
        let Some(c) = nonnegative_combination(&lattice.gram, &basis) else {
            continue;
        };
        let v: Vec<BigRational> = (0..lattice.rank())
            .map(|r| {
                c.iter()
                    .zip(&basis)
                    .fold(BigRational::zero(), |acc, (ci, b)| acc + ci * BigRational::from_integer(b[r].clone()))
            })
            .collect();
        let mut v = primitive_integer_vector(&v);
        if lattice.q(&v, &lattice.reference).is_negative() {
            v = v.into_iter().map(|x| -x).collect();
        }
        let q_value = lattice.q(&v, &v);
        debug_assert!(!q_value.is_negative());
        return Some(NullFixedWitness { power: k, vector: v, q_value });
    }
    None
}

/// Least common multiple of the cyclotomic orders dividing the characteristic polynomial.
pub fn cyclotomic_lcm(iso: &LatticeIsometry) -> u64 {
    let (_, _, orders) = strip_cyclotomic_factors(&iso.char_poly());
    orders.iter().fold(1u64, |acc, &d| acc.lcm(&d))
}

/// A fixed positive-cone vector of some power, for null entropy.
pub fn null_fixed_witness(iso: &LatticeIsometry) -> Result<NullFixedWitness, LatticeError> {
    let r = entropy_class(iso);
    if r.entropy != Entropy::Null {
        return Err(LatticeError::WrongEntropy(r.entropy));
    }
    fixed_positive_cone_vector(iso, cyclotomic_lcm(iso)).ok_or(LatticeError::NoneInPositiveCone)
}

/// Independent side of the entropy equivalence: whether some power `gᵏ`,
/// `k ≤ lcm` of the cyclotomic orders present, fixes a nonzero vector with `q ≥ 0`.
pub fn has_fixed_positive_cone_vector(iso: &LatticeIsometry) -> bool {
    fixed_positive_cone_vector(iso, cyclotomic_lcm(iso)).is_some()
}

/// Eigenvectors `D₁` (eigenvalue `a > 1`) and `D₂` (eigenvalue `1/a`) over
/// `ℚ(a)`, normalized by `q(Dᵢ, h) = 2`, with exact positivity certificates.
#[derive(Debug, Clone)]
pub struct PositiveEntropyWitness {
    pub field: RealField,
    pub leading: FieldElem,
    pub d1: Vec<FieldElem>,
    pub d2: Vec<FieldElem>,
    pub q12: FieldElem,
    pub q_sum: FieldElem,
    /// 1 when `a > 0`; 2 when `g` swaps the two halves of the positive cone
    /// and the certificate below is for `g²`.
    pub power: u64,
    /// `D = D₁ − D₂`; `gᵖD − D = (aᵖ−1)D₁ + (1−a⁻ᵖ)D₂`.
    pub direction: Vec<FieldElem>,
}

impl PartialEq for PositiveEntropyWitness {
    fn eq(&self, o: &Self) -> bool {
        self.field.modulus() == o.field.modulus()
            && self.field.root() == o.field.root()
            && self.d1 == o.d1
            && self.d2 == o.d2
            && self.q12 == o.q12
            && self.q_sum == o.q_sum
    }
}

impl Eq for PositiveEntropyWitness {}

fn q_field(k: &RealField, gram: &RatMatrix, v: &[FieldElem], w: &[FieldElem]) -> FieldElem {
    let n = v.len();
    let mut acc = k.zero();
    for i in 0..n {
        for j in 0..n {
            if !gram[(i, j)].is_zero() {
                acc = k.add(&acc, &k.scale(&k.mul(&v[i], &w[j]), &gram[(i, j)]));
            }
        }
    }
    acc
}

fn apply_field(k: &RealField, g: &RatMatrix, v: &[FieldElem]) -> Vec<FieldElem> {
    (0..g.rows()).map(|i| (0..g.cols()).fold(k.zero(), |acc, j| k.add(&acc, &k.scale(&v[j], &g[(i, j)])))).collect()
}

fn eigenvector(k: &RealField, g: &RatMatrix, lambda: &FieldElem) -> (RealField, Option<Vec<FieldElem>>) {
    let n = g.rows();
    // kernel of (g - λ) is the left kernel of its transpose
    let a: Vec<Vec<FieldElem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = k.rational(g[(j, i)].clone());
                    if i == j {
                        k.sub(&v, lambda)
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    k.left_kernel_vector(&a)
}

fn normalize(
    k: &RealField,
    gram: &RatMatrix,
    h: &[FieldElem],
    v: &[FieldElem],
) -> Result<Vec<FieldElem>, LatticeError> {
    let qh = q_field(k, gram, v, h);
    let inv = k.inverse(&qh).map_err(|_| LatticeError::CertificateFailed("eigenvector orthogonal to h"))?;
    let s = k.scale(&inv, &BigRational::from_integer(2.into()));
    Ok(v.iter().map(|x| k.mul(x, &s)).collect())
}

pub fn positive_entropy_witness(
    iso: &LatticeIsometry,
    max_degree: usize,
) -> Result<PositiveEntropyWitness, LatticeError> {
    let r = entropy_class(iso);
    if r.entropy != Entropy::Positive {
        return Err(LatticeError::WrongEntropy(r.entropy));
    }
    let (_, rest, _) = strip_cyclotomic_factors(&iso.char_poly());
    let m = squarefree_part(&rest);
    if m.deg() > max_degree {
        return Err(LatticeError::FieldTooLarge { degree: m.deg(), limit: max_degree });
    }
    let a = match leading_eigenvalue(&m) {
        (_, true) => real_roots(&m).swap_remove(0),
        (a, false) => a,
    };
    let mut k = RealField::new(&m, a).map_err(|_| LatticeError::CertificateFailed("field"))?;
    let g = to_rational(&iso.matrix);
    let gram = to_rational(&iso.lattice.gram);
    let (d1, d2) = loop {
        let lead = k.generator();
        let (k1, v1) = eigenvector(&k, &g, &lead);
        if k1.degree() != k.degree() {
            k = k1;
            continue;
        }
        let inv = k.inverse(&lead).map_err(|_| LatticeError::CertificateFailed("leading eigenvalue"))?;
        let (k2, v2) = eigenvector(&k, &g, &inv);
        if k2.degree() != k.degree() {
            k = k2;
            continue;
        }
        match (v1, v2) {
            (Some(a), Some(b)) => break (a, b),
            _ => return Err(LatticeError::CertificateFailed("eigenvector")),
        }
    };
    let h: Vec<FieldElem> =
        iso.lattice.reference.iter().map(|x| k.rational(BigRational::from_integer(x.clone()))).collect();
    let d1 = normalize(&k, &gram, &h, &d1)?;
    let d2 = normalize(&k, &gram, &h, &d2)?;
    let lead = k.generator();
    let witness = PositiveEntropyWitness {
        q12: q_field(&k, &gram, &d1, &d2),
        q_sum: {
            let s: Vec<FieldElem> = d1.iter().zip(&d2).map(|(x, y)| k.add(x, y)).collect();
            q_field(&k, &gram, &s, &s)
        },
        direction: d1.iter().zip(&d2).map(|(x, y)| k.sub(x, y)).collect(),
        power: if k.sign(&lead) > 0 { 1 } else { 2 },
        leading: lead,
        field: k,
        d1,
        d2,
    };
    witness.verify(iso)?;
    Ok(witness)
}

impl PositiveEntropyWitness {
    /// Exact re-check of every claim in the certificate.
    pub fn verify(&self, iso: &LatticeIsometry) -> Result<(), LatticeError> {
        let k = &self.field;
        let g = to_rational(&iso.matrix);
        let gram = to_rational(&iso.lattice.gram);
        let eq = |a: &[FieldElem], b: &[FieldElem]| a.iter().zip(b).all(|(x, y)| k.is_zero(&k.sub(x, y)));
        let a = &self.leading;
        let b = k.inverse(a).map_err(|_| LatticeError::CertificateFailed("leading eigenvalue"))?;
        if k.cmp(&k.mul(a, a), &k.one()) != Ordering::Greater {
            return Err(LatticeError::CertificateFailed("leading eigenvalue is not > 1 in modulus"));
        }
        if self.power != if k.sign(a) > 0 { 1 } else { 2 } {
            return Err(LatticeError::CertificateFailed("power"));
        }
        let scaled = |v: &[FieldElem], c: &FieldElem| v.iter().map(|x| k.mul(x, c)).collect::<Vec<_>>();
        if !eq(&apply_field(k, &g, &self.d1), &scaled(&self.d1, a))
            || !eq(&apply_field(k, &g, &self.d2), &scaled(&self.d2, &b))
        {
            return Err(LatticeError::CertificateFailed("eigen-equations"));
        }
        if self.d1.iter().all(|x| k.is_zero(x)) || self.d2.iter().all(|x| k.is_zero(x)) {
            return Err(LatticeError::CertificateFailed("zero eigenvector"));
        }
        if !k.is_zero(&q_field(k, &gram, &self.d1, &self.d1)) || !k.is_zero(&q_field(k, &gram, &self.d2, &self.d2)) {
            return Err(LatticeError::CertificateFailed("eigenrays are not isotropic"));
        }
        let h: Vec<FieldElem> =
            iso.lattice.reference.iter().map(|x| k.rational(BigRational::from_integer(x.clone()))).collect();
        if k.sign(&q_field(k, &gram, &self.d1, &h)) <= 0 || k.sign(&q_field(k, &gram, &self.d2, &h)) <= 0 {
            return Err(LatticeError::CertificateFailed("orientation against h"));
        }
        let sum: Vec<FieldElem> = self.d1.iter().zip(&self.d2).map(|(x, y)| k.add(x, y)).collect();
        if !k.is_zero(&k.sub(&self.q12, &q_field(k, &gram, &self.d1, &self.d2)))
            || !k.is_zero(&k.sub(&self.q_sum, &q_field(k, &gram, &sum, &sum)))
        {
            return Err(LatticeError::CertificateFailed("pairings"));
        }
        if k.sign(&self.q12) <= 0 || k.sign(&self.q_sum) <= 0 {
            return Err(LatticeError::CertificateFailed("positivity of the pairings"));
        }
        // gᵖD - D = (aᵖ - 1) D₁ + (1 - bᵖ) D₂
        let gp = to_rational(&iso.matrix.pow(self.power));
        let gd = apply_field(k, &gp, &self.direction);
        let lhs: Vec<FieldElem> = gd.iter().zip(&self.direction).map(|(x, y)| k.sub(x, y)).collect();
        let a1 = k.sub(&k.pow(a, self.power as u32), &k.one());
        let b1 = k.sub(&k.one(), &k.pow(&b, self.power as u32));
        let rhs: Vec<FieldElem> =
            self.d1.iter().zip(&self.d2).map(|(x, y)| k.add(&k.mul(&a1, x), &k.mul(&b1, y))).collect();
        if !eq(&lhs, &rhs) || k.sign(&q_field(k, &gram, &rhs, &rhs)) <= 0 {
            return Err(LatticeError::CertificateFailed("f*D - D"));
        }
        Ok(())
    }

    /// Exact rational value of `q(D₁, D₂)` when it is rational.
    pub fn q12_rational(&self) -> Option<BigRational> {
        rational_value(&self.field, &self.q12)
    }

    pub fn q_sum_rational(&self) -> Option<BigRational> {
        rational_value(&self.field, &self.q_sum)
    }
}

fn rational_value(k: &RealField, e: &FieldElem) -> Option<BigRational> {
    let r = k.to_algebraic(e);
    if let Some(v) = r.exact_rational() {
        return Some(v);
    }
    // a rational value shows up as a linear factor of the carrier
    let c = e.poly().coeff(0);
    k.is_zero(&k.sub(e, &k.rational(c.clone()))).then_some(c)
}

/// Exact multiplicative order when finite: the characteristic polynomial is a
/// cyclotomic product and `g` is semisimple.
pub fn finite_order_test(iso: &LatticeIsometry) -> Option<u64> {
    let p = iso.char_poly();
    let (_, rest, orders) = strip_cyclotomic_factors(&p);
    let order = if !rest.is_constant() {
        None
    } else {
        // semisimple iff the squarefree part annihilates g
        let rad = squarefree_part(&p);
        let n = iso.matrix.rows();
        let mut acc = Matrix::<BigInt>::zeros(n, n);
        for c in rad.coeffs().iter().rev() {
            acc = acc.mul(&iso.matrix).add(&Matrix::identity(n).scale(c));
        }
        acc.is_zero().then(|| orders.iter().fold(1u64, |l, &d| l.lcm(&d)))
    };
    if let Some(k) = order {
        debug_assert!(iso.matrix.pow(k).is_identity());
    }
    if order.is_none() {
        let lattice = &iso.lattice;
        let fixed = kernel(&to_rational(&iso.matrix.minus_identity()));
        let basis: Vec<Vec<BigInt>> = fixed.iter().map(|v| primitive_integer_vector(v)).collect();
        if !basis.is_empty() {
            if let Some(c) = nonnegative_combination(&lattice.gram, &basis) {
                let v: Vec<BigRational> = (0..lattice.rank())
                    .map(|r| {
                        c.iter().zip(&basis).fold(BigRational::zero(), |acc, (ci, b)| {
                            acc + ci * BigRational::from_integer(b[r].clone())
                        })
                    })
                    .collect();
                let v = primitive_integer_vector(&v);
                assert!(!lattice.q(&v, &v).is_positive(), "a fixed vector with q > 0 forces finite order");
            }
        }
    }
    order
}

/// Order found by brute force: least `k ≤ limit` with `gᵏ = I`.
pub fn order_by_powers(iso: &LatticeIsometry, limit: u64) -> Option<u64> {
    let mut acc = iso.matrix.clone();
    for k in 1..=limit {
        if acc.is_identity() {
            return Some(k);
        }
        acc = acc.mul(&iso.matrix);
    }
    None
}

pub fn to_f64_vector(k: &RealField, v: &[FieldElem]) -> Vec<f64> {
    v.iter().map(|x| k.to_f64(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_matrix, rat};

    fn pell() -> LatticeIsometry {
        let l = QuadLattice::from_rows(&[&[1, 0], &[0, -2]]).unwrap();
        verify_isometry(&l, int_matrix(&[&[3, 4], &[2, 3]])).unwrap()
    }

    #[test]
    fn isometry_checks() {
        let l = QuadLattice::from_rows(&[&[1, 0], &[0, -2]]).unwrap();
        assert_eq!(verify_isometry(&l, int_matrix(&[&[2, 0], &[0, 1]])), Err(LatticeError::NotIsometry));
        let h = QuadLattice::from_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert!(verify_isometry(&h, int_matrix(&[&[0, 1], &[1, 0]])).is_ok());
        assert_eq!(QuadLattice::from_rows(&[&[1, 0], &[0, 1]]), Err(LatticeError::BadSignature));
        assert_eq!(QuadLattice::from_rows(&[&[1, 0], &[0, 0]]), Err(LatticeError::BadSignature));
        assert_eq!(QuadLattice::from_rows(&[&[-1, 0], &[0, -1]]), Err(LatticeError::BadSignature));
        // a double positive eigenvalue is rejected
        assert_eq!(QuadLattice::from_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]), Err(LatticeError::BadSignature));
        assert_eq!(h.reference(), &[BigInt::from(3), BigInt::from(3)]);
    }

    #[test]
    fn pell_entropy() {
        let r = entropy_class(&pell());
        assert_eq!(r.entropy, Entropy::Positive);
        assert!((r.spectral_radius.to_f64() - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-6);
        assert_eq!(r.salem, Some(SalemVerdict::NotSalem));
    }

    #[test]
    fn pell_witness() {
        let w = positive_entropy_witness(&pell(), DEFAULT_MAX_DEGREE).unwrap();
        assert_eq!(w.q12_rational(), Some(rat(8, 1)));
        assert_eq!(w.q_sum_rational(), Some(rat(16, 1)));
        let d1 = to_f64_vector(&w.field, &w.d1);
        assert!((d1[0] - 2.0).abs() < 1e-9 && (d1[1] - 2f64.sqrt()).abs() < 1e-9);
        let d2 = to_f64_vector(&w.field, &w.d2);
        assert!((d2[0] - 2.0).abs() < 1e-9 && (d2[1] + 2f64.sqrt()).abs() < 1e-9);
        assert_eq!(positive_entropy_witness(&pell(), 1), Err(LatticeError::FieldTooLarge { degree: 2, limit: 1 }));
    }

    #[test]
    fn cone_swapping_isometry() {
        let l = QuadLattice::from_rows(&[&[1, 0], &[0, -2]]).unwrap();
        let g = verify_isometry(&l, int_matrix(&[&[-3, -4], &[-2, -3]])).unwrap();
        let r = entropy_class(&g);
        assert_eq!(r.entropy, Entropy::Positive);
        assert!((r.spectral_radius.to_f64() - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-6);
        let w = positive_entropy_witness(&g, DEFAULT_MAX_DEGREE).unwrap();
        assert_eq!(w.power, 2);
        assert_eq!(w.q12_rational(), Some(rat(8, 1)));
    }

    #[test]
    fn null_examples() {
        let l = QuadLattice::from_rows(&[&[1, 0], &[0, -1]]).unwrap();
        let minus = verify_isometry(&l, int_matrix(&[&[-1, 0], &[0, -1]])).unwrap();
        assert_eq!(entropy_class(&minus).entropy, Entropy::Null);
        let w = null_fixed_witness(&minus).unwrap();
        assert_eq!(
            (w.power, w.vector.clone(), w.q_value.clone()),
            (2, vec![BigInt::from(1), BigInt::zero()], BigInt::one())
        );
        let id = verify_isometry(&l, int_matrix(&[&[1, 0], &[0, 1]])).unwrap();
        let w = null_fixed_witness(&id).unwrap();
        assert_eq!((w.power, w.vector), (1, vec![BigInt::from(1), BigInt::zero()]));
        let h = QuadLattice::from_rows(&[&[0, 1], &[1, 0]]).unwrap();
        let swap = verify_isometry(&h, int_matrix(&[&[0, 1], &[1, 0]])).unwrap();
        let w = null_fixed_witness(&swap).unwrap();
        assert_eq!((w.power, w.vector, w.q_value), (1, vec![BigInt::one(), BigInt::one()], BigInt::from(2)));
        assert_eq!(null_fixed_witness(&pell()), Err(LatticeError::WrongEntropy(Entropy::Positive)));
        assert_eq!(positive_entropy_witness(&swap, 16), Err(LatticeError::WrongEntropy(Entropy::Null)));
    }

    #[test]
    fn orders() {
        let h = QuadLattice::from_rows(&[&[0, 1], &[1, 0]]).unwrap();
        let swap = verify_isometry(&h, int_matrix(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(finite_order_test(&swap), Some(2));
        assert_eq!(finite_order_test(&pell()), None);
        // Eichler transvection on U ⊕ <-2>: unipotent, not the identity
        let l = QuadLattice::from_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]]).unwrap();
        let u = verify_isometry(&l, int_matrix(&[&[1, 1, 2], &[0, 1, 0], &[0, 1, 1]])).unwrap();
        assert_eq!(finite_order_test(&u), None);
        assert_eq!(order_by_powers(&u, 24), None);
        assert_eq!(entropy_class(&u).entropy, Entropy::Null);
        let w = null_fixed_witness(&u).unwrap();
        assert_eq!((w.power, w.q_value), (1, BigInt::zero()));
    }

    fn simple_roots(n: usize) -> Vec<Vec<BigInt>> {
        (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect()
    }

    #[test]
    fn degree_gate() {
        // T_{2,5,13}: the Coxeter element has an irreducible characteristic polynomial of degree 18
        let l = star_diagram(2, 5, 13).unwrap();
        let g = coxeter_element(&l, &simple_roots(18)).unwrap();
        let iso = verify_isometry(&l, g).unwrap();
        let r = entropy_class(&iso);
        assert_eq!(r.entropy, Entropy::Positive);
        assert_eq!(r.salem, Some(SalemVerdict::Salem));
        assert_eq!(
            positive_entropy_witness(&iso, DEFAULT_MAX_DEGREE),
            Err(LatticeError::FieldTooLarge { degree: 18, limit: 16 })
        );
    }

    #[test]
    fn lehmer_lattice() {
        let l = star_diagram(2, 3, 7).unwrap();
        let g = coxeter_element(&l, &simple_roots(10)).unwrap();
        let iso = verify_isometry(&l, g).unwrap();
        assert_eq!(iso.char_poly(), crate::exactpoly::lehmer());
        let w = positive_entropy_witness(&iso, DEFAULT_MAX_DEGREE).unwrap();
        assert_eq!(w.field.degree(), 10);
        assert!((entropy_class(&iso).spectral_radius.to_f64() - 1.17628).abs() < 1e-5);
        assert_eq!(finite_order_test(&iso), None);
        assert!(!has_fixed_positive_cone_vector(&iso));
        // E_8 is negative definite: rejected
        assert_eq!(star_diagram(2, 3, 5), Err(LatticeError::BadSignature));
    }

    #[test]
    fn reflections_are_isometries() {
        let l = QuadLattice::from_rows(&[&[1, 0], &[0, -2]]).unwrap();
        let r = l.reflection(&[BigInt::zero(), BigInt::one()]).unwrap();
        assert!(verify_isometry(&l, r).is_ok());
        assert!(l.reflection(&[BigInt::from(1), BigInt::from(1)]).is_some());
    }
}
