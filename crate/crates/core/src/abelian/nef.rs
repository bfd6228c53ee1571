//! Fixed nef classes. For non-CM `E`, `NS(Eⁿ)_ℝ` is the space of symmetric
//! `n×n` matrices, `f*` acts by `S ↦ MᵀSM` and the nef cone is the PSD cone.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{AbelianError, EndoSpec};
use crate::approx::{best_rational, MAX_DENOMINATOR};
use crate::exactpoly::{
    char_poly_rational, cyclotomic, cyclotomic_divisors, primitive_gcd, real_roots, squarefree_part, trace_polynomial,
    unit_circle_root_count, Endpoint, IntPoly, SturmSequence,
};
use crate::linalg::{inverse, is_positive_definite, kernel, to_rational, IntMatrix, Matrix, RatMatrix};
use crate::numfield::{FieldElem, RealField};

/// Exact PSD test: no negative root of the characteristic polynomial.
pub fn is_positive_semidefinite(s: &RatMatrix) -> bool {
    if !s.is_square() || !s.is_symmetric() {
        return false;
    }
    if s.rows() == 0 {
        return true;
    }
    let p = char_poly_rational(s).expect("square").to_int_poly();
    let seq = SturmSequence::new(&p);
    let at_zero = usize::from(p.coeff(0).is_zero());
    seq.count(&Endpoint::NegInf, &Endpoint::At(BigRational::zero())) == at_zero
}

fn sym_index(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

fn sym_from_coords(n: usize, c: &[BigRational]) -> RatMatrix {
    let mut s = Matrix::zeros(n, n);
    for (k, (i, j)) in sym_index(n).into_iter().enumerate() {
        s[(i, j)] = c[k].clone();
        s[(j, i)] = c[k].clone();
    }
    s
}

/// Rational basis of `{S symmetric : MᵀSM = S}`.
pub fn symmetric_fixed_space(m: &IntMatrix) -> Vec<RatMatrix> {
    let n = m.rows();
    let idx = sym_index(n);
    let mr = to_rational(m);
    let mt = mr.transpose();
    let mut cols = Vec::with_capacity(idx.len());
    for k in 0..idx.len() {
        let mut e = vec![BigRational::zero(); idx.len()];
        e[k] = BigRational::one();
        let s = sym_from_coords(n, &e);
        let img = mt.mul(&s).mul(&mr).sub(&s);
        cols.push(idx.iter().map(|&(i, j)| img[(i, j)].clone()).collect::<Vec<_>>());
    }
    let a = Matrix::from_fn(idx.len(), idx.len(), |i, j| cols[j][i].clone());
    kernel(&a).iter().map(|c| sym_from_coords(n, c)).collect()
}

fn is_fixed(m: &RatMatrix, s: &RatMatrix) -> bool {
    m.transpose().mul(s).mul(m) == *s
}

fn frobenius(a: &RatMatrix, b: &RatMatrix) -> BigRational {
    a.entries().zip(b.entries()).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

fn to_f64_matrix(a: &RatMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)].to_f64().unwrap_or(f64::NAN))
}

fn solve_rational(a: &RatMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let inv = inverse(a)?;
    Some(inv.mul_vec(b))
}

/// Frobenius projection of `y` onto the orthogonal complement of `span(basis)`, exactly.
fn project_out(y: &RatMatrix, basis: &[RatMatrix]) -> RatMatrix {
    if basis.is_empty() {
        return y.clone();
    }
    let g = Matrix::from_fn(basis.len(), basis.len(), |i, j| frobenius(&basis[i], &basis[j]));
    let rhs: Vec<BigRational> = basis.iter().map(|k| frobenius(y, k)).collect();
    let c = solve_rational(&g, &rhs).expect("basis is independent");
    basis.iter().zip(&c).fold(y.clone(), |acc, (k, ci)| acc.sub(&k.scale(ci)))
}

/// Floating Frobenius projector onto `span(basis)`.
struct FloatProjector {
    basis: Vec<DMatrix<f64>>,
    gram_inv: DMatrix<f64>,
}

impl FloatProjector {
    fn new(basis: &[RatMatrix]) -> Option<Self> {
        let basis: Vec<DMatrix<f64>> = basis.iter().map(to_f64_matrix).collect();
        let r = basis.len();
        let g = DMatrix::from_fn(r, r, |i, j| basis[i].dot(&basis[j]));
        Some(FloatProjector { gram_inv: g.try_inverse()?, basis })
    }

    fn coefficients(&self, y: &DMatrix<f64>) -> DVector<f64> {
        let b = DVector::from_iterator(self.basis.len(), self.basis.iter().map(|k| k.dot(y)));
        &self.gram_inv * b
    }

    fn project(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        let c = self.coefficients(y);
        self.basis.iter().zip(c.iter()).fold(DMatrix::zeros(y.nrows(), y.ncols()), |acc, (k, ci)| acc + k * *ci)
    }
}

/// Certificate that no nonzero PSD class is fixed: a positive definite `Y`
/// orthogonal to every fixed symmetric matrix. Then `⟨Y, S⟩ > 0` for every
/// nonzero PSD `S`, so no such `S` is fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmplifiedCertificate {
    pub fixed_space: Vec<RatMatrix>,
    /// `None` when the fixed space is zero.
    pub separator: Option<RatMatrix>,
}

impl AmplifiedCertificate {
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let mr = to_rational(m);
        if !self.fixed_space.iter().all(|k| is_fixed(&mr, k)) {
            return false;
        }
        if self.fixed_space.len() != symmetric_fixed_space(m).len() {
            return false;
        }
        match &self.separator {
            None => self.fixed_space.is_empty(),
            Some(y) => is_positive_definite(y) && self.fixed_space.iter().all(|k| frobenius(y, k).is_zero()),
        }
    }
}

/// Searches for an [`AmplifiedCertificate`] by alternating projections
/// between `{Y ⪰ I}` and the orthogonal complement of the fixed space.
pub fn amplified_certificate(spec: &EndoSpec) -> Option<AmplifiedCertificate> {
    let fixed_space = symmetric_fixed_space(spec.matrix());
    if fixed_space.is_empty() {
        return Some(AmplifiedCertificate { fixed_space, separator: None });
    }
    let n = spec.n();
    let proj = FloatProjector::new(&fixed_space)?;
    let mut y = DMatrix::<f64>::identity(n, n);
    for _ in 0..500 {
        y = &y - proj.project(&y);
        y = (&y + y.transpose()) * 0.5;
        let eig = SymmetricEigen::new(y.clone());
        let scale = eig.eigenvalues.amax().max(1.0);
        if eig.eigenvalues.min() > 1e-3 * scale {
            if let Some(cert) = rationalize_separator(&y, &fixed_space) {
                return Some(cert);
            }
        }
        let clamped = eig.eigenvalues.map(|v| v.max(1.0));
        y = &eig.eigenvectors * DMatrix::from_diagonal(&clamped) * eig.eigenvectors.transpose();
    }
    None
}

fn rationalize_separator(y: &DMatrix<f64>, fixed_space: &[RatMatrix]) -> Option<AmplifiedCertificate> {
    let scale = y.amax();
    let n = y.nrows();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let v = if i <= j { y[(i, j)] } else { y[(j, i)] };
            entries.push(best_rational(v / scale, MAX_DENOMINATOR)?);
        }
    }
    let yr = Matrix::from_fn(n, n, |i, j| entries[i * n + j].clone());
    let sep = project_out(&yr, fixed_space);
    is_positive_definite(&sep).then(|| AmplifiedCertificate { fixed_space: fixed_space.to_vec(), separator: Some(sep) })
}

/// Nonzero PSD fixed class with entries in `ℚ(t)`, `t = λ + 1/λ` for an
/// eigenvalue `λ` on the unit circle: `S = UᵀQU` where the rows of `U` are
/// `u` and `uM`, `u(M + M⁻¹) = t·u`, and `Q = [[1, -t/2], [-t/2, 1]]`.
#[derive(Debug, Clone)]
pub struct AlgebraicNefWitness {
    pub field: RealField,
    pub rows: [Vec<FieldElem>; 2],
    pub entries: Vec<Vec<FieldElem>>,
}

impl PartialEq for AlgebraicNefWitness {
    fn eq(&self, other: &Self) -> bool {
        self.field.modulus() == other.field.modulus()
            && self.field.root() == other.field.root()
            && self.rows == other.rows
            && self.entries == other.entries
    }
}

impl Eq for AlgebraicNefWitness {}

fn gram_form(k: &RealField, rows: &[Vec<FieldElem>; 2]) -> Vec<Vec<FieldElem>> {
    let t = k.generator();
    let half_t = k.scale(&t, &BigRational::new(BigInt::one(), BigInt::from(2)));
    let n = rows[0].len();
    let (u, w) = (&rows[0], &rows[1]);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let cross = k.add(&k.mul(&u[i], &w[j]), &k.mul(&w[i], &u[j]));
                    let diag = k.add(&k.mul(&u[i], &u[j]), &k.mul(&w[i], &w[j]));
                    k.sub(&diag, &k.mul(&half_t, &cross))
                })
                .collect()
        })
        .collect()
}

fn row_times(k: &RealField, u: &[FieldElem], m: &RatMatrix) -> Vec<FieldElem> {
    (0..m.cols()).map(|j| (0..m.rows()).fold(k.zero(), |acc, i| k.add(&acc, &k.scale(&u[i], &m[(i, j)])))).collect()
}

impl AlgebraicNefWitness {
    /// Exact re-check: `MᵀSM = S`, `S = UᵀQU` with `Q` positive definite, `S ≠ 0`.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let k = &self.field;
        let mr = to_rational(m);
        let n = mr.rows();
        if self.rows[0].len() != n || self.entries.len() != n {
            return false;
        }
        if !row_times(k, &self.rows[0], &mr).iter().zip(&self.rows[1]).all(|(a, b)| k.is_zero(&k.sub(a, b))) {
            return false;
        }
        let rebuilt = gram_form(k, &self.rows);
        let same = rebuilt.iter().flatten().zip(self.entries.iter().flatten()).all(|(a, b)| k.is_zero(&k.sub(a, b)));
        if !same {
            return false;
        }
        // MᵀSM, column by column
        let sm: Vec<Vec<FieldElem>> = self.entries.iter().map(|row| row_times(k, row, &mr)).collect();
        for i in 0..n {
            for j in 0..n {
                let v = (0..n).fold(k.zero(), |acc, l| k.add(&acc, &k.scale(&sm[l][j], &mr[(l, i)])));
                if !k.is_zero(&k.sub(&v, &self.entries[i][j])) {
                    return false;
                }
            }
        }
        let t = k.generator();
        let det_q = k.sub(&k.one(), &k.scale(&k.mul(&t, &t), &BigRational::new(BigInt::one(), BigInt::from(4))));
        k.sign(&det_q) > 0 && self.entries.iter().flatten().any(|e| !k.is_zero(e))
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.entries.iter().map(|r| r.iter().map(|e| self.field.to_f64(e)).collect()).collect()
    }
}

fn algebraic_nef_witness(spec: &EndoSpec) -> Option<AlgebraicNefWitness> {
    let p = spec.char_poly();
    let mut s = squarefree_part(&p);
    for r in [1, -1] {
        if s.eval_i64(r).is_zero() {
            s = s.div_exact(&IntPoly::linear_root(r))?;
        }
    }
    if s.is_constant() {
        return None;
    }
    let q = primitive_gcd(&s, &s.reciprocal().ok()?);
    let r = trace_polynomial(&q)?;
    let two = BigRational::from_integer(BigInt::from(2));
    let root = real_roots(&r).into_iter().find(|x| {
        x.cmp_rational(&-two.clone()) == std::cmp::Ordering::Greater && x.cmp_rational(&two) == std::cmp::Ordering::Less
    })?;
    let field = RealField::new(&r, root).ok()?;
    let mr = to_rational(spec.matrix());
    let minv = inverse(&mr)?;
    let nsum = mr.add(&minv);
    let t = field.generator();
    let n = spec.n();
    let a: Vec<Vec<FieldElem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = field.rational(nsum[(i, j)].clone());
                    if i == j {
                        field.sub(&v, &t)
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    let (field, u) = field.left_kernel_vector(&a);
    let u: Vec<FieldElem> = u?.iter().map(|e| field.elem(e.poly())).collect();
    let w = row_times(&field, &u, &mr);
    let rows = [u, w];
    let entries = gram_form(&field, &rows);
    let witness = AlgebraicNefWitness { field, rows, entries };
    witness.verify(spec.matrix()).then_some(witness)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NefWitness {
    Rational(RatMatrix),
    Algebraic(Box<AlgebraicNefWitness>),
}

impl NefWitness {
    pub fn verify(&self, m: &IntMatrix) -> bool {
        match self {
            NefWitness::Rational(s) => !s.is_zero() && is_fixed(&to_rational(m), s) && is_positive_semidefinite(s),
            NefWitness::Algebraic(w) => w.verify(m),
        }
    }
}

/// Cesàro average of `(Mᵀ)ʲ M^j` projected to the fixed space, rounded to
/// rational coordinates in the exact fixed-space basis.
fn cesaro_candidate(spec: &EndoSpec, fixed_space: &[RatMatrix]) -> Option<RatMatrix> {
    const TERMS: usize = 64;
    let proj = FloatProjector::new(fixed_space)?;
    let m = to_f64_matrix(&to_rational(spec.matrix()));
    let n = spec.n();
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut acc = DVector::<f64>::zeros(fixed_space.len());
    let mut used = 0;
    for _ in 0..TERMS {
        let c = proj.coefficients(&term);
        if c.iter().any(|v| !v.is_finite()) {
            break;
        }
        acc += c;
        used += 1;
        term = m.transpose() * &term * &m;
    }
    if used == 0 {
        return None;
    }
    acc /= used as f64;
    let scale = acc.amax();
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    let n0 = fixed_space[0].rows();
    let mut s = Matrix::zeros(n0, n0);
    for (k, c) in fixed_space.iter().zip(acc.iter()) {
        s = s.add(&k.scale(&best_rational(c / scale, MAX_DENOMINATOR)?));
    }
    Some(s)
}

/// A verified nonzero nef class fixed by `f*`, or `None` when `f` is amplified.
pub fn fixed_nef_witness(spec: &EndoSpec) -> Result<Option<NefWitness>, AbelianError> {
    let p = spec.char_poly();
    if unit_circle_root_count(&p) == 0 {
        return match amplified_certificate(spec) {
            Some(c) if c.verify(spec.matrix()) => Ok(None),
            _ => Err(AbelianError::SearchFailed),
        };
    }
    let fixed_space = symmetric_fixed_space(spec.matrix());
    if let Some(s) = cesaro_candidate(spec, &fixed_space) {
        let w = NefWitness::Rational(s);
        if w.verify(spec.matrix()) {
            return Ok(Some(w));
        }
    }
    if !cyclotomic_divisors(&p).is_empty() {
        if let Some(s) = pcd_nef_witness(spec) {
            return Ok(Some(NefWitness::Rational(to_rational(&s))));
        }
    }
    algebraic_nef_witness(spec).map(|w| Some(NefWitness::Algebraic(Box::new(w)))).ok_or(AbelianError::SearchFailed)
}

fn poly_of_matrix(p: &IntPoly, m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    let mut acc = Matrix::<BigInt>::zeros(n, n);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(m).add(&Matrix::identity(n).scale(c));
    }
    acc
}

/// Integer PSD class fixed by `f*`, averaged over the finite-order quotient
/// cut out by a cyclotomic factor; `None` exactly when `f` is PCD.
pub fn pcd_nef_witness(spec: &EndoSpec) -> Option<IntMatrix> {
    let d = *cyclotomic_divisors(&spec.char_poly()).iter().next()?;
    let m = spec.matrix();
    let phi = poly_of_matrix(&cyclotomic(d), m);
    // rows spanning the left kernel of Φ_d(M): the quotient by its image
    let rows: Vec<Vec<BigInt>> = crate::linalg::integer_kernel(&to_rational(&phi.transpose()));
    let p = Matrix::from_rows(rows).expect("rectangular");
    let h = p.transpose().mul(&p);
    let mut s = Matrix::<BigInt>::zeros(spec.n(), spec.n());
    let mut mj = Matrix::<BigInt>::identity(spec.n());
    for _ in 0..d {
        s = s.add(&mj.transpose().mul(&h).mul(&mj));
        mj = mj.mul(m);
    }
    let g = s.entries().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let s = s.map(|v| v / &g);
    let ok = !s.is_zero() && m.transpose().mul(&s).mul(m) == s && is_positive_semidefinite(&to_rational(&s));
    assert!(ok, "averaged class failed verification");
    Some(s)
}
