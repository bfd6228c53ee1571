//! Arithmetic in `Q[x]/(m)` with a designated real embedding, fixed by an
//! isolating interval of a real root of `m`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactpoly::{
    char_poly_rational, primitive_gcd, real_roots, squarefree_part, IntPoly, RatPoly, RealAlgebraic, SturmSequence,
};
use crate::linalg::{Matrix, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("embedding is not a root of the modulus")]
    NotARoot,
    #[error("modulus must have degree at least 1")]
    ConstantModulus,
    #[error("element is not invertible")]
    NotInvertible,
}

/// Element of the field, stored as its reduced representative polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem(RatPoly);

impl FieldElem {
    pub fn poly(&self) -> &RatPoly {
        &self.0
    }
}

#[derive(Clone, Debug)]
pub struct RealField {
    modulus: RatPoly,
    int_modulus: IntPoly,
    root: RealAlgebraic,
}

impl RealField {
    /// `modulus` need not be irreducible; the embedding `x ↦ root` is what
    /// zero and sign tests refer to.
    pub fn new(modulus: &IntPoly, root: RealAlgebraic) -> Result<Self, FieldError> {
        if modulus.is_zero() || modulus.is_constant() {
            return Err(FieldError::ConstantModulus);
        }
        let g = primitive_gcd(modulus, root.min_poly());
        if g.is_constant() || SturmSequence::new(&g).count_between(root.lo(), root.hi()) != 1 {
            return Err(FieldError::NotARoot);
        }
        Ok(RealField { modulus: modulus.to_ratpoly(), int_modulus: modulus.clone(), root })
    }

    pub fn degree(&self) -> usize {
        self.int_modulus.deg()
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.int_modulus
    }

    pub fn root(&self) -> &RealAlgebraic {
        &self.root
    }

    pub fn elem(&self, p: &RatPoly) -> FieldElem {
        FieldElem(p.rem(&self.modulus))
    }

    pub fn generator(&self) -> FieldElem {
        self.elem(&RatPoly::x())
    }

    pub fn rational(&self, r: BigRational) -> FieldElem {
        FieldElem(RatPoly::constant(r))
    }

    pub fn integer(&self, n: i64) -> FieldElem {
        self.rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(RatPoly::zero())
    }

    pub fn one(&self) -> FieldElem {
        self.integer(1)
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.add(&b.0))
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.sub(&b.0))
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem(a.0.neg())
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.elem(&a.0.mul(&b.0))
    }

    pub fn scale(&self, a: &FieldElem, c: &BigRational) -> FieldElem {
        FieldElem(a.0.scale(c))
    }

    pub fn pow(&self, a: &FieldElem, e: u32) -> FieldElem {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// Inverse modulo `m`; fails when the representative shares a factor with `m`.
    pub fn inverse(&self, a: &FieldElem) -> Result<FieldElem, FieldError> {
        if a.0.is_zero() {
            return Err(FieldError::NotInvertible);
        }
        let (g, s, _) = RatPoly::ext_gcd(&a.0, &self.modulus);
        if g.degree() != Some(0) {
            return Err(FieldError::NotInvertible);
        }
        Ok(self.elem(&s))
    }

    /// Whether the element vanishes under the embedding.
    pub fn is_zero(&self, a: &FieldElem) -> bool {
        if a.0.is_zero() {
            return true;
        }
        let g = primitive_gcd(&a.0.to_int_poly(), self.root.min_poly());
        !g.is_constant() && SturmSequence::new(&g).count_between(self.root.lo(), self.root.hi()) == 1
    }

    /// Sign of the embedded value, refining the root's interval until the
    /// representative has no root on it.
    pub fn sign(&self, a: &FieldElem) -> i8 {
        if self.is_zero(a) {
            return 0;
        }
        let e = a.0.to_int_poly();
        if e.is_constant() {
            return if a.0.leading().is_positive() { 1 } else { -1 };
        }
        // to_int_poly may flip the sign; track it
        let flip = a.0.leading().is_negative();
        let seq = SturmSequence::new(&e);
        let mut r = self.root.clone();
        loop {
            if seq.count_between(r.lo(), r.hi()) == 0 && e.sign_at(r.lo()) != 0 {
                let s = e.sign_at(r.hi());
                return if flip { -s } else { s };
            }
            let w = r.width() / BigRational::from_integer(BigInt::from(2));
            r.refine_to(&w);
        }
    }

    pub fn cmp(&self, a: &FieldElem, b: &FieldElem) -> Ordering {
        match self.sign(&self.sub(a, b)) {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    /// Matrix of multiplication by `a` on the basis `1, x, …, x^(d-1)`;
    /// column `j` holds the coordinates of `a·x^j`.
    pub fn multiplication_matrix(&self, a: &FieldElem) -> RatMatrix {
        let d = self.degree();
        let mut cols = Vec::with_capacity(d);
        let mut cur = a.clone();
        for _ in 0..d {
            cols.push((0..d).map(|i| cur.0.coeff(i)).collect::<Vec<_>>());
            cur = self.mul(&cur, &self.generator());
        }
        Matrix::from_fn(d, d, |i, j| cols[j][i].clone())
    }

    /// Characteristic polynomial of multiplication by `a`.
    pub fn char_poly(&self, a: &FieldElem) -> RatPoly {
        char_poly_rational(&self.multiplication_matrix(a)).expect("square")
    }

    /// Whether the embedded value is an algebraic integer, i.e. the
    /// characteristic polynomial of multiplication has integer coefficients.
    /// Exact when the modulus is irreducible.
    pub fn is_algebraic_integer(&self, a: &FieldElem) -> bool {
        self.char_poly(a).coeffs().iter().all(|c| c.is_integer())
    }

    /// The field map `x ↦ 1/x`, an automorphism when the modulus is
    /// irreducible and reciprocal.
    pub fn reciprocal_involution(&self, a: &FieldElem) -> Result<FieldElem, FieldError> {
        let inv = self.inverse(&self.generator())?;
        let mut out = self.zero();
        for c in a.0.coeffs().iter().rev() {
            out = self.add(&self.mul(&out, &inv), &self.rational(c.clone()));
        }
        Ok(out)
    }

    /// Interval enclosure of the embedded value over the root's current interval.
    fn enclosure(&self, a: &FieldElem, r: &RealAlgebraic) -> (BigRational, BigRational) {
        let (lo, hi) = (r.lo().clone(), r.hi().clone());
        let mut acc = (BigRational::zero(), BigRational::zero());
        for c in a.0.coeffs().iter().rev() {
            let prods = [&acc.0 * &lo, &acc.0 * &hi, &acc.1 * &lo, &acc.1 * &hi];
            let mn = prods.iter().min().unwrap().clone();
            let mx = prods.iter().max().unwrap().clone();
            acc = (mn + c, mx + c);
        }
        acc
    }

    /// The embedded value as an isolated real algebraic number.
    pub fn to_algebraic(&self, a: &FieldElem) -> RealAlgebraic {
        if a.0.degree().unwrap_or(0) == 0 {
            return RealAlgebraic::from_rational(&a.0.coeff(0));
        }
        let target = squarefree_part(&self.char_poly(a).to_int_poly());
        let seq = SturmSequence::new(&target);
        let mut r = self.root.clone();
        loop {
            let (lo, hi) = self.enclosure(a, &r);
            if lo < hi && target.sign_at(&lo) != 0 && seq.count_between(&lo, &hi) == 1 {
                return RealAlgebraic::new(&target, lo, hi).expect("isolated");
            }
            let w = r.width() / BigRational::from_integer(BigInt::from(2));
            r.refine_to(&w);
        }
    }

    pub fn to_f64(&self, a: &FieldElem) -> f64 {
        let mut r = self.root.clone();
        r.refine_to(&BigRational::new(BigInt::one(), BigInt::from(1u64 << 50)));
        let (lo, hi) = self.enclosure(a, &r);
        let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
        num_traits::ToPrimitive::to_f64(&mid).unwrap_or(f64::NAN)
    }
}

impl RealField {
    /// Drops the factor of the modulus shared with `a` (or its cofactor),
    /// keeping the one that vanishes at the embedding.
    pub fn split_on(&self, a: &FieldElem) -> Option<RealField> {
        let g = primitive_gcd(&a.0.to_int_poly(), &self.int_modulus);
        if g.is_constant() || g.deg() == self.int_modulus.deg() {
            return None;
        }
        let seq = SturmSequence::new(&g);
        let keep = if seq.count_between(self.root.lo(), self.root.hi()) == 1
            && !primitive_gcd(&g, self.root.min_poly()).is_constant()
        {
            g
        } else {
            self.int_modulus.div_exact(&g).expect("factor of the modulus")
        };
        RealField::new(&keep.primitive_part(), self.root.clone()).ok()
    }

    /// A nonzero `u` with `u·A = 0` for the `r×c` matrix `a`, or `None` when the
    /// rows are independent. Returns the (possibly smaller) field the result
    /// lives in: a pivot that is nonzero but not invertible splits the modulus.
    pub fn left_kernel_vector(&self, a: &[Vec<FieldElem>]) -> (RealField, Option<Vec<FieldElem>>) {
        let mut field = self.clone();
        'restart: loop {
            let rows = a.len();
            let cols = a.first().map_or(0, |r| r.len());
            // eliminate on the transpose: columns of `a` become equations
            let mut t: Vec<Vec<FieldElem>> =
                (0..cols).map(|j| (0..rows).map(|i| field.elem(&a[i][j].0)).collect()).collect();
            let mut pivots = Vec::new();
            let mut r = 0;
            for c in 0..rows {
                let Some(p) = (r..cols).find(|&i| !field.is_zero(&t[i][c])) else {
                    continue;
                };
                t.swap(r, p);
                let inv = match field.inverse(&t[r][c]) {
                    Ok(v) => v,
                    Err(_) => {
                        field = field.split_on(&t[r][c]).expect("nonzero pivot shares a factor");
                        continue 'restart;
                    }
                };
                t[r] = t[r].iter().map(|v| field.mul(v, &inv)).collect();
                for i in 0..cols {
                    if i != r && !t[i][c].0.is_zero() {
                        let f = t[i][c].clone();
                        let row: Vec<FieldElem> =
                            t[i].iter().zip(&t[r]).map(|(v, p)| field.sub(v, &field.mul(&f, p))).collect();
                        t[i] = row;
                    }
                }
                pivots.push(c);
                r += 1;
            }
            let Some(free) = (0..rows).find(|c| !pivots.contains(c)) else {
                return (field, None);
            };
            let mut u = vec![field.zero(); rows];
            u[free] = field.one();
            for (i, &pc) in pivots.iter().enumerate() {
                u[pc] = field.neg(&t[i][free]);
            }
            return (field, Some(u));
        }
    }
}

/// Real field generated by the largest real root of `m`.
pub fn field_of_largest_root(m: &IntPoly) -> Option<RealField> {
    let root = real_roots(m).pop()?;
    RealField::new(m, root).ok()
}
