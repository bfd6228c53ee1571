//! Dense exact matrices over the integers and the rationals.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimensionError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Mismatch { expected: usize, found: usize },
    #[error("ragged rows: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("empty matrix")]
    Empty,
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, DimensionError> {
        let nrows = rows.len();
        if nrows == 0 {
            return Err(DimensionError::Empty);
        }
        let ncols = rows[0].len();
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(DimensionError::Ragged { row: i, expected: ncols, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: nrows, cols: ncols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn require_square(&self) -> Result<usize, DimensionError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(DimensionError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + PartialEq,
    for<'a> &'a T:
        std::ops::Mul<&'a T, Output = T> + std::ops::Add<&'a T, Output = T> + std::ops::Sub<&'a T, Output = T>,
{
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        Matrix::from_fn(n, n, |i, j| if i == j { diag[i].clone() } else { T::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = &self[(i, j)];
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    let cur = &out[(i, j)] + &prod;
                    out[(i, j)] = cur;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, b)| &acc + &(a * b))).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x * c)
    }

    /// `self - I`.
    pub fn minus_identity(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] = &out[(i, i)] - &T::one();
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        Matrix::from_fn(r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self[(i, j)].clone()
            } else if i >= self.rows && j >= self.cols {
                other[(i - self.rows, j - self.cols)].clone()
            } else {
                T::zero()
            }
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }
}

/// Fraction-free (Bareiss) determinant. Every division is exact in an integral domain.
pub fn det_bareiss(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    assert!(m.is_square(), "determinant of a non-square matrix");
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.data.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = v / &prev;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

pub fn to_rational(m: &IntMatrix) -> RatMatrix {
    m.map(|x| BigRational::from_integer(x.clone()))
}

/// Common denominator `c` and integer matrix `c * m`.
pub fn clear_denominators(m: &RatMatrix) -> (BigInt, IntMatrix) {
    let c = m.entries().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled = m.map(|x| (x * BigRational::from_integer(c.clone())).to_integer());
    (c, scaled)
}

pub fn det_rational(m: &RatMatrix) -> BigRational {
    let (c, scaled) = clear_denominators(m);
    let n = m.rows() as u32;
    BigRational::new(det_bareiss(&scaled), num_traits::pow(c, n as usize))
}

/// Reduced row echelon form over the rationals; returns the pivot columns.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = m[(r, c)].recip();
        for j in 0..cols {
            m[(r, j)] = &m[(r, j)] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[(i, c)].is_zero() {
                let f = m[(i, c)].clone();
                for j in 0..cols {
                    let v = &m[(i, j)] - &(&f * &m[(r, j)]);
                    m[(i, j)] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &RatMatrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of the right null space `{x : m x = 0}` over the rationals.
pub fn kernel(m: &RatMatrix) -> Vec<Vec<BigRational>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[(r, f)].clone();
            }
            v
        })
        .collect()
}

/// Kernel basis scaled to primitive integer vectors.
pub fn integer_kernel(m: &RatMatrix) -> Vec<Vec<BigInt>> {
    kernel(m).iter().map(|v| primitive_integer_vector(v)).collect()
}

/// Positive multiple of `v` with coprime integer entries. Zero maps to zero.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.rows();
    if !m.is_square() {
        return None;
    }
    let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else if j - n == i {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    });
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| aug[(i, n + j)].clone()))
}

/// Invariant factors of an integer matrix: the nonzero diagonal of its Smith
/// normal form followed by zeros up to `min(rows, cols)`.
pub fn elementary_divisors(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut out = Vec::with_capacity(rows.min(cols));
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = &a[(i, j)];
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else {
            break;
        };
        swap_rows(&mut a, t, pi);
        swap_cols(&mut a, t, pj);
        loop {
            let p = a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&p);
                for j in t..cols {
                    let v = &a[(i, j)] - &q * &a[(t, j)];
                    a[(i, j)] = v;
                }
                if !a[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&p);
                for i in t..rows {
                    let v = &a[(i, j)] - &q * &a[(i, t)];
                    a[(i, j)] = v;
                }
                if !a[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // pivot must divide the whole trailing block
                let mut bad = None;
                'scan: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !(&a[(i, j)] % &p).is_zero() {
                            bad = Some(i);
                            break 'scan;
                        }
                    }
                }
                match bad {
                    None => break,
                    Some(i) => {
                        for j in t..cols {
                            let v = &a[(t, j)] + &a[(i, j)];
                            a[(t, j)] = v;
                        }
                        continue;
                    }
                }
            }
            // move the smallest nonzero entry of row/column t into the pivot
            let mut best = (t, t);
            for i in t..rows {
                let v = &a[(i, t)];
                if !v.is_zero() && v.abs() < a[best].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                let v = &a[(t, j)];
                if !v.is_zero() && v.abs() < a[best].abs() {
                    best = (t, j);
                }
            }
            swap_rows(&mut a, t, best.0);
            swap_cols(&mut a, t, best.1);
        }
        out.push(a[(t, t)].abs());
        t += 1;
    }
    while out.len() < rows.min(cols) {
        out.push(BigInt::zero());
    }
    out
}

fn swap_rows<T>(a: &mut Matrix<T>, i: usize, j: usize) {
    if i == j {
        return;
    }
    let c = a.cols;
    for k in 0..c {
        a.data.swap(i * c + k, j * c + k);
    }
}

fn swap_cols<T>(a: &mut Matrix<T>, i: usize, j: usize) {
    if i == j {
        return;
    }
    let c = a.cols;
    for k in 0..a.rows {
        a.data.swap(k * c + i, k * c + j);
    }
}

/// Kronecker product.
pub fn kronecker<T>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T>
where
    T: Clone,
    for<'x> &'x T: std::ops::Mul<&'x T, Output = T>,
{
    Matrix::from_fn(a.rows * b.rows, a.cols * b.cols, |i, j| {
        &a[(i / b.rows, j / b.cols)] * &b[(i % b.rows, j % b.cols)]
    })
}

/// Exact positive-definiteness by leading principal minors.
pub fn is_positive_definite(m: &RatMatrix) -> bool {
    if !m.is_symmetric() {
        return false;
    }
    let (_, scaled) = clear_denominators(m);
    (1..=m.rows()).all(|k| {
        let minor = Matrix::from_fn(k, k, |i, j| scaled[(i, j)].clone());
        det_bareiss(&minor).is_positive()
    })
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_matrix(rows: &[&[i64]]) -> IntMatrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).expect("rectangular literal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = int_matrix(&[&[2, -1, 0, 3], &[1, 4, 2, -2], &[0, 5, -3, 1], &[7, 0, 1, 1]]);
        // Laplace expansion as an independent oracle.
        fn laplace(m: &IntMatrix) -> BigInt {
            let n = m.rows();
            if n == 1 {
                return m[(0, 0)].clone();
            }
            (0..n)
                .map(|j| {
                    let minor = Matrix::from_fn(n - 1, n - 1, |r, c| m[(r + 1, if c < j { c } else { c + 1 })].clone());
                    let s = if j % 2 == 0 { int(1) } else { int(-1) };
                    s * &m[(0, j)] * laplace(&minor)
                })
                .sum()
        }
        assert_eq!(det_bareiss(&m), laplace(&m));
        let singular = int_matrix(&[&[1, 2], &[2, 4]]);
        assert_eq!(det_bareiss(&singular), int(0));
        let needs_pivot = int_matrix(&[&[0, 1], &[1, 0]]);
        assert_eq!(det_bareiss(&needs_pivot), int(-1));
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = to_rational(&int_matrix(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]));
        let k = kernel(&m);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
        assert_eq!(integer_kernel(&m)[0], vec![int(-1), int(-1), int(1)]);
    }

    #[test]
    fn smith_invariants() {
        let m = int_matrix(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        assert_eq!(elementary_divisors(&m), vec![int(2), int(6), int(12)]);
        let z = int_matrix(&[&[0, 0], &[0, 3]]);
        assert_eq!(elementary_divisors(&z), vec![int(3), int(0)]);
        let u = int_matrix(&[&[1, 1], &[0, 1]]);
        assert_eq!(elementary_divisors(&u), vec![int(1), int(1)]);
    }

    #[test]
    fn inverse_round_trip() {
        let m = to_rational(&int_matrix(&[&[2, 1], &[1, 1]]));
        let inv = inverse(&m).unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inverse(&to_rational(&int_matrix(&[&[1, 2], &[2, 4]]))).is_none());
    }

    #[test]
    fn positive_definite_by_minors() {
        assert!(is_positive_definite(&to_rational(&int_matrix(&[&[2, 1], &[1, 2]]))));
        assert!(!is_positive_definite(&to_rational(&int_matrix(&[&[1, 2], &[2, 1]]))));
        assert!(!is_positive_definite(&to_rational(&int_matrix(&[&[1, 0], &[0, 0]]))));
    }
}
