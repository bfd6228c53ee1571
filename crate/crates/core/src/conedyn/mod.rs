//! Linear dynamics on salient rational polyhedral cones.

mod descent;
mod perron;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{inverse, primitive_integer_vector, rank, Matrix, RatMatrix};
use crate::lp;

pub use descent::{descend, ContractionStep, DescentTrace};
pub use perron::{power_limit_ray, PerronCertificate};

pub type RatVec = Vec<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("generator {0} is the zero vector")]
    ZeroGenerator(usize),
    #[error("cone contains a line")]
    NotSalient,
    #[error("matrix is not invertible")]
    Singular,
    #[error("cone is not mapped onto itself: {0}")]
    NotInvariant(String),
    #[error("vector is not in the cone")]
    NotInCone,
    #[error("vector is not in the interior of the cone")]
    NotInterior,
    #[error("ray is not an extremal ray of the cone")]
    NotExtremal,
    #[error("quotient cone contains a line")]
    NotContractible,
    #[error("big class must be positive on some generator")]
    NotBig,
    #[error("fixed cone class with nonzero big-class value {value} (power {power})")]
    HypothesisViolated { power: u64, witness: RatVec, value: BigRational },
    #[error("no fixed extremal ray with vanishing big-class value in the minimal face")]
    NoContractibleRay,
    #[error("power iteration did not converge in {0} iterations")]
    NoConvergence(usize),
}

pub(crate) fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

pub(crate) fn ray_key(v: &[BigRational]) -> Vec<BigInt> {
    primitive_integer_vector(v)
}

fn to_rat(v: &[BigInt]) -> RatVec {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Positive scalar `c` with `a = c·b`, if any.
pub(crate) fn positive_multiple(a: &[BigRational], b: &[BigRational]) -> Option<BigRational> {
    let j = b.iter().position(|x| !x.is_zero())?;
    let c = &a[j] / &b[j];
    (c.is_positive() && a.iter().zip(b).all(|(x, y)| *x == &c * y)).then_some(c)
}

/// Finitely generated salient cone in `Q^dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyCone {
    dim: usize,
    generators: Vec<RatVec>,
}

impl PolyCone {
    pub fn new(dim: usize, generators: Vec<RatVec>) -> Result<Self, ConeError> {
        for (i, g) in generators.iter().enumerate() {
            if g.len() != dim {
                return Err(ConeError::Dimension { expected: dim, found: g.len() });
            }
            if g.iter().all(|x| x.is_zero()) {
                return Err(ConeError::ZeroGenerator(i));
            }
        }
        let cone = PolyCone { dim, generators };
        if !cone.is_salient() {
            return Err(ConeError::NotSalient);
        }
        Ok(cone)
    }

    pub fn from_integer_rows(rows: &[&[i64]]) -> Result<Self, ConeError> {
        let dim = rows.first().map_or(0, |r| r.len());
        PolyCone::new(
            dim,
            rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect(),
        )
    }

    /// The nonnegative orthant of `Q^dim`.
    pub fn orthant(dim: usize) -> Self {
        let gens = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect();
        PolyCone { dim, generators: gens }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[RatVec] {
        &self.generators
    }

    /// Generator matrix with generators as columns.
    pub fn generator_matrix(&self) -> RatMatrix {
        Matrix::from_fn(self.dim, self.generators.len(), |i, j| self.generators[j][i].clone())
    }

    fn is_salient(&self) -> bool {
        let k = self.generators.len();
        if k == 0 {
            return true;
        }
        // Σ c_i g_i = 0, Σ c_i = 1, c ≥ 0
        let mut a = Matrix::zeros(self.dim + 1, k);
        for (j, g) in self.generators.iter().enumerate() {
            for i in 0..self.dim {
                a[(i, j)] = g[i].clone();
            }
            a[(self.dim, j)] = BigRational::one();
        }
        let mut b = vec![BigRational::zero(); self.dim];
        b.push(BigRational::one());
        !lp::is_feasible(&a, &b)
    }

    pub fn is_full_dimensional(&self) -> bool {
        !self.generators.is_empty() && rank(&self.generator_matrix()) == self.dim
    }

    /// Nonnegative generator coefficients expressing `x`, if `x ∈ C`.
    pub fn coefficients(&self, x: &[BigRational]) -> Option<RatVec> {
        assert_eq!(x.len(), self.dim, "dimension mismatch");
        lp::feasible_point(&self.generator_matrix(), x)
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        if x.iter().all(|v| v.is_zero()) {
            return true;
        }
        self.coefficients(x).is_some()
    }

    /// Extremal rays as primitive integer vectors, sorted.
    pub fn extremal_rays(&self) -> Vec<Vec<BigInt>> {
        let mut keys: Vec<Vec<BigInt>> = self.generators.iter().map(|g| ray_key(g)).collect();
        keys.sort();
        keys.dedup();
        let mut out = Vec::new();
        for (i, k) in keys.iter().enumerate() {
            let others: Vec<RatVec> =
                keys.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| to_rat(v)).collect();
            let rest = PolyCone { dim: self.dim, generators: others };
            if rest.generators.is_empty() || !rest.contains(&to_rat(k)) {
                out.push(k.clone());
            }
        }
        out
    }

    /// The cone on the extremal rays only.
    pub fn reduced(&self) -> PolyCone {
        PolyCone { dim: self.dim, generators: self.extremal_rays().iter().map(|r| to_rat(r)).collect() }
    }

    /// Smallest face containing `x`: ray `r_j` lies in it iff `t·x = r_j + Σ c_i r_i`
    /// is solvable with `c, t ≥ 0`.
    pub fn minimal_face(&self, x: &[BigRational]) -> Result<PolyCone, ConeError> {
        if x.len() != self.dim {
            return Err(ConeError::Dimension { expected: self.dim, found: x.len() });
        }
        if x.iter().all(|v| v.is_zero()) || !self.contains(x) {
            return Err(ConeError::NotInCone);
        }
        let rays: Vec<RatVec> = self.extremal_rays().iter().map(|r| to_rat(r)).collect();
        let k = rays.len();
        let mut face = Vec::new();
        for (j, rj) in rays.iter().enumerate() {
            // columns: c_i for i != j, then t; rows: Σ c_i r_i - t x = -r_j
            let mut a = Matrix::zeros(self.dim, k);
            let mut col = 0;
            for (i, ri) in rays.iter().enumerate() {
                if i == j {
                    continue;
                }
                for row in 0..self.dim {
                    a[(row, col)] = ri[row].clone();
                }
                col += 1;
            }
            for row in 0..self.dim {
                a[(row, k - 1)] = -x[row].clone();
            }
            let b: RatVec = rj.iter().map(|v| -v.clone()).collect();
            if lp::is_feasible(&a, &b) {
                face.push(rj.clone());
            }
        }
        Ok(PolyCone { dim: self.dim, generators: face })
    }

    /// Whether `x` lies in the topological interior (requires a full-dimensional cone).
    pub fn in_interior(&self, x: &[BigRational]) -> bool {
        self.is_full_dimensional()
            && !x.iter().all(|v| v.is_zero())
            && self.minimal_face(x).is_ok_and(|f| f.generators.len() == self.extremal_rays().len())
    }

    /// Membership-preserving equality of the generated cones.
    pub fn same_cone(&self, other: &PolyCone) -> bool {
        self.dim == other.dim
            && self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g))
    }
}

/// Invertible rational map with `φ(C) = C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeEndo {
    matrix: RatMatrix,
    inverse: RatMatrix,
    cone: PolyCone,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayPermutation {
    pub rays: Vec<Vec<BigInt>>,
    /// `images[i] = j` when `φ` maps ray `i` onto ray `j`.
    pub images: Vec<usize>,
    pub order: u64,
}

impl ConeEndo {
    pub fn new(matrix: RatMatrix, cone: PolyCone) -> Result<Self, ConeError> {
        let n = matrix.rows();
        if !matrix.is_square() || n != cone.dim {
            return Err(ConeError::Dimension { expected: cone.dim, found: n });
        }
        let inverse = inverse(&matrix).ok_or(ConeError::Singular)?;
        for (i, g) in cone.generators.iter().enumerate() {
            if !cone.contains(&matrix.mul_vec(g)) {
                return Err(ConeError::NotInvariant(format!("image of generator {i} leaves the cone")));
            }
            if !cone.contains(&inverse.mul_vec(g)) {
                return Err(ConeError::NotInvariant(format!("preimage of generator {i} leaves the cone")));
            }
        }
        Ok(ConeEndo { matrix, inverse, cone })
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn cone(&self) -> &PolyCone {
        &self.cone
    }

    pub fn dim(&self) -> usize {
        self.cone.dim
    }

    pub fn apply(&self, x: &[BigRational]) -> RatVec {
        self.matrix.mul_vec(x)
    }

    pub fn power(&self, k: u64) -> ConeEndo {
        ConeEndo { matrix: self.matrix.pow(k), inverse: self.inverse.pow(k), cone: self.cone.clone() }
    }

    pub fn ray_permutation(&self) -> RayPermutation {
        let rays = self.cone.extremal_rays();
        let images: Vec<usize> = rays
            .iter()
            .map(|r| {
                let img = ray_key(&self.apply(&to_rat(r)));
                rays.iter().position(|s| *s == img).expect("an automorphism of the cone permutes its extremal rays")
            })
            .collect();
        let mut order = 1u64;
        let mut seen = vec![false; rays.len()];
        for start in 0..rays.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = images[i];
                len += 1;
            }
            order = order.lcm(&len);
        }
        RayPermutation { rays, images, order }
    }

    /// A nonzero fixed vector in the cone, normalized by generator coefficients
    /// summing to 1, subject to optional extra equality `ℓ(x) = value`.
    pub(crate) fn fixed_cone_point(&self, extra: Option<(&[BigRational], BigRational)>) -> Option<RatVec> {
        let g = self.cone.generator_matrix();
        let k = g.cols();
        if k == 0 {
            return None;
        }
        let d = self.dim();
        let mg = self.matrix.minus_identity().mul(&g);
        let extra_rows = usize::from(extra.is_some());
        let mut a = Matrix::zeros(d + 1 + extra_rows, k);
        let mut b = vec![BigRational::zero(); d + 1 + extra_rows];
        for i in 0..d {
            for j in 0..k {
                a[(i, j)] = mg[(i, j)].clone();
            }
        }
        for j in 0..k {
            a[(d, j)] = BigRational::one();
        }
        b[d] = BigRational::one();
        if let Some((l, v)) = extra {
            let lg: Vec<BigRational> = (0..k).map(|j| dot(l, &g.column(j))).collect();
            for j in 0..k {
                a[(d + 1, j)] = lg[j].clone();
            }
            // scale the normalization out: Σc = 1 is replaced by ℓ(Gc) = v
            for j in 0..k {
                a[(d, j)] = BigRational::zero();
            }
            b[d] = BigRational::zero();
            b[d + 1] = v;
        }
        let c = lp::feasible_point(&a, &b)?;
        Some(g.mul_vec(&c))
    }

    /// `ker(φ - id) ∩ C = {0}`.
    pub fn amplified_test(&self) -> bool {
        self.fixed_cone_point(None).is_none()
    }

    /// Quotient by an invariant extremal ray.
    pub fn contract(&self, ray: &[BigRational]) -> Result<(ConeEndo, Quotient), ConeError> {
        let key = ray_key(ray);
        if ray.len() != self.dim() {
            return Err(ConeError::Dimension { expected: self.dim(), found: ray.len() });
        }
        if !self.cone.extremal_rays().contains(&key) {
            return Err(ConeError::NotExtremal);
        }
        let r = to_rat(&key);
        if positive_multiple(&self.apply(&r), &r).is_none() {
            return Err(ConeError::NotInvariant("the ray is not mapped to itself".into()));
        }
        let quotient = Quotient::new(&r);
        let gens: Vec<RatVec> = self
            .cone
            .generators
            .iter()
            .map(|g| quotient.project(g))
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        let cone = PolyCone::new(self.dim() - 1, gens).map_err(|e| match e {
            ConeError::NotSalient => ConeError::NotContractible,
            other => other,
        })?;
        let induced = quotient.q.mul(&self.matrix).mul(&quotient.s);
        let endo = ConeEndo::new(induced, cone)?;
        Ok((endo, quotient))
    }
}

/// Linear quotient by a ray `R`: `q` has kernel `span(R)`, `s` is a section with `q s = id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub ray: RatVec,
    pub pivot: usize,
    pub q: RatMatrix,
    pub s: RatMatrix,
}

impl Quotient {
    pub fn new(ray: &[BigRational]) -> Self {
        let d = ray.len();
        let p = ray.iter().position(|x| !x.is_zero()).expect("nonzero ray");
        let idx = |j: usize| if j < p { j } else { j + 1 };
        // q(x)_j = x_j' - (r_j'/r_p) x_p with j' the j-th coordinate other than p
        let q = Matrix::from_fn(d - 1, d, |i, j| {
            let src = idx(i);
            if j == src {
                BigRational::one()
            } else if j == p {
                -(&ray[src] / &ray[p])
            } else {
                BigRational::zero()
            }
        });
        let s = Matrix::from_fn(
            d,
            d - 1,
            |i, j| {
                if i != p && idx(j) == i {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            },
        );
        Quotient { ray: ray.to_vec(), pivot: p, q, s }
    }

    pub fn project(&self, x: &[BigRational]) -> RatVec {
        self.q.mul_vec(x)
    }
}
