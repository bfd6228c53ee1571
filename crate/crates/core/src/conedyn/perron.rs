use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{ConeEndo, ConeError, PolyCone};
use crate::linalg::RatMatrix;

pub const MAX_ITERATIONS: usize = 200;
pub const STEP_TOLERANCE: f64 = 1e-9;
pub const RESIDUAL_TOLERANCE: f64 = 1e-6;

/// Floating limit of `φ^n(x)/|φ^n(x)|` with its eigen-residual.
#[derive(Debug, Clone, PartialEq)]
pub struct PerronCertificate {
    /// Unit vector in the 1-norm.
    pub limit: Vec<f64>,
    /// `‖φ(y)‖₁` at the limit.
    pub rate: f64,
    /// `‖φ(y) - r·y‖∞`, below `RESIDUAL_TOLERANCE`.
    pub residual: f64,
    pub iterations: usize,
}

fn l1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

fn apply(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Power iteration from an interior point of a cone with `φ(C) ⊆ C`.
pub fn power_limit_ray(matrix: &RatMatrix, cone: &PolyCone, x: &[BigRational]) -> Result<PerronCertificate, ConeError> {
    let n = cone.dim();
    if !matrix.is_square() || matrix.rows() != n {
        return Err(ConeError::Dimension { expected: n, found: matrix.rows() });
    }
    if x.len() != n {
        return Err(ConeError::Dimension { expected: n, found: x.len() });
    }
    for (i, g) in cone.generators().iter().enumerate() {
        if !cone.contains(&matrix.mul_vec(g)) {
            return Err(ConeError::NotInvariant(format!("image of generator {i} leaves the cone")));
        }
    }
    if !cone.in_interior(x) {
        return Err(ConeError::NotInterior);
    }
    let m: Vec<Vec<f64>> =
        matrix.to_rows().iter().map(|r| r.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()).collect();
    let mut y: Vec<f64> = x.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
    let norm = l1(&y);
    y.iter_mut().for_each(|v| *v /= norm);
    for it in 1..=MAX_ITERATIONS {
        let fy = apply(&m, &y);
        let r = l1(&fy);
        let next: Vec<f64> = fy.iter().map(|v| v / r).collect();
        let step = next.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        y = next;
        if step < STEP_TOLERANCE {
            let fy = apply(&m, &y);
            let rate = l1(&fy);
            let residual = fy.iter().zip(&y).map(|(a, b)| (a - rate * b).abs()).fold(0.0, f64::max);
            if residual < RESIDUAL_TOLERANCE {
                return Ok(PerronCertificate { limit: y, rate, residual, iterations: it });
            }
        }
    }
    Err(ConeError::NoConvergence(MAX_ITERATIONS))
}

impl ConeEndo {
    pub fn power_limit_ray(&self, x: &[BigRational]) -> Result<PerronCertificate, ConeError> {
        power_limit_ray(self.matrix(), self.cone(), x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, Matrix};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()).unwrap()
    }

    #[test]
    fn dominant_axis() {
        let c = power_limit_ray(&m(&[&[3, 0], &[0, 1]]), &PolyCone::orthant(2), &[rat(1, 1), rat(1, 1)]).unwrap();
        assert!((c.rate - 3.0).abs() < 1e-8);
        assert!((c.limit[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn golden_cone() {
        // φ = [[2,1],[1,1]] maps the orthant into itself; the rounded eigen-cone
        // spanned by (2,1) and (1,1) is also forward invariant
        let phi = m(&[&[2, 1], &[1, 1]]);
        let cone = PolyCone::from_integer_rows(&[&[2, 1], &[1, 1]]).unwrap();
        let c = power_limit_ray(&phi, &cone, &[rat(3, 1), rat(2, 1)]).unwrap();
        let golden2 = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((c.rate - golden2).abs() < 1e-6);
        let expected = 1.0 / (1.0 + (golden2 - 2.0));
        assert!((c.limit[0] - expected).abs() < 1e-6);
    }

    #[test]
    fn rejected_inputs() {
        let swap = m(&[&[0, 1], &[1, 0]]);
        let o = PolyCone::orthant(2);
        assert_eq!(power_limit_ray(&swap, &o, &[rat(2, 1), rat(1, 1)]), Err(ConeError::NoConvergence(MAX_ITERATIONS)));
        assert_eq!(power_limit_ray(&m(&[&[3, 0], &[0, 1]]), &o, &[rat(1, 1), rat(0, 1)]), Err(ConeError::NotInterior));
        let rot = m(&[&[0, -1], &[1, 0]]);
        assert!(matches!(power_limit_ray(&rot, &o, &[rat(1, 1), rat(1, 1)]), Err(ConeError::NotInvariant(_))));
    }
}
