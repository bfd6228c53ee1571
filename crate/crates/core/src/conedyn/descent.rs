use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{dot, positive_multiple, to_rat, ConeEndo, ConeError, Quotient, RatVec};
use crate::linalg::RatMatrix;
use crate::lp;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionStep {
    /// Power of the current map taken so that every extremal ray is fixed.
    pub power: u64,
    /// Nonzero fixed cone class whose minimal face supplied the ray.
    pub fixed_class: RatVec,
    pub ray: Vec<BigInt>,
    pub quotient: Quotient,
    /// Induced map on the quotient.
    pub induced: RatMatrix,
    /// Lifts `y ∈ C` of a fixed quotient class that were checked to satisfy `φ(y) = y`.
    pub guard_lifts: usize,
    pub guard_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentTrace {
    pub initial_dim: usize,
    pub steps: Vec<ContractionStep>,
    pub final_amplified: bool,
    /// `B_0, B_1, …`, one more entry than there are steps.
    pub big_class_path: Vec<RatVec>,
    pub final_endo: ConeEndo,
}

impl DescentTrace {
    /// Re-checks the recorded invariants exactly.
    pub fn verify(&self) -> bool {
        if self.big_class_path.len() != self.steps.len() + 1 {
            return false;
        }
        let mut dim = self.initial_dim;
        for (i, step) in self.steps.iter().enumerate() {
            if step.quotient.q.rows() + 1 != dim || step.quotient.q.cols() != dim {
                return false;
            }
            dim -= 1;
            let (bi, bn) = (&self.big_class_path[i], &self.big_class_path[i + 1]);
            let pulled: RatVec = (0..step.quotient.q.cols()).map(|j| dot(bn, &step.quotient.q.column(j))).collect();
            if pulled != *bi || !step.guard_holds {
                return false;
            }
        }
        dim == self.final_endo.dim() && self.final_amplified == self.final_endo.amplified_test()
    }

    pub fn total_power(&self) -> u64 {
        self.steps.iter().map(|s| s.power).product()
    }
}

fn check_hypothesis(e: &ConeEndo, b: &[BigRational], power: u64) -> Result<(), ConeError> {
    for v in [1i64, -1] {
        let value = BigRational::from_integer(v.into());
        if let Some(x) = e.fixed_cone_point(Some((b, value.clone()))) {
            return Err(ConeError::HypothesisViolated { power, witness: x, value });
        }
    }
    Ok(())
}

/// Checks that lifts of a fixed quotient class are fixed upstairs.
fn lift_guard(psi: &ConeEndo, next: &ConeEndo, quot: &Quotient) -> (usize, bool) {
    let Some(ybar) = next.fixed_cone_point(None) else {
        return (0, true);
    };
    let g = psi.cone().generator_matrix();
    let qg = quot.q.mul(&g);
    let Some(c) = lp::feasible_point(&qg, &ybar) else {
        return (0, false);
    };
    let y = g.mul_vec(&c);
    let lifts = [y.clone(), y.iter().zip(&quot.ray).map(|(a, r)| a + r).collect::<RatVec>()];
    let mut ok = true;
    for lift in &lifts {
        let diff: RatVec = psi.apply(lift).iter().zip(lift).map(|(a, b)| a - b).collect();
        if diff.iter().any(|d| !d.is_zero()) {
            // the difference lies on the ray and its coefficient must vanish
            ok = false;
        }
    }
    (lifts.len(), ok)
}

/// Contracts fixed extremal rays until the induced map is amplified.
pub fn descend(e: &ConeEndo, b: &[BigRational]) -> Result<DescentTrace, ConeError> {
    if b.len() != e.dim() {
        return Err(ConeError::Dimension { expected: e.dim(), found: b.len() });
    }
    if !e.cone().generators().iter().any(|g| dot(b, g).is_positive()) {
        return Err(ConeError::NotBig);
    }
    let mut cur = e.clone();
    let mut bcur = b.to_vec();
    let mut steps = Vec::new();
    let mut path = vec![bcur.clone()];
    while !cur.amplified_test() {
        check_hypothesis(&cur, &bcur, 1)?;
        let k = cur.ray_permutation().order;
        let psi = cur.power(k);
        if k > 1 {
            check_hypothesis(&psi, &bcur, k)?;
        }
        let x = cur.fixed_cone_point(None).expect("not amplified");
        let face = cur.cone().minimal_face(&x)?;
        let ray = face
            .extremal_rays()
            .into_iter()
            .find(|r| {
                let rv = to_rat(r);
                positive_multiple(&psi.apply(&rv), &rv).is_some_and(|c| c == BigRational::from_integer(1.into()))
                    && dot(&bcur, &rv).is_zero()
            })
            .ok_or(ConeError::NoContractibleRay)?;
        let (next, quot) = psi.contract(&to_rat(&ray))?;
        let (guard_lifts, guard_holds) = lift_guard(&psi, &next, &quot);
        let s: &RatMatrix = &quot.s;
        bcur = (0..s.cols()).map(|j| dot(&bcur, &s.column(j))).collect();
        path.push(bcur.clone());
        steps.push(ContractionStep {
            power: k,
            fixed_class: x,
            ray,
            induced: next.matrix().clone(),
            quotient: quot,
            guard_lifts,
            guard_holds,
        });
        cur = next;
    }
    Ok(DescentTrace { initial_dim: e.dim(), steps, final_amplified: true, big_class_path: path, final_endo: cur })
}
