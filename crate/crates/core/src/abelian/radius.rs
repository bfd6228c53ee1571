use num_bigint::BigInt;
use num_rational::BigRational;

use crate::exactpoly::{largest_real_root, pairwise_product_polynomial, IntPoly, RealAlgebraic, SturmSequence};

/// Width every reported radius is refined to.
pub fn radius_width() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(1_000_000))
}

/// A real algebraic number given as a carrier polynomial and an isolating interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicRadius {
    root: RealAlgebraic,
}

impl AlgebraicRadius {
    pub fn new(mut root: RealAlgebraic) -> Self {
        root.refine_to(&radius_width());
        AlgebraicRadius { root }
    }

    pub fn min_poly(&self) -> &IntPoly {
        self.root.min_poly()
    }

    pub fn isolating_interval(&self) -> (&BigRational, &BigRational) {
        (self.root.lo(), self.root.hi())
    }

    pub fn root(&self) -> &RealAlgebraic {
        &self.root
    }

    pub fn to_f64(&self) -> f64 {
        self.root.to_f64()
    }

    /// Exactly one root of the carrier in the interval.
    pub fn is_isolated(&self) -> bool {
        SturmSequence::new(self.min_poly()).count_between(self.root.lo(), self.root.hi()) == 1
    }

    pub fn refined(&self, width: &BigRational) -> AlgebraicRadius {
        AlgebraicRadius { root: self.root.clone().refined(width) }
    }

    pub fn exceeds_one(&self) -> bool {
        self.root.cmp_rational(&BigRational::from_integer(1.into())) == std::cmp::Ordering::Greater
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralRadius {
    /// Spectral radius on the symmetric-matrix model of N¹, equal to `ρ(M)²`.
    pub n1: AlgebraicRadius,
    /// `ρ(M)`, present when it is attained by a real eigenvalue.
    pub matrix: Option<AlgebraicRadius>,
}

/// Largest real root of `p(x)` or `p(-x)`, whichever is larger: the largest
/// absolute value of a real root.
pub fn largest_abs_real_root(p: &IntPoly) -> Option<RealAlgebraic> {
    let a = largest_real_root(p);
    let b = largest_real_root(&p.negate_variable());
    match (a, b) {
        (Some(a), Some(b)) => {
            if a.same_number(&b) {
                return Some(a);
            }
            let (mut a, mut b) = (a, b);
            loop {
                if a.hi() <= b.lo() {
                    return Some(b);
                }
                if b.hi() <= a.lo() {
                    return Some(a);
                }
                let w = a.width() / BigRational::from_integer(2.into());
                a.refine_to(&w);
                let w = b.width() / BigRational::from_integer(2.into());
                b.refine_to(&w);
            }
        }
        (a, b) => a.or(b),
    }
}

/// Spectral radii of a characteristic polynomial `p` of degree at least 1.
pub fn spectral_radius_of(p: &IntPoly) -> SpectralRadius {
    let q = pairwise_product_polynomial(p);
    // λ·conj(λ) = |λ|² is always a real root, so a largest real root exists
    let n1 = largest_real_root(&q).expect("|λ|² is a real root");
    let matrix = largest_abs_real_root(p).filter(|r| r.square().same_number(&n1)).map(AlgebraicRadius::new);
    SpectralRadius { n1: AlgebraicRadius::new(n1), matrix }
}
