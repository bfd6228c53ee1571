use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::sturm::{Endpoint, SturmSequence};
use super::{squarefree_part, IntPoly};

/// A real algebraic number given by a squarefree integer polynomial and a
/// half-open interval `(lo, hi]` containing exactly one of its roots.
#[derive(Clone, PartialEq, Eq)]
pub struct RealAlgebraic {
    min_poly: IntPoly,
    lo: BigRational,
    hi: BigRational,
}

impl RealAlgebraic {
    /// Builds the number after checking the isolation exactly.
    pub fn new(poly: &IntPoly, lo: BigRational, hi: BigRational) -> Option<Self> {
        if poly.is_zero() || lo >= hi {
            return None;
        }
        let min_poly = squarefree_part(poly);
        let seq = SturmSequence::new(&min_poly);
        (seq.count_between(&lo, &hi) == 1).then_some(RealAlgebraic { min_poly, lo, hi })
    }

    pub fn from_integer(n: i64) -> Self {
        RealAlgebraic {
            min_poly: IntPoly::linear_root(n),
            lo: BigRational::from_integer(BigInt::from(n) - 1),
            hi: BigRational::from_integer(BigInt::from(n)),
        }
    }

    pub fn min_poly(&self) -> &IntPoly {
        &self.min_poly
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Rational value when the carrier polynomial is linear.
    pub fn exact_rational(&self) -> Option<BigRational> {
        (self.min_poly.deg() == 1).then(|| BigRational::new(-self.min_poly.coeff(0), self.min_poly.coeff(1)))
    }

    /// Bisects until `hi - lo <= width`.
    pub fn refine_to(&mut self, width: &BigRational) {
        if let Some(r) = self.exact_rational() {
            // keep a nondegenerate interval ending at the root
            if self.width() > *width {
                self.hi = r.clone();
                self.lo = r - width;
            }
            return;
        }
        let seq = SturmSequence::new(&self.min_poly);
        let two = BigRational::from_integer(2.into());
        while self.width() > *width {
            let mid = (&self.lo + &self.hi) / &two;
            if seq.count_between(&self.lo, &mid) == 1 {
                self.hi = mid;
            } else {
                self.lo = mid;
            }
        }
    }

    pub fn refined(mut self, width: &BigRational) -> Self {
        self.refine_to(width);
        self
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.lo < *x && *x <= self.hi
    }

    /// Compares with a rational, refining as needed.
    pub fn cmp_rational(&self, x: &BigRational) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let s = self.min_poly.sign_at(x);
        if s == 0 && self.contains(x) {
            return Ordering::Equal;
        }
        let seq = SturmSequence::new(&self.min_poly);
        if *x <= self.lo {
            return Ordering::Greater;
        }
        if *x >= self.hi {
            return Ordering::Less;
        }
        // root in (lo, x] or (x, hi]
        if seq.count_between(&self.lo, x) == 1 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Nearest double, from a copy refined below the double spacing.
    pub fn to_f64(&self) -> f64 {
        let scale = self.lo.abs().max(self.hi.abs()) + BigRational::one();
        let width = scale / BigRational::from_integer(BigInt::one() << 60u32);
        let r = if self.width() > width { self.clone().refined(&width) } else { self.clone() };
        let mid = (&r.lo + &r.hi) / BigRational::from_integer(2.into());
        mid.to_f64().unwrap_or(f64::NAN)
    }

    /// Square of this number, isolated as a root of `p(√x)·p(-√x)`.
    pub fn square(&self) -> RealAlgebraic {
        if let Some(r) = self.exact_rational() {
            return RealAlgebraic::from_rational(&(&r * &r));
        }
        let p = &self.min_poly;
        let prod = p.mul(&p.negate_variable());
        let q = IntPoly::new(prod.coeffs().iter().step_by(2).cloned().collect());
        let two = BigRational::from_integer(2.into());
        let mut me = self.clone();
        loop {
            if !(me.lo.is_negative() && me.hi.is_positive()) {
                let (a, b) = (&me.lo * &me.lo, &me.hi * &me.hi);
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                // the square may sit on the closed end of the image interval
                let lo = lo - me.width();
                if let Some(sq) = RealAlgebraic::new(&q, lo, hi) {
                    return sq;
                }
            }
            let w = me.width() / &two;
            me.refine_to(&w);
        }
    }

    /// Exact equality of two isolated real algebraic numbers.
    pub fn same_number(&self, other: &RealAlgebraic) -> bool {
        let g = super::primitive_gcd(&self.min_poly, &other.min_poly);
        if g.is_constant() {
            return false;
        }
        let seq = SturmSequence::new(&g);
        if seq.count_between(&self.lo, &self.hi) != 1 || seq.count_between(&other.lo, &other.hi) != 1 {
            return false;
        }
        if self.hi < other.lo || other.hi < self.lo {
            return false;
        }
        let lo = std::cmp::min(&self.lo, &other.lo);
        let hi = std::cmp::max(&self.hi, &other.hi);
        seq.count_between(lo, hi) == 1
    }

    pub fn from_rational(r: &BigRational) -> Self {
        RealAlgebraic {
            min_poly: IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]),
            lo: r - BigRational::one(),
            hi: r.clone(),
        }
    }
}

impl fmt::Debug for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} in ({}, {}]", self.min_poly, self.lo, self.hi)
    }
}

/// Integer bound `B` with every real root in `(-B, B)`.
pub(crate) fn root_bound(p: &IntPoly) -> BigInt {
    let lc = p.leading().abs();
    let m = p.coeffs()[..p.deg()].iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero);
    // Cauchy: 1 + max|a_i/a_n|
    BigInt::one() + (&m + &lc - BigInt::one()) / &lc + BigInt::one()
}

/// All distinct real roots in increasing order, each in an isolating interval.
pub fn real_roots(p: &IntPoly) -> Vec<RealAlgebraic> {
    assert!(!p.is_zero());
    let s = squarefree_part(p);
    if s.is_constant() {
        return Vec::new();
    }
    let seq = SturmSequence::new(&s);
    let b = BigRational::from_integer(root_bound(&s));
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    let two = BigRational::from_integer(2.into());
    while let Some((lo, hi)) = stack.pop() {
        let c = seq.count_between(&lo, &hi);
        if c == 0 {
            continue;
        }
        if c == 1 {
            out.push(RealAlgebraic { min_poly: s.clone(), lo, hi });
            continue;
        }
        let mid = (&lo + &hi) / &two;
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Largest real root, if any.
pub fn largest_real_root(p: &IntPoly) -> Option<RealAlgebraic> {
    assert!(!p.is_zero());
    let s = squarefree_part(p);
    if s.is_constant() {
        return None;
    }
    let seq = SturmSequence::new(&s);
    let b = BigRational::from_integer(root_bound(&s));
    if seq.count(&Endpoint::NegInf, &Endpoint::PosInf) == 0 {
        return None;
    }
    let two = BigRational::from_integer(2.into());
    let (mut lo, mut hi) = (-b.clone(), b);
    // (lo, hi] always contains the largest root
    loop {
        if seq.count_between(&lo, &hi) == 1 {
            return Some(RealAlgebraic { min_poly: s, lo, hi });
        }
        let mid = (&lo + &hi) / &two;
        if seq.count_between(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::lehmer;
    use crate::linalg::rat;

    #[test]
    fn isolates_sqrt2() {
        let roots = real_roots(&IntPoly::from_i64(&[-2, 0, 1]));
        assert_eq!(roots.len(), 2);
        let mut r = roots[1].clone();
        r.refine_to(&rat(1, 1_000_000));
        assert!((r.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-6);
    }

    #[test]
    fn lehmer_number() {
        let r = largest_real_root(&lehmer()).unwrap().refined(&rat(1, 1_000_000));
        assert!((r.to_f64() - 1.176_280_818_26).abs() < 1e-6);
    }

    #[test]
    fn rational_roots_stay_exact() {
        let r = largest_real_root(&IntPoly::from_i64(&[-1, 1]).pow(3)).unwrap();
        assert_eq!(r.exact_rational(), Some(rat(1, 1)));
        let r = r.refined(&rat(1, 1000));
        assert!(r.contains(&rat(1, 1)));
    }

    #[test]
    fn square_of_root() {
        let golden = largest_real_root(&IntPoly::from_i64(&[1, -3, 1])).unwrap();
        let sq = golden.square().refined(&rat(1, 1_000_000));
        let phi2: f64 = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((sq.to_f64() - phi2 * phi2).abs() < 1e-5);
        let neg = real_roots(&IntPoly::from_i64(&[-2, 0, 1]))[0].square().refined(&rat(1, 1000));
        assert!((neg.to_f64() - 2.0).abs() < 1e-3);
    }

    #[test]
    fn compare_with_rational() {
        use std::cmp::Ordering;
        let r = largest_real_root(&IntPoly::from_i64(&[-2, 0, 1])).unwrap();
        assert_eq!(r.cmp_rational(&rat(7, 5)), Ordering::Greater);
        assert_eq!(r.cmp_rational(&rat(3, 2)), Ordering::Less);
        let one = RealAlgebraic::from_integer(1);
        assert_eq!(one.cmp_rational(&rat(1, 1)), Ordering::Equal);
    }
}
