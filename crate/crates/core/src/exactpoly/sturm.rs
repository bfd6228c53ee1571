use num_rational::BigRational;
use num_traits::Signed;

use super::{squarefree_part, IntPoly};

/// Point of the extended real line at which sign variations are counted.
#[derive(Debug, Clone)]
pub enum Endpoint {
    NegInf,
    At(BigRational),
    PosInf,
}

/// Sturm sequence of the squarefree part of a polynomial.
///
/// With zeros dropped from the sign sequence, `V(a) - V(b)` is the number of
/// distinct real roots in the half-open interval `(a, b]`.
#[derive(Debug, Clone)]
pub struct SturmSequence {
    chain: Vec<IntPoly>,
}

impl SturmSequence {
    pub fn new(p: &IntPoly) -> Self {
        assert!(!p.is_zero(), "Sturm sequence of the zero polynomial");
        let s = squarefree_part(p);
        let mut chain = vec![s.clone()];
        if s.is_constant() {
            return SturmSequence { chain };
        }
        chain.push(s.derivative().primitive_part());
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            if b.is_constant() {
                break;
            }
            let mut r = a.pseudo_rem(b);
            if r.is_zero() {
                break;
            }
            // prem multiplies by lc(b)^(da-db+1); undo a negative factor.
            let delta = a.deg() - b.deg() + 1;
            let flip = b.leading().is_negative() && delta % 2 == 1;
            if !flip {
                r = r.neg();
            }
            let c = r.content();
            let r = r.div_exact(&IntPoly::constant(c)).expect("content divides");
            chain.push(r);
        }
        SturmSequence { chain }
    }

    pub fn squarefree(&self) -> &IntPoly {
        &self.chain[0]
    }

    pub fn variations(&self, at: &Endpoint) -> usize {
        let mut prev = 0i8;
        let mut count = 0;
        for p in &self.chain {
            let s = match at {
                Endpoint::PosInf => super::sign_of(&p.leading()),
                Endpoint::NegInf => {
                    let s = super::sign_of(&p.leading());
                    if p.deg() % 2 == 1 {
                        -s
                    } else {
                        s
                    }
                }
                Endpoint::At(x) => p.sign_at(x),
            };
            if s == 0 {
                continue;
            }
            if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
        count
    }

    /// Distinct real roots in `(a, b]`.
    pub fn count(&self, a: &Endpoint, b: &Endpoint) -> usize {
        let va = self.variations(a);
        let vb = self.variations(b);
        va.saturating_sub(vb)
    }

    pub fn count_between(&self, a: &BigRational, b: &BigRational) -> usize {
        assert!(a < b, "empty interval");
        self.count(&Endpoint::At(a.clone()), &Endpoint::At(b.clone()))
    }

    pub fn count_all(&self) -> usize {
        self.count(&Endpoint::NegInf, &Endpoint::PosInf)
    }
}

/// Number of distinct real roots of `p` in `(a, b]`. Roots at `b` are counted
/// and roots at `a` are not; the endpoints need no perturbation.
pub fn sturm_count(p: &IntPoly, a: &BigRational, b: &BigRational) -> usize {
    SturmSequence::new(p).count_between(a, b)
}

/// Number of distinct real roots of `p` strictly greater than `a`.
pub fn sturm_count_above(p: &IntPoly, a: &BigRational) -> usize {
    SturmSequence::new(p).count(&Endpoint::At(a.clone()), &Endpoint::PosInf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::lehmer;
    use crate::linalg::rat;

    #[test]
    fn spec_examples() {
        assert_eq!(sturm_count(&IntPoly::from_i64(&[-2, 0, 1]), &rat(0, 1), &rat(2, 1)), 1);
        assert_eq!(sturm_count(&lehmer(), &rat(1, 1), &rat(2, 1)), 1);
        let cubic = IntPoly::from_i64(&[-1, 1]).mul(&IntPoly::from_i64(&[-2, 1])).mul(&IntPoly::from_i64(&[-3, 1]));
        assert_eq!(sturm_count(&cubic, &rat(3, 2), &rat(7, 2)), 2);
    }

    #[test]
    fn half_open_convention() {
        let cubic = IntPoly::from_i64(&[-1, 1]).mul(&IntPoly::from_i64(&[-2, 1])).mul(&IntPoly::from_i64(&[-3, 1]));
        // roots at both endpoints: only the right one counts
        assert_eq!(sturm_count(&cubic, &rat(1, 1), &rat(2, 1)), 1);
        assert_eq!(sturm_count(&cubic, &rat(1, 1), &rat(3, 1)), 2);
        assert_eq!(sturm_count(&cubic, &rat(0, 1), &rat(1, 1)), 1);
        assert_eq!(sturm_count(&cubic, &rat(2, 1), &rat(5, 2)), 0);
    }

    #[test]
    fn multiplicities_are_ignored() {
        let p = IntPoly::from_i64(&[-1, 1]).pow(4).mul(&IntPoly::from_i64(&[1, 1]));
        assert_eq!(SturmSequence::new(&p).count_all(), 2);
        assert_eq!(sturm_count_above(&p, &rat(0, 1)), 1);
    }

    #[test]
    fn lehmer_has_two_real_roots() {
        let s = SturmSequence::new(&lehmer());
        assert_eq!(s.count_all(), 2);
        assert_eq!(s.count(&Endpoint::At(rat(0, 1)), &Endpoint::At(rat(1, 1))), 1);
    }
}
