use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntPoly;

/// Primitive gcd over the rationals, via the subresultant remainder sequence.
/// The result has content 1 and positive leading coefficient; `gcd(0, 0) = 0`.
pub fn primitive_gcd(p: &IntPoly, q: &IntPoly) -> IntPoly {
    if p.is_zero() {
        return q.primitive_part();
    }
    if q.is_zero() {
        return p.primitive_part();
    }
    let (mut a, mut b) = if p.deg() >= q.deg() {
        (p.primitive_part(), q.primitive_part())
    } else {
        (q.primitive_part(), p.primitive_part())
    };
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = a.deg() - b.deg();
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return b.primitive_part();
        }
        if r.is_constant() {
            return IntPoly::one();
        }
        a = b;
        let divisor = &g * num_traits::pow(h.clone(), delta);
        b = r.div_exact(&IntPoly::constant(divisor)).expect("subresultant division is exact");
        g = a.leading();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => {
                let num = num_traits::pow(g.clone(), delta);
                let den = num_traits::pow(h.clone(), delta - 1);
                let q = &num / &den;
                debug_assert!((&num % &den).is_zero());
                q
            }
        };
    }
}

/// Squarefree part `p / gcd(p, p')`, primitive with positive leading coefficient.
pub fn squarefree_part(p: &IntPoly) -> IntPoly {
    if p.is_zero() {
        return IntPoly::zero();
    }
    if p.is_constant() {
        return IntPoly::one();
    }
    let g = primitive_gcd(p, &p.derivative());
    p.primitive_part().div_exact(&g).expect("gcd divides its argument").primitive_part()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn gcd_examples() {
        let xm1 = poly(&[-1, 1]);
        let a = xm1.mul(&poly(&[1, 0, 1]));
        let b = xm1.mul(&poly(&[2, 1]));
        assert_eq!(primitive_gcd(&a, &b), xm1);

        let mut x12 = vec![0i64; 13];
        x12[0] = -1;
        x12[12] = 1;
        assert_eq!(primitive_gcd(&super::super::lehmer(), &poly(&x12)), IntPoly::one());

        let q = poly(&[1, -3, 1]);
        assert_eq!(primitive_gcd(&q.mul(&q), &q), q);
    }

    #[test]
    fn gcd_with_contents_and_signs() {
        let a = poly(&[-6, 6]); // 6(x-1)
        let b = poly(&[4, 0, -4]); // -4(x-1)(x+1)
        assert_eq!(primitive_gcd(&a, &b), poly(&[-1, 1]));
        assert_eq!(primitive_gcd(&IntPoly::zero(), &b), poly(&[-1, 0, 1]));
    }

    #[test]
    fn gcd_large_degree_gap() {
        // (x^2+1)(x-2)^3 and (x^2+1)(x+5)
        let base = poly(&[1, 0, 1]);
        let a = base.mul(&poly(&[-2, 1]).pow(3));
        let b = base.mul(&poly(&[5, 1]));
        assert_eq!(primitive_gcd(&a, &b), base);
    }

    #[test]
    fn squarefree() {
        let p = poly(&[-1, 1]).pow(3).mul(&poly(&[1, 0, 1]).pow(2));
        assert_eq!(squarefree_part(&p), poly(&[-1, 1]).mul(&poly(&[1, 0, 1])));
    }
}
