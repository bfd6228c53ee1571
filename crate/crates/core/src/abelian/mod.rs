//! Endomorphisms of `Eⁿ` for a non-CM elliptic curve `E`, modeled by integer
//! matrices acting on `H¹(A, O_A)`.

mod nef;
mod radius;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactpoly::{
    char_poly, cyclotomic_divisors, indices_with_phi_at_most, is_cyclotomic_product, unit_circle_root_count, IntPoly,
};
use crate::linalg::{det_bareiss, elementary_divisors, kronecker, DimensionError, IntMatrix, Matrix};

pub use nef::{
    amplified_certificate, fixed_nef_witness, is_positive_semidefinite, pcd_nef_witness, symmetric_fixed_space,
    AlgebraicNefWitness, AmplifiedCertificate, NefWitness,
};
pub use radius::{largest_abs_real_root, radius_width, spectral_radius_of, AlgebraicRadius, SpectralRadius};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error(transparent)]
    Dimension(#[from] DimensionError),
    #[error("det(M) = 0: not surjective")]
    Singular,
    #[error("fixed-point counting for f = g + a depends on a choice of identity; strip the translation first")]
    TranslationUnsupported,
    #[error("power and torsion order must be positive")]
    ZeroArgument,
    #[error("no verified fixed nef witness found")]
    SearchFailed,
}

/// `f(x) = Mx`, optionally followed by a translation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EndoSpec {
    matrix: IntMatrix,
    has_translation: bool,
}

impl EndoSpec {
    pub fn new(matrix: IntMatrix, has_translation: bool) -> Result<Self, AbelianError> {
        matrix.require_square()?;
        if det_bareiss(&matrix).is_zero() {
            return Err(AbelianError::Singular);
        }
        Ok(EndoSpec { matrix, has_translation })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self, AbelianError> {
        let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())?;
        EndoSpec::new(m, false)
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn has_translation(&self) -> bool {
        self.has_translation
    }

    pub fn with_translation(&self, t: bool) -> EndoSpec {
        EndoSpec { matrix: self.matrix.clone(), has_translation: t }
    }

    /// The dual endomorphism, modeled by the transpose.
    pub fn dual(&self) -> EndoSpec {
        EndoSpec { matrix: self.matrix.transpose(), has_translation: self.has_translation }
    }

    pub fn power(&self, k: u64) -> EndoSpec {
        EndoSpec { matrix: self.matrix.pow(k), has_translation: self.has_translation }
    }

    /// `f × g` on `Eⁿ × Eᵐ`.
    pub fn product(&self, other: &EndoSpec) -> EndoSpec {
        EndoSpec {
            matrix: self.matrix.direct_sum(&other.matrix),
            has_translation: self.has_translation || other.has_translation,
        }
    }

    pub fn char_poly(&self) -> IntPoly {
        char_poly(&self.matrix).expect("validated square matrix")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entropy {
    Null,
    Positive,
}

impl fmt::Display for Entropy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Entropy::Null => "null",
            Entropy::Positive => "positive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Witnesses {
    pub fixed_nef: Option<NefWitness>,
    pub integral_fixed_nef: Option<IntMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynReport {
    pub n: usize,
    pub char_poly: IntPoly,
    pub degree: BigInt,
    pub amplified: bool,
    pub pcd: bool,
    pub entropy: Entropy,
    pub spectral_radius: SpectralRadius,
    pub dense_orbit: bool,
    pub witnesses: Witnesses,
}

impl DynReport {
    /// Structural implications every report satisfies.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.amplified && !self.pcd {
            return Err("amplified but not PCD".into());
        }
        if self.pcd && self.n >= 1 && self.entropy != Entropy::Positive {
            return Err("PCD with null entropy".into());
        }
        if self.entropy == Entropy::Null && !self.degree.is_one() {
            return Err("null entropy with degree != 1".into());
        }
        if self.dense_orbit != self.pcd {
            return Err("dense orbit flag differs from PCD".into());
        }
        if (self.entropy == Entropy::Positive) != self.spectral_radius.n1.exceeds_one() {
            return Err("entropy disagrees with the spectral radius".into());
        }
        if !self.spectral_radius.n1.is_isolated() {
            return Err("spectral radius interval is not isolating".into());
        }
        Ok(())
    }

    /// The verdict fields only, for invariance comparisons.
    pub fn verdict(&self) -> (bool, bool, Entropy, BigInt) {
        (self.amplified, self.pcd, self.entropy, self.degree.clone())
    }
}

pub fn degree(spec: &EndoSpec) -> BigInt {
    let d = det_bareiss(&spec.matrix);
    &d * &d
}

/// Eigenvalue-criterion classification. Witnesses are attached separately.
pub fn classify(spec: &EndoSpec) -> DynReport {
    let p = spec.char_poly();
    let amplified = unit_circle_root_count(&p) == 0;
    let pcd = cyclotomic_divisors(&p).is_empty();
    let null = is_cyclotomic_product(&p).expect("characteristic polynomials are monic");
    let entropy = if null { Entropy::Null } else { Entropy::Positive };
    let report = DynReport {
        n: spec.n(),
        degree: degree(spec),
        amplified,
        pcd,
        entropy,
        spectral_radius: spectral_radius_of(&p),
        dense_orbit: pcd,
        witnesses: Witnesses::default(),
        char_poly: p,
    };
    if let Err(e) = report.check_invariants() {
        panic!("classification invariant violated: {e}");
    }
    report
}

/// Classification with both nef witnesses attached.
pub fn classify_with_witnesses(spec: &EndoSpec) -> Result<DynReport, AbelianError> {
    let mut report = classify(spec);
    report.witnesses.integral_fixed_nef = pcd_nef_witness(spec);
    report.witnesses.fixed_nef = fixed_nef_witness(spec)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FixCount {
    Finite(BigInt),
    Infinite,
}

fn check_args(spec: &EndoSpec, m: u64) -> Result<(), AbelianError> {
    if spec.has_translation {
        return Err(AbelianError::TranslationUnsupported);
    }
    if m == 0 {
        return Err(AbelianError::ZeroArgument);
    }
    Ok(())
}

/// `Mᵐ − I`.
fn period_matrix(spec: &EndoSpec, m: u64) -> IntMatrix {
    spec.matrix.pow(m).minus_identity()
}

/// `#Fix(fᵐ) = det(Mᵐ − I)²`, or infinite when the determinant vanishes.
pub fn fix_count(spec: &EndoSpec, m: u64) -> Result<FixCount, AbelianError> {
    check_args(spec, m)?;
    let d = det_bareiss(&period_matrix(spec, m));
    Ok(if d.is_zero() { FixCount::Infinite } else { FixCount::Finite(&d * &d) })
}

/// Fixed points of `fᵐ` in `A[N]`, from the Smith form of `Mᵐ − I`.
pub fn torsion_fixed_count(spec: &EndoSpec, m: u64, n: &BigInt) -> Result<BigInt, AbelianError> {
    check_args(spec, m)?;
    if !n.is_positive() {
        return Err(AbelianError::ZeroArgument);
    }
    let k: BigInt = elementary_divisors(&period_matrix(spec, m)).iter().map(|d| d.gcd(n)).product();
    Ok(&k * &k)
}

/// Largest `N^{2n}` the enumeration oracle accepts.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000_000;

/// Fixed points of `fᵐ` in `A[N] ≅ (ℤ/N)^{2n}` by enumeration, with `f` acting
/// by `M ⊗ I₂`. `None` when the group is too large.
pub fn torsion_fixed_count_brute(spec: &EndoSpec, m: u64, n: u64) -> Result<Option<u64>, AbelianError> {
    check_args(spec, m)?;
    if n == 0 {
        return Err(AbelianError::ZeroArgument);
    }
    let dim = 2 * spec.n();
    let size = (n as u128).checked_pow(dim as u32);
    if size.is_none_or(|s| s > BRUTE_FORCE_LIMIT as u128) {
        return Ok(None);
    }
    let size = size.unwrap() as u64;
    let a = kronecker(&period_matrix(spec, m), &Matrix::<BigInt>::identity(2));
    let nb = BigInt::from(n);
    let rows: Vec<Vec<i64>> =
        (0..dim).map(|i| (0..dim).map(|j| a[(i, j)].mod_floor(&nb).to_i64().unwrap()).collect()).collect();
    let ni = n as i64;
    let mut x = vec![0i64; dim];
    let mut count = 0u64;
    for idx in 0..size {
        let mut r = idx;
        for v in x.iter_mut() {
            *v = (r % n) as i64;
            r /= n;
        }
        if rows.iter().all(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum::<i64>() % ni == 0) {
            count += 1;
        }
    }
    Ok(Some(count))
}

/// PCD decided from periods: `det(M^d − I) ≠ 0` for every `d` with `φ(d) ≤ n`.
pub fn is_pcd_via_periods(spec: &EndoSpec) -> bool {
    indices_with_phi_at_most(spec.n()).into_iter().all(|d| !det_bareiss(&spec.matrix.pow(d).minus_identity()).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{companion, lehmer};

    fn lehmer_spec() -> EndoSpec {
        EndoSpec::new(companion(&lehmer()).unwrap(), false).unwrap()
    }

    #[test]
    fn lehmer_classification() {
        let r = classify(&lehmer_spec());
        assert!(r.pcd && !r.amplified && r.dense_orbit);
        assert_eq!(r.degree, BigInt::one());
        assert_eq!(r.entropy, Entropy::Positive);
    }

    #[test]
    fn small_classifications() {
        let r = classify(&EndoSpec::from_rows(&[&[1, 0], &[0, 1]]).unwrap());
        assert_eq!(r.verdict(), (false, false, Entropy::Null, BigInt::one()));
        let r = classify(&EndoSpec::from_rows(&[&[2, 1], &[1, 1]]).unwrap());
        assert_eq!(r.verdict(), (true, true, Entropy::Positive, BigInt::one()));
        let r = classify(&EndoSpec::from_rows(&[&[0, -1], &[1, 0]]).unwrap());
        assert_eq!(r.verdict(), (false, false, Entropy::Null, BigInt::one()));
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(EndoSpec::from_rows(&[&[1, 2], &[2, 4]]), Err(AbelianError::Singular));
        assert!(EndoSpec::from_rows(&[&[1, 2]]).is_err());
        assert_eq!(AbelianError::Singular.to_string(), "det(M) = 0: not surjective");
    }

    #[test]
    fn degrees() {
        assert_eq!(degree(&EndoSpec::from_rows(&[&[2]]).unwrap()), BigInt::from(4));
        assert_eq!(degree(&EndoSpec::from_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap()), BigInt::one());
        assert_eq!(degree(&lehmer_spec()), BigInt::one());
    }

    #[test]
    fn fixed_point_counts() {
        let rot = EndoSpec::from_rows(&[&[0, -1], &[1, 0]]).unwrap();
        assert_eq!(fix_count(&rot, 1).unwrap(), FixCount::Finite(BigInt::from(4)));
        assert_eq!(torsion_fixed_count_brute(&rot, 1, 2).unwrap(), Some(4));
        assert_eq!(fix_count(&rot, 4).unwrap(), FixCount::Infinite);
        let id = EndoSpec::from_rows(&[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(fix_count(&id, 3).unwrap(), FixCount::Infinite);
        let cat = EndoSpec::from_rows(&[&[2, 1], &[1, 1]]).unwrap();
        assert_eq!(fix_count(&cat, 1).unwrap(), FixCount::Finite(BigInt::one()));
        assert_eq!(fix_count(&cat.with_translation(true), 1), Err(AbelianError::TranslationUnsupported));
    }

    #[test]
    fn torsion_counts() {
        let rot = EndoSpec::from_rows(&[&[0, -1], &[1, 0]]).unwrap();
        assert_eq!(torsion_fixed_count(&rot, 1, &BigInt::from(2)).unwrap(), BigInt::from(4));
        let two = EndoSpec::from_rows(&[&[2]]).unwrap();
        assert_eq!(torsion_fixed_count(&two, 1, &BigInt::from(5)).unwrap(), BigInt::one());
        assert_eq!(torsion_fixed_count_brute(&two, 1, 5).unwrap(), Some(1));
        let one = EndoSpec::from_rows(&[&[1]]).unwrap();
        assert_eq!(torsion_fixed_count(&one, 1, &BigInt::from(3)).unwrap(), BigInt::from(9));
        assert_eq!(torsion_fixed_count_brute(&one, 1, 3).unwrap(), Some(9));
        assert_eq!(torsion_fixed_count_brute(&lehmer_spec(), 1, 3).unwrap(), None);
    }

    #[test]
    fn periods() {
        assert!(is_pcd_via_periods(&lehmer_spec()));
        assert!(!is_pcd_via_periods(&EndoSpec::from_rows(&[&[0, -1], &[1, 0]]).unwrap()));
        assert!(is_pcd_via_periods(&EndoSpec::from_rows(&[&[2, 1], &[1, 1]]).unwrap()));
    }

    #[test]
    fn translation_does_not_matter() {
        let s = lehmer_spec();
        assert_eq!(classify(&s), classify(&s.with_translation(true)));
    }
}
