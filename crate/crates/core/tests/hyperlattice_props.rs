use endodyn::abelian::Entropy;
use endodyn::corpus::{lattice_grams, lattice_suite, reflection_products};
use endodyn::hyperlattice::{
    entropy_class, finite_order_test, has_fixed_positive_cone_vector, null_fixed_witness, order_by_powers,
    positive_entropy_witness, verify_isometry, LatticeError, DEFAULT_MAX_DEGREE,
};
use nalgebra::DMatrix;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

/// Spectral radius from floating eigenvalues.
fn float_radius(m: &endodyn::linalg::IntMatrix) -> f64 {
    let f = DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].to_f64().unwrap());
    f.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn entropy_iff_no_fixed_positive_vector() {
    let corpus = lattice_suite(17, 50);
    let mut positive = 0;
    for iso in &corpus {
        let r = entropy_class(iso);
        assert_eq!(r.entropy == Entropy::Positive, !has_fixed_positive_cone_vector(iso), "{:?}", iso.matrix());
        let fr = float_radius(iso.matrix());
        // unipotent Jordan blocks blur floating eigenvalues by about eps^(1/3)
        assert_eq!(r.entropy == Entropy::Positive, fr > 1.0 + 1e-3, "{:?}", iso.matrix());
        if r.entropy == Entropy::Positive {
            positive += 1;
            assert!((r.spectral_radius.to_f64() - fr).abs() < 1e-6 * fr);
            let w = positive_entropy_witness(iso, DEFAULT_MAX_DEGREE).unwrap();
            w.verify(iso).unwrap();
        } else {
            let w = null_fixed_witness(iso).unwrap();
            assert!(!w.q_value.is_negative());
            assert!(iso.matrix().pow(w.power).mul_vec(&w.vector) == w.vector);
        }
    }
    assert!(positive > 0 && positive < corpus.len(), "corpus should mix both classes: {positive}");
}

#[test]
fn finite_order_matches_powers() {
    for iso in lattice_suite(23, 50) {
        let brute = order_by_powers(&iso, 24);
        let exact = finite_order_test(&iso);
        if brute.is_some() {
            assert_eq!(exact, brute);
        }
        if let Some(k) = exact {
            assert!(iso.matrix().pow(k).is_identity());
            assert!((1..k).all(|j| !iso.matrix().pow(j).is_identity()));
        }
    }
}

#[test]
fn degree_gate_is_configurable() {
    let l = &lattice_grams()[1];
    let pell = verify_isometry(l, endodyn::linalg::int_matrix(&[&[3, 4], &[2, 3]])).unwrap();
    assert!(positive_entropy_witness(&pell, 2).is_ok());
    assert_eq!(positive_entropy_witness(&pell, 1).unwrap_err(), LatticeError::FieldTooLarge { degree: 2, limit: 1 });
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn entropy_invariant_under_powers(seed in any::<u64>(), gram in 0usize..9, k in 1u64..=4) {
        let l = &lattice_grams()[gram];
        let iso = reflection_products(seed, 1, l).pop().unwrap();
        prop_assert_eq!(entropy_class(&iso.power(k)).entropy, entropy_class(&iso).entropy);
    }

    #[test]
    fn pairings_positive(seed in any::<u64>(), gram in 0usize..9) {
        let l = &lattice_grams()[gram];
        let iso = reflection_products(seed, 1, l).pop().unwrap();
        if entropy_class(&iso).entropy == Entropy::Positive {
            let w = positive_entropy_witness(&iso, DEFAULT_MAX_DEGREE).unwrap();
            prop_assert!(w.field.sign(&w.q12) > 0);
            prop_assert!(w.field.sign(&w.q_sum) > 0);
        }
    }
}
