mod common;

use common::*;
use fermion_ergotropy::covariance::text::{parse_cm_text, write_cm_text};
use fermion_ergotropy::covariance::{
    canonical_form, energy_cm, pfaffian_sign, standard_form_defect, standard_form_two_mode,
    CovarianceMatrix,
};
use fermion_ergotropy::gaussian::{apply, rotation_matrix, OrthogonalTransform};
use fermion_ergotropy::ModeSystem;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn reflection(dim: usize, axis: usize) -> OrthogonalTransform {
    let mut m = DMatrix::identity(dim, dim);
    m[(axis, axis)] = -1.0;
    OrthogonalTransform::new(m, 1e-12).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_values_are_paired_singular_values(seed in any::<u64>(), n in 1usize..=4) {
        let cm = random_cm(n, &mut rng(seed));
        let canon = canonical_form(&cm).unwrap();
        let sv = paired_singular_values(cm.entries());
        for (m, s) in canon.magnitudes().iter().zip(&sv) {
            prop_assert!((m - s).abs() < 1e-10);
        }
        let block = CovarianceMatrix::block_diagonal(&canon.values).unwrap();
        let out = apply(&canon.transform, &cm).unwrap();
        prop_assert!((out.entries() - block.entries()).amax() < 1e-10);
        prop_assert!(canon.transform.orthogonality_defect() < 1e-12);
    }

    #[test]
    fn pfaffian_sign_matches_expansion(seed in any::<u64>(), n in 1usize..=4) {
        let cm = random_cm(n, &mut rng(seed));
        let pf = pfaffian(cm.entries());
        prop_assume!(pf.abs() > 1e-8);
        prop_assert_eq!(pfaffian_sign(&cm).unwrap() as f64, pf.signum());
    }

    #[test]
    fn orientation_controls_pfaffian_sign(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let cm = random_cm(n, &mut r);
        prop_assume!(pfaffian(cm.entries()).abs() > 1e-8);
        let s = pfaffian_sign(&cm).unwrap();
        let q = random_orthogonal(2 * n, &mut r);
        let o = OrthogonalTransform::new(q, 1e-10).unwrap();
        let moved = apply(&o, &cm).unwrap();
        prop_assert_eq!(pfaffian_sign(&moved).unwrap(), s * o.det_sign());
        let flipped = apply(&reflection(2 * n, 0), &cm).unwrap();
        prop_assert_eq!(pfaffian_sign(&flipped).unwrap(), -s);
        let a = canonical_form(&cm).unwrap().magnitudes();
        let b = canonical_form(&moved).unwrap().magnitudes();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn local_rotations_keep_energy(seed in any::<u64>(), theta in -6.0f64..6.0, n in 1usize..=3) {
        let cm = random_cm(n, &mut rng(seed));
        let modes = ModeSystem::new((0..n).map(|k| 0.5 + k as f64).collect()).unwrap();
        let rot = rotation_matrix(theta, n - 1, n).unwrap();
        let e0 = energy_cm(&cm, &modes).unwrap();
        let e1 = energy_cm(&apply(&rot, &cm).unwrap(), &modes).unwrap();
        prop_assert!((e0 - e1).abs() < 1e-12);
    }

    #[test]
    fn standard_form_is_local_and_patterned(seed in any::<u64>()) {
        let cm = random_cm(2, &mut rng(seed));
        let modes = ModeSystem::new(vec![0.9, 1.4]).unwrap();
        let (o, sf) = standard_form_two_mode(&cm).unwrap();
        prop_assert!(standard_form_defect(&sf) < 1e-12);
        prop_assert!((apply(&o, &cm).unwrap().entries() - sf.entries()).amax() < 1e-12);
        let de = energy_cm(&cm, &modes).unwrap() - energy_cm(&sf, &modes).unwrap();
        prop_assert!(de.abs() < 1e-12);
    }

    #[test]
    fn text_round_trip_is_exact(seed in any::<u64>(), n in 1usize..=3) {
        let cm = random_cm(n, &mut rng(seed));
        let modes = ModeSystem::new((0..n).map(|k| 1.0 + 0.25 * k as f64).collect()).unwrap();
        let file = parse_cm_text(&write_cm_text(&cm, &modes)).unwrap();
        prop_assert_eq!(&file.entries, cm.entries());
        prop_assert_eq!(file.modes.omegas(), modes.omegas());
    }
}
