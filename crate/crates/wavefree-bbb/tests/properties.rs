use lattice_core::{HermitianGenerator, PolarField, C64};
use proptest::prelude::*;
use wavefree_bbb::{
    choose_sign, init_from_polar, step, LinkGeometry, SignDecision, StepScheme, RADICAND_TOL,
};

fn ring(n: usize) -> HermitianGenerator {
    let mut entries = vec![];
    for k in 0..n {
        entries.push(((k, k), C64::new(0.4, 0.0)));
        entries.push(((k, (k + 1) % n), C64::new(-0.5, 0.1)));
    }
    HermitianGenerator::from_entries(n, entries).unwrap()
}

fn polar_state(dim: usize) -> impl Strategy<Value = PolarField> {
    prop::collection::vec((0.1f64..1.0, -3.0f64..3.0), dim).prop_map(|v| {
        let norm = v.iter().map(|(r, _)| r * r).sum::<f64>().sqrt();
        let (modulus, phase) = v.into_iter().map(|(r, s)| (r / norm, s)).unzip();
        PolarField::new(modulus, phase).unwrap()
    })
}

proptest! {
    #[test]
    fn initial_state_sits_on_the_physical_manifold(polar in polar_state(5)) {
        let geom = LinkGeometry::new(&ring(5));
        let state = init_from_polar(&polar, &geom).unwrap();
        for idx in 0..geom.links().len() {
            prop_assert!(state.radicand(&geom, idx) >= -RADICAND_TOL);
            let theta = state.theta(&geom, idx).unwrap();
            prop_assert!((theta.norm() - 1.0).abs() < 1e-9, "|θ| = {}", theta.norm());
        }
    }

    #[test]
    fn evolution_preserves_normalization_and_manifold(
        polar in polar_state(5),
        scheme in prop_oneof![Just(StepScheme::Explicit), Just(StepScheme::Midpoint)],
    ) {
        let geom = LinkGeometry::new(&ring(5));
        let mut state = init_from_polar(&polar, &geom).unwrap();
        for _ in 0..50 {
            step(&mut state, &geom, 1e-3, scheme).unwrap();
        }
        let total: f64 = state.probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9, "ΣP = {total}");
        for (idx, &p) in state.probabilities().iter().enumerate() {
            prop_assert!(p >= 0.0, "P_{idx} = {p}");
        }
        for idx in 0..geom.links().len() {
            prop_assert!(state.radicand(&geom, idx) >= -RADICAND_TOL);
            if !state.is_frozen(&geom, idx) {
                let theta = state.theta(&geom, idx).unwrap();
                prop_assert!((theta.norm() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn sign_choice_flips_only_when_strictly_closer(
        a in -3.0f64..3.0, k in -3.0f64..3.0,
    ) {
        let pred = C64::from_polar(1.0, a);
        let keep = C64::from_polar(1.0, k);
        let flip = -keep;
        let decision = choose_sign(pred, keep, flip);
        let d_keep = (pred - keep).norm();
        let d_flip = (pred - flip).norm();
        if d_flip < d_keep {
            prop_assert_eq!(decision, SignDecision::Flip);
        } else {
            prop_assert_eq!(decision, SignDecision::Keep);
        }
    }
}
