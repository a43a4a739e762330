use lattice_core::{
    current, polar_compose, polar_decompose, probability, ComplexAmplitudeField,
    HermitianGenerator, C64,
};
use proptest::prelude::*;

fn normalized_state(dim: usize) -> impl Strategy<Value = ComplexAmplitudeField> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter("nonzero", |v| {
            v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-6
        })
        .prop_map(|v| {
            ComplexAmplitudeField::normalized(
                v.into_iter().map(|(a, b)| C64::new(a, b)).collect(),
            )
            .unwrap()
        })
}

fn ring(n: usize) -> HermitianGenerator {
    let mut entries = vec![];
    for k in 0..n {
        entries.push(((k, k), C64::new(1.0, 0.0)));
        entries.push(((k, (k + 1) % n), C64::new(-0.5, 0.1)));
    }
    HermitianGenerator::from_entries(n, entries).unwrap()
}

proptest! {
    #[test]
    fn polar_round_trip(psi in normalized_state(6)) {
        prop_assume!(psi.amps().iter().all(|a| a.norm() > 1e-6));
        let back = polar_compose(&polar_decompose(&psi)).unwrap();
        for (a, b) in psi.amps().iter().zip(back.amps()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn probability_sums_to_one(psi in normalized_state(6)) {
        let p = probability(&psi);
        prop_assert!((p.values().iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn current_is_exactly_antisymmetric(psi in normalized_state(6)) {
        let j = current(&psi, &ring(6)).unwrap();
        for n in 0..6 {
            for m in 0..6 {
                prop_assert_eq!(j.get(n, m), -j.get(m, n));
            }
        }
    }
}
