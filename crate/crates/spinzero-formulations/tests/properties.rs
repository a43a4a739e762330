use proptest::prelude::*;
use spinzero_formulations::{
    estimate_density, f2_step, f3_step, DensityEstimator, GridField, ParticleEnsemble,
};

fn smooth_grid(n: usize) -> impl Strategy<Value = GridField> {
    (
        prop::collection::vec(0.5f64..1.5, 4),
        prop::collection::vec(-0.2f64..0.2, 4),
    )
        .prop_map(move |(amps, vamps)| {
            let mut p: Vec<f64> = (0..n)
                .map(|k| {
                    let x = k as f64 / n as f64 * std::f64::consts::TAU;
                    1.0 + amps
                        .iter()
                        .enumerate()
                        .map(|(j, c)| 0.1 * c * ((j + 1) as f64 * x).cos())
                        .sum::<f64>()
                })
                .collect();
            let total: f64 = p.iter().sum();
            for pk in &mut p {
                *pk /= total;
            }
            let v = (0..n)
                .map(|k| {
                    let x = k as f64 / n as f64 * std::f64::consts::TAU;
                    vamps
                        .iter()
                        .enumerate()
                        .map(|(j, c)| c * ((j + 1) as f64 * x).sin())
                        .sum()
                })
                .collect();
            GridField::new(p, v, 1.0).unwrap()
        })
}

proptest! {
    #[test]
    fn flux_form_update_conserves_mass_and_positivity(grid in smooth_grid(32)) {
        let mut g = grid;
        let potential = vec![0.0; 32];
        for _ in 0..20 {
            f3_step(&mut g, &potential, 1.0, 1e-2).unwrap();
        }
        let total: f64 = g.probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-13, "ΣP = {total}");
        prop_assert!(g.probabilities().iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn density_estimates_are_normalized(
        x in prop::collection::vec(0.0f64..32.0, 1..200),
        est in prop_oneof![
            Just(DensityEstimator::Histogram),
            Just(DensityEstimator::LinearCloud),
            Just(DensityEstimator::Gaussian { bandwidth: 1.0 }),
        ],
    ) {
        let m = x.len();
        let ens = ParticleEnsemble::new(x, vec![0.0; m], 1.0, 1.0, 32).unwrap();
        let p = estimate_density(&ens, est).unwrap();
        let total: f64 = p.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12, "Σ = {total}");
        prop_assert!(p.iter().all(|&pk| pk >= 0.0));
    }

    #[test]
    fn cloud_ensemble_step_agrees_with_flux_step(grid in smooth_grid(32)) {
        let potential: Vec<f64> = (0..32).map(|k| 0.05 * (k as f64 * 0.4).cos()).collect();
        let mut g = grid.clone();
        let mut ens = ParticleEnsemble::from_grid(&grid, 1.0).unwrap();
        f3_step(&mut g, &potential, 1.0, 0.5).unwrap();
        let (density, _) = f2_step(&mut ens, &potential, 0.5, DensityEstimator::LinearCloud).unwrap();
        for (x, y) in density.iter().zip(g.probabilities()) {
            prop_assert!((x - y).abs() < 1e-13, "{x} vs {y}");
        }
        for (x, y) in ens.velocities().iter().zip(g.velocities()) {
            prop_assert!((x - y).abs() < 1e-13, "v {x} vs {y}");
        }
    }
}
