use lattice_core::rng::CounterRng;
use lattice_core::{ComplexAmplitudeField, HermitianGenerator, C64, HBAR};
use reference_solver::{
    bell_rates, jump_step, simulate_guided_ensemble, IntegrationScheme, SolverError,
    UnitaryIntegrator,
};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn spin_half(mu_b: f64) -> HermitianGenerator {
    HermitianGenerator::from_entries(2, [((0, 1), c(mu_b, 0.0))]).unwrap()
}

fn ring(n: usize, diag: f64, off: f64) -> HermitianGenerator {
    let mut entries = vec![];
    for k in 0..n {
        entries.push(((k, k), c(diag, 0.0)));
        entries.push(((k, (k + 1) % n), c(off, 0.0)));
    }
    HermitianGenerator::from_entries(n, entries).unwrap()
}

fn plane_wave(n: usize, q: i32) -> ComplexAmplitudeField {
    let amps = (0..n)
        .map(|k| C64::from_polar((n as f64).sqrt().recip(), 2.0 * PI * q as f64 * k as f64 / n as f64))
        .collect();
    ComplexAmplitudeField::new(amps).unwrap()
}

#[test]
fn null_generator_freezes_the_state() {
    let h = HermitianGenerator::from_entries(3, []).unwrap();
    let psi0 = ComplexAmplitudeField::normalized(vec![c(1.0, 0.0), c(0.5, 0.5), c(0.0, -1.0)])
        .unwrap();
    let integ = UnitaryIntegrator::new(h, 0.05, IntegrationScheme::ImplicitMidpoint).unwrap();
    let series = integ.evolve(&psi0, 50).unwrap();
    for psi in &series {
        for (a, b) in psi.amps().iter().zip(psi0.amps()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}

#[test]
fn rabi_oscillation_matches_closed_form() {
    // ψ₀ = (1,0), H = μBσ_x → P₂(t) = sin²(μB t/ħ).
    let mu_b = 1.0;
    let dt = 0.02;
    let integ = UnitaryIntegrator::new(spin_half(mu_b), dt, IntegrationScheme::ExactExponential)
        .unwrap();
    let psi0 = ComplexAmplitudeField::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let series = integ.evolve(&psi0, 500).unwrap();
    for (i, psi) in series.iter().enumerate() {
        let t = i as f64 * dt;
        let expected = (mu_b * t / HBAR).sin().powi(2);
        assert!((psi.amp(1).norm_sqr() - expected).abs() < 1e-12);
    }
}

#[test]
fn midpoint_agrees_with_exact_exponential_to_dt_cubed() {
    let h = spin_half(1.0);
    let psi0 = ComplexAmplitudeField::normalized(vec![c(0.8, 0.1), c(0.3, -0.4)]).unwrap();
    let mut errors = vec![];
    for &dt in &[0.04, 0.02] {
        let mid = UnitaryIntegrator::new(h.clone(), dt, IntegrationScheme::ImplicitMidpoint)
            .unwrap();
        let exact = UnitaryIntegrator::new(h.clone(), dt, IntegrationScheme::ExactExponential)
            .unwrap();
        let a = mid.evolve(&psi0, 1).unwrap();
        let b = exact.evolve(&psi0, 1).unwrap();
        let err: f64 = a[1]
            .amps()
            .iter()
            .zip(b[1].amps())
            .map(|(x, y)| (x - y).norm())
            .sum();
        errors.push(err);
    }
    // One-step error is O(dt³): halving dt divides it by ≈ 8.
    let ratio = errors[0] / errors[1];
    assert!((6.0..10.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn eigenstate_modulus_is_stationary() {
    let n = 16;
    let h = ring(n, 1.0, -0.5);
    let psi0 = plane_wave(n, 3);
    let integ = UnitaryIntegrator::new(h, 0.1, IntegrationScheme::ImplicitMidpoint).unwrap();
    let series = integ.evolve(&psi0, 200).unwrap();
    for psi in &series {
        for a in psi.amps() {
            assert!((a.norm() - (n as f64).sqrt().recip()).abs() < 1e-9);
        }
    }
}

#[test]
fn unitarity_over_ten_thousand_steps() {
    let h = ring(12, 1.0, -0.5);
    let psi0 = ComplexAmplitudeField::normalized(
        (0..12).map(|k| c((k as f64 * 0.7).cos(), (k as f64 * 0.3).sin())).collect(),
    )
    .unwrap();
    let integ = UnitaryIntegrator::new(h, 0.05, IntegrationScheme::ImplicitMidpoint).unwrap();
    let series = integ.evolve(&psi0, 10_000).unwrap();
    let drift = (series.last().unwrap().norm_sqr() - 1.0).abs();
    assert!(drift < 1e-8, "norm drift {drift}");
}

#[test]
fn step_size_violation_reports_spectral_bound() {
    let h = ring(8, 1.0, -0.5);
    let err = match UnitaryIntegrator::new(h, 1.0, IntegrationScheme::ImplicitMidpoint) {
        Err(e) => e,
        Ok(_) => panic!("expected step-size rejection"),
    };
    match err {
        SolverError::StepSizeViolation { spectral_bound, .. } => {
            assert!(spectral_bound >= 2.0)
        }
        other => panic!("unexpected error {other:?}"),
    }
}

#[test]
fn bell_rates_real_state_are_zero() {
    let h = ring(6, 1.0, -0.5);
    let psi = ComplexAmplitudeField::normalized(vec![c(1.0, 0.0); 6]).unwrap();
    let rates = bell_rates(&psi, &h).unwrap();
    for m in 0..6 {
        assert_eq!(rates.exit_rate(m), 0.0);
    }
}

#[test]
fn bell_rates_spin_half_example() {
    // J₁₂ = μB/ħ, P₂ = 1/2 → T₁₂ = 2μB/ħ, T₂₁ = 0.
    let mu_b = 1.0;
    let h = spin_half(mu_b);
    let psi =
        ComplexAmplitudeField::new(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]).unwrap();
    let rates = bell_rates(&psi, &h).unwrap();
    assert!((rates.get(0, 1) - 2.0 * mu_b / HBAR).abs() < 1e-12);
    assert_eq!(rates.get(1, 0), 0.0);
}

#[test]
fn at_most_one_direction_per_link() {
    let h = ring(8, 1.0, -0.5);
    let mut rng = CounterRng::new(3, 0);
    for _ in 0..50 {
        let psi = ComplexAmplitudeField::normalized(
            (0..8).map(|_| c(rng.next_f64() - 0.5, rng.next_f64() - 0.5)).collect(),
        )
        .unwrap();
        let rates = bell_rates(&psi, &h).unwrap();
        for n in 0..8 {
            for m in 0..8 {
                assert_eq!(rates.get(n, m) * rates.get(m, n), 0.0);
            }
        }
    }
}

#[test]
fn jump_step_stays_without_rates() {
    let h = ring(4, 1.0, -0.5);
    let psi = ComplexAmplitudeField::normalized(vec![c(1.0, 0.0); 4]).unwrap();
    let rates = bell_rates(&psi, &h).unwrap();
    let mut rng = CounterRng::new(1, 0);
    for _ in 0..100 {
        assert_eq!(jump_step(2, &rates, 0.01, &mut rng).unwrap(), 2);
    }
}

#[test]
fn jump_frequency_matches_binomial_statistics() {
    // Single outgoing rate r: over 10⁶ draws the empirical jump frequency
    // must sit within 3σ of r·dt.
    let mu_b = 1.0;
    let h = spin_half(mu_b);
    let psi =
        ComplexAmplitudeField::new(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]).unwrap();
    let rates = bell_rates(&psi, &h).unwrap();
    let dt = 0.04;
    let p = rates.get(0, 1) * dt;
    let n = 1_000_000u64;
    let mut rng = CounterRng::new(11, 0);
    let mut jumps = 0u64;
    for _ in 0..n {
        if jump_step(1, &rates, dt, &mut rng).unwrap() == 0 {
            jumps += 1;
        }
    }
    let freq = jumps as f64 / n as f64;
    let sigma = (p * (1.0 - p) / n as f64).sqrt();
    assert!((freq - p).abs() < 3.0 * sigma, "freq {freq}, p {p}, σ {sigma}");
}

#[test]
fn equal_rates_split_evenly() {
    // Label 1 of a 3-ring with symmetric currents out of it: conditional on
    // jumping, each branch should be taken about half the time.
    let h = HermitianGenerator::from_entries(
        3,
        [((0, 1), c(1.0, 0.0)), ((1, 2), c(1.0, 0.0))],
    )
    .unwrap();
    // State engineered so J_{01} > 0 and J_{21} > 0 with equal magnitude.
    let a = 0.5f64.sqrt();
    let psi = ComplexAmplitudeField::normalized(vec![
        c(a, 0.0),
        c(0.0, a),
        c(a, 0.0),
    ])
    .unwrap();
    let rates = bell_rates(&psi, &h).unwrap();
    let r0 = rates.get(0, 1);
    let r2 = rates.get(2, 1);
    assert!(r0 > 0.0 && (r0 - r2).abs() < 1e-12);
    let dt = 0.02;
    let mut rng = CounterRng::new(5, 0);
    let (mut to0, mut to2) = (0u64, 0u64);
    for _ in 0..1_000_000 {
        match jump_step(1, &rates, dt, &mut rng).unwrap() {
            0 => to0 += 1,
            2 => to2 += 1,
            _ => {}
        }
    }
    let total = (to0 + to2) as f64;
    let frac = to0 as f64 / total;
    let sigma = (0.25 / total).sqrt();
    assert!((frac - 0.5).abs() < 3.0 * sigma, "frac {frac} σ {sigma}");
}

#[test]
fn guided_ensemble_is_frozen_for_real_states() {
    let h = ring(5, 1.0, -0.5);
    let psi0 = ComplexAmplitudeField::normalized(vec![c(1.0, 0.0); 5]).unwrap();
    let integ = UnitaryIntegrator::new(h, 0.05, IntegrationScheme::ImplicitMidpoint).unwrap();
    let ens = simulate_guided_ensemble(&psi0, &integ, 200, 100, 10, 7, None).unwrap();
    for tr in &ens.trajectories {
        assert_eq!(tr.samples.len(), 1);
    }
}

#[test]
fn guided_ensemble_tracks_born_probabilities() {
    let mu_b = 1.0;
    let dt = 2e-3;
    let steps = 1500;
    let integ = UnitaryIntegrator::new(spin_half(mu_b), dt, IntegrationScheme::ExactExponential)
        .unwrap();
    // Slightly displaced basis state so both labels stay populated.
    let psi0 = ComplexAmplitudeField::normalized(vec![c(0.995, 0.0), c(0.0, -0.0999)]).unwrap();
    let m = 20_000;
    let ens = simulate_guided_ensemble(&psi0, &integ, m, steps, 75, 42, None).unwrap();
    let series = integ.evolve(&psi0, steps).unwrap();
    let reference: Vec<Vec<f64>> = (0..=steps)
        .step_by(75)
        .map(|i| vec![series[i].amp(0).norm_sqr(), series[i].amp(1).norm_sqr()])
        .collect();
    let sup = ens.occupancy.sup_distance(&reference);
    assert!(sup < 0.02, "sup occupancy error {sup}");
}

#[test]
fn ensembles_are_deterministic_under_fixed_seed() {
    let integ = UnitaryIntegrator::new(spin_half(1.0), 0.01, IntegrationScheme::ExactExponential)
        .unwrap();
    let psi0 = ComplexAmplitudeField::normalized(vec![c(0.9, 0.0), c(0.1, -0.3)]).unwrap();
    let a = simulate_guided_ensemble(&psi0, &integ, 500, 300, 30, 123, None).unwrap();
    let b = simulate_guided_ensemble(&psi0, &integ, 500, 300, 30, 123, None).unwrap();
    assert_eq!(a.trajectories, b.trajectories);
    assert_eq!(a.occupancy, b.occupancy);
}

#[test]
fn rate_overflow_is_rejected_with_required_dt() {
    let h = spin_half(1.0);
    let psi =
        ComplexAmplitudeField::new(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]).unwrap();
    let rates = bell_rates(&psi, &h).unwrap();
    let mut rng = CounterRng::new(0, 0);
    let err = jump_step(1, &rates, 0.2, &mut rng).unwrap_err();
    match err {
        SolverError::RateOverflow { required_dt, .. } => {
            assert!((required_dt - 0.05).abs() < 1e-12)
        }
        other => panic!("unexpected error {other:?}"),
    }
}
