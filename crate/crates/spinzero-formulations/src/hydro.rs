use crate::{quantum_potential, GridField, QuantumPotentialField, SpinZeroError, CFL_LIMIT};

/// One F-III hydrodynamic step: the velocity field absorbs the gradient of
/// `V + Q`, then the probability field moves by a sign-aware upwind flux so
/// that `Σ P` is conserved exactly.
///
/// Returns the quantum potential used, for diagnostics.
pub fn f3_step(
    g: &mut GridField,
    potential: &[f64],
    mass: f64,
    dt: f64,
) -> Result<QuantumPotentialField, SpinZeroError> {
    let n = g.cells();
    if potential.len() != n {
        return Err(SpinZeroError::DimensionMismatch {
            left: potential.len(),
            right: n,
        });
    }
    let a = g.spacing();
    let q = quantum_potential(g.probabilities(), a, mass)?;

    let w: Vec<f64> = potential.iter().zip(q.values()).map(|(v, q)| v + q).collect();
    let v_new: Vec<f64> = (0..n)
        .map(|k| {
            let grad = (w[(k + 1) % n] - w[(k + n - 1) % n]) / (2.0 * a);
            g.velocities()[k] - grad * dt / mass
        })
        .collect();

    let vmax = v_new.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let courant = vmax * dt / a;
    if courant > CFL_LIMIT {
        return Err(SpinZeroError::CflViolation {
            courant,
            required_dt: CFL_LIMIT * a / vmax,
        });
    }

    let p_old = g.probabilities().to_vec();
    let flux: Vec<f64> = (0..n)
        .map(|k| {
            let next = (k + 1) % n;
            p_old[k] * v_new[k].max(0.0) + p_old[next] * v_new[next].min(0.0)
        })
        .collect();

    let (p, v) = g.parts_mut();
    for k in 0..n {
        let prev = (k + n - 1) % n;
        p[k] += (flux[prev] - flux[k]) * dt / a;
        v[k] = v_new[k];
    }
    Ok(q)
}
