//! Global Lyapunov function of the phase dynamics.
//!
//! With `V` the zero-mean antiderivative of the pair coupling and `V_s` that of
//! the SYNC coupling,
//!
//! ```text
//! E(φ) = 2K Σ_{i<j} J_ij V(φ_i - φ_j)      coupling term
//!      + 2K Σ_i h_i V(φ_i)                 self term
//!      + Ks Σ_i V_s(2φ_i)                  SYNC term
//!      - 2 Σ_i Δω_i φ_i                    tilt term, Δω_i = (ω_i - ω*)/ω_i
//! ```
//!
//! so that `∂E/∂φ_i = -(2/ω_i)·dφ_i/dt`. For `g = sin`, `V = -cos`, and at
//! phases in `{0, π}` with `K = 1/2` the energy equals the Ising Hamiltonian
//! minus `n·Ks` (and minus the problem's constant offset).

use serde::{Deserialize, Serialize};

use crate::dynamics::{check_finite, OscillatorBank, PhaseCoupling, Trajectory};
use crate::error::{OimError, Result};
use crate::ising::IsingProblem;

/// Energy split into its parts. `total` is summed as
/// `((coupling_term + self_term) + shil_term) + tilt_term`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub coupling_term: f64,
    pub self_term: f64,
    pub shil_term: f64,
    pub tilt_term: f64,
    pub total: f64,
}

fn check_dims(problem: &IsingProblem, bank: &OscillatorBank, phi: &[f64]) -> Result<()> {
    if bank.n() != problem.n() {
        return Err(OimError::Dimension { expected: problem.n(), got: bank.n() });
    }
    if phi.len() != problem.n() {
        return Err(OimError::Dimension { expected: problem.n(), got: phi.len() });
    }
    check_finite(phi)
}

pub fn energy(
    problem: &IsingProblem,
    coupling: &PhaseCoupling,
    bank: &OscillatorBank,
    phi: &[f64],
    k: f64,
    ks: f64,
) -> Result<EnergyBreakdown> {
    check_dims(problem, bank, phi)?;
    let v = &coupling.pair;
    let pair: f64 = problem.couplings().iter().map(|c| c.value * v.potential(phi[c.i] - phi[c.j])).sum();
    let coupling_term = 2.0 * k * pair;
    let self_term = if problem.has_fields() {
        2.0 * k * problem.h().iter().zip(phi).map(|(h, p)| h * v.potential(*p)).sum::<f64>()
    } else {
        0.0
    };
    let shil_term = if ks != 0.0 { ks * phi.iter().map(|p| coupling.shil.potential(2.0 * p)).sum::<f64>() } else { 0.0 };
    let tilt_term = -2.0 * phi.iter().enumerate().map(|(i, p)| bank.detuning(i) * p).sum::<f64>();
    let total = ((coupling_term + self_term) + shil_term) + tilt_term;
    Ok(EnergyBreakdown { coupling_term, self_term, shil_term, tilt_term, total })
}

/// Analytic gradient of [`energy`].
pub fn grad_energy(
    problem: &IsingProblem,
    coupling: &PhaseCoupling,
    bank: &OscillatorBank,
    phi: &[f64],
    k: f64,
    ks: f64,
) -> Result<Vec<f64>> {
    check_dims(problem, bank, phi)?;
    let g = &coupling.pair;
    let mut acc = vec![0.0; phi.len()];
    for c in problem.couplings() {
        let v = c.value * g.g(phi[c.i] - phi[c.j]);
        acc[c.i] += v;
        acc[c.j] -= v;
    }
    Ok(acc
        .iter()
        .enumerate()
        .map(|(i, a)| {
            2.0 * k * a + 2.0 * k * problem.h()[i] * g.g(phi[i]) + 2.0 * ks * coupling.shil.g(2.0 * phi[i])
                - 2.0 * bank.detuning(i)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentReport {
    pub times: Vec<f64>,
    pub energies: Vec<f64>,
    /// Largest `E[k+1] - E[k]`; 0 for fewer than two samples.
    pub max_increment: f64,
    /// Relative tolerance: each increment must stay below `rel_tol·(1 + |E[k]|)`.
    pub rel_tol: f64,
    /// Index `k + 1` of the first sample that rose above tolerance.
    pub first_violation: Option<usize>,
    pub passed: bool,
}

impl DescentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

pub const DESCENT_REL_TOL: f64 = 1e-8;

/// Checks that the energy never increases along a noiseless trajectory with
/// constant controls. Recorded energies are used where present.
pub fn check_monotone(
    trajectory: &Trajectory,
    coupling: &PhaseCoupling,
    problem: &IsingProblem,
    bank: &OscillatorBank,
) -> Result<DescentReport> {
    let Some(first) = trajectory.samples.first() else {
        return Err(OimError::invalid("empty trajectory"));
    };
    for (idx, s) in trajectory.samples.iter().enumerate() {
        if s.controls.kn != 0.0 {
            return Err(OimError::invalid(format!("sample {idx} was recorded with noise Kn = {}", s.controls.kn)));
        }
        if s.controls != first.controls {
            return Err(OimError::invalid(format!("controls vary along the trajectory (sample {idx})")));
        }
    }
    let energies = trajectory
        .samples
        .iter()
        .map(|s| match s.energy {
            Some(e) => Ok(e),
            None => energy(problem, coupling, bank, &s.phi, s.controls.k, s.controls.ks).map(|b| b.total),
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut max_increment: f64 = 0.0;
    let mut first_violation = None;
    for (k, w) in energies.windows(2).enumerate() {
        let inc = w[1] - w[0];
        max_increment = max_increment.max(inc);
        if first_violation.is_none() && inc > DESCENT_REL_TOL * (1.0 + w[0].abs()) {
            first_violation = Some(k + 1);
        }
    }
    Ok(DescentReport {
        times: trajectory.samples.iter().map(|s| s.t).collect(),
        energies,
        max_increment,
        rel_tol: DESCENT_REL_TOL,
        passed: first_violation.is_none(),
        first_violation,
    })
}
