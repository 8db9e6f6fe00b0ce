use super::problem::{hamiltonian_unchecked, IsingProblem, SpinConfig};
use crate::error::{OimError, Result};

/// Largest problem the exhaustive search accepts.
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// Exact ground state by enumerating all spin configurations.
///
/// Walks the configurations in Gray-code order, updating the energy by the
/// single-flip difference. Without fields, `H(s) = H(-s)` lets spin 0 stay at
/// +1, halving the work. The returned energy is recomputed from scratch.
/// Among equal-energy minima the first one visited wins.
pub fn brute_force_ground_state(problem: &IsingProblem) -> Result<(SpinConfig, f64)> {
    let n = problem.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(OimError::TooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    if n == 0 {
        return Ok((SpinConfig::from_raw(Vec::new()), problem.constant_offset()));
    }
    let adj = problem.adjacency();
    let h = problem.h();
    // with no fields, spin 0 stays fixed and only spins 1..n are enumerated
    let first = usize::from(!problem.has_fields());
    let free = n - first;

    let mut s = vec![1i8; n];
    let mut energy = hamiltonian_unchecked(problem, &s);
    let mut best = (energy, s.clone());
    for step in 1u64..(1u64 << free) {
        let k = first + step.trailing_zeros() as usize;
        let local: f64 = adj[k].iter().map(|&(j, jv)| jv * f64::from(s[j])).sum::<f64>() + h[k];
        // flipping s_k changes -s_k·local into +s_k·local
        energy += 2.0 * f64::from(s[k]) * local;
        s[k] = -s[k];
        if energy < best.0 - 1e-9 * (1.0 + energy.abs()) {
            best = (energy, s.clone());
        }
    }
    let exact = hamiltonian_unchecked(problem, &best.1);
    Ok((SpinConfig::from_raw(best.1), exact))
}
