use std::f64::consts::PI;

use crate::ising::SpinConfig;

/// `+1` where `cos φ ≥ 0`, `-1` elsewhere.
pub fn read_spins(phi: &[f64]) -> SpinConfig {
    SpinConfig::from_raw(phi.iter().map(|p| if p.cos() >= 0.0 { 1 } else { -1 }).collect())
}

/// Largest angular distance from any phase to the nearer of `{0, π}` (mod 2π).
pub fn binarisation_residual(phi: &[f64]) -> f64 {
    phi.iter()
        .map(|p| {
            let r = p.rem_euclid(PI);
            r.min(PI - r)
        })
        .fold(0.0, f64::max)
}
