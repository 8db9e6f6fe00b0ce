use rand::Rng;
use rand_distr::StandardNormal;

use super::model::PhaseState;
use crate::error::{OimError, Result};

/// One Euler–Maruyama step, `φ' = φ + drift·dt + Kn·√dt·ζ` with `ζ` standard
/// normal. No normals are drawn when `kn == 0`.
pub fn step_euler_maruyama<R: Rng + ?Sized>(
    state: &PhaseState,
    drift: &[f64],
    kn: f64,
    dt: f64,
    rng: &mut R,
) -> Result<PhaseState> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(OimError::invalid(format!("dt must be positive, got {dt}")));
    }
    if drift.len() != state.phi.len() {
        return Err(OimError::Dimension { expected: state.phi.len(), got: drift.len() });
    }
    let mut phi = state.phi.clone();
    let t = state.t + dt;
    em_step_in_place(&mut phi, drift, kn, dt, rng).map_err(|index| OimError::Integration { index, t })?;
    Ok(PhaseState { t, phi })
}

/// In-place step; on failure returns the first non-finite index.
#[inline]
pub(crate) fn em_step_in_place<R: Rng + ?Sized>(
    phi: &mut [f64],
    drift: &[f64],
    kn: f64,
    dt: f64,
    rng: &mut R,
) -> std::result::Result<(), usize> {
    if kn == 0.0 {
        for (p, d) in phi.iter_mut().zip(drift) {
            *p += d * dt;
        }
    } else {
        let amp = kn * dt.sqrt();
        for (p, d) in phi.iter_mut().zip(drift) {
            let z: f64 = rng.sample(StandardNormal);
            *p += d * dt + amp * z;
        }
    }
    match phi.iter().position(|p| !p.is_finite()) {
        Some(i) => Err(i),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn noiseless_step() {
        let s = PhaseState::new(1.0, vec![0.5, -0.5]).unwrap();
        let out = step_euler_maruyama(&s, &[1.0, 2.0], 0.0, 0.1, &mut rng_from_seed(0)).unwrap();
        assert_eq!(out.phi, [0.5 + 0.1, -0.5 + 0.2]);
        assert!((out.t - 1.1).abs() < 1e-15);
    }

    #[test]
    fn increment_variance() {
        let dt = 0.01;
        let mut rng = rng_from_seed(123);
        let s = PhaseState::new(0.0, vec![0.0; 1000]).unwrap();
        let zero = vec![0.0; 1000];
        let mut sum2 = 0.0;
        for _ in 0..100 {
            let out = step_euler_maruyama(&s, &zero, 1.0, dt, &mut rng).unwrap();
            sum2 += out.phi.iter().map(|x| x * x).sum::<f64>();
        }
        let var = sum2 / 1e5;
        assert!((var / dt - 1.0).abs() < 0.05, "variance {var}");
    }

    #[test]
    fn reproducible() {
        let s = PhaseState::new(0.0, vec![0.1; 5]).unwrap();
        let a = step_euler_maruyama(&s, &[0.0; 5], 0.7, 0.01, &mut rng_from_seed(5)).unwrap();
        let b = step_euler_maruyama(&s, &[0.0; 5], 0.7, 0.01, &mut rng_from_seed(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_finite_result() {
        let s = PhaseState::new(0.0, vec![0.0, 0.0]).unwrap();
        let r = step_euler_maruyama(&s, &[0.0, f64::INFINITY], 0.0, 0.1, &mut rng_from_seed(0));
        assert!(matches!(r, Err(OimError::Integration { index: 1, .. })));
    }
}
