use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{OimError, Result};

/// Natural frequencies of the oscillators and the central frequency they are
/// referenced to. Frequencies are in units of the central frequency unless
/// stated otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatorBank {
    omega: Vec<f64>,
    omega_star: f64,
}

impl OscillatorBank {
    pub fn new(omega: Vec<f64>, omega_star: f64) -> Result<Self> {
        if !(omega_star.is_finite() && omega_star > 0.0) {
            return Err(OimError::invalid(format!("central frequency must be positive, got {omega_star}")));
        }
        if let Some(k) = omega.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(OimError::invalid(format!("natural frequency {k} must be positive, got {}", omega[k])));
        }
        Ok(OscillatorBank { omega, omega_star })
    }

    /// All oscillators at the central frequency 1.
    pub fn uniform(n: usize) -> Self {
        OscillatorBank { omega: vec![1.0; n], omega_star: 1.0 }
    }

    /// Frequencies drawn from `N(ω*, (sigma·ω*)^2)`. Non-positive draws are
    /// redrawn.
    pub fn gaussian<R: Rng + ?Sized>(n: usize, omega_star: f64, sigma: f64, rng: &mut R) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(OimError::invalid(format!("relative spread must be >= 0, got {sigma}")));
        }
        if sigma == 0.0 {
            return OscillatorBank::new(vec![omega_star; n], omega_star);
        }
        let dist = Normal::new(omega_star, sigma * omega_star).map_err(|e| OimError::invalid(e.to_string()))?;
        let omega = (0..n)
            .map(|_| loop {
                let w: f64 = dist.sample(rng);
                if w > 0.0 {
                    break w;
                }
            })
            .collect();
        OscillatorBank::new(omega, omega_star)
    }

    pub fn n(&self) -> usize {
        self.omega.len()
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn omega_star(&self) -> f64 {
        self.omega_star
    }

    /// Relative detuning `(ω_i - ω*) / ω_i`.
    pub fn detuning(&self, i: usize) -> f64 {
        (self.omega[i] - self.omega_star) / self.omega[i]
    }

    pub fn is_uniform(&self) -> bool {
        self.omega.iter().all(|&w| w == self.omega_star)
    }
}

/// Unwrapped phases at a point in time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub t: f64,
    pub phi: Vec<f64>,
}

impl PhaseState {
    pub fn new(t: f64, phi: Vec<f64>) -> Result<Self> {
        check_finite(&phi)?;
        Ok(PhaseState { t, phi })
    }
}

pub(crate) fn check_finite(phi: &[f64]) -> Result<()> {
    match phi.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(OimError::NonFinitePhase { index }),
        None => Ok(()),
    }
}

/// How initial phases are chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitMode {
    /// Uniform on `[0, π)`.
    Uniform0Pi,
    /// Uniform on `[0, 2π)`.
    Uniform0TwoPi,
    Given(Vec<f64>),
}

impl InitMode {
    pub(crate) fn draw<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        match self {
            InitMode::Uniform0Pi => Ok((0..n).map(|_| rng.random::<f64>() * PI).collect()),
            InitMode::Uniform0TwoPi => Ok((0..n).map(|_| rng.random::<f64>() * 2.0 * PI).collect()),
            InitMode::Given(phi) => {
                if phi.len() != n {
                    return Err(OimError::Dimension { expected: n, got: phi.len() });
                }
                check_finite(phi)?;
                Ok(phi.clone())
            }
        }
    }
}

/// Default integration step, in time units of one oscillation cycle.
pub const DEFAULT_DT: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub dt: f64,
    pub t_end: f64,
    pub seed: u64,
    pub record_every: usize,
    pub init_mode: InitMode,
    /// Evaluate the Lyapunov energy at every recorded sample.
    #[serde(default)]
    pub record_energy: bool,
}

impl SimConfig {
    pub fn new(t_end: f64, seed: u64) -> Self {
        SimConfig { dt: DEFAULT_DT, t_end, seed, record_every: 1, init_mode: InitMode::Uniform0Pi, record_energy: false }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_record_every(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    pub fn with_init(mut self, init: InitMode) -> Self {
        self.init_mode = init;
        self
    }

    pub fn with_energy(mut self) -> Self {
        self.record_energy = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(OimError::invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= self.dt) {
            return Err(OimError::invalid(format!("t_end = {} must be at least dt = {}", self.t_end, self.dt)));
        }
        if self.record_every == 0 {
            return Err(OimError::invalid("record_every must be at least 1"));
        }
        Ok(())
    }

    /// Number of fixed steps covering `[0, t_end]`.
    pub fn n_steps(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil().max(1.0) as usize
    }
}
