use rand::Rng;

use super::coupling::PhaseCoupling;
use super::drift::DriftField;
use super::integrator::em_step_in_place;
use super::model::{OscillatorBank, SimConfig};
use super::trajectory::{Sample, Trajectory};
use crate::error::{OimError, Result};
use crate::ising::IsingProblem;
use crate::lyapunov::energy;
use crate::rng::rng_from_seed;
use crate::schedule::{Controls, Schedule};

/// Integrates the phase SDE over `[0, config.t_end]` with the stream seeded by
/// `config.seed`.
pub fn simulate(
    problem: &IsingProblem,
    coupling: &PhaseCoupling,
    bank: &OscillatorBank,
    schedule: &Schedule,
    config: &SimConfig,
) -> Result<Trajectory> {
    simulate_with_rng(problem, coupling, bank, schedule, config, &mut rng_from_seed(config.seed))
}

/// As [`simulate`], drawing initial phases and noise from `rng` instead of
/// `config.seed`.
///
/// Steps have length `dt` except the last, which is shortened to end exactly
/// at `t_end`. Controls are evaluated at the start of each step. The initial
/// state, every `record_every`-th step and the final state are recorded.
pub fn simulate_with_rng<R: Rng + ?Sized>(
    problem: &IsingProblem,
    coupling: &PhaseCoupling,
    bank: &OscillatorBank,
    schedule: &Schedule,
    config: &SimConfig,
    rng: &mut R,
) -> Result<Trajectory> {
    config.validate()?;
    if schedule.t_end() < config.t_end * (1.0 - 1e-12) {
        return Err(OimError::invalid(format!(
            "schedule horizon {} shorter than simulation horizon {}",
            schedule.t_end(),
            config.t_end
        )));
    }
    let field = DriftField::new(problem, coupling, bank)?;
    let n = problem.n();
    let mut phi = config.init_mode.draw(n, rng)?;
    let steps = config.n_steps();
    let dt = config.dt;

    let record = |t: f64, phi: &[f64], controls: Controls| -> Result<Sample> {
        let e =
            if config.record_energy { Some(energy(problem, coupling, bank, phi, controls.k, controls.ks)?.total) } else { None };
        Ok(Sample { t, phi: phi.to_vec(), controls, energy: e })
    };

    let mut samples = vec![record(0.0, &phi, schedule.eval_unchecked(0.0))?];
    let mut d = vec![0.0; n];
    for s in 0..steps {
        let t = s as f64 * dt;
        let last = s + 1 == steps;
        let t_next = if last { config.t_end } else { (s + 1) as f64 * dt };
        let c = schedule.eval_unchecked(t);
        field.eval_into(&phi, c.k, c.ks, &mut d);
        em_step_in_place(&mut phi, &d, c.kn, t_next - t, rng).map_err(|index| OimError::Integration { index, t: t_next })?;
        if last || (s + 1) % config.record_every == 0 {
            samples.push(record(t_next, &phi, schedule.eval_unchecked(t_next))?);
        }
    }
    Ok(Trajectory { samples })
}
