use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{read_spins, simulate_with_rng, OscillatorBank, PhaseCoupling, SimConfig};
use crate::error::{OimError, Result};
use crate::ising::{hamiltonian, maxcut_to_ising, random_graph, WeightMode};
use crate::rng::trial_rng;
use crate::schedule::Schedule;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingParams {
    pub k: f64,
    pub ks: f64,
    pub kn: f64,
    pub t_end: f64,
    pub dt: f64,
    /// Steps between recorded energies.
    pub record_every: usize,
}

impl Default for ScalingParams {
    fn default() -> Self {
        ScalingParams { k: 1.0, ks: 0.1, kn: 0.01, t_end: 20.0, dt: 0.01, record_every: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeTrace {
    pub n: usize,
    pub n_edges: usize,
    pub times: Vec<f64>,
    /// Ising energy of the thresholded phases, averaged over trials.
    pub mean_h: Vec<f64>,
    /// `mean_h` divided by the edge count.
    pub normalized: Vec<f64>,
    /// First time `mean_h` reaches 95% of its final value.
    pub settling_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub params: ScalingParams,
    pub density_percent: f64,
    pub n_trials: usize,
    pub traces: Vec<SizeTrace>,
}

impl ScalingReport {
    /// Long-format CSV: `n,t,mean_h,normalized`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,t,mean_h,normalized\n");
        for tr in &self.traces {
            for ((t, h), v) in tr.times.iter().zip(&tr.mean_h).zip(&tr.normalized) {
                writeln!(out, "{},{t:.16e},{h:.16e},{v:.16e}", tr.n).unwrap();
            }
        }
        out
    }
}

fn settling_time(times: &[f64], mean_h: &[f64]) -> f64 {
    let fin = *mean_h.last().expect("non-empty trace");
    let start = mean_h[0];
    let goal = start + 0.95 * (fin - start);
    let reached = |h: f64| if fin <= start { h <= goal } else { h >= goal };
    times.iter().zip(mean_h).find(|(_, &h)| reached(h)).map_or(*times.last().unwrap(), |(t, _)| *t)
}

/// Anneals random ±1 problems of each size with constant controls and
/// records the mean thresholded energy over time. The instance for size `n`
/// uses graph seed `seed + n`; trials draw from streams of `seed`.
pub fn scaling_study(
    sizes: &[usize],
    density_percent: f64,
    n_trials: usize,
    params: &ScalingParams,
    coupling: &PhaseCoupling,
    seed: u64,
) -> Result<ScalingReport> {
    if sizes.len() < 2 {
        return Err(OimError::invalid("scaling study needs at least two sizes"));
    }
    if n_trials == 0 {
        return Err(OimError::invalid("n_trials must be at least 1"));
    }
    let schedule = Schedule::constant(params.t_end, params.k, params.ks, params.kn)?;
    let config = SimConfig::new(params.t_end, seed).with_dt(params.dt).with_record_every(params.record_every);
    config.validate()?;
    let mut traces = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let graph = random_graph(n, density_percent, WeightMode::PmOne, seed.wrapping_add(n as u64))?;
        let problem = maxcut_to_ising(&graph);
        let bank = OscillatorBank::uniform(n);
        let runs: Vec<(Vec<f64>, Vec<f64>)> = (0..n_trials)
            .into_par_iter()
            .map(|k| {
                let mut rng = trial_rng(seed, k as u64);
                let tr = simulate_with_rng(&problem, coupling, &bank, &schedule, &config, &mut rng)?;
                let times = tr.samples.iter().map(|s| s.t).collect();
                let hs = tr.samples.iter().map(|s| hamiltonian(&problem, &read_spins(&s.phi))).collect::<Result<_>>()?;
                Ok((times, hs))
            })
            .collect::<Result<_>>()?;
        let times = runs[0].0.clone();
        let mut mean_h = vec![0.0; times.len()];
        for (_, hs) in &runs {
            mean_h.iter_mut().zip(hs).for_each(|(m, h)| *m += h / n_trials as f64);
        }
        let m = graph.edge_count().max(1) as f64;
        traces.push(SizeTrace {
            n,
            n_edges: graph.edge_count(),
            settling_time: settling_time(&times, &mean_h),
            normalized: mean_h.iter().map(|h| h / m).collect(),
            times,
            mean_h,
        });
    }
    Ok(ScalingReport { params: params.clone(), density_percent, n_trials, traces })
}
