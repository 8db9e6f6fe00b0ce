//! Stationary distribution of the noisy dynamics on tiny problems.
//!
//! With uniform frequencies the drift is `-½∇E`, so under noise of strength
//! `Kn` the phase density relaxes to `exp(-E/Kn²)` on the torus. The check
//! compares a long simulated run against that density evaluated by direct
//! quadrature. Basins are the binary points `{0, π}^n`; a phase vector
//! belongs to the basin of the nearest binary point (componentwise, the sign
//! of `cos φ_i`).

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::dynamics::{em_step_in_place, read_spins, DriftField, OscillatorBank, PhaseCoupling};
use crate::error::{OimError, Result};
use crate::ising::{hamiltonian, IsingProblem, SpinConfig};
use crate::lyapunov::energy;
use crate::rng::rng_from_seed;

pub const BOLTZMANN_LIMIT: usize = 3;

const BATCHES: usize = 20;
const ORACLE_SUBDIV: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoltzmannConfig {
    pub k: f64,
    pub ks: f64,
    pub kn: f64,
    pub dt: f64,
    pub steps: usize,
    /// Initial steps excluded from the histogram.
    pub burn_in: usize,
    /// Histogram cells per phase.
    pub grid: usize,
    pub seed: u64,
}

impl BoltzmannConfig {
    pub fn new(k: f64, ks: f64, kn: f64, steps: usize, seed: u64) -> Self {
        BoltzmannConfig { k, ks, kn, dt: 0.01, steps, burn_in: 0, grid: 32, seed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinProbability {
    pub spins: SpinConfig,
    pub ising_h: f64,
    pub empirical: f64,
    /// Batch-means standard error of `empirical`.
    pub empirical_sigma: f64,
    pub oracle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoltzmannReport {
    pub n: usize,
    pub config: BoltzmannConfig,
    /// Total-variation distance between the empirical and oracle histograms.
    pub tv_distance: f64,
    /// Basins in binary order of `SpinConfig::from_bits`.
    pub basins: Vec<BasinProbability>,
    /// Basin indices by decreasing empirical probability.
    pub empirical_order: Vec<usize>,
    pub oracle_order: Vec<usize>,
    /// Every basin of lowest Ising energy is empirically more likely than
    /// every other basin.
    pub lowest_energy_preferred: bool,
}

impl BoltzmannReport {
    pub fn basin(&self, spins: &[i8]) -> Option<&BasinProbability> {
        self.basins.iter().find(|b| b.spins.as_slice() == spins)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

fn basin_index(phi: &[f64]) -> usize {
    read_spins(phi).as_slice().iter().enumerate().map(|(i, &s)| usize::from(s < 0) << i).sum()
}

fn cell_index(phi: &[f64], grid: usize) -> usize {
    phi.iter().rev().fold(0, |acc, p| acc * grid + ((p.rem_euclid(TAU) / TAU * grid as f64) as usize).min(grid - 1))
}

fn order(p: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..p.len()).collect();
    idx.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(a.cmp(&b)));
    idx
}

pub fn boltzmann_check(problem: &IsingProblem, coupling: &PhaseCoupling, config: &BoltzmannConfig) -> Result<BoltzmannReport> {
    let n = problem.n();
    if n > BOLTZMANN_LIMIT {
        return Err(OimError::TooLarge { n, limit: BOLTZMANN_LIMIT });
    }
    if n == 0 {
        return Err(OimError::invalid("problem has no spins"));
    }
    if !(config.kn.is_finite() && config.kn > 0.0) {
        return Err(OimError::invalid("noise level must be positive"));
    }
    if !(config.dt.is_finite() && config.dt > 0.0) || config.grid < 2 {
        return Err(OimError::invalid("need dt > 0 and at least 2 grid cells"));
    }
    if config.steps <= config.burn_in + BATCHES {
        return Err(OimError::invalid("too few steps after burn-in"));
    }
    let bank = OscillatorBank::uniform(n);
    let cells = config.grid.pow(n as u32);
    let n_basins = 1usize << n;

    // simulation
    let field = DriftField::new(problem, coupling, &bank)?;
    let mut rng = rng_from_seed(config.seed);
    let mut phi = crate::dynamics::InitMode::Uniform0TwoPi.draw(n, &mut rng)?;
    let mut d = vec![0.0; n];
    let mut hist = vec![0u64; cells];
    let kept = config.steps - config.burn_in;
    let batch_len = kept / BATCHES;
    let mut batch_counts = vec![vec![0u64; n_basins]; BATCHES];
    for step in 0..config.steps {
        field.eval_into(&phi, config.k, config.ks, &mut d);
        em_step_in_place(&mut phi, &d, config.kn, config.dt, &mut rng)
            .map_err(|index| OimError::Integration { index, t: (step + 1) as f64 * config.dt })?;
        if step >= config.burn_in {
            hist[cell_index(&phi, config.grid)] += 1;
            let b = ((step - config.burn_in) / batch_len).min(BATCHES - 1);
            batch_counts[b][basin_index(&phi)] += 1;
        }
    }

    // quadrature oracle on a refined grid, aggregated to the histogram cells
    let fine = config.grid * ORACLE_SUBDIV;
    let h = TAU / fine as f64;
    let kn2 = config.kn * config.kn;
    let total_fine = fine.pow(n as u32);
    let mut points = Vec::with_capacity(total_fine);
    let mut x = vec![0.0; n];
    for idx in 0..total_fine {
        let mut r = idx;
        for xi in x.iter_mut() {
            *xi = ((r % fine) as f64 + 0.5) * h;
            r /= fine;
        }
        points.push((
            cell_index(&x, config.grid),
            basin_index(&x),
            energy(problem, coupling, &bank, &x, config.k, config.ks)?.total,
        ));
    }
    let e_min = points.iter().map(|p| p.2).fold(f64::INFINITY, f64::min);
    let mut oracle_cells = vec![0.0; cells];
    let mut oracle_basins = vec![0.0; n_basins];
    let mut z = 0.0;
    for &(c, b, e) in &points {
        let w = (-(e - e_min) / kn2).exp();
        oracle_cells[c] += w;
        oracle_basins[b] += w;
        z += w;
    }
    oracle_cells.iter_mut().for_each(|p| *p /= z);
    oracle_basins.iter_mut().for_each(|p| *p /= z);

    let tv_distance = 0.5 * hist.iter().zip(&oracle_cells).map(|(&c, &q)| (c as f64 / kept as f64 - q).abs()).sum::<f64>();

    let mut basins = Vec::with_capacity(n_basins);
    for b in 0..n_basins {
        let fractions: Vec<f64> = batch_counts.iter().map(|bc| bc[b] as f64 / bc.iter().sum::<u64>().max(1) as f64).collect();
        let total: u64 = batch_counts.iter().map(|bc| bc[b]).sum();
        let empirical = total as f64 / kept as f64;
        let mean = fractions.iter().sum::<f64>() / BATCHES as f64;
        let var = fractions.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (BATCHES - 1) as f64;
        let spins = SpinConfig::from_bits(n, b as u64);
        basins.push(BasinProbability {
            ising_h: hamiltonian(problem, &spins)?,
            spins,
            empirical,
            empirical_sigma: (var / BATCHES as f64).sqrt(),
            oracle: oracle_basins[b],
        });
    }
    let emp: Vec<f64> = basins.iter().map(|b| b.empirical).collect();
    let h_min = basins.iter().map(|b| b.ising_h).fold(f64::INFINITY, f64::min);
    let is_low = |b: &BasinProbability| (b.ising_h - h_min).abs() <= 1e-12 * (1.0 + h_min.abs());
    let low_min = basins.iter().filter(|b| is_low(b)).map(|b| b.empirical).fold(f64::INFINITY, f64::min);
    let other_max = basins.iter().filter(|b| !is_low(b)).map(|b| b.empirical).fold(f64::NEG_INFINITY, f64::max);
    Ok(BoltzmannReport {
        n,
        config: config.clone(),
        tv_distance,
        empirical_order: order(&emp),
        oracle_order: order(&oracle_basins),
        lowest_energy_preferred: low_min > other_max,
        basins,
    })
}
