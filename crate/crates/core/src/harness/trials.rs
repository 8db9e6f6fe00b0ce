use std::ops::Range;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ablation::AblationVariant;
use crate::dynamics::{
    read_spins, simulate_with_rng, InitMode, OscillatorBank, PhaseCoupling, SimConfig, Trajectory, DEFAULT_DT,
};
use crate::error::{OimError, Result};
use crate::ising::{cut_value, hamiltonian, maxcut_to_ising, IsingProblem, SpinConfig, WeightedGraph};
use crate::rng::trial_rng;
use crate::schedule::Schedule;

pub const DEFAULT_BINS: usize = 20;

/// A problem together with everything needed to run annealing trials on it.
///
/// With a graph attached (see [`Experiment::maxcut`]) trials are scored by
/// cut value, higher is better; otherwise by the Ising energy, lower is
/// better.
#[derive(Debug, Clone)]
pub struct Experiment {
    problem: IsingProblem,
    graph: Option<WeightedGraph>,
    schedule: Schedule,
    coupling: PhaseCoupling,
    dt: f64,
    init_mode: InitMode,
    target: Option<f64>,
    workers: Option<usize>,
    bins: usize,
}

impl Experiment {
    pub fn maxcut(graph: &WeightedGraph, schedule: Schedule) -> Self {
        let mut e = Experiment::ising(maxcut_to_ising(graph), schedule);
        e.graph = Some(graph.clone());
        e
    }

    pub fn ising(problem: IsingProblem, schedule: Schedule) -> Self {
        Experiment {
            problem,
            graph: None,
            schedule,
            coupling: PhaseCoupling::same(Default::default()),
            dt: DEFAULT_DT,
            init_mode: InitMode::Uniform0Pi,
            target: None,
            workers: None,
            bins: DEFAULT_BINS,
        }
    }

    pub fn with_coupling(mut self, coupling: PhaseCoupling) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_init(mut self, init: InitMode) -> Self {
        self.init_mode = init;
        self
    }

    /// Best-known objective: a cut in MAX-CUT mode, an energy otherwise.
    pub fn with_target(mut self, target: Option<f64>) -> Self {
        self.target = target;
        self
    }

    /// Size of a dedicated worker pool; `None` uses the global rayon pool.
    pub fn with_workers(mut self, workers: Option<usize>) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_bins(mut self, bins: usize) -> Self {
        self.bins = bins.max(1);
        self
    }

    pub fn problem(&self) -> &IsingProblem {
        &self.problem
    }

    pub fn graph(&self) -> Option<&WeightedGraph> {
        self.graph.as_ref()
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn coupling(&self) -> &PhaseCoupling {
        &self.coupling
    }

    pub fn target(&self) -> Option<f64> {
        self.target
    }

    pub fn run(&self, variant: &AblationVariant, n_trials: usize, base_seed: u64) -> Result<TrialStats> {
        if n_trials == 0 {
            return Err(OimError::invalid("n_trials must be at least 1"));
        }
        self.run_range(variant, 0..n_trials, base_seed)
    }

    /// Runs trials with indices in `trials`; trial `k` uses stream `k` of
    /// `base_seed`, so disjoint ranges can be merged afterwards.
    pub fn run_range(&self, variant: &AblationVariant, trials: Range<usize>, base_seed: u64) -> Result<TrialStats> {
        let (schedule, coupling, sigma) = variant.configure(&self.schedule, &self.coupling)?;
        let config = self.config(&schedule, base_seed, usize::MAX)?;
        let start = Instant::now();
        let job = |k: usize| self.run_trial(&schedule, &coupling, sigma, &config, k);
        let outcomes: Vec<TrialOutcome> = match self.workers {
            Some(w) => rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| OimError::invalid(e.to_string()))?
                .install(|| trials.into_par_iter().map(job).collect()),
            None => trials.into_par_iter().map(job).collect(),
        };
        let mut stats = TrialStats::from_outcomes(outcomes, self.target, self.graph.is_some(), self.bins);
        stats.total_wall_seconds = start.elapsed().as_secs_f64();
        Ok(stats)
    }

    /// Re-runs trial `trial` and keeps every `record_every`-th state. The
    /// final state matches the one scored by [`Experiment::run`].
    pub fn replay(&self, variant: &AblationVariant, trial: usize, base_seed: u64, record_every: usize) -> Result<Trajectory> {
        let (schedule, coupling, sigma) = variant.configure(&self.schedule, &self.coupling)?;
        let config = self.config(&schedule, base_seed, record_every)?;
        self.simulate_trial(&schedule, &coupling, sigma, &config, trial)
    }

    fn config(&self, schedule: &Schedule, base_seed: u64, record_every: usize) -> Result<SimConfig> {
        let config = SimConfig {
            dt: self.dt,
            t_end: schedule.t_end(),
            seed: base_seed,
            record_every,
            init_mode: self.init_mode.clone(),
            record_energy: false,
        };
        config.validate()?;
        Ok(config)
    }

    fn simulate_trial(
        &self,
        schedule: &Schedule,
        coupling: &PhaseCoupling,
        sigma: f64,
        config: &SimConfig,
        k: usize,
    ) -> Result<Trajectory> {
        let mut rng = trial_rng(config.seed, k as u64);
        let n = self.problem.n();
        let bank = if sigma > 0.0 { OscillatorBank::gaussian(n, 1.0, sigma, &mut rng)? } else { OscillatorBank::uniform(n) };
        simulate_with_rng(&self.problem, coupling, &bank, schedule, config, &mut rng)
    }

    fn run_trial(&self, schedule: &Schedule, coupling: &PhaseCoupling, sigma: f64, config: &SimConfig, k: usize) -> TrialOutcome {
        let start = Instant::now();
        let result = (|| {
            let traj = self.simulate_trial(schedule, coupling, sigma, config, k)?;
            let spins = read_spins(&traj.last().expect("final state recorded").phi);
            let h = hamiltonian(&self.problem, &spins)?;
            let cut = self.graph.as_ref().map(|g| cut_value(g, &spins)).transpose()?;
            Ok::<_, OimError>(TrialResult { h, cut, spins })
        })();
        let (result, error) = match result {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        };
        TrialOutcome { trial: k, wall_seconds: start.elapsed().as_secs_f64(), result, error }
    }
}

/// Runs `n_trials` energy-scored trials with the default coupling and step.
pub fn run_trials(
    problem: &IsingProblem,
    variant: &AblationVariant,
    schedule: &Schedule,
    n_trials: usize,
    base_seed: u64,
    target: Option<f64>,
) -> Result<TrialStats> {
    Experiment::ising(problem.clone(), schedule.clone()).with_target(target).run(variant, n_trials, base_seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub h: f64,
    pub cut: Option<f64>,
    pub spins: SpinConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub wall_seconds: f64,
    pub result: Option<TrialResult>,
    pub error: Option<String>,
}

/// Equal-width bins over the observed objective range. `failed` counts
/// trials without a result, so bins plus `failed` always sum to the trial
/// count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<usize>,
    pub failed: usize,
}

impl Histogram {
    fn build(values: &[f64], bins: usize, failed: usize) -> Self {
        if values.is_empty() {
            return Histogram { lo: 0.0, hi: 0.0, counts: vec![0; bins], failed };
        }
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut counts = vec![0; bins];
        for &v in values {
            let b = if hi > lo { (((v - lo) / (hi - lo)) * bins as f64) as usize } else { 0 };
            counts[b.min(bins - 1)] += 1;
        }
        Histogram { lo, hi, counts, failed }
    }

    pub fn mass(&self) -> usize {
        self.counts.iter().sum::<usize>() + self.failed
    }
}

/// Aggregate of a batch of trials. Equality compares everything except wall
/// times.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialStats {
    pub n_trials: usize,
    pub n_failed: usize,
    /// True when trials are scored by cut value.
    pub maxcut: bool,
    pub target: Option<f64>,
    pub best_h: Option<f64>,
    pub best_cut: Option<f64>,
    pub best_spins: Option<SpinConfig>,
    pub best_trial: Option<usize>,
    /// Trials reaching the target.
    pub n_max: usize,
    /// Trials reaching 99.9% of the target.
    pub n_0999: usize,
    pub histogram: Histogram,
    pub outcomes: Vec<TrialOutcome>,
    pub total_wall_seconds: f64,
}

impl PartialEq for TrialStats {
    fn eq(&self, other: &Self) -> bool {
        self.n_trials == other.n_trials
            && self.n_failed == other.n_failed
            && self.maxcut == other.maxcut
            && self.target == other.target
            && self.best_h == other.best_h
            && self.best_cut == other.best_cut
            && self.best_spins == other.best_spins
            && self.best_trial == other.best_trial
            && self.n_max == other.n_max
            && self.n_0999 == other.n_0999
            && self.histogram == other.histogram
            && self.outcomes.len() == other.outcomes.len()
            && self
                .outcomes
                .iter()
                .zip(&other.outcomes)
                .all(|(a, b)| a.trial == b.trial && a.result == b.result && a.error == b.error)
    }
}

impl TrialStats {
    pub fn from_outcomes(mut outcomes: Vec<TrialOutcome>, target: Option<f64>, maxcut: bool, bins: usize) -> Self {
        outcomes.sort_by_key(|o| o.trial);
        let objective = |r: &TrialResult| if maxcut { r.cut.unwrap_or(f64::NAN) } else { r.h };
        let better = |a: f64, b: f64| if maxcut { a > b } else { a < b };
        let mut best: Option<(usize, &TrialOutcome)> = None;
        let mut values = Vec::new();
        let (mut n_max, mut n_0999) = (0, 0);
        for (idx, o) in outcomes.iter().enumerate() {
            let Some(r) = &o.result else { continue };
            let v = objective(r);
            values.push(v);
            if best.is_none_or(|(_, b)| better(v, objective(b.result.as_ref().unwrap()))) {
                best = Some((idx, o));
            }
            if let Some(t) = target {
                let eps = 1e-9 * t.abs().max(1.0);
                let (hit, near) =
                    if maxcut { (v >= t - eps, v >= 0.999 * t - eps) } else { (v <= t + eps, v <= t + 0.001 * t.abs() + eps) };
                n_max += usize::from(hit);
                n_0999 += usize::from(near);
            }
        }
        let n_failed = outcomes.len() - values.len();
        let best_result = best.map(|(_, o)| o.result.clone().unwrap());
        TrialStats {
            n_trials: outcomes.len(),
            n_failed,
            maxcut,
            target,
            best_h: best_result.as_ref().map(|r| r.h),
            best_cut: best_result.as_ref().and_then(|r| r.cut),
            best_spins: best_result.map(|r| r.spins),
            best_trial: best.map(|(_, o)| o.trial),
            n_max,
            n_0999,
            histogram: Histogram::build(&values, bins, n_failed),
            total_wall_seconds: outcomes.iter().map(|o| o.wall_seconds).sum(),
            outcomes,
        }
    }

    /// Combines statistics over disjoint sets of trials.
    pub fn merge(&self, other: &TrialStats) -> Result<TrialStats> {
        if self.maxcut != other.maxcut || self.target != other.target {
            return Err(OimError::invalid("cannot merge statistics with different objectives"));
        }
        if self.outcomes.iter().any(|a| other.outcomes.iter().any(|b| a.trial == b.trial)) {
            return Err(OimError::invalid("cannot merge overlapping trial sets"));
        }
        let outcomes = self.outcomes.iter().chain(&other.outcomes).cloned().collect();
        let mut merged = TrialStats::from_outcomes(outcomes, self.target, self.maxcut, self.histogram.counts.len());
        merged.total_wall_seconds = self.total_wall_seconds + other.total_wall_seconds;
        Ok(merged)
    }

    /// Per-trial objective (cut or energy) of the successful trials, in trial
    /// order.
    pub fn objective_values(&self) -> Vec<f64> {
        self.outcomes
            .iter()
            .filter_map(|o| o.result.as_ref())
            .map(|r| if self.maxcut { r.cut.unwrap_or(f64::NAN) } else { r.h })
            .collect()
    }

    pub fn median(&self) -> Option<f64> {
        median(self.objective_values())
    }

    pub fn mean(&self) -> Option<f64> {
        let v = self.objective_values();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    }

    pub fn mean_wall_seconds(&self) -> f64 {
        if self.outcomes.is_empty() {
            return 0.0;
        }
        self.outcomes.iter().map(|o| o.wall_seconds).sum::<f64>() / self.outcomes.len() as f64
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialise")
    }
}

pub(crate) fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::cubic8;
    use crate::schedule::Schedule;

    fn cubic_experiment() -> Experiment {
        let sched = Schedule::new(10.0, vec![(0.0, 0.0), (10.0, 5.0)], vec![(0.0, 3.0)], vec![(0.0, 0.1)]).unwrap();
        Experiment::maxcut(&cubic8(), sched).with_coupling(PhaseCoupling::sine()).with_target(Some(10.0))
    }

    #[test]
    fn stats_are_consistent() {
        let e = cubic_experiment();
        let s = e.run(&AblationVariant::Baseline, 12, 3).unwrap();
        assert_eq!(s.n_trials, 12);
        assert!(s.n_max <= s.n_0999 && s.n_0999 <= s.n_trials);
        assert_eq!(s.histogram.mass(), 12);
        let spins = s.best_spins.as_ref().unwrap();
        assert_eq!(s.best_h.unwrap(), hamiltonian(e.problem(), spins).unwrap());
        assert_eq!(s.best_cut.unwrap(), cut_value(&cubic8(), spins).unwrap());
    }

    #[test]
    fn merge_and_workers() {
        let e = cubic_experiment();
        let all = e.run(&AblationVariant::Baseline, 8, 11).unwrap();
        let a = e.run_range(&AblationVariant::Baseline, 0..3, 11).unwrap();
        let b = e.run_range(&AblationVariant::Baseline, 3..8, 11).unwrap();
        assert_eq!(b.merge(&a).unwrap(), all);
        assert!(a.merge(&a).is_err());
        let two = e.clone().with_workers(Some(2)).run(&AblationVariant::Baseline, 8, 11).unwrap();
        let one = e.with_workers(Some(1)).run(&AblationVariant::Baseline, 8, 11).unwrap();
        assert_eq!(one, two);
        assert_eq!(one, all);
    }

    #[test]
    fn replay_matches_scored_trial() {
        let e = cubic_experiment();
        let s = e.run(&AblationVariant::Baseline, 4, 9).unwrap();
        let k = s.best_trial.unwrap();
        let tr = e.replay(&AblationVariant::Baseline, k, 9, 100).unwrap();
        assert_eq!(&read_spins(&tr.last().unwrap().phi), s.best_spins.as_ref().unwrap());
        assert_eq!(tr.samples[0].t, 0.0);
        assert!(tr.len() > 5);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(cubic_experiment().run(&AblationVariant::Baseline, 0, 0).is_err());
    }

    #[test]
    fn medians() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(vec![]), None);
    }

    #[test]
    fn energy_targets() {
        let r = |trial, h| TrialOutcome {
            trial,
            wall_seconds: 0.0,
            result: Some(TrialResult { h, cut: None, spins: SpinConfig::all_up(1) }),
            error: None,
        };
        let failed = TrialOutcome { trial: 3, wall_seconds: 0.0, result: None, error: Some("x".into()) };
        let s = TrialStats::from_outcomes(vec![r(0, -100.0), r(1, -99.95), r(2, -90.0), failed], Some(-100.0), false, 4);
        assert_eq!((s.n_max, s.n_0999, s.n_failed), (1, 2, 1));
        assert_eq!(s.best_trial, Some(0));
        assert_eq!(s.histogram.mass(), 4);
    }
}
