use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use oim_core::dynamics::PhaseCoupling;
use oim_core::genadler::{cross_correlate, lock_sweep, shil_bistability, PeriodicSignal, DEFAULT_SAMPLES};
use oim_core::harness::{
    ablate, boltzmann_check, gset_target, scaling_study, AblationVariant, BoltzmannConfig, Experiment, ScalingParams, TrialStats,
};
use oim_core::ising::{coloring_to_ising, decode_coloring, parse_gset, parse_labelled_adjacency, ColoringInstance, IsingProblem};
use oim_core::schedule::{baseline_schedule_with, BaselineParams, Schedule};
use oim_core::OimError;

#[derive(Parser)]
#[command(name = "oim", version, about = "Oscillator-based Ising machine simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Anneal a MAX-CUT instance in G-set format.
    SolveMaxcut {
        gset_file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Best-known cut used for n_max / n_0999. Looked up by file name for
        /// G-set instances when omitted.
        #[arg(long)]
        target: Option<f64>,
        /// Write the best trial's phase trajectory here as CSV.
        #[arg(long)]
        traj: Option<PathBuf>,
        /// Steps between trajectory samples.
        #[arg(long, default_value_t = 10)]
        traj_every: usize,
    },
    /// Color a graph given as a labelled adjacency list (`A B` per line).
    SolveColoring {
        adjacency_file: PathBuf,
        #[arg(long, default_value_t = 4)]
        colors: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run ablation variants on a G-set instance with shared seeds.
    Ablate {
        gset_file: PathBuf,
        /// Comma-separated variants, e.g. `baseline,no_noise,variability:0.01`.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "baseline,no_noise,no_sync_threshold,sine_coupling,variability:0.01,variability:0.05"
        )]
        variants: Vec<String>,
        #[arg(long)]
        target: Option<f64>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compare long noisy runs on a tiny problem against the stationary density.
    Boltzmann {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Coupling `i,j,J`; repeat for more pairs. Defaults to `0,1,1`.
        #[arg(long = "j")]
        couplings: Vec<String>,
        /// Field `i,h`; repeatable.
        #[arg(long = "h")]
        fields: Vec<String>,
        #[arg(long, default_value_t = 0.5)]
        k: f64,
        #[arg(long, default_value_t = 1.0)]
        ks: f64,
        #[arg(long, default_value_t = 0.5)]
        kn: f64,
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        burn_in: usize,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = CouplingArg::Sine)]
        coupling: CouplingArg,
        #[arg(long, default_value_t = 4.0)]
        beta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Detuning sweep of the generalised Adler equation.
    Genadler {
        /// Phase response as CSV `tau,value` (default `-sin`).
        #[arg(long)]
        ppv: Option<PathBuf>,
        /// Injected waveform as CSV `tau,value` (default `cos`).
        #[arg(long)]
        injection: Option<PathBuf>,
        /// Second-harmonic injection: defaults become `-sin 2τ` and `cos 2τ`,
        /// and the π-periodic bistability check runs at zero detuning.
        #[arg(long)]
        shil: bool,
        #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
        detuning_min: f64,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        detuning_max: f64,
        #[arg(long, default_value_t = 41)]
        points: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi_in: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Energy-versus-time traces of random ±1 problems of several sizes.
    Scaling {
        #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10.0)]
        density: f64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long, default_value_t = 0.1)]
        ks: f64,
        #[arg(long, default_value_t = 0.01)]
        kn: f64,
        #[arg(long, default_value_t = 20.0)]
        t_end: f64,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        #[arg(long, default_value_t = 10)]
        record_every: usize,
        #[arg(long, value_enum, default_value_t = CouplingArg::Sine)]
        coupling: CouplingArg,
        #[arg(long, default_value_t = 4.0)]
        beta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output (`n,t,mean_h,normalized`); a summary goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CouplingArg {
    Sine,
    Sqsmooth,
}

impl CouplingArg {
    fn build(self, beta: f64) -> Result<PhaseCoupling> {
        Ok(match self {
            CouplingArg::Sine => PhaseCoupling::sine(),
            CouplingArg::Sqsmooth => PhaseCoupling::smoothed_square(beta)?,
        })
    }
}

/// Options shared by the annealing subcommands.
#[derive(Args)]
struct RunArgs {
    /// Schedule JSON; overrides the baseline shape options below.
    #[arg(long)]
    schedule: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = CouplingArg::Sqsmooth)]
    coupling: CouplingArg,
    /// Sharpness of the smoothed square wave.
    #[arg(long, default_value_t = 4.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    #[arg(long, default_value_t = 20.0)]
    t_end: f64,
    /// Start from the shape tuned for sparse 800-node MAX-CUT.
    #[arg(long)]
    tuned: bool,
    #[arg(long)]
    k_max: Option<f64>,
    #[arg(long)]
    ks_max: Option<f64>,
    #[arg(long)]
    kn_max: Option<f64>,
    #[arg(long)]
    ks_ramps: Option<usize>,
    /// Fraction of the horizon before noise switches on.
    #[arg(long)]
    kn_step: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Write statistics as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn schedule(&self) -> Result<Schedule> {
        if let Some(path) = &self.schedule {
            return Ok(Schedule::from_json(&read(path)?).with_context(|| format!("reading schedule {}", path.display()))?);
        }
        let mut p = if self.tuned { BaselineParams::tuned() } else { BaselineParams::default() };
        p.k_max = self.k_max.unwrap_or(p.k_max);
        p.ks_max = self.ks_max.unwrap_or(p.ks_max);
        p.kn_max = self.kn_max.unwrap_or(p.kn_max);
        p.ks_ramps = self.ks_ramps.unwrap_or(p.ks_ramps);
        p.kn_step_frac = self.kn_step.unwrap_or(p.kn_step_frac);
        Ok(baseline_schedule_with(self.t_end, p)?)
    }

    fn experiment(&self, e: Experiment) -> Result<Experiment> {
        Ok(e.with_coupling(self.coupling.build(self.beta)?).with_dt(self.dt).with_workers(self.workers))
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_gset(path: &Path) -> Result<oim_core::ising::WeightedGraph> {
    let mut g = parse_gset(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(stem) = path.file_stem() {
        g.name = stem.to_string_lossy().into_owned();
    }
    Ok(g)
}

fn default_target(graph: &oim_core::ising::WeightedGraph, explicit: Option<f64>) -> Option<f64> {
    explicit.or_else(|| gset_target(&graph.name).map(|t| t.best_known))
}

/// Every trial of a run failed; the first error is kept for the message.
#[derive(Debug)]
struct AllTrialsFailed(String);

impl std::fmt::Display for AllTrialsFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "all trials failed: {}", self.0)
    }
}

impl std::error::Error for AllTrialsFailed {}

fn check_stats(s: &TrialStats) -> Result<()> {
    if s.n_failed == s.n_trials {
        let first = s.outcomes.iter().find_map(|o| o.error.clone()).unwrap_or_default();
        return Err(AllTrialsFailed(first).into());
    }
    Ok(())
}

fn print_stats(s: &TrialStats) {
    let fmt = |x: Option<f64>| x.map_or("-".into(), |v| format!("{v}"));
    println!("trials      {} ({} failed)", s.n_trials, s.n_failed);
    if s.maxcut {
        println!("best cut    {}", fmt(s.best_cut));
    }
    println!("best H      {}", fmt(s.best_h));
    println!("median      {}", fmt(s.median()));
    if let Some(t) = s.target {
        println!("target      {t}");
        println!("n_max       {}", s.n_max);
        println!("n_0999      {}", s.n_0999);
    }
    println!("wall time   {:.2} s total, {:.3} s/trial", s.total_wall_seconds, s.mean_wall_seconds());
}

fn parse_fields<const N: usize>(spec: &str) -> Result<[f64; N]> {
    let v: Vec<f64> = spec
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| OimError::InvalidParameter(format!("bad number in '{spec}'")))?;
    v.try_into().map_err(|_| OimError::InvalidParameter(format!("expected {N} comma-separated values, got '{spec}'")).into())
}

fn index(x: f64, n: usize) -> Result<usize> {
    if x.fract() != 0.0 || x < 0.0 || x as usize >= n {
        bail!(OimError::InvalidParameter(format!("spin index {x} out of range for n = {n}")));
    }
    Ok(x as usize)
}

fn signal(path: Option<&PathBuf>, samples: usize, default: impl Fn(f64) -> f64) -> Result<PeriodicSignal> {
    Ok(match path {
        Some(p) => PeriodicSignal::from_csv(&read(p)?, samples).with_context(|| format!("parsing {}", p.display()))?,
        None => PeriodicSignal::from_fn(samples, default)?,
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::SolveMaxcut { gset_file, run, target, traj, traj_every } => {
            let graph = load_gset(&gset_file)?;
            let target = default_target(&graph, target);
            let e = run.experiment(Experiment::maxcut(&graph, run.schedule()?))?.with_target(target);
            println!("instance    {} (n = {}, m = {})", graph.name, graph.n(), graph.edge_count());
            let stats = e.run(&AblationVariant::Baseline, run.trials, run.seed)?;
            print_stats(&stats);
            check_stats(&stats)?;
            if let Some(out) = &run.out {
                write(out, &stats.to_json())?;
            }
            if let Some(path) = traj {
                let Some(best) = stats.best_trial else { bail!("no successful trial to record") };
                let tr = e.replay(&AblationVariant::Baseline, best, run.seed, traj_every)?;
                tr.write_csv(fs::File::create(&path).with_context(|| format!("cannot write {}", path.display()))?)?;
            }
        }
        Command::SolveColoring { adjacency_file, colors, run } => {
            let (graph, names) = parse_labelled_adjacency(&read(&adjacency_file)?)
                .with_context(|| format!("parsing {}", adjacency_file.display()))?;
            let instance = ColoringInstance::new(graph, colors)?;
            let problem = coloring_to_ising(&instance);
            let e = run.experiment(Experiment::ising(problem, run.schedule()?))?.with_target(Some(0.0));
            println!("instance    {} vertices, {} edges, {colors} colors", instance.graph.n(), instance.graph.edge_count());
            let stats = e.run(&AblationVariant::Baseline, run.trials, run.seed)?;
            print_stats(&stats);
            check_stats(&stats)?;
            let valid = stats
                .outcomes
                .iter()
                .filter_map(|o| o.result.as_ref())
                .filter(|r| decode_coloring(&instance, &r.spins).is_ok_and(|a| a.valid))
                .count();
            println!("valid       {valid} of {}", stats.n_trials);
            if let Some(spins) = &stats.best_spins {
                let a = decode_coloring(&instance, spins)?;
                if a.valid {
                    for (name, c) in names.iter().zip(&a.colors) {
                        println!("{name} {c}");
                    }
                } else {
                    println!("best assignment has {} issues", a.issues.len());
                }
            }
            if let Some(out) = &run.out {
                write(out, &stats.to_json())?;
            }
        }
        Command::Ablate { gset_file, variants, target, run } => {
            let graph = load_gset(&gset_file)?;
            let variants = variants.iter().map(|v| v.parse()).collect::<oim_core::Result<Vec<AblationVariant>>>()?;
            let e = run.experiment(Experiment::maxcut(&graph, run.schedule()?))?.with_target(default_target(&graph, target));
            let report = ablate(&e, &variants, run.trials, run.seed)?;
            print!("{}", report.table());
            report.stats.iter().try_for_each(check_stats)?;
            if let Some(out) = &run.out {
                write(out, &serde_json::to_string_pretty(&report)?)?;
            }
        }
        Command::Boltzmann { n, couplings, fields, k, ks, kn, steps, burn_in, dt, grid, coupling, beta, seed, out } => {
            let mut b = IsingProblem::builder(n);
            if couplings.is_empty() && fields.is_empty() {
                b.add_coupling(0, 1, 1.0);
            }
            for c in &couplings {
                let [i, j, v] = parse_fields::<3>(c)?;
                b.add_coupling(index(i, n)?, index(j, n)?, v);
            }
            for h in &fields {
                let [i, v] = parse_fields::<2>(h)?;
                b.add_field(index(i, n)?, v);
            }
            let problem = b.build()?;
            let config = BoltzmannConfig { dt, burn_in, grid, ..BoltzmannConfig::new(k, ks, kn, steps, seed) };
            let r = boltzmann_check(&problem, &coupling.build(beta)?, &config)?;
            println!("tv distance {:.4}", r.tv_distance);
            println!("{:<10} {:>8} {:>10} {:>10} {:>10}", "basin", "H", "empirical", "sigma", "oracle");
            for basin in &r.basins {
                let label: String = basin.spins.as_slice().iter().map(|&s| if s > 0 { '+' } else { '-' }).collect();
                println!(
                    "{label:<10} {:>8} {:>10.4} {:>10.4} {:>10.4}",
                    basin.ising_h, basin.empirical, basin.empirical_sigma, basin.oracle
                );
            }
            println!("lowest energy preferred: {}", r.lowest_energy_preferred);
            if let Some(out) = &out {
                write(out, &r.to_json())?;
            }
        }
        Command::Genadler { ppv, injection, shil, detuning_min, detuning_max, points, phi_in, samples, out } => {
            let harmonic = if shil { 2.0 } else { 1.0 };
            let p = signal(ppv.as_ref(), samples, |t| -(harmonic * t).sin())?;
            let b = signal(injection.as_ref(), samples, |t| (harmonic * t).cos())?;
            if points < 2 || !(detuning_max > detuning_min) {
                bail!(OimError::InvalidParameter("need at least 2 points and detuning_max > detuning_min".into()));
            }
            let c = cross_correlate(&p, &b)?;
            let detunings: Vec<f64> =
                (0..points).map(|k| detuning_min + (detuning_max - detuning_min) * k as f64 / (points - 1) as f64).collect();
            let sweep = lock_sweep(&c, &detunings, phi_in);
            println!("{:>10} {:>7} {:>4}  stable phases", "detuning", "locked", "n");
            for r in &sweep {
                let phases: Vec<String> =
                    r.equilibria.iter().filter(|e| e.stable).map(|e| format!("{:.4}", e.phi_star)).collect();
                println!("{:>10.4} {:>7} {:>4}  {}", r.detuning, r.locked, r.n_stable, phases.join(" "));
            }
            let locked: Vec<f64> = sweep.iter().filter(|r| r.locked).map(|r| r.detuning).collect();
            match (locked.first(), locked.last()) {
                (Some(lo), Some(hi)) => println!("lock range  [{lo:.4}, {hi:.4}]"),
                _ => println!("lock range  empty"),
            }
            if shil {
                let eq = shil_bistability(&p, &b, 0.0)?;
                let st: Vec<String> = eq
                    .iter()
                    .filter(|e| e.stable)
                    .map(|e| format!("{:.4} ({:.3}π)", e.phi_star, 2.0 * e.phi_star / TAU))
                    .collect();
                println!("SHIL stable states at zero detuning: {}", st.join(", "));
            }
            if let Some(out) = &out {
                write(out, &serde_json::to_string_pretty(&sweep)?)?;
            }
        }
        Command::Scaling { sizes, density, trials, k, ks, kn, t_end, dt, record_every, coupling, beta, seed, out } => {
            let params = ScalingParams { k, ks, kn, t_end, dt, record_every };
            let r = scaling_study(&sizes, density, trials, &params, &coupling.build(beta)?, seed)?;
            println!("{:>6} {:>8} {:>14} {:>12} {:>10}", "n", "edges", "final mean H", "H / edges", "settling");
            for tr in &r.traces {
                let last = tr.mean_h.len() - 1;
                println!(
                    "{:>6} {:>8} {:>14.2} {:>12.4} {:>10.2}",
                    tr.n, tr.n_edges, tr.mean_h[last], tr.normalized[last], tr.settling_time
                );
            }
            if let Some(out) = &out {
                write(out, &r.to_csv())?;
            }
        }
    }
    Ok(())
}

/// 2 for bad input, 3 for numerical failure, 1 otherwise.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<AllTrialsFailed>() {
            return 3;
        }
        if let Some(e) = cause.downcast_ref::<OimError>() {
            return match e {
                e if e.is_numeric() => 3,
                OimError::Io(_) => 1,
                _ => 2,
            };
        }
        if cause.is::<serde_json::Error>() {
            return 2;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
