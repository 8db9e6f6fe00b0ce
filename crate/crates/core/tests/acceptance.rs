//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.
//!
//! `cargo test --release --test acceptance` runs everything; pass criterion
//! numbers after `--` to run a subset. G-set files are looked up in
//! `$OIM_GSET_DIR` and then `crates/core/data/gset/`. Set
//! `OIM_ACCEPTANCE_STRICT=1` to make any FAIL a non-zero exit.

use std::f64::consts::{PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use oim_core::dynamics::*;
use oim_core::genadler::*;
use oim_core::harness::*;
use oim_core::ising::*;
use oim_core::lyapunov::{check_monotone, energy, grad_energy, DESCENT_REL_TOL};
use oim_core::rng::rng_from_seed;
use oim_core::schedule::*;
use rand::Rng;

// pinned tolerances and thresholds
const C1_MIN_HITS: usize = 90;
const C1_MAX_SECONDS: f64 = 10.0;
const C2_BEST_KNOWN: f64 = 11624.0;
const C2_THRESHOLD: f64 = 11612.0;
const C2_MAX_SECONDS: f64 = 1800.0;
const C4_TOL: f64 = 1e-5;
const C5_TOL: f64 = 1e-12;
const C6_BINARY_MAX: f64 = 0.15;
const C6_ANALOG_MIN: f64 = 0.5;
const C7_EXACT_FRACTION: f64 = 0.8;
const C7_MAX_GAP: f64 = 0.05;
const C8_REL_TOL: f64 = 1e-12;
const C9_MIN_VALID: usize = 5;
const C10_VARIABILITY_BAND: f64 = 0.002;
const C11_PAIR_TOL: f64 = 1e-6;
const C12_RATIO_FACTOR: f64 = 2.0;

type Check = (bool, String);

fn gset_file(name: &str) -> Option<PathBuf> {
    let mut dirs = Vec::new();
    if let Ok(d) = std::env::var("OIM_GSET_DIR") {
        dirs.push(PathBuf::from(d));
    }
    dirs.push(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/gset"));
    let names = [name.to_string(), name.to_lowercase(), format!("{name}.txt"), format!("{}.txt", name.to_lowercase())];
    dirs.iter().flat_map(|d| names.iter().map(move |n| d.join(n))).find(|p| p.is_file())
}

fn load_gset(name: &str) -> Option<WeightedGraph> {
    let path = gset_file(name)?;
    let text = std::fs::read_to_string(&path).ok()?;
    let mut g = parse_gset(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    g.name = name.to_string();
    Some(g)
}

fn sqsmooth() -> PhaseCoupling {
    PhaseCoupling::smoothed_square(DEFAULT_BETA).unwrap()
}

/// K ramped 0 to 5 with constant Ks = 3 and Kn = 0.1.
fn cubic_schedule() -> Schedule {
    Schedule::new(20.0, vec![(0.0, 0.0), (20.0, 5.0)], vec![(0.0, 3.0)], vec![(0.0, 0.1)]).unwrap()
}

fn c1() -> Check {
    let e = Experiment::maxcut(&cubic8(), cubic_schedule()).with_coupling(sqsmooth()).with_target(Some(10.0));
    let start = Instant::now();
    let s = e.run(&AblationVariant::Baseline, 100, 1).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let ok = s.n_max >= C1_MIN_HITS && secs < C1_MAX_SECONDS && s.best_cut == Some(10.0);
    (ok, format!("{} of 100 trials reach cut 10 (need {C1_MIN_HITS}); {secs:.2} s (limit {C1_MAX_SECONDS} s)", s.n_max))
}

fn c2() -> Check {
    let Some(g) = load_gset("G1") else {
        return (false, "G1 instance not found; set OIM_GSET_DIR to a directory holding the G-set file `G1`".into());
    };
    let sched = baseline_schedule_with(20.0, BaselineParams::tuned()).unwrap();
    let e = Experiment::maxcut(&g, sched).with_target(Some(C2_BEST_KNOWN));
    let start = Instant::now();
    let s = e.run(&AblationVariant::Baseline, 200, 0).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let best = s.best_cut.unwrap_or(f64::NAN);
    let ok = best >= C2_THRESHOLD && secs <= C2_MAX_SECONDS;
    (
        ok,
        format!("best cut {best} over 200 trials (need {C2_THRESHOLD}); n_max = {}, n_0999 = {}; {secs:.0} s", s.n_max, s.n_0999),
    )
}

fn c3() -> Check {
    let g = random_graph(20, 10.0, WeightMode::PmOne, 3).unwrap();
    let p = maxcut_to_ising(&g);
    let bank = OscillatorBank::uniform(20);
    let sched = Schedule::constant(20.0, 0.5, 1.0, 0.0).unwrap();
    let mut worst = f64::NEG_INFINITY;
    let mut samples = 0;
    for c in [PhaseCoupling::sine(), sqsmooth()] {
        let cfg = SimConfig::new(20.0, 3).with_dt(0.01).with_energy();
        let tr = simulate(&p, &c, &bank, &sched, &cfg).unwrap();
        let r = check_monotone(&tr, &c, &p, &bank).unwrap();
        if !r.passed {
            return (false, format!("{} coupling: energy rose at sample {:?}", c.pair.label(), r.first_violation));
        }
        samples += r.times.len();
        worst = worst.max(r.max_increment);
    }
    (true, format!("{samples} samples (sine and sqsmooth) non-increasing within {DESCENT_REL_TOL:e}*(1+|E|); largest step change {worst:.3e}"))
}

fn c4() -> Check {
    let mut rng = rng_from_seed(4);
    let n = 10;
    let mut b = IsingProblem::builder(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < 0.5 {
                b.add_coupling(i, j, rng.random_range(-2.0..2.0));
            }
        }
        b.add_field(i, rng.random_range(-1.0..1.0));
    }
    let p = b.build().unwrap();
    let (mut worst_id, mut worst_fd) = (0.0f64, 0.0f64);
    for c in [PhaseCoupling::sine(), sqsmooth()] {
        for spread in [0.0, 0.01] {
            for _ in 0..100 {
                let bank = if spread > 0.0 {
                    OscillatorBank::gaussian(n, 1.0, spread, &mut rng).unwrap()
                } else {
                    OscillatorBank::uniform(n)
                };
                let phi: Vec<f64> = (0..n).map(|_| rng.random_range(-TAU..TAU)).collect();
                let (k, ks) = (rng.random_range(0.1..2.0), rng.random_range(0.0..2.0));
                let d = drift(&p, &c, &bank, &phi, k, ks).unwrap();
                let g = grad_energy(&p, &c, &bank, &phi, k, ks).unwrap();
                for i in 0..n {
                    worst_id = worst_id.max((g[i] + 2.0 / bank.omega()[i] * d[i]).abs());
                    let e = |x: f64| {
                        let mut q = phi.clone();
                        q[i] = x;
                        energy(&p, &c, &bank, &q, k, ks).unwrap().total
                    };
                    let h = 1e-5;
                    worst_fd = worst_fd.max(((e(phi[i] + h) - e(phi[i] - h)) / (2.0 * h) - g[i]).abs());
                }
            }
        }
    }
    (
        worst_id < C4_TOL && worst_fd < C4_TOL,
        format!("max |grad + (2/w) drift| = {worst_id:.2e}, max finite-difference gap = {worst_fd:.2e} (tol {C4_TOL:e})"),
    )
}

fn c5() -> Check {
    let p = maxcut_to_ising(&cubic8());
    let bank = OscillatorBank::uniform(8);
    let mut worst = 0.0f64;
    for ks in [0.0, 1.0, 3.0] {
        for bits in 0..256u64 {
            let s = SpinConfig::from_bits(8, bits);
            let phi: Vec<f64> = s.as_slice().iter().map(|&x| if x > 0 { 0.0 } else { PI }).collect();
            let e = energy(&p, &PhaseCoupling::sine(), &bank, &phi, 0.5, ks).unwrap().total;
            worst = worst.max((e - (hamiltonian(&p, &s).unwrap() - 8.0 * ks)).abs());
        }
    }
    (worst <= C5_TOL, format!("max |E - (H - n Ks)| over 256 configs x Ks in {{0,1,3}} = {worst:.1e}"))
}

fn c6() -> Check {
    let g = random_graph(20, 50.0, WeightMode::Unit, 10001).unwrap();
    let p = maxcut_to_ising(&g);
    let bank = OscillatorBank::uniform(20);
    let settle = |ks: f64| {
        let sched = Schedule::constant(50.0, 0.5, ks, 0.0).unwrap();
        let cfg = SimConfig::new(50.0, 6).with_record_every(usize::MAX);
        let tr = simulate(&p, &PhaseCoupling::sine(), &bank, &sched, &cfg).unwrap();
        binarisation_residual(&tr.last().unwrap().phi)
    };
    let (with, without) = (settle(1.0), settle(0.0));
    (
        with < C6_BINARY_MAX && without > C6_ANALOG_MIN,
        format!("residual {with:.2e} rad with SYNC (< {C6_BINARY_MAX}), {without:.3} rad without (> {C6_ANALOG_MIN})"),
    )
}

fn c7() -> Check {
    let mut rng = rng_from_seed(7);
    let (mut exact, mut worst) = (0usize, 0.0f64);
    for k in 0..20u64 {
        let n = rng.random_range(6..=16);
        let mut b = IsingProblem::builder(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.random::<f64>() < 0.5 {
                    b.add_coupling(i, j, if rng.random::<bool>() { 1.0 } else { -1.0 });
                }
            }
        }
        if k % 2 == 1 {
            for i in 0..n {
                b.add_field(i, rng.random_range(-1i32..=1) as f64);
            }
        }
        let p = b.build().unwrap();
        let (_, h_min) = brute_force_ground_state(&p).unwrap();
        let s = Experiment::ising(p, cubic_schedule()).with_coupling(sqsmooth()).run(&AblationVariant::Baseline, 50, k).unwrap();
        let best = s.best_h.unwrap();
        exact += usize::from(best == h_min);
        worst = worst.max((best - h_min) / h_min.abs().max(1.0));
    }
    let frac = exact as f64 / 20.0;
    (
        frac >= C7_EXACT_FRACTION && worst <= C7_MAX_GAP,
        format!("{exact}/20 exact ground states (need {C7_EXACT_FRACTION}), worst relative gap {worst:.3} (limit {C7_MAX_GAP})"),
    )
}

fn c8() -> Check {
    let mut rng = rng_from_seed(8);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let n = rng.random_range(2..=40);
        let density = rng.random_range(5.0..100.0);
        let mode = match rng.random_range(0..3) {
            0 => WeightMode::Unit,
            1 => WeightMode::PmOne,
            _ => WeightMode::UniformRange { lo: -10.0, hi: 10.0 },
        };
        let g = random_graph(n, density, mode, rng.random()).unwrap();
        let s = SpinConfig::new((0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect()).unwrap();
        let h = hamiltonian(&maxcut_to_ising(&g), &s).unwrap();
        let scale = g.edges().iter().map(|e| e.w.abs()).sum::<f64>().max(1.0);
        worst = worst.max((2.0 * cut_value(&g, &s).unwrap() + h - g.total_weight()).abs() / scale);
    }
    (worst <= C8_REL_TOL, format!("10000 pairs, max relative residual {worst:.1e}"))
}

fn c9() -> Check {
    let inst = us_map_coloring();
    let (n, m) = (inst.graph.n(), 2 * inst.graph.edge_count());
    let sched =
        baseline_schedule_with(20.0, BaselineParams { k_max: 4.0, ks_max: 2.0, kn_max: 0.3, ..Default::default() }).unwrap();
    let e = Experiment::ising(coloring_to_ising(&inst), sched).with_coupling(sqsmooth()).with_target(Some(0.0));
    let s = e.run(&AblationVariant::Baseline, 20, 9).unwrap();
    let valid =
        s.outcomes.iter().filter_map(|o| o.result.as_ref()).filter(|r| decode_coloring(&inst, &r.spins).unwrap().valid).count();
    let ok = valid >= C9_MIN_VALID && n == 51 && m == 220 && valid == s.n_max;
    (ok, format!("{valid} of 20 trials give a valid 4-coloring of the {n}-vertex map (need {C9_MIN_VALID})"))
}

fn c10() -> Check {
    let real: Vec<WeightedGraph> = ["G1", "G2", "G3"].iter().filter_map(|n| load_gset(n)).collect();
    let (graphs, source) = if real.len() == 3 {
        (real, "G1-G3")
    } else {
        let subs = (1..=3)
            .map(|s| {
                let mut g = random_graph(800, 6.0, WeightMode::Unit, s).unwrap();
                g.name = format!("rnd800-{s}");
                g
            })
            .collect();
        (subs, "800-node 6% unit-weight substitutes (G-set files not found)")
    };
    let variants = [
        AblationVariant::Baseline,
        AblationVariant::NoNoise,
        AblationVariant::NoSyncThreshold,
        AblationVariant::SineCoupling,
        AblationVariant::Variability { sigma: 0.01 },
    ];
    let sched = baseline_schedule_with(20.0, BaselineParams::tuned()).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for g in &graphs {
        // the baseline already uses the smoothed square wave
        let e = Experiment::maxcut(g, sched.clone()).with_coupling(sqsmooth());
        let r = ablate(&e, &variants, 50, 10).unwrap();
        let med = |v: &AblationVariant| r.stats_for(v).unwrap().median().unwrap();
        let base = med(&AblationVariant::Baseline);
        let (nn, ns, sine, var) = (
            med(&AblationVariant::NoNoise),
            med(&AblationVariant::NoSyncThreshold),
            med(&AblationVariant::SineCoupling),
            med(&AblationVariant::Variability { sigma: 0.01 }),
        );
        let checks = [base > nn, base > ns, base >= sine, (var - base).abs() <= C10_VARIABILITY_BAND * base];
        ok &= checks.iter().all(|&c| c);
        let mark = |b: bool| if b { "ok" } else { "x" };
        parts.push(format!(
            "{}: base {base} vs no_noise {nn} [{}], no_sync {ns} [{}], sine {sine} [{}], var1% {var} [{}]",
            g.name,
            mark(checks[0]),
            mark(checks[1]),
            mark(checks[2]),
            mark(checks[3])
        ));
    }
    (ok, format!("{source}; medians over 50 trials: {}", parts.join("; ")))
}

fn c11() -> Check {
    let a = 0.7;
    let c = PeriodicSignal::from_fn(DEFAULT_SAMPLES, |t| -a * t.sin()).unwrap();
    let mut ok = true;
    for k in 0..=60 {
        let d = -1.5 + 3.0 * k as f64 / 60.0;
        let eq = lock_equilibria(&c, d, 0.3);
        let stable = eq.iter().filter(|e| e.stable).count();
        let inside = d.abs() < a - 1e-6;
        let outside = d.abs() > a + 1e-6;
        if inside {
            ok &= eq.len() == 2 && stable == 1;
        } else if outside {
            ok &= eq.is_empty();
        }
    }
    // second harmonic: π-periodic PPV and injection
    let p2 = PeriodicSignal::from_fn(DEFAULT_SAMPLES, |t| -(2.0 * t).sin()).unwrap();
    let b2 = PeriodicSignal::from_fn(DEFAULT_SAMPLES, |t| (2.0 * t).cos()).unwrap();
    let eq = shil_bistability(&p2, &b2, 0.0).unwrap();
    let stable: Vec<f64> = eq.iter().filter(|e| e.stable).map(|e| e.phi_star).collect();
    let sep = if stable.len() == 2 { (stable[1] - stable[0]).rem_euclid(TAU) } else { f64::NAN };
    ok &= (sep - PI).abs() <= C11_PAIR_TOL;
    (
        ok,
        format!(
            "lock range |d| <= {a} (2 roots, 1 stable inside, none outside); SHIL stable pair separated by pi + {:.1e}",
            sep - PI
        ),
    )
}

fn c12() -> Check {
    let mut b = IsingProblem::builder(2);
    b.add_coupling(0, 1, 1.0);
    let p = b.build().unwrap();
    let r = boltzmann_check(&p, &PhaseCoupling::sine(), &BoltzmannConfig::new(0.5, 1.0, 0.5, 100_000, 12)).unwrap();
    let sum = |f: &dyn Fn(&BasinProbability) -> f64, aligned: bool| -> f64 {
        r.basins.iter().filter(|x| (x.spins.as_slice()[0] == x.spins.as_slice()[1]) == aligned).map(f).sum()
    };
    let (ea, eb) = (sum(&|x| x.empirical, true), sum(&|x| x.empirical, false));
    let (oa, ob) = (sum(&|x| x.oracle, true), sum(&|x| x.oracle, false));
    let (emp, orc) = (ea / eb, oa / ob);
    let within = emp / orc <= C12_RATIO_FACTOR && orc / emp <= C12_RATIO_FACTOR;
    (within && ea > eb, format!("P(aligned)/P(anti) empirical {emp:.3} vs oracle {orc:.3} (factor limit {C12_RATIO_FACTOR}); aligned preferred: {}; TV {:.3}", ea > eb, r.tv_distance))
}

fn main() {
    let criteria: [(usize, &str, fn() -> Check); 12] = [
        (1, "cubic-8 MAX-CUT optimum", c1),
        (2, "G1 within 99.9% of best known", c2),
        (3, "Lyapunov descent", c3),
        (4, "gradient identity", c4),
        (5, "binary-point energy equality", c5),
        (6, "binarisation with and without SYNC", c6),
        (7, "agreement with brute force", c7),
        (8, "cut identity", c8),
        (9, "US map coloring", c9),
        (10, "ablation orderings", c10),
        (11, "injection locking range", c11),
        (12, "Boltzmann preference", c12),
    ];
    // ignore libtest flags such as --nocapture
    let wanted: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (id, name, f) in criteria {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let (ok, detail) = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(r) => r,
            Err(e) => (
                false,
                format!(
                    "panicked: {}",
                    e.downcast_ref::<String>().cloned().unwrap_or_else(|| format!("{:?}", e.downcast_ref::<&str>()))
                ),
            ),
        };
        failed += usize::from(!ok);
        println!(
            "criterion {id:>2} {}: {name}: {detail} ({:.1} s)",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("{}/{ran} criteria passed", ran - failed);
    if failed > 0 && std::env::var_os("OIM_ACCEPTANCE_STRICT").is_some_and(|v| v != "0") {
        std::process::exit(1);
    }
}
