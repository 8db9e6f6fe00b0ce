use std::f64::consts::{PI, TAU};

use oim_core::genadler::*;
use proptest::prelude::*;

const M: usize = 256;

/// Random trigonometric polynomial of low degree.
fn trig() -> impl Strategy<Value = Vec<(f64, f64)>> {
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..5)
}

fn eval(coef: &[(f64, f64)], t: f64) -> f64 {
    coef.iter().enumerate().map(|(k, (a, b))| a * ((k + 1) as f64 * t).cos() + b * ((k + 1) as f64 * t).sin()).sum()
}

fn sig(coef: &[(f64, f64)]) -> PeriodicSignal {
    PeriodicSignal::from_fn(M, |t| eval(coef, t)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linear_in_the_input(p in trig(), b1 in trig(), b2 in trig(), alpha in -2.0..2.0f64, beta in -2.0..2.0f64) {
        let p = sig(&p);
        let (s1, s2) = (sig(&b1), sig(&b2));
        let mix = PeriodicSignal::from_fn(M, |t| alpha * eval(&b1, t) + beta * eval(&b2, t)).unwrap();
        let c = cross_correlate(&p, &mix).unwrap();
        let (c1, c2) = (cross_correlate(&p, &s1).unwrap(), cross_correlate(&p, &s2).unwrap());
        for k in 0..M {
            prop_assert!((c.channel(0)[k] - alpha * c1.channel(0)[k] - beta * c2.channel(0)[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn input_shift_moves_the_correlation(p in trig(), b in trig(), delta in 0.0..TAU) {
        let ps = sig(&p);
        let c = cross_correlate(&ps, &sig(&b)).unwrap();
        let shifted = PeriodicSignal::from_fn(M, |t| eval(&b, t + delta)).unwrap();
        let cs = cross_correlate(&ps, &shifted).unwrap();
        let cell = TAU / M as f64;
        // c is smooth, so a one-cell displacement bounds the interpolation error
        let slope = (0..M).map(|k| (c.channel(0)[(k + 1) % M] - c.channel(0)[k]).abs()).fold(0.0, f64::max);
        for k in 0..M {
            let t = k as f64 * cell;
            prop_assert!((cs.channel(0)[k] - c.value(t - delta)).abs() <= slope + 1e-9);
        }
    }

    #[test]
    fn roots_are_accurate(p in trig(), b in trig(), d in -1.0..1.0f64, phi_in in -3.0..3.0f64) {
        let c = cross_correlate(&sig(&p), &sig(&b)).unwrap();
        for e in lock_equilibria(&c, d, phi_in) {
            prop_assert!((0.0..TAU).contains(&e.phi_star));
            prop_assert!((c.value(e.phi_star - phi_in) - d).abs() < 1e-9 * (1.0 + c.max_abs()));
            prop_assert_eq!(e.stable, !e.degenerate && e.slope < 0.0);
        }
    }

    #[test]
    fn pi_periodic_inputs_give_paired_locks(p in trig(), b in trig(), d in -0.5..0.5f64) {
        // keep only even harmonics so both signals are π-periodic
        let p2 = PeriodicSignal::from_fn(M, |t| eval(&p, 2.0 * t)).unwrap();
        let b2 = PeriodicSignal::from_fn(M, |t| eval(&b, 2.0 * t)).unwrap();
        let eq = shil_bistability(&p2, &b2, d).unwrap();
        let stable: Vec<f64> = eq.iter().filter(|e| e.stable).map(|e| e.phi_star).collect();
        for &x in &stable {
            let partner = (x + PI).rem_euclid(TAU);
            let dist = |y: f64| { let r = (y - partner).rem_euclid(TAU); r.min(TAU - r) };
            prop_assert!(stable.iter().any(|&y| dist(y) < 1e-8), "{x} has no partner in {stable:?}");
        }
    }
}

#[test]
fn csv_import_resamples() {
    let mut text = String::from("tau,value\n# coarse samples of cos\n");
    for k in 0..100 {
        let t = TAU * k as f64 / 100.0;
        text.push_str(&format!("{t},{}\n", t.cos()));
    }
    let s = PeriodicSignal::from_csv(&text, 512).unwrap();
    assert_eq!(s.m(), 512);
    for k in 0..512 {
        let t = TAU * k as f64 / 512.0;
        assert!((s.channel(0)[k] - t.cos()).abs() < 2e-3);
    }
    assert!(PeriodicSignal::from_csv("tau,value\n0,1\n0,2\n", 64).is_err());
    assert!(PeriodicSignal::from_csv("tau,value\n0,1\n7,2\n", 64).is_err());
}

#[test]
fn lock_reports_serialise() {
    let c = PeriodicSignal::from_fn(DEFAULT_SAMPLES, |t| -t.sin()).unwrap();
    let r = lock_sweep(&c, &[-0.5, 0.0, 0.5, 2.0], 0.0);
    assert_eq!(r.iter().map(|x| x.locked).collect::<Vec<_>>(), [true, true, true, false]);
    let js = serde_json::to_string(&r).unwrap();
    let back: Vec<LockReport> = serde_json::from_str(&js).unwrap();
    assert_eq!(back, r);
}
