//! Injection locking of a single oscillator.
//!
//! The phase of an oscillator with natural frequency `ω0` perturbed by an
//! input at `ω1` follows, in units of `ω0`,
//!
//! ```text
//! dφ/dt = -d + c(φ - φ_in),    d = (ω1 - ω0) / ω0,
//! ```
//!
//! where `c` is the cross-correlation of the oscillator's phase sensitivity
//! `p` with the perturbation waveform `b`. Locked states are the roots of
//! `c(φ* - φ_in) = d`. Linearising around a root gives
//! `dδ/dt = c'(φ* - φ_in)·δ`, so a root is stable when `c' < 0` and unstable
//! when `c' > 0`; roots with `c' = 0` are reported as degenerate.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{OimError, Result};

/// Default number of samples per period.
pub const DEFAULT_SAMPLES: usize = 1024;

const ROOT_TOL: f64 = 1e-10;

/// Uniform samples of a 2π-periodic scalar or vector function on `[0, 2π)`,
/// interpolated linearly with wraparound. The sample count is a power of two,
/// at least 64.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicSignal {
    channels: Vec<Vec<f64>>,
}

fn check_len(m: usize) -> Result<()> {
    if m < 64 || !m.is_power_of_two() {
        return Err(OimError::invalid(format!("sample count must be a power of two >= 64, got {m}")));
    }
    Ok(())
}

impl PeriodicSignal {
    pub fn new(channels: Vec<Vec<f64>>) -> Result<Self> {
        let m = channels.first().map(Vec::len).ok_or_else(|| OimError::invalid("signal has no channels"))?;
        check_len(m)?;
        if let Some(c) = channels.iter().find(|c| c.len() != m) {
            return Err(OimError::Dimension { expected: m, got: c.len() });
        }
        if channels.iter().flatten().any(|v| !v.is_finite()) {
            return Err(OimError::invalid("signal samples must be finite"));
        }
        Ok(PeriodicSignal { channels })
    }

    pub fn scalar(samples: Vec<f64>) -> Result<Self> {
        PeriodicSignal::new(vec![samples])
    }

    /// Samples `f` at `2πk/m`.
    pub fn from_fn(m: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        PeriodicSignal::scalar((0..m).map(|k| f(TAU * k as f64 / m as f64)).collect())
    }

    /// Reads rows `τ, v_1[, v_2, …]` with `τ` strictly increasing in `[0, 2π)`
    /// and resamples them onto `m` uniform points by periodic linear
    /// interpolation. A non-numeric first row is taken as a header; `#` starts
    /// a comment.
    pub fn from_csv(text: &str, m: usize) -> Result<Self> {
        check_len(m)?;
        let mut taus: Vec<f64> = Vec::new();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
            let values = match parsed {
                Ok(v) => v,
                Err(_) if taus.is_empty() && rows.is_empty() => continue,
                Err(e) => return Err(OimError::format(Some(lineno + 1), format!("bad number: {e}"))),
            };
            if values.len() < 2 {
                return Err(OimError::format(Some(lineno + 1), "expected tau and at least one value"));
            }
            if rows.first().is_some_and(|r| r.len() != values.len() - 1) {
                return Err(OimError::format(Some(lineno + 1), "inconsistent number of columns"));
            }
            let tau = values[0];
            if !(0.0..TAU).contains(&tau) || taus.last().is_some_and(|&t| tau <= t) {
                return Err(OimError::format(Some(lineno + 1), format!("tau = {tau} not increasing within [0, 2π)")));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(OimError::format(Some(lineno + 1), "non-finite value"));
            }
            taus.push(tau);
            rows.push(values[1..].to_vec());
        }
        if taus.len() < 2 {
            return Err(OimError::format(None, "need at least two samples"));
        }
        let n_ch = rows[0].len();
        let count = taus.len();
        let mut channels = vec![Vec::with_capacity(m); n_ch];
        for k in 0..m {
            let t = TAU * k as f64 / m as f64;
            // segment [taus[a], taus[b]] containing t, wrapping past the end
            let idx = taus.partition_point(|&x| x <= t);
            let (a, b, ta, tb) = if idx == 0 {
                (count - 1, 0, taus[count - 1] - TAU, taus[0])
            } else if idx == count {
                (count - 1, 0, taus[count - 1], taus[0] + TAU)
            } else {
                (idx - 1, idx, taus[idx - 1], taus[idx])
            };
            let u = (t - ta) / (tb - ta);
            for (c, ch) in channels.iter_mut().enumerate() {
                ch.push(rows[a][c] + (rows[b][c] - rows[a][c]) * u);
            }
        }
        PeriodicSignal::new(channels)
    }

    pub fn m(&self) -> usize {
        self.channels[0].len()
    }

    pub fn n_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        &self.channels[c]
    }

    /// Interpolated value of channel 0.
    pub fn value(&self, t: f64) -> f64 {
        self.channel_value(0, t)
    }

    pub fn channel_value(&self, c: usize, t: f64) -> f64 {
        let s = &self.channels[c];
        let m = s.len();
        let r = t.rem_euclid(TAU) * m as f64 / TAU;
        let k = (r.floor() as usize).min(m - 1);
        let u = r - k as f64;
        s[k] + (s[(k + 1) % m] - s[k]) * u
    }

    pub fn resample(&self, m: usize) -> Result<Self> {
        check_len(m)?;
        if m == self.m() {
            return Ok(self.clone());
        }
        let channels =
            (0..self.n_channels()).map(|c| (0..m).map(|k| self.channel_value(c, TAU * k as f64 / m as f64)).collect()).collect();
        PeriodicSignal::new(channels)
    }

    pub fn max_abs(&self) -> f64 {
        self.channels.iter().flatten().fold(0.0, |a, &b| a.max(b.abs()))
    }
}

/// `c(t) = ∫_0^{2π} p(t + τ)·b(τ) dτ`, the channel-wise dot product summed,
/// by the rectangle rule on the common grid (exact for band-limited inputs).
/// Signals with different sample counts are resampled to the larger one.
pub fn cross_correlate(p: &PeriodicSignal, b: &PeriodicSignal) -> Result<PeriodicSignal> {
    if p.n_channels() != b.n_channels() {
        return Err(OimError::Dimension { expected: p.n_channels(), got: b.n_channels() });
    }
    let m = p.m().max(b.m());
    let (p, b) = (p.resample(m)?, b.resample(m)?);
    let h = TAU / m as f64;
    let mut c = vec![0.0; m];
    for ch in 0..p.n_channels() {
        let (pc, bc) = (p.channel(ch), b.channel(ch));
        for (k, out) in c.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, bv) in bc.iter().enumerate() {
                acc += pc[(k + j) % m] * bv;
            }
            *out += acc * h;
        }
    }
    PeriodicSignal::scalar(c)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LockEquilibrium {
    /// Locked phase in `[0, 2π)`.
    pub phi_star: f64,
    pub stable: bool,
    /// `c'` at the root vanishes; `stable` is then false.
    pub degenerate: bool,
    /// `c'(φ* - φ_in)` by central difference over one grid cell.
    pub slope: f64,
}

/// All locked phases for normalised detuning `detuning` and input phase
/// `phi_in`. Only channel 0 of `c` is used.
///
/// Roots are bracketed by sign changes on the sample grid and refined by
/// bisection to `1e-10` in phase.
pub fn lock_equilibria(c: &PeriodicSignal, detuning: f64, phi_in: f64) -> Vec<LockEquilibrium> {
    let m = c.m();
    let s = c.channel(0);
    let h = TAU / m as f64;
    let f = |x: f64| c.value(x) - detuning;
    let scale = c.max_abs().max(f64::MIN_POSITIVE);
    let mut out = Vec::new();
    for k in 0..m {
        let (a, b) = (s[k] - detuning, s[(k + 1) % m] - detuning);
        let x = if a == 0.0 {
            k as f64 * h
        } else if a * b < 0.0 {
            let (mut lo, mut hi) = (k as f64 * h, (k + 1) as f64 * h);
            while hi - lo > ROOT_TOL {
                let mid = 0.5 * (lo + hi);
                if (f(mid) < 0.0) == (a < 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        } else {
            continue;
        };
        let slope = (c.value(x + h) - c.value(x - h)) / (2.0 * h);
        let degenerate = slope.abs() <= 1e-9 * scale;
        let phi_star = (x + phi_in).rem_euclid(TAU);
        let phi_star = if phi_star >= TAU - ROOT_TOL { 0.0 } else { phi_star };
        out.push(LockEquilibrium { phi_star, stable: !degenerate && slope < 0.0, degenerate, slope });
    }
    out.sort_by(|x, y| x.phi_star.total_cmp(&y.phi_star));
    out
}

/// Locked states under second-harmonic injection. `p2` and `b2` must be
/// π-periodic on the sample grid; stable states then come in pairs `π` apart.
pub fn shil_bistability(p2: &PeriodicSignal, b2: &PeriodicSignal, detuning: f64) -> Result<Vec<LockEquilibrium>> {
    let c = cross_correlate(p2, b2)?;
    let m = c.m();
    let s = c.channel(0);
    let tol = 1e-9 * (1.0 + c.max_abs());
    if let Some(k) = (0..m / 2).find(|&k| (s[k] - s[k + m / 2]).abs() > tol) {
        return Err(OimError::invalid(format!(
            "correlation is not π-periodic: c({:.6}) and c({:.6}) differ",
            TAU * k as f64 / m as f64,
            TAU * k as f64 / m as f64 + PI
        )));
    }
    let eq = lock_equilibria(&c, detuning, 0.0);
    let stable = eq.iter().filter(|e| e.stable).count();
    if stable % 2 != 0 {
        return Err(OimError::invalid(format!("odd number of stable locks ({stable}) for π-periodic correlation")));
    }
    Ok(eq)
}

/// One row of a detuning sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LockReport {
    pub detuning: f64,
    pub phi_in: f64,
    pub locked: bool,
    pub n_stable: usize,
    pub equilibria: Vec<LockEquilibrium>,
}

pub fn lock_sweep(c: &PeriodicSignal, detunings: &[f64], phi_in: f64) -> Vec<LockReport> {
    detunings
        .iter()
        .map(|&d| {
            let equilibria = lock_equilibria(c, d, phi_in);
            let n_stable = equilibria.iter().filter(|e| e.stable).count();
            LockReport { detuning: d, phi_in, locked: n_stable > 0, n_stable, equilibria }
        })
        .collect()
}
