//! Odd, 2π-periodic coupling functions and their antiderivatives.
//!
//! A coupling function `g` drives the phase equations; the energy needs an
//! antiderivative. Three kinds are supported:
//!
//! * `Sine`: `g = sin`, antiderivative `1 - cos`.
//! * `SmoothedSquare { beta }`: `g = tanh(beta * sin x)`. Its antiderivative is
//!   tabulated on 4096 cells, each integrated with 8-point Gauss–Legendre, and
//!   interpolated by cubic Hermite segments that use `g` itself as the slope.
//! * `Tabulated`: `g` given by uniform samples on `[0, 2π)` and interpolated
//!   linearly with wraparound; its antiderivative is the exact piecewise
//!   quadratic.
//!
//! `antiderivative` is normalised to `G(0) = 0`. The energy uses `potential`,
//! the antiderivative shifted to zero mean over a period, which for the sine
//! kind is exactly `-cos`.

use std::f64::consts::TAU;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{OimError, Result};

/// Cells in the smoothed-square antiderivative table.
pub const SMOOTHED_SQUARE_CELLS: usize = 4096;
/// Default sharpness of the smoothed square.
pub const DEFAULT_BETA: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CouplingKind {
    Sine,
    SmoothedSquare {
        beta: f64,
    },
    /// Samples of `g` at `2πk/M`, `k = 0..M`.
    Tabulated {
        samples: Vec<f64>,
    },
}

#[derive(Debug)]
struct Table {
    /// `G` at the cell boundaries, `cells + 1` entries.
    g_int: Vec<f64>,
    /// `g` at the cell boundaries (smoothed square only).
    slope: Vec<f64>,
    step: f64,
    mean: f64,
}

#[derive(Debug, Clone)]
pub struct CouplingFunction {
    kind: CouplingKind,
    table: Option<Arc<Table>>,
}

impl PartialEq for CouplingFunction {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Serialize for CouplingFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.kind.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CouplingFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let kind = CouplingKind::deserialize(d)?;
        CouplingFunction::from_kind(kind).map_err(serde::de::Error::custom)
    }
}

impl CouplingFunction {
    pub fn sine() -> Self {
        CouplingFunction { kind: CouplingKind::Sine, table: None }
    }

    pub fn smoothed_square(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(OimError::invalid(format!("smoothed square needs beta > 0, got {beta}")));
        }
        let cells = SMOOTHED_SQUARE_CELLS;
        let step = TAU / cells as f64;
        let g = |x: f64| (beta * x.sin()).tanh();
        let slope: Vec<f64> = (0..=cells).map(|k| g(k as f64 * step)).collect();
        let mut g_int = Vec::with_capacity(cells + 1);
        g_int.push(0.0);
        let mut acc = 0.0;
        for k in 0..cells {
            acc += gauss_legendre(&g, k as f64 * step, (k + 1) as f64 * step);
            g_int.push(acc);
        }
        let mean = (0..cells)
            .map(|k| step * (g_int[k] + g_int[k + 1]) / 2.0 + step * step * (slope[k] - slope[k + 1]) / 12.0)
            .sum::<f64>()
            / TAU;
        let table = Table { g_int, slope, step, mean };
        Ok(CouplingFunction { kind: CouplingKind::SmoothedSquare { beta }, table: Some(Arc::new(table)) })
    }

    /// Coupling from uniform samples of an odd function over `[0, 2π)`.
    pub fn tabulated(samples: Vec<f64>) -> Result<Self> {
        let m = samples.len();
        if m < 4 {
            return Err(OimError::invalid("tabulated coupling needs at least 4 samples"));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(OimError::invalid("tabulated coupling has non-finite samples"));
        }
        let step = TAU / m as f64;
        let mut g_int = Vec::with_capacity(m + 1);
        g_int.push(0.0);
        let mut acc = 0.0;
        for k in 0..m {
            acc += step * (samples[k] + samples[(k + 1) % m]) / 2.0;
            g_int.push(acc);
        }
        let mean = (0..m)
            .map(|k| {
                let (a, b) = (samples[k], samples[(k + 1) % m]);
                step * g_int[k] + a * step * step / 2.0 + (b - a) * step * step / 6.0
            })
            .sum::<f64>()
            / TAU;
        let table = Table { g_int, slope: Vec::new(), step, mean };
        let f = CouplingFunction { kind: CouplingKind::Tabulated { samples }, table: Some(Arc::new(table)) };
        f.check_odd(1e-6)?;
        Ok(f)
    }

    pub fn from_kind(kind: CouplingKind) -> Result<Self> {
        match kind {
            CouplingKind::Sine => Ok(CouplingFunction::sine()),
            CouplingKind::SmoothedSquare { beta } => CouplingFunction::smoothed_square(beta),
            CouplingKind::Tabulated { samples } => CouplingFunction::tabulated(samples),
        }
    }

    pub fn kind(&self) -> &CouplingKind {
        &self.kind
    }

    /// Short label used in reports: `sine`, `sqsmooth`, `tabulated`.
    pub fn label(&self) -> &'static str {
        match self.kind {
            CouplingKind::Sine => "sine",
            CouplingKind::SmoothedSquare { .. } => "sqsmooth",
            CouplingKind::Tabulated { .. } => "tabulated",
        }
    }

    #[inline]
    pub fn g(&self, x: f64) -> f64 {
        match &self.kind {
            CouplingKind::Sine => x.sin(),
            CouplingKind::SmoothedSquare { beta } => (beta * x.sin()).tanh(),
            CouplingKind::Tabulated { samples } => {
                let m = samples.len();
                let (k, u) = locate(x, TAU / m as f64, m);
                samples[k] + (samples[(k + 1) % m] - samples[k]) * u
            }
        }
    }

    /// `G(x) = ∫_0^x g`.
    pub fn antiderivative(&self, x: f64) -> f64 {
        match &self.kind {
            CouplingKind::Sine => 1.0 - x.cos(),
            CouplingKind::SmoothedSquare { .. } => {
                let t = self.table.as_ref().expect("table built with the function");
                let (k, u) = locate(x, t.step, t.g_int.len() - 1);
                let h = t.step;
                let (p0, p1, m0, m1) = (t.g_int[k], t.g_int[k + 1], t.slope[k], t.slope[k + 1]);
                let u2 = u * u;
                let u3 = u2 * u;
                (2.0 * u3 - 3.0 * u2 + 1.0) * p0 + (u3 - 2.0 * u2 + u) * h * m0 + (-2.0 * u3 + 3.0 * u2) * p1 + (u3 - u2) * h * m1
            }
            CouplingKind::Tabulated { samples } => {
                let t = self.table.as_ref().expect("table built with the function");
                let m = samples.len();
                let (k, u) = locate(x, t.step, m);
                let d = u * t.step;
                let (a, b) = (samples[k], samples[(k + 1) % m]);
                t.g_int[k] + a * d + (b - a) * d * d / (2.0 * t.step)
            }
        }
    }

    /// Zero-mean antiderivative; `-cos` for the sine kind.
    pub fn potential(&self, x: f64) -> f64 {
        match &self.kind {
            CouplingKind::Sine => -x.cos(),
            _ => self.antiderivative(x) - self.table.as_ref().expect("table").mean,
        }
    }

    /// Sampled skew-symmetry check at 1024 points.
    pub fn check_odd(&self, tol: f64) -> Result<()> {
        for k in 0..1024 {
            let x = TAU * (k as f64 + 0.37) / 1024.0;
            let err = (self.g(-x) + self.g(x)).abs();
            if err > tol {
                return Err(OimError::invalid(format!("coupling is not odd: |g(-x) + g(x)| = {err:e} at x = {x}")));
            }
        }
        Ok(())
    }

    /// True when the function is `sin` or a smoothed square.
    pub fn is_analytic(&self) -> bool {
        !matches!(self.kind, CouplingKind::Tabulated { .. })
    }

    pub fn max_abs(&self) -> f64 {
        match &self.kind {
            CouplingKind::Sine => 1.0,
            CouplingKind::SmoothedSquare { beta } => beta.tanh(),
            CouplingKind::Tabulated { samples } => samples.iter().fold(0.0, |a, &b| a.max(b.abs())),
        }
    }
}

impl Default for CouplingFunction {
    fn default() -> Self {
        CouplingFunction::smoothed_square(DEFAULT_BETA).expect("default beta is valid")
    }
}

/// Cell index and fractional position of `x` on a uniform periodic grid.
#[inline]
fn locate(x: f64, step: f64, cells: usize) -> (usize, f64) {
    let r = x.rem_euclid(TAU) / step;
    let k = (r.floor() as usize).min(cells - 1);
    (k, r - k as f64)
}

fn gauss_legendre(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const NODES: [(f64, f64); 4] = [
        (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
        (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
        (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
        (0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
    ];
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    half * NODES.iter().map(|&(x, w)| w * (f(mid + half * x) + f(mid - half * x))).sum::<f64>()
}

/// The pair of functions used by the phase equations: one for oscillator
/// coupling (and self-terms), one for the second-harmonic SYNC drive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCoupling {
    pub pair: CouplingFunction,
    pub shil: CouplingFunction,
}

impl PhaseCoupling {
    pub fn same(f: CouplingFunction) -> Self {
        PhaseCoupling { shil: f.clone(), pair: f }
    }

    pub fn sine() -> Self {
        PhaseCoupling::same(CouplingFunction::sine())
    }

    pub fn smoothed_square(beta: f64) -> Result<Self> {
        Ok(PhaseCoupling::same(CouplingFunction::smoothed_square(beta)?))
    }
}

impl From<CouplingFunction> for PhaseCoupling {
    fn from(f: CouplingFunction) -> Self {
        PhaseCoupling::same(f)
    }
}
