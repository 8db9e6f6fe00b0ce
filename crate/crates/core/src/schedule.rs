//! Annealing schedules: piecewise-linear profiles of the coupling strength
//! `K`, the SYNC amplitude `Ks` and the noise level `Kn`.

use serde::{Deserialize, Serialize};

use crate::error::{OimError, Result};

/// Instantaneous control values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Controls {
    pub k: f64,
    pub ks: f64,
    pub kn: f64,
}

/// Three channels of `(t, value)` control points over `[0, t_end]`.
///
/// Each channel starts at `t = 0`, has strictly increasing times, and holds
/// its last value up to `t_end`. A step is encoded by two points a small
/// interval apart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleRepr", into = "ScheduleRepr")]
pub struct Schedule {
    t_end: f64,
    k: Vec<(f64, f64)>,
    ks: Vec<(f64, f64)>,
    kn: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct ScheduleRepr {
    t_end: f64,
    #[serde(rename = "K")]
    k: Vec<(f64, f64)>,
    #[serde(rename = "Ks")]
    ks: Vec<(f64, f64)>,
    #[serde(rename = "Kn")]
    kn: Vec<(f64, f64)>,
}

impl TryFrom<ScheduleRepr> for Schedule {
    type Error = OimError;
    fn try_from(r: ScheduleRepr) -> Result<Self> {
        Schedule::new(r.t_end, r.k, r.ks, r.kn)
    }
}

impl From<Schedule> for ScheduleRepr {
    fn from(s: Schedule) -> Self {
        ScheduleRepr { t_end: s.t_end, k: s.k, ks: s.ks, kn: s.kn }
    }
}

fn check_channel(name: &str, points: &[(f64, f64)], t_end: f64, nonnegative: bool) -> Result<()> {
    let first = points.first().ok_or_else(|| OimError::invalid(format!("{name}: channel has no points")))?;
    if first.0 != 0.0 {
        return Err(OimError::invalid(format!("{name}: first point must be at t = 0")));
    }
    for w in points.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(OimError::invalid(format!("{name}: times must be strictly increasing")));
        }
    }
    for &(t, v) in points {
        if !(t.is_finite() && v.is_finite()) {
            return Err(OimError::invalid(format!("{name}: non-finite control point")));
        }
        if t > t_end {
            return Err(OimError::invalid(format!("{name}: point at t = {t} beyond t_end = {t_end}")));
        }
        if nonnegative && v < 0.0 {
            return Err(OimError::invalid(format!("{name}: negative value {v}")));
        }
    }
    Ok(())
}

fn interpolate(points: &[(f64, f64)], t: f64) -> f64 {
    let idx = points.partition_point(|p| p.0 <= t);
    if idx == 0 {
        return points[0].1;
    }
    let (ta, va) = points[idx - 1];
    if ta == t || idx == points.len() {
        return va;
    }
    let (tb, vb) = points[idx];
    va + (vb - va) * (t - ta) / (tb - ta)
}

impl Schedule {
    pub fn new(t_end: f64, k: Vec<(f64, f64)>, ks: Vec<(f64, f64)>, kn: Vec<(f64, f64)>) -> Result<Self> {
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(OimError::invalid(format!("t_end must be positive, got {t_end}")));
        }
        check_channel("K", &k, t_end, false)?;
        check_channel("Ks", &ks, t_end, true)?;
        check_channel("Kn", &kn, t_end, true)?;
        Ok(Schedule { t_end, k, ks, kn })
    }

    /// Constant controls over `[0, t_end]`.
    pub fn constant(t_end: f64, k: f64, ks: f64, kn: f64) -> Result<Self> {
        Schedule::new(t_end, vec![(0.0, k)], vec![(0.0, ks)], vec![(0.0, kn)])
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn k_points(&self) -> &[(f64, f64)] {
        &self.k
    }

    pub fn ks_points(&self) -> &[(f64, f64)] {
        &self.ks
    }

    pub fn kn_points(&self) -> &[(f64, f64)] {
        &self.kn
    }

    pub fn eval(&self, t: f64) -> Result<Controls> {
        let slack = 1e-9 * self.t_end.max(1.0);
        if !(t >= -slack && t <= self.t_end + slack) {
            return Err(OimError::OutOfRange { t, t_end: self.t_end });
        }
        Ok(self.eval_unchecked(t))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, t: f64) -> Controls {
        Controls { k: interpolate(&self.k, t), ks: interpolate(&self.ks, t), kn: interpolate(&self.kn, t) }
    }

    /// True when every channel has a single point.
    pub fn is_constant(&self) -> bool {
        self.k.len() == 1 && self.ks.len() == 1 && self.kn.len() == 1
    }

    pub fn without_noise(&self) -> Self {
        Schedule { kn: vec![(0.0, 0.0)], ..self.clone() }
    }

    pub fn without_sync(&self) -> Self {
        Schedule { ks: vec![(0.0, 0.0)], ..self.clone() }
    }

    pub fn with_k(&self, k: Vec<(f64, f64)>) -> Result<Self> {
        Schedule::new(self.t_end, k, self.ks.clone(), self.kn.clone())
    }

    pub fn with_ks(&self, ks: Vec<(f64, f64)>) -> Result<Self> {
        Schedule::new(self.t_end, self.k.clone(), ks, self.kn.clone())
    }

    pub fn with_kn(&self, kn: Vec<(f64, f64)>) -> Result<Self> {
        Schedule::new(self.t_end, self.k.clone(), self.ks.clone(), kn)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| OimError::format(Some(e.line()), e.to_string()))
    }
}

/// Shape parameters of the baseline annealing schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineParams {
    /// Final value of the linear `K` ramp.
    pub k_max: f64,
    /// Noise level after the step.
    pub kn_max: f64,
    /// Fraction of the horizon before the noise switches on.
    pub kn_step_frac: f64,
    /// Peak SYNC amplitude.
    pub ks_max: f64,
    /// Number of up-and-down SYNC ramps.
    pub ks_ramps: usize,
}

impl Default for BaselineParams {
    fn default() -> Self {
        BaselineParams { k_max: 1.0, kn_max: 1.0, kn_step_frac: 0.1, ks_max: 1.0, ks_ramps: 5 }
    }
}

impl BaselineParams {
    /// Shape tuned on sparse 800-node unit-weight MAX-CUT instances at
    /// `t_end = 20`, `dt = 0.01` with smoothed-square coupling.
    pub fn tuned() -> Self {
        BaselineParams { k_max: 3.0, kn_max: 0.3, ks_max: 3.0, ..Default::default() }
    }
}

/// Baseline schedule with default shape parameters.
pub fn baseline_schedule(t_end: f64) -> Result<Schedule> {
    baseline_schedule_with(t_end, BaselineParams::default())
}

/// `K` rises linearly from 0 to `k_max`; `Kn` is 0 until `kn_step_frac·t_end`
/// and `kn_max` afterwards; `Ks` runs `ks_ramps` symmetric triangles between 0
/// and `ks_max` that tile `[0, t_end]`.
pub fn baseline_schedule_with(t_end: f64, p: BaselineParams) -> Result<Schedule> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(OimError::invalid(format!("t_end must be positive, got {t_end}")));
    }
    if p.ks_ramps == 0 {
        return Err(OimError::invalid("baseline schedule needs at least one SYNC ramp"));
    }
    if !(0.0..1.0).contains(&p.kn_step_frac) {
        return Err(OimError::invalid("noise step fraction must be in [0, 1)"));
    }
    let k = vec![(0.0, 0.0), (t_end, p.k_max)];
    let t_step = p.kn_step_frac * t_end;
    let kn =
        if t_step == 0.0 { vec![(0.0, p.kn_max)] } else { vec![(0.0, 0.0), (t_step, 0.0), (t_step + 1e-6 * t_end, p.kn_max)] };
    let half = t_end / (2 * p.ks_ramps) as f64;
    let ks = (0..=2 * p.ks_ramps)
        .map(|i| {
            let t = if i == 2 * p.ks_ramps { t_end } else { i as f64 * half };
            (t, if i % 2 == 1 { p.ks_max } else { 0.0 })
        })
        .collect();
    Schedule::new(t_end, k, ks, kn)
}
