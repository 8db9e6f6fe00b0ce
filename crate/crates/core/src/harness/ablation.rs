use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::trials::{Experiment, TrialStats};
use crate::dynamics::{CouplingFunction, PhaseCoupling, DEFAULT_BETA};
use crate::error::{OimError, Result};
use crate::schedule::Schedule;

/// Modifications of the baseline machine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AblationVariant {
    Baseline,
    /// `Kn ≡ 0`.
    NoNoise,
    /// `Ks ≡ 0`; the settled analog phases are thresholded.
    NoSyncThreshold,
    SineCoupling,
    SmoothedSquareCoupling,
    /// Natural frequencies drawn per trial from `N(ω*, (sigma·ω*)^2)`.
    Variability {
        sigma: f64,
    },
}

impl AblationVariant {
    pub fn label(&self) -> String {
        match self {
            AblationVariant::Baseline => "baseline".into(),
            AblationVariant::NoNoise => "no_noise".into(),
            AblationVariant::NoSyncThreshold => "no_sync_threshold".into(),
            AblationVariant::SineCoupling => "sine_coupling".into(),
            AblationVariant::SmoothedSquareCoupling => "smoothed_square_coupling".into(),
            AblationVariant::Variability { sigma } => format!("variability:{sigma}"),
        }
    }

    /// Schedule, coupling and frequency spread the variant runs with.
    pub(crate) fn configure(&self, schedule: &Schedule, coupling: &PhaseCoupling) -> Result<(Schedule, PhaseCoupling, f64)> {
        Ok(match self {
            AblationVariant::Baseline => (schedule.clone(), coupling.clone(), 0.0),
            AblationVariant::NoNoise => (schedule.without_noise(), coupling.clone(), 0.0),
            AblationVariant::NoSyncThreshold => (schedule.without_sync(), coupling.clone(), 0.0),
            AblationVariant::SineCoupling => (schedule.clone(), PhaseCoupling::sine(), 0.0),
            AblationVariant::SmoothedSquareCoupling => {
                (schedule.clone(), PhaseCoupling::same(CouplingFunction::smoothed_square(DEFAULT_BETA)?), 0.0)
            }
            AblationVariant::Variability { sigma } => {
                if !(sigma.is_finite() && *sigma >= 0.0) {
                    return Err(OimError::invalid(format!("variability sigma must be >= 0, got {sigma}")));
                }
                (schedule.clone(), coupling.clone(), *sigma)
            }
        })
    }
}

impl FromStr for AblationVariant {
    type Err = OimError;

    /// Accepts the labels produced by [`AblationVariant::label`], plus the
    /// short forms `sine` and `sqsmooth`.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "baseline" => AblationVariant::Baseline,
            "no_noise" => AblationVariant::NoNoise,
            "no_sync_threshold" => AblationVariant::NoSyncThreshold,
            "sine_coupling" | "sine" => AblationVariant::SineCoupling,
            "smoothed_square_coupling" | "sqsmooth" => AblationVariant::SmoothedSquareCoupling,
            other => match other.strip_prefix("variability:").or_else(|| other.strip_prefix("variability=")) {
                Some(v) => {
                    let sigma: f64 = v.parse().map_err(|_| OimError::invalid(format!("bad variability sigma '{v}'")))?;
                    if !(sigma.is_finite() && sigma >= 0.0) {
                        return Err(OimError::invalid(format!("variability sigma must be >= 0, got {sigma}")));
                    }
                    AblationVariant::Variability { sigma }
                }
                None => return Err(OimError::invalid(format!("unknown variant '{other}'"))),
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub variant: String,
    pub median: Option<f64>,
    pub mean: Option<f64>,
    pub best: Option<f64>,
    pub n_max: usize,
    pub n_0999: usize,
    pub n_failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub variants: Vec<AblationVariant>,
    pub stats: Vec<TrialStats>,
    pub rows: Vec<AblationRow>,
}

impl AblationReport {
    pub fn stats_for(&self, variant: &AblationVariant) -> Option<&TrialStats> {
        self.variants.iter().position(|v| v == variant).map(|k| &self.stats[k])
    }

    /// Plain-text comparison table.
    pub fn table(&self) -> String {
        let fmt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.1}"));
        let mut out = format!(
            "{:<28} {:>12} {:>12} {:>12} {:>6} {:>6} {:>6}\n",
            "variant", "median", "mean", "best", "n_max", "n_999", "fail"
        );
        for r in &self.rows {
            writeln!(
                out,
                "{:<28} {:>12} {:>12} {:>12} {:>6} {:>6} {:>6}",
                r.variant,
                fmt(r.median),
                fmt(r.mean),
                fmt(r.best),
                r.n_max,
                r.n_0999,
                r.n_failed
            )
            .unwrap();
        }
        out
    }
}

/// Runs every variant with the same seeds.
pub fn ablate(experiment: &Experiment, variants: &[AblationVariant], n_trials: usize, base_seed: u64) -> Result<AblationReport> {
    if variants.is_empty() {
        return Err(OimError::invalid("no variants given"));
    }
    let mut stats = Vec::with_capacity(variants.len());
    let mut rows = Vec::with_capacity(variants.len());
    for v in variants {
        let s = experiment.run(v, n_trials, base_seed)?;
        rows.push(AblationRow {
            variant: v.label(),
            median: s.median(),
            mean: s.mean(),
            best: if s.maxcut { s.best_cut } else { s.best_h },
            n_max: s.n_max,
            n_0999: s.n_0999,
            n_failed: s.n_failed,
        });
        stats.push(s);
    }
    Ok(AblationReport { variants: variants.to_vec(), stats, rows })
}
