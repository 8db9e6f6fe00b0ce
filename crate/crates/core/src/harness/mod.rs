//! Seeded multi-trial experiments.

mod ablation;
mod boltzmann;
mod scaling;
mod targets;
mod trials;

pub use ablation::{ablate, AblationReport, AblationRow, AblationVariant};
pub use boltzmann::{boltzmann_check, BasinProbability, BoltzmannConfig, BoltzmannReport, BOLTZMANN_LIMIT};
pub use scaling::{scaling_study, ScalingParams, ScalingReport, SizeTrace};
pub use targets::{gset_target, gset_targets, parse_targets, GsetTarget, GSET_TARGETS_CSV};
pub use trials::{run_trials, Experiment, Histogram, TrialOutcome, TrialResult, TrialStats, DEFAULT_BINS};
