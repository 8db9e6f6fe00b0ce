//! Phase dynamics of the oscillator network.

mod coupling;
mod drift;
mod integrator;
mod model;
mod readout;
mod simulate;
mod trajectory;

pub use coupling::{CouplingFunction, CouplingKind, PhaseCoupling, DEFAULT_BETA, SMOOTHED_SQUARE_CELLS};
pub use drift::{drift, DriftField};
pub use integrator::step_euler_maruyama;
pub use model::{InitMode, OscillatorBank, PhaseState, SimConfig, DEFAULT_DT};
pub use readout::{binarisation_residual, read_spins};
pub use simulate::{simulate, simulate_with_rng};
pub use trajectory::{Sample, Trajectory};

pub(crate) use integrator::em_step_in_place;
pub(crate) use model::check_finite;
