//! Simulator and benchmark harness for oscillator-based Ising machines.
//!
//! Problems are encoded as Ising Hamiltonians ([`ising`]), mapped onto a
//! network of phase oscillators under second-harmonic injection locking
//! ([`dynamics`]), and driven by annealing schedules ([`schedule`]). The
//! [`lyapunov`] module evaluates the energy function the noiseless dynamics
//! descend, [`genadler`] analyses single-oscillator locking, and [`harness`]
//! runs seeded multi-trial experiments.

pub mod dynamics;
pub mod error;
pub mod genadler;
pub mod harness;
pub mod ising;
pub mod lyapunov;
pub mod rng;
pub mod schedule;

pub use error::{OimError, Result};
