//! Quantum magnetomechanics of a levitated superconducting microsphere.
//!
//! The crate derives trap and coupling parameters from geometry, reduces the
//! driven flux-qubit/oscillator system to its effective resonant model, and
//! simulates sideband cooling and the qubit-controlled superposition protocol
//! with a Lindblad master equation alongside closed-form predictions.
//!
//! All frequencies and rates are angular (rad/s) and all quantities SI.

pub mod budget;
pub mod constants;
pub mod cooling;
pub mod coupling;
mod error;
pub mod frames;
pub mod lindblad;
pub mod superposition;
pub mod trap;

pub use error::{Error, Invariant, Result};
pub use nalgebra::Vector3;
pub use num_complex::Complex64;
