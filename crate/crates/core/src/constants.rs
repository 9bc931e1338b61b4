//! Physical constants (CODATA 2018, SI units).

use std::f64::consts::PI;

/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge (C).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Vacuum permeability (N/A^2).
pub const MU_0: f64 = 1.256_637_062_12e-6;
/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Atomic mass constant (kg).
pub const ATOMIC_MASS: f64 = 1.660_539_066_60e-27;
/// Superconducting flux quantum pi*hbar/e (Wb).
pub const FLUX_QUANTUM: f64 = PI * HBAR / ELEMENTARY_CHARGE;
/// One torr in pascal.
pub const TORR: f64 = 133.322;

/// Ordinary frequency (Hz) to angular frequency (rad/s).
#[inline]
pub fn hz_to_angular(f: f64) -> f64 {
    2.0 * PI * f
}

/// Angular frequency (rad/s) to ordinary frequency (Hz).
#[inline]
pub fn angular_to_hz(w: f64) -> f64 {
    w / (2.0 * PI)
}
