//! Flux transduction and magnetomechanical coupling rates.

use crate::constants::{FLUX_QUANTUM, HBAR, MU_0};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::trap::{SphereSpec, TrapGeometry, ValidityFlag, GEOMETRY_FACTOR};

/// Prefactor of the leading-order flux derivative.
const FLUX_DERIVATIVE_PREFACTOR: f64 = 2.7;

/// Pick-up loop coaxial with the trap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PickupCoil {
    /// Loop radius (m).
    pub radius: f64,
    /// Axial distance of the loop plane from the trap center (m).
    pub axial_offset: f64,
}

impl PickupCoil {
    pub fn new(radius: f64, axial_offset: f64) -> Result<Self> {
        require_positive("pickup radius", radius)?;
        require_non_negative("pickup axial offset", axial_offset)?;
        Ok(Self {
            radius,
            axial_offset,
        })
    }

    /// `r >= 5 R`, the regime where the leading-order flux formula holds.
    pub fn validity(&self, sphere: &SphereSpec) -> ValidityFlag {
        let margin = self.radius / (GEOMETRY_FACTOR * sphere.radius);
        ValidityFlag {
            name: "pickup_radius_exceeds_sphere",
            passed: margin >= 1.0,
            margin,
        }
    }
}

/// Flux-qubit parameters. All rates in rad/s, times in s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitParams {
    /// Flux-to-energy scale `nu = 2 Phi0 I_p / hbar` (rad/s).
    pub nu: f64,
    /// Tunneling amplitude (rad/s).
    pub tunneling: f64,
    /// Bias at the trap center (rad/s).
    pub bias: f64,
    pub t1: f64,
    pub t2: f64,
    /// Relaxation rate `1/T1`.
    pub gamma0: f64,
    /// Pure dephasing rate `1/T2 - gamma0/2`.
    pub gamma_phi: f64,
}

impl QubitParams {
    pub fn new(nu: f64, tunneling: f64, bias: f64, t1: f64, t2: f64) -> Result<Self> {
        require_non_negative("nu", nu)?;
        require_positive("tunneling", tunneling)?;
        if !bias.is_finite() {
            return Err(Error::InvalidParameter {
                name: "bias",
                value: bias,
                reason: "must be finite",
            });
        }
        require_positive("t1", t1)?;
        require_positive("t2", t2)?;
        let gamma0 = 1.0 / t1;
        let gamma_phi = 1.0 / t2 - gamma0 / 2.0;
        // allow rounding noise at the T2 = 2 T1 boundary
        if gamma_phi < -1e-12 * gamma0 {
            return Err(Error::InvalidParameter {
                name: "t2",
                value: t2,
                reason: "T2 must not exceed 2 T1 (negative pure dephasing)",
            });
        }
        Ok(Self {
            nu,
            tunneling,
            bias,
            t1,
            t2,
            gamma0,
            gamma_phi: gamma_phi.max(0.0),
        })
    }

    /// Build from the persistent current `I_p` (A) instead of `nu`.
    pub fn from_persistent_current(
        persistent_current: f64,
        tunneling: f64,
        bias: f64,
        t1: f64,
        t2: f64,
    ) -> Result<Self> {
        require_non_negative("persistent current", persistent_current)?;
        Self::new(
            2.0 * FLUX_QUANTUM * persistent_current / HBAR,
            tunneling,
            bias,
            t1,
            t2,
        )
    }
}

/// LC resonator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LCParams {
    /// Inductance (H).
    pub inductance: f64,
    /// Capacitance (F).
    pub capacitance: f64,
}

impl LCParams {
    pub fn new(inductance: f64, capacitance: f64) -> Result<Self> {
        require_positive("inductance", inductance)?;
        require_positive("capacitance", capacitance)?;
        Ok(Self {
            inductance,
            capacitance,
        })
    }
}

/// Derived LC coupling quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcCoupling {
    /// Resonator frequency `1/sqrt(LC)` (rad/s).
    pub omega_lc: f64,
    /// Zero-point flux (Wb).
    pub phi_zp: f64,
    /// `Phi0 Phi_zp / (hbar L)` (rad/s).
    pub epsilon_lc: f64,
    /// Magnetomechanical coupling `epsilon_lc * eta` (rad/s).
    pub g_lc: f64,
}

/// Zero-point motion `sqrt(hbar / (2 M w))` (m).
pub fn zero_point_motion(mass: f64, trap_frequency: f64) -> f64 {
    (HBAR / (2.0 * mass * trap_frequency)).sqrt()
}

/// Derivative of the pick-up flux with respect to axial sphere displacement,
/// to leading order in `R/l` and `R/r` (Wb/m).
pub fn flux_derivative(geom: &TrapGeometry, pickup: &PickupCoil, sphere: &SphereSpec) -> Result<f64> {
    let (r, d) = (pickup.radius, pickup.axial_offset);
    if r == 0.0 && d == 0.0 {
        return Err(Error::DegenerateGeometry);
    }
    let gradient = geom.current / geom.coil_radius.powi(2);
    Ok(FLUX_DERIVATIVE_PREFACTOR * MU_0 * gradient * sphere.radius.powi(3) * r * r
        / (d * d + r * r).powf(1.5))
}

/// Dimensionless coupling `x_zp Phi'(0) / Phi0`.
pub fn eta(zero_point_motion: f64, flux_derivative: f64) -> f64 {
    zero_point_motion * flux_derivative / FLUX_QUANTUM
}

/// Qubit-oscillator coupling `g0 = nu eta` (rad/s).
pub fn qubit_coupling(qubit: &QubitParams, eta: f64) -> f64 {
    qubit.nu * eta
}

pub fn lc_coupling(lc: &LCParams, eta: f64) -> LcCoupling {
    let omega_lc = 1.0 / (lc.inductance * lc.capacitance).sqrt();
    let phi_zp = (HBAR / (2.0 * lc.capacitance * omega_lc)).sqrt();
    let epsilon_lc = FLUX_QUANTUM * phi_zp / (HBAR * lc.inductance);
    LcCoupling {
        omega_lc,
        phi_zp,
        epsilon_lc,
        g_lc: epsilon_lc * eta,
    }
}

/// Qubit splitting `sqrt(eps^2 + Delta^2)` (rad/s) and mixing angle
/// `alpha = atan2(Delta, eps)`.
pub fn qubit_splitting(qubit: &QubitParams) -> (f64, f64) {
    (
        qubit.bias.hypot(qubit.tunneling),
        qubit.tunneling.atan2(qubit.bias),
    )
}

/// All coupling-side quantities derived from geometry and circuits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedCouplings {
    pub zero_point_motion: f64,
    pub flux_derivative: f64,
    pub eta: f64,
    pub g0: f64,
    pub lc: Option<LcCoupling>,
    pub alpha: f64,
    pub splitting: f64,
}

impl DerivedCouplings {
    pub fn compute(
        sphere: &SphereSpec,
        geom: &TrapGeometry,
        pickup: &PickupCoil,
        qubit: &QubitParams,
        lc: Option<&LCParams>,
        trap_frequency: f64,
    ) -> Result<Self> {
        let x_zp = zero_point_motion(sphere.mass(), trap_frequency);
        let dphi = flux_derivative(geom, pickup, sphere)?;
        let eta = eta(x_zp, dphi);
        let (splitting, alpha) = qubit_splitting(qubit);
        Ok(Self {
            zero_point_motion: x_zp,
            flux_derivative: dphi,
            eta,
            g0: qubit_coupling(qubit, eta),
            lc: lc.map(|lc| lc_coupling(lc, eta)),
            alpha,
            splitting,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::hz_to_angular;
    use crate::trap::{trap_frequency, MaterialProperties};
    use std::f64::consts::PI;

    fn paper_sphere() -> SphereSpec {
        SphereSpec::new(2e-6, MaterialProperties::lead()).unwrap()
    }

    fn paper_trap() -> TrapGeometry {
        TrapGeometry::new(25e-6, 10.0).unwrap()
    }

    fn paper_qubit() -> QubitParams {
        let w = hz_to_angular(10e9);
        QubitParams::new(w, w, w, 10e-6, 10e-6).unwrap()
    }

    #[test]
    fn zero_point_motion_reference() {
        let x = zero_point_motion(3.81e-13, 1.767e5);
        assert!((x - 2.8e-14).abs() / 2.8e-14 < 0.01, "x_zp = {x}");
        let x4 = zero_point_motion(4.0 * 3.81e-13, 1.767e5);
        assert!((x / x4 - 2.0).abs() < 1e-12);
        assert!((x * x * 2.0 * 3.81e-13 * 1.767e5 / HBAR - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flux_derivative_reference() {
        let pickup = PickupCoil::new(24.5e-6, 17.5e-6).unwrap();
        let dphi = flux_derivative(&paper_trap(), &pickup, &paper_sphere()).unwrap();
        assert!((dphi - 9.55e-9).abs() / 9.55e-9 < 0.005, "dphi = {dphi}");
        let big = SphereSpec::new(4e-6, MaterialProperties::lead()).unwrap();
        let dphi2 = flux_derivative(&paper_trap(), &pickup, &big).unwrap();
        assert!((dphi2 / dphi - 8.0).abs() < 1e-12);
        let far = PickupCoil::new(24.5e-6, 1.0).unwrap();
        assert!(flux_derivative(&paper_trap(), &far, &paper_sphere()).unwrap() < 1e-20);
    }

    #[test]
    fn degenerate_pickup_is_rejected() {
        let pickup = PickupCoil {
            radius: 0.0,
            axial_offset: 0.0,
        };
        assert_eq!(
            flux_derivative(&paper_trap(), &pickup, &paper_sphere()),
            Err(Error::DegenerateGeometry)
        );
    }

    #[test]
    fn paper_couplings() {
        let sphere = paper_sphere();
        let geom = paper_trap();
        let w = trap_frequency(&geom, &sphere.material).unwrap();
        let pickup = PickupCoil::new(24.5e-6, 17.5e-6).unwrap();
        let lc = LCParams::new(0.1e-9, 1e-12).unwrap();
        let c = DerivedCouplings::compute(&sphere, &geom, &pickup, &paper_qubit(), Some(&lc), w)
            .unwrap();
        assert!((c.eta - 1.3e-7).abs() / 1.3e-7 < 0.05, "eta = {}", c.eta);
        assert!((c.g0 - hz_to_angular(1.3e3)).abs() / hz_to_angular(1.3e3) < 0.05);
        let lc = c.lc.unwrap();
        assert!((lc.g_lc - hz_to_angular(93e3)).abs() / hz_to_angular(93e3) < 0.05);
        assert!((lc.omega_lc - 1e11).abs() / 1e11 < 1e-12);
        let ratio = lc.g_lc / c.g0;
        assert!((ratio - lc.epsilon_lc / paper_qubit().nu).abs() < 1e-9 * ratio);
        assert!(ratio > 60.0 && ratio < 80.0, "ratio = {ratio}");
    }

    #[test]
    fn zero_eta_gives_zero_couplings() {
        assert_eq!(eta(2.8e-14, 0.0), 0.0);
        assert_eq!(qubit_coupling(&paper_qubit(), 0.0), 0.0);
        assert_eq!(lc_coupling(&LCParams::new(0.1e-9, 1e-12).unwrap(), 0.0).g_lc, 0.0);
    }

    #[test]
    fn splitting_special_points() {
        let d = hz_to_angular(10e9);
        let q = QubitParams::new(d, d, d, 1e-5, 1e-5).unwrap();
        let (ws, alpha) = qubit_splitting(&q);
        assert!((alpha - PI / 4.0).abs() < 1e-15);
        assert!((ws - 2f64.sqrt() * d).abs() / ws < 1e-15);
        assert!((ws - hz_to_angular(14.142_135_62e9)).abs() / ws < 1e-9);
        let q0 = QubitParams::new(d, d, 0.0, 1e-5, 1e-5).unwrap();
        let (ws0, alpha0) = qubit_splitting(&q0);
        assert!((alpha0 - PI / 2.0).abs() < 1e-15);
        assert_eq!(ws0, d);
    }

    #[test]
    fn qubit_rates_from_coherence_times() {
        let q = paper_qubit();
        assert!((q.gamma0 - hz_to_angular(16e3)).abs() / q.gamma0 < 0.02);
        assert!((q.gamma_phi - q.gamma0 / 2.0).abs() < 1e-9 * q.gamma0);
        assert!(QubitParams::new(1.0, 1.0, 0.0, 1e-5, 3e-5).is_err());
        assert!(QubitParams::new(1.0, 0.0, 0.0, 1e-5, 1e-5).is_err());
    }

    #[test]
    fn persistent_current_spelling() {
        let i_p = 1e-6;
        let q = QubitParams::from_persistent_current(i_p, 1.0, 0.0, 1e-5, 1e-5).unwrap();
        assert!((q.nu * HBAR - 2.0 * FLUX_QUANTUM * i_p).abs() < 1e-12 * q.nu * HBAR);
    }
}
