//! Lab-frame Hamiltonian and the driven-qubit reduction to the effective
//! resonant exchange model with dressed dissipation.

use num_complex::Complex64 as C64;

use crate::coupling::QubitParams;
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::lindblad::operators::{
    fock_operators, joint, on_oscillator, on_qubit, sigma_minus, sigma_plus, sigma_x, sigma_z,
    CMatrix,
};

/// Default Fock truncation.
pub const DEFAULT_FOCK_DIM: usize = 20;
/// Ratio at or above which a "≫" condition passes.
pub const RWA_PASS_RATIO: f64 = 20.0;
/// Ratio at or above which a "≫" condition is marginal.
pub const RWA_MARGINAL_RATIO: f64 = 5.0;

/// Classical flux drive `Ω cos(ω_d t) σz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    /// Amplitude Ω (rad/s).
    pub amplitude: f64,
    /// Frequency ω_d (rad/s).
    pub frequency: f64,
}

impl DriveParams {
    pub fn new(amplitude: f64, frequency: f64) -> Result<Self> {
        require_non_negative("drive amplitude", amplitude)?;
        require_positive("drive frequency", frequency)?;
        Ok(Self {
            amplitude,
            frequency,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RwaStatus {
    Pass,
    Marginal,
    Fail,
}

impl RwaStatus {
    pub fn from_ratio(ratio: f64) -> Self {
        if ratio >= RWA_PASS_RATIO {
            RwaStatus::Pass
        } else if ratio >= RWA_MARGINAL_RATIO {
            RwaStatus::Marginal
        } else {
            RwaStatus::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RwaStatus::Pass => "pass",
            RwaStatus::Marginal => "marginal",
            RwaStatus::Fail => "fail",
        }
    }
}

/// Separation-of-scales check for one rotating-wave approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RwaCheck {
    /// Slow-over-fast scale ratio; the "≫" condition.
    pub ratio: f64,
    pub status: RwaStatus,
    /// Relative mismatch of the two frequencies that should be near-equal.
    pub detuning: f64,
}

impl RwaCheck {
    fn new(ratio: f64, detuning: f64) -> Self {
        Self {
            ratio,
            status: RwaStatus::from_ratio(ratio),
            detuning,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RwaFlags {
    /// `ω_d ≈ ω_s ≫ ω_t, g0`.
    pub drive_frame: RwaCheck,
    /// `ω_t ≈ ω̃_s ≫ g̃, Γ0, Γφ`.
    pub dressed_frame: RwaCheck,
}

/// Qubit dissipation rates in the dressed frame (1/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedRates {
    pub dephasing: f64,
    pub up: f64,
    pub down: f64,
}

impl DressedRates {
    /// `2 Γ*φ + Γ↑ + Γ↓`.
    pub fn total(&self) -> f64 {
        2.0 * self.dephasing + self.up + self.down
    }
}

/// Dressed-frame quantities of the driven qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveFrame {
    pub alpha: f64,
    /// `ω_d - ω_s`.
    pub detuning: f64,
    /// `Ω sin α`.
    pub dressed_drive: f64,
    /// `sqrt(δω² + Ω̃²)`.
    pub dressed_splitting: f64,
    pub beta: f64,
    /// `g0 cos α sin β`.
    pub g_tilde: f64,
    pub rates: DressedRates,
    pub rwa: RwaFlags,
    /// Set at the degeneracy point (ε = 0), where `cos α = 0` and `g̃` vanishes.
    pub no_dressed_coupling: bool,
}

/// `ω_t b†b - (ε/2) σz - (Δ/2) σx - g0 σz (b† + b)` on `qubit ⊗ Fock(N)`.
pub fn build_hmm(trap_frequency: f64, bias: f64, tunneling: f64, g0: f64, fock_dim: usize) -> CMatrix {
    assert!(fock_dim >= 2, "Fock dimension must be at least 2");
    let b = fock_operators(fock_dim);
    let re = |x: f64| C64::new(x, 0.0);
    on_oscillator(&b.number) * re(trap_frequency)
        - on_qubit(&sigma_z(), fock_dim) * re(bias / 2.0)
        - on_qubit(&sigma_x(), fock_dim) * re(tunneling / 2.0)
        - joint(&sigma_z(), &b.position) * re(g0)
}

/// `g̃ (σ- b† + σ+ b)`.
pub fn build_jc_effective(g_tilde: f64, fock_dim: usize) -> CMatrix {
    assert!(fock_dim >= 2, "Fock dimension must be at least 2");
    let b = fock_operators(fock_dim);
    (joint(&sigma_minus(), &b.creation) + joint(&sigma_plus(), &b.annihilation))
        * C64::new(g_tilde, 0.0)
}

/// `Γ*φ = Γφ cos²β + Γ0 sin²β / 2`, `Γ↓(↑) = Γφ sin²β + Γ0 (1 ± cos β)² / 2`.
pub fn dressed_rates(gamma0: f64, gamma_phi: f64, beta: f64) -> DressedRates {
    let (s, c) = beta.sin_cos();
    DressedRates {
        dephasing: gamma_phi * c * c + gamma0 * s * s / 2.0,
        up: gamma_phi * s * s + gamma0 * (1.0 - c).powi(2) / 2.0,
        down: gamma_phi * s * s + gamma0 * (1.0 + c).powi(2) / 2.0,
    }
}

pub fn effective_frame(
    qubit: &QubitParams,
    drive: &DriveParams,
    trap_frequency: f64,
    g0: f64,
) -> EffectiveFrame {
    let splitting = qubit.bias.hypot(qubit.tunneling);
    let (sin_alpha, cos_alpha) = (qubit.tunneling / splitting, qubit.bias / splitting);
    let alpha = qubit.tunneling.atan2(qubit.bias);
    let detuning = drive.frequency - splitting;
    let dressed_drive = drive.amplitude * sin_alpha;
    let dressed_splitting = detuning.hypot(dressed_drive);
    let beta = dressed_drive.atan2(detuning);
    let sin_beta = if dressed_splitting > 0.0 {
        dressed_drive / dressed_splitting
    } else {
        0.0
    };
    let g_tilde = g0 * cos_alpha * sin_beta;
    let rates = dressed_rates(qubit.gamma0, qubit.gamma_phi, beta);

    let drive_frame = RwaCheck::new(
        drive.frequency.min(splitting) / trap_frequency.max(g0),
        (drive.frequency - splitting).abs() / splitting,
    );
    let dressed_frame = RwaCheck::new(
        trap_frequency.min(dressed_splitting) / g_tilde.abs().max(qubit.gamma0).max(qubit.gamma_phi),
        (trap_frequency - dressed_splitting).abs() / trap_frequency,
    );
    EffectiveFrame {
        alpha,
        detuning,
        dressed_drive,
        dressed_splitting,
        beta,
        g_tilde,
        rates,
        rwa: RwaFlags {
            drive_frame,
            dressed_frame,
        },
        no_dressed_coupling: cos_alpha == 0.0,
    }
}

/// Drive that puts the dressed splitting exactly on the trap frequency at
/// mixing angle `beta`: `δω = ω_t cos β`, `Ω = ω_t sin β / sin α`.
pub fn resolve_resonance(qubit: &QubitParams, trap_frequency: f64, beta: f64) -> Result<DriveParams> {
    if !(beta > 0.0 && beta <= std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "target beta must lie in (0, pi/2]",
        });
    }
    require_positive("trap frequency", trap_frequency)?;
    let splitting = qubit.bias.hypot(qubit.tunneling);
    let sin_alpha = qubit.tunneling / splitting;
    if !(sin_alpha > 0.0) {
        return Err(Error::NoDriveLeverage);
    }
    let (s, c) = beta.sin_cos();
    DriveParams::new(trap_frequency * s / sin_alpha, splitting + trap_frequency * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::hz_to_angular;
    use crate::lindblad::operators::{excited_projector, hermiticity_error};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    fn symmetric_qubit() -> QubitParams {
        let w = hz_to_angular(10e9);
        QubitParams::new(w, w, w, 10e-6, 10e-6).unwrap()
    }

    #[test]
    fn hmm_is_diagonal_without_tunneling_or_coupling() {
        let h = build_hmm(1.3, 0.7, 0.0, 0.0, 5);
        for i in 0..10 {
            for j in 0..10 {
                if i != j {
                    assert_eq!(h[(i, j)], C64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn hmm_is_hermitian() {
        let h = build_hmm(1.1, -0.4, 0.9, 0.25, 7);
        assert_eq!(hermiticity_error(&h), 0.0);
    }

    #[test]
    fn bare_oscillator_spectrum() {
        let h = build_hmm(1.0, 0.0, 0.0, 0.0, 2);
        let mut eig: Vec<f64> = nalgebra::SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        assert_eq!(eig, vec![0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn resonant_drive_gives_right_angle() {
        let q = symmetric_qubit();
        let ws = q.bias.hypot(q.tunneling);
        let drive = DriveParams::new(1e5, ws).unwrap();
        let f = effective_frame(&q, &drive, 1.7e5, 1e4);
        assert!((f.beta - FRAC_PI_2).abs() < 1e-12);
        assert!((f.g_tilde - 1e4 * FRAC_PI_4.cos()).abs() < 1e-8);
    }

    #[test]
    fn drive_off_decouples() {
        let q = symmetric_qubit();
        let ws = q.bias.hypot(q.tunneling);
        let above = effective_frame(&q, &DriveParams::new(0.0, ws + 1e5).unwrap(), 1.7e5, 1e4);
        assert_eq!(above.beta, 0.0);
        assert_eq!(above.g_tilde, 0.0);
        let below = effective_frame(&q, &DriveParams::new(0.0, ws - 1e5).unwrap(), 1.7e5, 1e4);
        assert!((below.beta - PI).abs() < 1e-15);
        assert_eq!(below.g_tilde, 0.0);
    }

    #[test]
    fn quarter_angle_halves_coupling() {
        let q = symmetric_qubit();
        let wt = 1.767e5;
        let drive = resolve_resonance(&q, wt, FRAC_PI_4).unwrap();
        let f = effective_frame(&q, &drive, wt, 1e4);
        assert!((f.g_tilde - 0.5e4).abs() < 1e-6);
        assert!((f.dressed_splitting - wt).abs() < 1e-9 * wt);
    }

    #[test]
    fn degeneracy_point_warns() {
        let w = hz_to_angular(10e9);
        let q = QubitParams::new(w, w, 0.0, 1e-5, 1e-5).unwrap();
        let drive = resolve_resonance(&q, 1.7e5, FRAC_PI_3).unwrap();
        let f = effective_frame(&q, &drive, 1.7e5, 1e4);
        assert!(f.no_dressed_coupling);
        assert_eq!(f.g_tilde, 0.0);
    }

    #[test]
    fn dressed_rates_limits() {
        let (g0, gp) = (2.0, 0.3);
        let r = dressed_rates(g0, gp, 0.0);
        assert_eq!((r.up, r.down, r.dephasing), (0.0, 2.0 * g0, gp));
        let r = dressed_rates(g0, gp, FRAC_PI_2);
        assert!((r.up - (gp + g0 / 2.0)).abs() < 1e-15);
        assert!((r.down - (gp + g0 / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn jc_matrix_elements() {
        let n = 6;
        let g = 0.37;
        let h = build_jc_effective(g, n);
        // ⟨↓,1| H |↑,0⟩
        assert_eq!(h[(n + 1, 0)], C64::new(g, 0.0));
        assert_eq!(hermiticity_error(&h), 0.0);
        assert_eq!(build_jc_effective(0.0, n).camax(), 0.0);
        let excitations = on_oscillator(&fock_operators(n).number) + on_qubit(&excited_projector(), n);
        let comm = &h * &excitations - &excitations * &h;
        assert!(comm.camax() < 1e-14);
    }

    #[test]
    fn resolve_resonance_examples() {
        let q = symmetric_qubit();
        let wt = 1.767e5;
        let d = resolve_resonance(&q, wt, FRAC_PI_2).unwrap();
        let ws = q.bias.hypot(q.tunneling);
        assert!((d.frequency - ws).abs() < 1e-3);
        assert!((d.amplitude - wt / FRAC_PI_4.sin()).abs() < 1e-9 * wt);
        let d = resolve_resonance(&q, wt, FRAC_PI_3).unwrap();
        assert!((d.amplitude - 2.164e5).abs() / 2.164e5 < 1e-3);
        assert!((d.amplitude - wt * (3f64.sqrt() / 2.0) / (2f64.sqrt() / 2.0)).abs() < 1e-9 * wt);
        assert!(resolve_resonance(&q, wt, 0.0).is_err());
        assert!(resolve_resonance(&q, wt, 2.0).is_err());
        let flat = QubitParams {
            tunneling: 0.0,
            ..q
        };
        assert_eq!(resolve_resonance(&flat, wt, 1.0), Err(Error::NoDriveLeverage));
    }

    #[test]
    fn rwa_thresholds() {
        assert_eq!(RwaStatus::from_ratio(25.0), RwaStatus::Pass);
        assert_eq!(RwaStatus::from_ratio(20.0), RwaStatus::Pass);
        assert_eq!(RwaStatus::from_ratio(7.0), RwaStatus::Marginal);
        assert_eq!(RwaStatus::from_ratio(4.9), RwaStatus::Fail);
    }
}
