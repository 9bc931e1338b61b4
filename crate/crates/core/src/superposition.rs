//! Qubit-controlled displacement protocol: the oscillator's trap center
//! depends on σz, so `|+⟩ ⊗ |0⟩` entangles into two displaced branches at
//! `t* = π/ω_t` and disentangles again at `2t*`.
//!
//! Positions are in units of `x_zp`; quadratures are `X = b + b†` and
//! `P = i(b† - b)`, so the vacuum has unit variance in both. The `|↑⟩` branch
//! moves toward `+2χ`.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::frames::RwaStatus;
use crate::lindblad::operators::{
    excited_projector, joint, on_oscillator, on_qubit, sigma_minus, sigma_z, unitary_exp, CMatrix,
};
use crate::lindblad::{
    evolve, expectation, fock_operators, partial_trace_qubit, Channel, DensityMatrix,
    LindbladModel, RunDiagnostics, StepControl, TRUNCATION_TOLERANCE,
};

/// Separation of the two branches at `t*`, `l_s = 4 χ x_zp`.
pub fn superposition_size(chi: f64, zero_point_motion: f64) -> f64 {
    4.0 * chi * zero_point_motion
}

/// `exp(-l_s² / (8 σ²))`.
pub fn branch_overlap(separation: f64, width: f64) -> f64 {
    (-separation * separation / (8.0 * width * width)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingRequirement {
    /// Largest `σ / x_zp` reaching the target overlap.
    pub max_width_ratio: f64,
    /// `σ / x_zp` at the boundary of `8σ² < l_s²`, i.e. `√2 χ`.
    pub boundary_width_ratio: f64,
    /// Position squeezing factor `x_zp / σ_max`.
    pub squeezing_factor: f64,
}

/// Initial width needed for branch overlap at most `target_overlap`.
pub fn required_squeezing(chi: f64, target_overlap: f64) -> Result<SqueezingRequirement> {
    if !(target_overlap > 0.0 && target_overlap < 1.0) {
        return Err(Error::InvalidParameter {
            name: "target overlap",
            value: target_overlap,
            reason: "must lie in (0, 1)",
        });
    }
    let separation = 4.0 * chi;
    let max_width_ratio = separation / (2.0 * SQRT_2 * (1.0 / target_overlap).ln().sqrt());
    Ok(SqueezingRequirement {
        max_width_ratio,
        boundary_width_ratio: separation / (2.0 * SQRT_2),
        squeezing_factor: 1.0 / max_width_ratio,
    })
}

/// `(t*, 2t*)` with `t* = π / ω_t`.
pub fn collapse_revival_times(trap_frequency: f64) -> (f64, f64) {
    let t_star = PI / trap_frequency;
    (t_star, 2.0 * t_star)
}

/// Whether the protocol window `2t*` is short against `T2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceWindow {
    pub revival_time: f64,
    pub t2: f64,
    /// `T2 / (2 t*)`; the "≫" ratio.
    pub ratio: f64,
    pub status: RwaStatus,
}

pub fn coherence_window(trap_frequency: f64, t2: f64) -> CoherenceWindow {
    let (_, revival_time) = collapse_revival_times(trap_frequency);
    let ratio = t2 / revival_time;
    CoherenceWindow {
        revival_time,
        t2,
        ratio,
        status: RwaStatus::from_ratio(ratio),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolParams {
    /// `2 g / ω_t`.
    pub chi: f64,
    /// `g = g0 cos α` (rad/s).
    pub coupling: f64,
    pub trap_frequency: f64,
    /// Initial `σ / x_zp` of the minimum-uncertainty x-squeezed vacuum.
    pub width_ratio: f64,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub times: Vec<f64>,
}

impl ProtocolParams {
    pub fn new(coupling: f64, trap_frequency: f64, width_ratio: f64, times: Vec<f64>) -> Result<Self> {
        require_non_negative("coupling", coupling)?;
        require_positive("trap frequency", trap_frequency)?;
        require_positive("width ratio", width_ratio)?;
        Ok(Self {
            chi: 2.0 * coupling / trap_frequency,
            coupling,
            trap_frequency,
            width_ratio,
            t1: None,
            t2: None,
            times,
        })
    }

    /// Attach qubit decoherence times.
    pub fn with_qubit_times(mut self, t1: Option<f64>, t2: Option<f64>) -> Self {
        self.t1 = t1;
        self.t2 = t2;
        self
    }

    /// `(Γ0, Γφ)` implied by the optional `T1`, `T2`.
    pub fn qubit_rates(&self) -> Result<(f64, f64)> {
        let gamma0 = self.t1.map_or(0.0, |t| 1.0 / t);
        let gamma_phi = self.t2.map_or(0.0, |t| 1.0 / t - gamma0 / 2.0);
        if gamma_phi < -1e-12 * gamma0 {
            return Err(Error::InvalidParameter {
                name: "t2",
                value: self.t2.unwrap_or(f64::NAN),
                reason: "T2 must not exceed 2 T1",
            });
        }
        Ok((gamma0, gamma_phi.max(0.0)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolTrace {
    pub times: Vec<f64>,
    /// `|⟨φ↓|φ↑⟩|`.
    pub overlap: Vec<f64>,
    /// Qubit purity `Tr ρ_q²`.
    pub purity: Vec<f64>,
    /// `⟨X⟩` of the `|↑⟩` branch.
    pub mean_up: Vec<f64>,
    /// `⟨X⟩` of the `|↓⟩` branch.
    pub mean_down: Vec<f64>,
}

/// Closed-form branch dynamics for the dissipation-free protocol.
pub fn gaussian_protocol(params: &ProtocolParams) -> ProtocolTrace {
    let (chi, w, s) = (params.chi, params.trap_frequency, params.width_ratio);
    let (var_x, var_p) = (s * s, 1.0 / (s * s));
    let n = params.times.len();
    let mut trace = ProtocolTrace {
        times: params.times.clone(),
        overlap: Vec::with_capacity(n),
        purity: Vec::with_capacity(n),
        mean_up: Vec::with_capacity(n),
        mean_down: Vec::with_capacity(n),
    };
    for &t in &params.times {
        let (sin, cos) = (w * t).sin_cos();
        // branch ± sits at X = ±χ(1 - cos ωt), P = ±χ sin ωt
        let (dx, dp) = (2.0 * chi * (1.0 - cos), 2.0 * chi * sin);
        // both branches share Σ(t) = R Σ0 Rᵀ; rotate δ back with Rᵀ
        let (ux, up) = (cos * dx - sin * dp, sin * dx + cos * dp);
        let mahalanobis = ux * ux / var_x + up * up / var_p;
        let overlap = (-mahalanobis / 8.0).exp();
        trace.overlap.push(overlap);
        trace.purity.push((1.0 + overlap * overlap) / 2.0);
        trace.mean_up.push(chi * (1.0 - cos));
        trace.mean_down.push(-chi * (1.0 - cos));
    }
    trace
}

/// Fock amplitudes of the x-squeezed vacuum with `σ/x_zp = width_ratio`,
/// truncated to `dim` levels.
pub fn squeezed_vacuum(width_ratio: f64, dim: usize) -> DVector<C64> {
    let r = -width_ratio.ln();
    let t = r.tanh();
    let mut amp = DVector::zeros(dim);
    let mut c = 1.0 / r.cosh().sqrt();
    let mut m = 0usize;
    while 2 * m < dim {
        amp[2 * m] = C64::new(c, 0.0);
        let mf = m as f64;
        c *= -t * ((2.0 * mf + 1.0) * (2.0 * mf + 2.0)).sqrt() / (2.0 * (mf + 1.0));
        m += 1;
    }
    amp
}

/// Population of the squeezed vacuum above the first `dim - 2` levels.
fn squeezed_tail(width_ratio: f64, dim: usize) -> f64 {
    let amp = squeezed_vacuum(width_ratio, dim);
    let kept: f64 = amp.iter().take(dim.saturating_sub(2)).map(|z| z.norm_sqr()).sum();
    (1.0 - kept).max(0.0)
}

/// Translation `T(a) = exp(-i a p x_zp/ħ)` on the truncated space, so that
/// `T† X T = X + a` away from the truncation edge.
pub fn translation_operator(a: f64, dim: usize) -> CMatrix {
    unitary_exp(&fock_operators(dim).momentum, a)
}

/// Master-equation protocol run.
#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub trace: ProtocolTrace,
    pub diagnostics: RunDiagnostics,
}

/// `ω_t b†b - g σz (b + b†)` with qubit relaxation/dephasing from `T1`, `T2`.
/// The free qubit term `ω_s σz / 2` commutes with everything and is dropped.
pub fn protocol_model(params: &ProtocolParams, fock_dim: usize) -> Result<LindbladModel> {
    let b = fock_operators(fock_dim);
    let h = on_oscillator(&b.number) * C64::new(params.trap_frequency, 0.0)
        - joint(&sigma_z(), &b.position) * C64::new(params.coupling, 0.0);
    let (gamma0, gamma_phi) = params.qubit_rates()?;
    let mut channels = Vec::new();
    if gamma0 > 0.0 {
        channels.push(Channel::new(gamma0, on_qubit(&sigma_minus(), fock_dim))?);
    }
    if gamma_phi > 0.0 {
        channels.push(Channel::dephasing(gamma_phi, &on_qubit(&sigma_z(), fock_dim))?);
    }
    LindbladModel::new(h, channels, fock_dim)
}

/// `|+⟩ ⊗ S|0⟩`, or a truncation error naming a sufficient `fock_dim`.
pub fn protocol_initial_state(width_ratio: f64, fock_dim: usize) -> Result<DensityMatrix> {
    let tail = squeezed_tail(width_ratio, fock_dim);
    if tail >= TRUNCATION_TOLERANCE {
        let mut suggested = fock_dim + 2;
        while squeezed_tail(width_ratio, suggested) >= TRUNCATION_TOLERANCE && suggested < 4096 {
            suggested += 2;
        }
        return Err(Error::Truncation {
            population: tail,
            suggested,
        });
    }
    let osc = squeezed_vacuum(width_ratio, fock_dim);
    let mut psi = DVector::zeros(2 * fock_dim);
    psi.rows_mut(0, fock_dim).copy_from(&osc);
    psi.rows_mut(fock_dim, fock_dim).copy_from(&osc);
    DensityMatrix::pure(&psi, fock_dim)
}

pub fn me_protocol(params: &ProtocolParams, fock_dim: usize, control: &StepControl) -> Result<ProtocolRun> {
    let model = protocol_model(params, fock_dim)?;
    let rho0 = protocol_initial_state(params.width_ratio, fock_dim)?;
    let traj = evolve(&model, &rho0, &params.times, control)?;
    if traj.diagnostics.truncation_flagged {
        let population = traj.diagnostics.max_top_fock_population;
        return Err(Error::Truncation {
            population,
            suggested: fock_dim + 10,
        });
    }
    let x = fock_operators(fock_dim).position;
    let up_x = joint(&excited_projector(), &x);
    let down_x = on_oscillator(&x) - &up_x;
    let p_up_op = on_qubit(&excited_projector(), fock_dim);
    let n = traj.states.len();
    let mut trace = ProtocolTrace {
        times: params.times.clone(),
        overlap: Vec::with_capacity(n),
        purity: Vec::with_capacity(n),
        mean_up: Vec::with_capacity(n),
        mean_down: Vec::with_capacity(n),
    };
    for state in &traj.states {
        let purity = partial_trace_qubit(state).purity;
        let p_up = expectation(state, &p_up_op)?.re;
        trace.purity.push(purity);
        trace.overlap.push((2.0 * purity - 1.0).max(0.0).sqrt());
        trace.mean_up.push(expectation(state, &up_x)?.re / p_up);
        trace.mean_down.push(expectation(state, &down_x)?.re / (1.0 - p_up));
    }
    Ok(ProtocolRun {
        trace,
        diagnostics: traj.diagnostics,
    })
}
