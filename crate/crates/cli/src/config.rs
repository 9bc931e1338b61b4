//! Scenario files: TOML with unit-suffixed keys, converted to SI once at load.

use std::path::Path;

use magnetomech::budget::NoiseSpectra;
use magnetomech::constants::{hz_to_angular, ATOMIC_MASS, TORR};
use magnetomech::coupling::{LCParams, PickupCoil, QubitParams};
use magnetomech::frames::DriveParams;
use magnetomech::lindblad::StepControl;
use magnetomech::trap::{MaterialProperties, SphereSpec, TrapGeometry};
use serde::Deserialize;

use crate::error::CliError;

/// Name that resolves to the bundled lead scenario.
pub const BUNDLED_DEFAULT: &str = "pb_default";
pub const PB_DEFAULT_TOML: &str = include_str!("../configs/pb_default.toml");

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub material: MaterialConfig,
    pub sphere: SphereConfig,
    pub trap: TrapConfig,
    pub pickup: PickupConfig,
    pub qubit: QubitConfig,
    pub lc: Option<LcConfig>,
    pub drive: Option<DriveConfig>,
    pub noise: Option<NoiseConfig>,
    #[serde(default)]
    pub simulation: SimulationConfig,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub density_kg_m3: f64,
    pub penetration_depth_nm: f64,
    pub coherence_length_nm: f64,
    pub critical_temperature_k: f64,
    pub critical_field_t: f64,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        let pb = MaterialProperties::lead();
        Self {
            density_kg_m3: pb.density,
            penetration_depth_nm: pb.penetration_depth * 1e9,
            coherence_length_nm: pb.coherence_length * 1e9,
            critical_temperature_k: pb.critical_temperature,
            critical_field_t: pb.critical_field,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereConfig {
    pub radius_um: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapConfig {
    pub coil_radius_um: f64,
    pub current_a: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PickupConfig {
    pub radius_um: f64,
    pub axial_offset_um: f64,
}

/// Either `nu_hz` or `persistent_current_na` sets the flux-to-energy scale.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitConfig {
    pub nu_hz: Option<f64>,
    pub persistent_current_na: Option<f64>,
    pub tunneling_hz: f64,
    /// Defaults to `tunneling_hz`.
    pub bias_hz: Option<f64>,
    pub t1_us: f64,
    pub t2_us: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LcConfig {
    pub inductance_nh: f64,
    pub capacitance_pf: f64,
}

/// Either an explicit drive or a target dressed angle resolved onto resonance.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    pub amplitude_hz: Option<f64>,
    pub frequency_hz: Option<f64>,
    pub target_beta_rad: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub pressure_torr: f64,
    pub gas_temperature_k: f64,
    #[serde(default = "helium_amu")]
    pub gas_mass_amu: f64,
    pub freq_noise_per_rthz: f64,
    /// `sqrt(S_x) / x_zp`.
    pub position_noise_zp_per_rthz: f64,
}

fn helium_amu() -> f64 {
    4.002_602
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationConfig {
    pub fock_dim: usize,
    pub time_grid: TimeGridConfig,
    pub step_control: StepControlConfig,
    pub beta_grid: BetaGridConfig,
    pub dephasing_ratios: Vec<f64>,
    /// Initial `σ / x_zp` for the superposition protocol.
    pub squeeze_ratio: f64,
    /// Fock level of the oscillator at the start of `evolve`.
    pub initial_fock: usize,
    /// Include qubit T1/T2 in the superposition protocol.
    pub protocol_dissipation: bool,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            fock_dim: magnetomech::frames::DEFAULT_FOCK_DIM,
            time_grid: TimeGridConfig::default(),
            step_control: StepControlConfig::default(),
            beta_grid: BetaGridConfig::default(),
            dephasing_ratios: magnetomech::cooling::DEFAULT_DEPHASING_RATIOS.to_vec(),
            squeeze_ratio: 1.0,
            initial_fock: 2,
            protocol_dissipation: false,
        }
    }
}

/// Sample grid `[0, duration]`; without a duration each command picks its
/// natural window (`5/Γ` for cooling, `2t*` for the protocol).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeGridConfig {
    pub duration_us: Option<f64>,
    pub samples: usize,
}

impl Default for TimeGridConfig {
    fn default() -> Self {
        Self {
            duration_us: None,
            samples: 201,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StepControlConfig {
    pub safety: f64,
    pub refinement: u32,
}

impl Default for StepControlConfig {
    fn default() -> Self {
        let c = StepControl::default();
        Self {
            safety: c.safety,
            refinement: c.refinement,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BetaGridConfig {
    pub start_rad: f64,
    pub stop_rad: f64,
    pub points: usize,
}

impl Default for BetaGridConfig {
    fn default() -> Self {
        Self {
            start_rad: 0.01,
            stop_rad: 1.56,
            points: 156,
        }
    }
}

/// Parse a scenario from TOML text.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, CliError> {
    toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

/// Read a scenario file; `pb_default` names the bundled scenario unless a
/// file of that name exists.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    if !path.exists() && path.as_os_str() == BUNDLED_DEFAULT {
        return parse_config(PB_DEFAULT_TOML);
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// How the drive is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriveSpec {
    Explicit(DriveParams),
    TargetBeta(f64),
}

/// Validated scenario in SI units, frequencies in rad/s.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub sphere: SphereSpec,
    pub trap: TrapGeometry,
    pub pickup: PickupCoil,
    pub qubit: QubitParams,
    pub lc: Option<LCParams>,
    pub drive: Option<DriveSpec>,
    pub noise: Option<NoiseSpectra>,
    /// `sqrt(S_x) / x_zp`, resolved to metres once `x_zp` is known.
    pub position_noise_zp: f64,
    pub fock_dim: usize,
    pub duration: Option<f64>,
    pub samples: usize,
    pub step_control: StepControl,
    pub betas: Vec<f64>,
    pub dephasing_ratios: Vec<f64>,
    pub squeeze_ratio: f64,
    pub initial_fock: usize,
    pub protocol_dissipation: bool,
}

struct Checker(Vec<String>);

impl Checker {
    fn positive(&mut self, field: &str, v: f64) {
        if !(v > 0.0 && v.is_finite()) {
            self.0.push(format!("{field}: must be positive and finite (got {v})"));
        }
    }

    fn non_negative(&mut self, field: &str, v: f64) {
        if !(v >= 0.0 && v.is_finite()) {
            self.0.push(format!("{field}: must be non-negative and finite (got {v})"));
        }
    }

    fn finite(&mut self, field: &str, v: f64) {
        if !v.is_finite() {
            self.0.push(format!("{field}: must be finite (got {v})"));
        }
    }

    fn fail(&mut self, msg: String) {
        self.0.push(msg);
    }
}

impl ScenarioConfig {
    /// Check every field and build the SI scenario. All violations are
    /// reported together.
    pub fn validate(&self) -> Result<Scenario, CliError> {
        let mut c = Checker(Vec::new());
        let m = &self.material;
        c.positive("material.density_kg_m3", m.density_kg_m3);
        c.positive("material.penetration_depth_nm", m.penetration_depth_nm);
        c.positive("material.coherence_length_nm", m.coherence_length_nm);
        c.positive("material.critical_temperature_k", m.critical_temperature_k);
        c.positive("material.critical_field_t", m.critical_field_t);
        c.positive("sphere.radius_um", self.sphere.radius_um);
        c.positive("trap.coil_radius_um", self.trap.coil_radius_um);
        c.positive("trap.current_a", self.trap.current_a);
        c.positive("pickup.radius_um", self.pickup.radius_um);
        c.non_negative("pickup.axial_offset_um", self.pickup.axial_offset_um);

        let q = &self.qubit;
        match (q.nu_hz, q.persistent_current_na) {
            (Some(nu), None) => c.non_negative("qubit.nu_hz", nu),
            (None, Some(ip)) => c.non_negative("qubit.persistent_current_na", ip),
            _ => c.fail("qubit: set exactly one of nu_hz and persistent_current_na".into()),
        }
        c.positive("qubit.tunneling_hz", q.tunneling_hz);
        if let Some(b) = q.bias_hz {
            c.finite("qubit.bias_hz", b);
        }
        c.positive("qubit.t1_us", q.t1_us);
        c.positive("qubit.t2_us", q.t2_us);
        if q.t2_us > 2.0 * q.t1_us {
            c.fail(format!(
                "qubit.t2_us: T2 = {} us exceeds 2 T1 = {} us",
                q.t2_us,
                2.0 * q.t1_us
            ));
        }
        if let Some(lc) = &self.lc {
            c.positive("lc.inductance_nh", lc.inductance_nh);
            c.positive("lc.capacitance_pf", lc.capacitance_pf);
        }
        if let Some(d) = &self.drive {
            match (d.amplitude_hz, d.frequency_hz, d.target_beta_rad) {
                (Some(a), Some(f), None) => {
                    c.non_negative("drive.amplitude_hz", a);
                    c.positive("drive.frequency_hz", f);
                }
                (None, None, Some(b)) => {
                    if !(b > 0.0 && b <= std::f64::consts::FRAC_PI_2) {
                        c.fail(format!("drive.target_beta_rad: must lie in (0, pi/2] (got {b})"));
                    }
                }
                _ => c.fail(
                    "drive: set either amplitude_hz and frequency_hz, or target_beta_rad".into(),
                ),
            }
        }
        if let Some(n) = &self.noise {
            c.non_negative("noise.pressure_torr", n.pressure_torr);
            c.positive("noise.gas_temperature_k", n.gas_temperature_k);
            c.positive("noise.gas_mass_amu", n.gas_mass_amu);
            c.non_negative("noise.freq_noise_per_rthz", n.freq_noise_per_rthz);
            c.non_negative("noise.position_noise_zp_per_rthz", n.position_noise_zp_per_rthz);
        }
        let s = &self.simulation;
        if s.fock_dim < 3 {
            c.fail(format!("simulation.fock_dim: must be at least 3 (got {})", s.fock_dim));
        }
        if s.initial_fock + 2 >= s.fock_dim.max(2) {
            c.fail(format!(
                "simulation.initial_fock: level {} must sit below the top two of fock_dim = {}",
                s.initial_fock, s.fock_dim
            ));
        }
        if let Some(d) = s.time_grid.duration_us {
            c.positive("simulation.time_grid.duration_us", d);
        }
        if s.time_grid.samples < 2 {
            c.fail(format!(
                "simulation.time_grid.samples: must be at least 2 (got {})",
                s.time_grid.samples
            ));
        }
        c.positive("simulation.step_control.safety", s.step_control.safety);
        if s.step_control.refinement == 0 {
            c.fail("simulation.step_control.refinement: must be at least 1".into());
        }
        let g = &s.beta_grid;
        let half_pi = std::f64::consts::FRAC_PI_2;
        if !(g.start_rad > 0.0 && g.stop_rad < half_pi && g.start_rad <= g.stop_rad) {
            c.fail(format!(
                "simulation.beta_grid: need 0 < start_rad <= stop_rad < pi/2 (got {}..{})",
                g.start_rad, g.stop_rad
            ));
        }
        if g.points == 0 {
            c.fail("simulation.beta_grid.points: must be at least 1".into());
        }
        for (i, r) in s.dephasing_ratios.iter().enumerate() {
            c.non_negative(&format!("simulation.dephasing_ratios[{i}]"), *r);
        }
        c.positive("simulation.squeeze_ratio", s.squeeze_ratio);

        if !c.0.is_empty() {
            return Err(CliError::Validation(c.0));
        }
        self.build().map_err(|e| CliError::Validation(vec![e.to_string()]))
    }

    fn build(&self) -> magnetomech::Result<Scenario> {
        let m = &self.material;
        let material = MaterialProperties::new(
            m.density_kg_m3,
            m.penetration_depth_nm * 1e-9,
            m.coherence_length_nm * 1e-9,
            m.critical_temperature_k,
            m.critical_field_t,
        )?;
        let q = &self.qubit;
        let tunneling = hz_to_angular(q.tunneling_hz);
        let bias = hz_to_angular(q.bias_hz.unwrap_or(q.tunneling_hz));
        let (t1, t2) = (q.t1_us * 1e-6, q.t2_us * 1e-6);
        let qubit = match (q.nu_hz, q.persistent_current_na) {
            (Some(nu), _) => QubitParams::new(hz_to_angular(nu), tunneling, bias, t1, t2)?,
            (None, Some(ip)) => QubitParams::from_persistent_current(ip * 1e-9, tunneling, bias, t1, t2)?,
            (None, None) => unreachable!("checked in validate"),
        };
        let drive = match &self.drive {
            None => None,
            Some(DriveConfig {
                target_beta_rad: Some(b),
                ..
            }) => Some(DriveSpec::TargetBeta(*b)),
            Some(d) => Some(DriveSpec::Explicit(DriveParams::new(
                hz_to_angular(d.amplitude_hz.unwrap_or(0.0)),
                hz_to_angular(d.frequency_hz.unwrap_or(0.0)),
            )?)),
        };
        let noise = self.noise.as_ref().map(|n| NoiseSpectra {
            pressure: n.pressure_torr * TORR,
            gas_temperature: n.gas_temperature_k,
            gas_mass: n.gas_mass_amu * ATOMIC_MASS,
            freq_noise_amplitude: n.freq_noise_per_rthz,
            // placeholder until x_zp is known; see `Scenario::noise_spectra`
            position_noise_amplitude: 0.0,
        });
        if let Some(n) = &noise {
            n.validate()?;
        }
        let s = &self.simulation;
        let g = &s.beta_grid;
        let betas = if g.points == 1 {
            vec![g.start_rad]
        } else {
            (0..g.points)
                .map(|k| g.start_rad + (g.stop_rad - g.start_rad) * k as f64 / (g.points - 1) as f64)
                .collect()
        };
        Ok(Scenario {
            sphere: SphereSpec::new(self.sphere.radius_um * 1e-6, material)?,
            trap: TrapGeometry::new(self.trap.coil_radius_um * 1e-6, self.trap.current_a)?,
            pickup: PickupCoil::new(self.pickup.radius_um * 1e-6, self.pickup.axial_offset_um * 1e-6)?,
            qubit,
            lc: self
                .lc
                .as_ref()
                .map(|lc| LCParams::new(lc.inductance_nh * 1e-9, lc.capacitance_pf * 1e-12))
                .transpose()?,
            drive,
            noise,
            position_noise_zp: self
                .noise
                .as_ref()
                .map_or(0.0, |n| n.position_noise_zp_per_rthz),
            fock_dim: s.fock_dim,
            duration: s.time_grid.duration_us.map(|d| d * 1e-6),
            samples: s.time_grid.samples,
            step_control: StepControl {
                safety: s.step_control.safety,
                refinement: s.step_control.refinement,
            },
            betas,
            dephasing_ratios: s.dephasing_ratios.clone(),
            squeeze_ratio: s.squeeze_ratio,
            initial_fock: s.initial_fock,
            protocol_dissipation: s.protocol_dissipation,
        })
    }
}

impl Scenario {
    /// Noise spectra with the trap-center noise scaled by `x_zp`.
    pub fn noise_spectra(&self, zero_point_motion: f64) -> Option<NoiseSpectra> {
        self.noise.map(|n| NoiseSpectra {
            position_noise_amplitude: self.position_noise_zp * zero_point_motion,
            ..n
        })
    }
}
