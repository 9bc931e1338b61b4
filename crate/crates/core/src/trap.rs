//! Magnetic quadrupole trap: trap frequencies, critical sphere radius and the
//! bare anti-Helmholtz coil field.
//!
//! The coil axis is the `x` axis; the coils sit at `x = ±l/2`.

use std::f64::consts::PI;

use nalgebra::Vector3;

use crate::constants::MU_0;
use crate::error::{require_positive, Error, Result};

/// Prefactor of the closed-form axial trap frequency.
const TRAP_FREQUENCY_PREFACTOR: f64 = 1.05;
/// Prefactor of the critical-field radius bound.
const MAX_RADIUS_PREFACTOR: f64 = 0.98;

/// `R >= MEISSNER_FACTOR * max(lambda, xi)` marks the Meissner approximation as valid.
pub const MEISSNER_FACTOR: f64 = 10.0;
/// `l >= GEOMETRY_FACTOR * R` marks the point-sphere approximation as valid.
pub const GEOMETRY_FACTOR: f64 = 5.0;

/// Superconductor constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialProperties {
    /// Mass density (kg/m^3).
    pub density: f64,
    /// London penetration depth (m).
    pub penetration_depth: f64,
    /// Coherence length (m).
    pub coherence_length: f64,
    /// Critical temperature (K).
    pub critical_temperature: f64,
    /// Critical field (T).
    pub critical_field: f64,
}

impl MaterialProperties {
    pub fn new(
        density: f64,
        penetration_depth: f64,
        coherence_length: f64,
        critical_temperature: f64,
        critical_field: f64,
    ) -> Result<Self> {
        let mat = Self {
            density,
            penetration_depth,
            coherence_length,
            critical_temperature,
            critical_field,
        };
        mat.validate()?;
        Ok(mat)
    }

    /// Lead at zero temperature.
    pub fn lead() -> Self {
        Self {
            density: 11_360.0,
            penetration_depth: 30.5e-9,
            coherence_length: 96e-9,
            critical_temperature: 7.2,
            critical_field: 0.08,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("density", self.density)?;
        require_positive("penetration_depth", self.penetration_depth)?;
        require_positive("coherence_length", self.coherence_length)?;
        require_positive("critical_temperature", self.critical_temperature)?;
        require_positive("critical_field", self.critical_field)
    }
}

/// A homogeneous superconducting sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSpec {
    /// Radius (m).
    pub radius: f64,
    pub material: MaterialProperties,
}

impl SphereSpec {
    pub fn new(radius: f64, material: MaterialProperties) -> Result<Self> {
        require_positive("sphere radius", radius)?;
        material.validate()?;
        Ok(Self { radius, material })
    }

    /// Mass `(4/3) pi R^3 rho` (kg).
    pub fn mass(&self) -> f64 {
        4.0 / 3.0 * PI * self.radius.powi(3) * self.material.density
    }
}

/// Anti-Helmholtz coil pair: two coaxial loops of radius `l`, separated by `l`,
/// carrying opposite currents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapGeometry {
    /// Coil radius (m).
    pub coil_radius: f64,
    /// Coil current (A).
    pub current: f64,
}

impl TrapGeometry {
    pub fn new(coil_radius: f64, current: f64) -> Result<Self> {
        require_positive("coil radius", coil_radius)?;
        require_positive("coil current", current)?;
        Ok(Self {
            coil_radius,
            current,
        })
    }

    /// Coil separation, fixed equal to the coil radius.
    pub fn coil_separation(&self) -> f64 {
        self.coil_radius
    }
}

/// Axial trap frequency `1.05 sqrt(mu0/rho) I/l^2` (rad/s).
pub fn trap_frequency(geom: &TrapGeometry, mat: &MaterialProperties) -> Result<f64> {
    let w = TRAP_FREQUENCY_PREFACTOR * (MU_0 / mat.density).sqrt() * geom.current
        / geom.coil_radius.powi(2);
    if w.is_finite() && w > 0.0 {
        Ok(w)
    } else {
        Err(Error::InvalidGeometry(format!(
            "trap frequency {w} rad/s (l = {} m, I = {} A, rho = {} kg/m^3)",
            geom.coil_radius, geom.current, mat.density
        )))
    }
}

/// Transverse trap frequency, half the axial one.
pub fn transverse_frequency(trap_frequency: f64) -> f64 {
    trap_frequency / 2.0
}

/// Largest sphere radius for which the surface field stays below `B_C` (m).
pub fn max_radius(trap_frequency: f64, mat: &MaterialProperties) -> f64 {
    MAX_RADIUS_PREFACTOR * mat.critical_field / (trap_frequency * (MU_0 * mat.density).sqrt())
}

/// Complete elliptic integrals `(K(m), E(m))` with parameter `m = k^2`, via the
/// arithmetic-geometric mean.
pub fn elliptic_ke(m: f64) -> (f64, f64) {
    debug_assert!((0.0..1.0).contains(&m));
    let mut a = 1.0;
    let mut b = (1.0 - m).sqrt();
    let mut c = m.sqrt();
    let mut weight = 0.5;
    let mut sum = weight * c * c;
    for _ in 0..64 {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        c = 0.5 * (a - b);
        a = an;
        b = bn;
        weight *= 2.0;
        sum += weight * c * c;
    }
    let k = PI / (2.0 * a);
    (k, k * (1.0 - sum))
}

/// Field of a single circular loop of radius `a` carrying `current`, at radial
/// distance `rho` from its axis and axial offset `z` from its plane.
/// Returns `(B_rho, B_z)` in tesla.
fn loop_field(a: f64, current: f64, rho: f64, z: f64) -> (f64, f64) {
    let prefactor = MU_0 * current / (2.0 * PI);
    let sum_sq = (a + rho).powi(2) + z * z;
    let diff_sq = (a - rho).powi(2) + z * z;
    let m = 4.0 * a * rho / sum_sq;
    let (k, e) = elliptic_ke(m);
    let root = sum_sq.sqrt();
    let bz = prefactor / root * (k + (a * a - rho * rho - z * z) / diff_sq * e);
    let brho = if rho < 1e-5 * a {
        // near-axis expansion; the exact form cancels catastrophically here
        3.0 * MU_0 * current * a * a * z * rho / (4.0 * (a * a + z * z).powf(2.5))
    } else {
        prefactor * z / (rho * root) * (-k + (a * a + rho * rho + z * z) / diff_sq * e)
    };
    (brho, bz)
}

/// Bare field of the anti-Helmholtz pair at `point` (m), ignoring the sphere.
///
/// Loops at `x = -l/2` and `x = +l/2` carry `+I` and `-I` respectively.
pub fn quadrupole_field(point: &Vector3<f64>, geom: &TrapGeometry) -> Result<Vector3<f64>> {
    let a = geom.coil_radius;
    let half = geom.coil_separation() / 2.0;
    let rho = (point.y * point.y + point.z * point.z).sqrt();
    let mut field = Vector3::zeros();
    for (center, current) in [(-half, geom.current), (half, -geom.current)] {
        let z = point.x - center;
        if ((a - rho).powi(2) + z * z).sqrt() <= 1e-9 * a {
            return Err(Error::Singularity {
                x: point.x,
                y: point.y,
                z: point.z,
            });
        }
        let (brho, bz) = loop_field(a, current, rho, z);
        field.x += bz;
        if rho > 0.0 {
            field.y += brho * point.y / rho;
            field.z += brho * point.z / rho;
        }
    }
    Ok(field)
}

/// One pass/fail check with its margin; `margin > 1` means satisfied with room.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityFlag {
    pub name: &'static str,
    pub passed: bool,
    pub margin: f64,
}

/// Meissner-state and geometry validity of a sphere in a trap.
#[derive(Debug, Clone, PartialEq)]
pub struct MeissnerValidity {
    /// `R < R_max`; margin `R_max / R`.
    pub below_critical_field: ValidityFlag,
    /// `R >= 10 max(lambda, xi)`; margin `R / (10 max(lambda, xi))`.
    pub bulk_meissner: ValidityFlag,
    /// `l >= 5 R`; margin `l / (5 R)`.
    pub small_sphere: ValidityFlag,
}

impl MeissnerValidity {
    pub fn flags(&self) -> [ValidityFlag; 3] {
        [
            self.below_critical_field,
            self.bulk_meissner,
            self.small_sphere,
        ]
    }

    pub fn all_passed(&self) -> bool {
        self.flags().iter().all(|f| f.passed)
    }
}

pub fn check_meissner_validity(
    sphere: &SphereSpec,
    geom: &TrapGeometry,
    trap_frequency: f64,
) -> MeissnerValidity {
    let r = sphere.radius;
    let r_max = max_radius(trap_frequency, &sphere.material);
    let length = sphere
        .material
        .penetration_depth
        .max(sphere.material.coherence_length);
    let meissner_margin = r / (MEISSNER_FACTOR * length);
    let geometry_margin = geom.coil_radius / (GEOMETRY_FACTOR * r);
    MeissnerValidity {
        below_critical_field: ValidityFlag {
            name: "radius_below_critical",
            passed: r < r_max,
            margin: r_max / r,
        },
        bulk_meissner: ValidityFlag {
            name: "radius_exceeds_meissner_lengths",
            passed: meissner_margin >= 1.0,
            margin: meissner_margin,
        },
        small_sphere: ValidityFlag {
            name: "coil_radius_exceeds_sphere",
            passed: geometry_margin >= 1.0,
            margin: geometry_margin,
        },
    }
}
