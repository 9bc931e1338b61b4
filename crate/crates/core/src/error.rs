use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the simulation toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("degenerate pick-up geometry: r = d = 0")]
    DegenerateGeometry,
    #[error("field evaluation on a coil wire at ({x:e}, {y:e}, {z:e}) m")]
    Singularity { x: f64, y: f64, z: f64 },
    #[error("drive has no leverage on the qubit: sin(alpha) = 0 (tunneling amplitude is zero)")]
    NoDriveLeverage,
    #[error("heating/cooling ratio undefined: up and down rates both vanish")]
    UndefinedRatio,
    #[error("no cooling: net rate {rate:e} 1/s is not positive (heating regime)")]
    NoCooling { rate: f64 },
    #[error("outside adiabatic regime: coupling {coupling:e} exceeds {limit:e}")]
    OutsideAdiabaticRegime { coupling: f64, limit: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid density matrix: {invariant} violated ({value:e})")]
    InvalidState { invariant: Invariant, value: f64 },
    #[error("integration failure at t = {time:e} s: {invariant} violated ({value:e})")]
    IntegrationFailure {
        invariant: Invariant,
        time: f64,
        value: f64,
    },
    #[error("model has no dissipative channel; steady state undefined")]
    NoDissipation,
    #[error("steady state is not unique (null-space dimension > 1, pivot ratio {pivot_ratio:e})")]
    NonUniqueSteadyState { pivot_ratio: f64 },
    #[error("eigenvalue iteration did not converge")]
    EigenSolver,
    #[error("Fock truncation too small: top-level population {population:e}; try fock_dim >= {suggested}")]
    Truncation { population: f64, suggested: usize },
}

/// Density-matrix invariants checked during integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    Trace,
    Hermiticity,
    Positivity,
}

impl std::fmt::Display for Invariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Invariant::Trace => "trace",
            Invariant::Hermiticity => "hermiticity",
            Invariant::Positivity => "positivity",
        })
    }
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and non-negative",
        })
    }
}
