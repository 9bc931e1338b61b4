//! Fixed-step RK4 integration of the vectorized master equation.

use num_complex::Complex64 as C64;

use super::model::LindbladModel;
use super::operators::CMatrix;
use super::state::{DensityMatrix, TRUNCATION_TOLERANCE};
use crate::error::{Error, Result};

/// Step-size policy: `h_max = safety / rate_scale`, divided by `refinement`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub safety: f64,
    pub refinement: u32,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            safety: 0.05,
            refinement: 1,
        }
    }
}

impl StepControl {
    /// The same policy with half the step.
    pub fn halved(self) -> Self {
        Self {
            refinement: self.refinement * 2,
            ..self
        }
    }
}

/// Worst-case invariant measurements over all samples of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunDiagnostics {
    pub max_trace_error: f64,
    pub max_hermiticity_error: f64,
    pub min_eigenvalue: f64,
    pub max_top_fock_population: f64,
    /// Set when the top two Fock levels held more than the truncation tolerance.
    pub truncation_flagged: bool,
    pub steps: usize,
    pub step: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub diagnostics: RunDiagnostics,
}

impl Trajectory {
    /// Evaluate `f` on every sample.
    pub fn map<T>(&self, f: impl FnMut(&DensityMatrix) -> T) -> Vec<T> {
        self.states.iter().map(f).collect()
    }
}

fn largest_step(model: &LindbladModel, control: &StepControl) -> f64 {
    let scale = model.rate_scale();
    if scale > 0.0 {
        control.safety / scale
    } else {
        f64::INFINITY
    }
}

/// Integrate from `t = 0` and record the state at each of `times`
/// (non-decreasing, non-negative). Every sample is checked against the
/// density-matrix invariants; a violation aborts the run.
pub fn evolve(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    times: &[f64],
    control: &StepControl,
) -> Result<Trajectory> {
    let d = model.dim();
    if rho0.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho0.dim(),
        });
    }
    if !(control.safety > 0.0) || control.refinement == 0 {
        return Err(Error::InvalidParameter {
            name: "step control",
            value: control.safety,
            reason: "safety must be positive and refinement at least 1",
        });
    }
    let mut previous = 0.0;
    for &t in times {
        if !(t >= previous) || !t.is_finite() {
            return Err(Error::InvalidParameter {
                name: "sample time",
                value: t,
                reason: "sample times must be finite, non-negative and non-decreasing",
            });
        }
        previous = t;
    }

    let gen = model.generator();
    let h_max = largest_step(model, control);
    let len = d * d;
    let zero = C64::new(0.0, 0.0);
    let mut rho: Vec<C64> = rho0.matrix().as_slice().to_vec();
    let mut k1 = vec![zero; len];
    let mut k2 = vec![zero; len];
    let mut k3 = vec![zero; len];
    let mut k4 = vec![zero; len];
    let mut stage = vec![zero; len];
    let mut scratch = vec![zero; len];

    let mut diagnostics = RunDiagnostics {
        max_trace_error: 0.0,
        max_hermiticity_error: 0.0,
        min_eigenvalue: f64::INFINITY,
        max_top_fock_population: 0.0,
        truncation_flagged: false,
        steps: 0,
        step: 0.0,
    };
    let mut states = Vec::with_capacity(times.len());
    let mut now = 0.0;
    for &target in times {
        let span = target - now;
        if span > 0.0 {
            let coarse = if h_max.is_finite() {
                (span / h_max).ceil().max(1.0) as usize
            } else {
                1
            };
            let n = coarse * control.refinement as usize;
            let h = span / n as f64;
            diagnostics.step = diagnostics.step.max(h);
            for _ in 0..n {
                gen.apply(&rho, &mut k1, &mut scratch);
                axpy_into(&rho, 0.5 * h, &k1, &mut stage);
                gen.apply(&stage, &mut k2, &mut scratch);
                axpy_into(&rho, 0.5 * h, &k2, &mut stage);
                gen.apply(&stage, &mut k3, &mut scratch);
                axpy_into(&rho, h, &k3, &mut stage);
                gen.apply(&stage, &mut k4, &mut scratch);
                let w = h / 6.0;
                for i in 0..len {
                    rho[i] += (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]) * w;
                }
            }
            diagnostics.steps += n;
            now = target;
        }
        let state = DensityMatrix::new_unchecked(CMatrix::from_column_slice(d, d, &rho), model.fock_dim())?;
        let diag = state.diagnostics();
        if let Some((invariant, value)) = diag.violation() {
            return Err(Error::IntegrationFailure {
                invariant,
                time: target,
                value,
            });
        }
        diagnostics.max_trace_error = diagnostics.max_trace_error.max(diag.trace_error);
        diagnostics.max_hermiticity_error = diagnostics.max_hermiticity_error.max(diag.hermiticity_error);
        diagnostics.min_eigenvalue = diagnostics.min_eigenvalue.min(diag.min_eigenvalue);
        diagnostics.max_top_fock_population = diagnostics.max_top_fock_population.max(diag.top_fock_population);
        diagnostics.truncation_flagged |= diag.top_fock_population >= TRUNCATION_TOLERANCE;
        states.push(state);
    }
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        diagnostics,
    })
}

#[inline]
fn axpy_into(x: &[C64], a: f64, y: &[C64], out: &mut [C64]) {
    for ((o, xv), yv) in out.iter_mut().zip(x).zip(y) {
        *o = xv + yv * a;
    }
}

/// `n` evenly spaced samples on `[0, duration]`.
pub fn uniform_times(duration: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![duration],
        _ => (0..samples)
            .map(|k| duration * k as f64 / (samples - 1) as f64)
            .collect(),
    }
}
