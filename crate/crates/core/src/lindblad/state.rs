use nalgebra::DVector;
use num_complex::Complex64 as C64;

use super::operators::{hermitian_eigenvalues, hermiticity_error, CMatrix};
use crate::error::{Error, Invariant, Result};

/// Allowed `|Tr ρ - 1|`.
pub const TRACE_TOLERANCE: f64 = 1e-9;
/// Allowed `max |ρ - ρ†|`.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;
/// Most negative eigenvalue accepted as rounding noise.
pub const POSITIVITY_TOLERANCE: f64 = 1e-8;
/// Population allowed in the two highest Fock levels before a run is flagged.
pub const TRUNCATION_TOLERANCE: f64 = 1e-6;

/// Density matrix on `qubit ⊗ Fock(N)`, qubit index slow.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    fock_dim: usize,
}

/// Invariant measurements of a density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDiagnostics {
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
    pub top_fock_population: f64,
}

impl StateDiagnostics {
    /// First invariant violated, if any.
    pub fn violation(&self) -> Option<(Invariant, f64)> {
        if !(self.trace_error <= TRACE_TOLERANCE) {
            Some((Invariant::Trace, self.trace_error))
        } else if !(self.hermiticity_error <= HERMITICITY_TOLERANCE) {
            Some((Invariant::Hermiticity, self.hermiticity_error))
        } else if !(self.min_eigenvalue >= -POSITIVITY_TOLERANCE) {
            Some((Invariant::Positivity, self.min_eigenvalue))
        } else {
            None
        }
    }
}

impl DensityMatrix {
    /// Wrap and validate a `2N x 2N` matrix.
    pub fn new(matrix: CMatrix, fock_dim: usize) -> Result<Self> {
        let state = Self::new_unchecked(matrix, fock_dim)?;
        if let Some((invariant, value)) = state.diagnostics().violation() {
            return Err(Error::InvalidState { invariant, value });
        }
        Ok(state)
    }

    pub(crate) fn new_unchecked(matrix: CMatrix, fock_dim: usize) -> Result<Self> {
        let dim = 2 * fock_dim;
        if fock_dim == 0 || matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        Ok(Self { matrix, fock_dim })
    }

    /// `|ψ⟩⟨ψ|` of a normalized state vector.
    pub fn pure(psi: &DVector<C64>, fock_dim: usize) -> Result<Self> {
        let norm = psi.norm();
        let psi = psi / C64::new(norm, 0.0);
        Self::new(&psi * psi.adjoint(), fock_dim)
    }

    /// `ρ_q ⊗ ρ_osc`.
    pub fn product(qubit: &CMatrix, oscillator: &CMatrix) -> Result<Self> {
        if qubit.nrows() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: qubit.nrows(),
            });
        }
        Self::new(qubit.kronecker(oscillator), oscillator.nrows())
    }

    /// `|q⟩⟨q| ⊗ |n⟩⟨n|` for qubit index `q` (0 = ↑) and Fock level `n`.
    pub fn basis(qubit: usize, level: usize, fock_dim: usize) -> Result<Self> {
        let dim = 2 * fock_dim;
        let idx = qubit * fock_dim + level;
        if qubit > 1 || level >= fock_dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: idx,
            });
        }
        let mut m = CMatrix::zeros(dim, dim);
        m[(idx, idx)] = C64::new(1.0, 0.0);
        Self::new(m, fock_dim)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn dim(&self) -> usize {
        2 * self.fock_dim
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Smallest eigenvalue of the Hermitian part; NaN if the solver fails.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        hermitian_eigenvalues(&herm)
            .and_then(|ev| ev.first().copied())
            .unwrap_or(f64::NAN)
    }

    /// Population in Fock levels `N-2` and `N-1` (zero for `N < 3`).
    pub fn top_fock_population(&self) -> f64 {
        let n = self.fock_dim;
        if n < 3 {
            return 0.0;
        }
        (0..2)
            .flat_map(|q| [q * n + n - 2, q * n + n - 1])
            .map(|i| self.matrix[(i, i)].re)
            .sum()
    }

    pub fn diagnostics(&self) -> StateDiagnostics {
        StateDiagnostics {
            trace_error: (self.trace() - C64::new(1.0, 0.0)).norm(),
            hermiticity_error: hermiticity_error(&self.matrix),
            min_eigenvalue: self.min_eigenvalue(),
            top_fock_population: self.top_fock_population(),
        }
    }

    /// Trace distance `½ ||ρ - σ||_1`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let diff = &self.matrix - &other.matrix;
        let herm = (&diff + diff.adjoint()) * C64::new(0.5, 0.0);
        hermitian_eigenvalues(&herm).map_or(f64::NAN, |ev| 0.5 * ev.iter().map(|e| e.abs()).sum::<f64>())
    }
}

/// `Tr(ρ A)`.
pub fn expectation(rho: &DensityMatrix, op: &CMatrix) -> Result<C64> {
    let d = rho.dim();
    if op.nrows() != d || op.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: op.nrows(),
        });
    }
    let m = rho.matrix();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..d {
        for k in 0..d {
            acc += m[(i, k)] * op[(k, i)];
        }
    }
    Ok(acc)
}

/// Reduced qubit state.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitState {
    pub matrix: CMatrix,
    /// `Tr ρ_q²`.
    pub purity: f64,
}

pub fn partial_trace_qubit(rho: &DensityMatrix) -> QubitState {
    let n = rho.fock_dim();
    let m = rho.matrix();
    let reduced = CMatrix::from_fn(2, 2, |a, b| (0..n).map(|k| m[(a * n + k, b * n + k)]).sum());
    let purity = reduced.iter().map(|z| z.norm_sqr()).sum();
    QubitState {
        matrix: reduced,
        purity,
    }
}

/// Reduced oscillator state.
pub fn partial_trace_oscillator(rho: &DensityMatrix) -> CMatrix {
    let n = rho.fock_dim();
    let m = rho.matrix();
    CMatrix::from_fn(n, n, |i, j| m[(i, j)] + m[(n + i, n + j)])
}
