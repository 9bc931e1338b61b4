//! Lindblad generators: Hamiltonian plus jump channels, and the sparse
//! right-hand side used by the integrator and the steady-state solver.

use num_complex::Complex64 as C64;

use super::operators::{hermiticity_error, CMatrix};
use crate::error::{require_non_negative, Error, Result};

/// One dissipator `rate · (L ρ L† - ½{L†L, ρ})`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub rate: f64,
    pub operator: CMatrix,
}

impl Channel {
    pub fn new(rate: f64, operator: CMatrix) -> Result<Self> {
        require_non_negative("channel rate", rate)?;
        Ok(Self { rate, operator })
    }

    /// Dephasing `rate · (σ ρ σ - ρ) / 2` for an involutory `σ` (such as σz),
    /// stored as the jump operator `σ/√2`.
    pub fn dephasing(rate: f64, operator: &CMatrix) -> Result<Self> {
        Self::new(rate, operator * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0))
    }
}

/// Hamiltonian (ħ = 1, rad/s) and dissipative channels on `qubit ⊗ Fock(N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladModel {
    hamiltonian: CMatrix,
    channels: Vec<Channel>,
    fock_dim: usize,
}

impl LindbladModel {
    pub fn new(hamiltonian: CMatrix, channels: Vec<Channel>, fock_dim: usize) -> Result<Self> {
        let dim = 2 * fock_dim;
        for m in std::iter::once(&hamiltonian).chain(channels.iter().map(|c| &c.operator)) {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.nrows(),
                });
            }
        }
        let scale = hamiltonian.camax().max(f64::MIN_POSITIVE);
        let herm = hermiticity_error(&hamiltonian);
        if herm > 1e-12 * scale {
            return Err(Error::InvalidParameter {
                name: "hamiltonian",
                value: herm,
                reason: "must be Hermitian",
            });
        }
        for c in &channels {
            require_non_negative("channel rate", c.rate)?;
        }
        Ok(Self {
            hamiltonian,
            channels,
            fock_dim,
        })
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn dim(&self) -> usize {
        2 * self.fock_dim
    }

    pub fn is_dissipative(&self) -> bool {
        self.channels
            .iter()
            .any(|c| c.rate > 0.0 && c.operator.camax() > 0.0)
    }

    /// Upper bound on the generator's spectral scale: `||H|| + Σ γ ||L||²`,
    /// with operator norms bounded by `sqrt(||·||_1 ||·||_∞)`.
    pub fn rate_scale(&self) -> f64 {
        let h = row_norm(&self.hamiltonian);
        let d: f64 = self
            .channels
            .iter()
            .map(|c| c.rate * row_norm(&c.operator) * col_norm(&c.operator))
            .sum();
        h + d
    }

    pub(crate) fn generator(&self) -> Generator {
        let dim = self.dim();
        let mut heff = self.hamiltonian.clone();
        let mut jumps = Vec::new();
        for c in self.channels.iter().filter(|c| c.rate > 0.0) {
            let ldl = c.operator.adjoint() * &c.operator;
            heff -= ldl * C64::new(0.0, 0.5 * c.rate);
            jumps.push((c.rate, SparseOp::from_dense(&c.operator)));
        }
        Generator {
            dim,
            heff: SparseOp::from_dense(&heff),
            jumps,
        }
    }
}

fn row_norm(m: &CMatrix) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn col_norm(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Row-compressed operator.
#[derive(Debug, Clone)]
pub(crate) struct SparseOp {
    rows: Vec<Vec<(usize, C64)>>,
}

impl SparseOp {
    fn from_dense(m: &CMatrix) -> Self {
        let rows = (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .filter_map(|k| {
                        let v = m[(i, k)];
                        (v != C64::new(0.0, 0.0)).then_some((k, v))
                    })
                    .collect()
            })
            .collect();
        Self { rows }
    }

    /// `out = A X`, with `X` and `out` column-major `d x d`.
    fn mul_left(&self, x: &[C64], out: &mut [C64], d: usize) {
        for j in 0..d {
            let xc = &x[j * d..(j + 1) * d];
            let oc = &mut out[j * d..(j + 1) * d];
            for (i, row) in self.rows.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &(k, v) in row {
                    acc += v * xc[k];
                }
                oc[i] = acc;
            }
        }
    }

    /// `out += factor · X A†`.
    fn mul_right_adjoint_acc(&self, x: &[C64], factor: C64, out: &mut [C64], d: usize) {
        for (j, row) in self.rows.iter().enumerate() {
            let oc = &mut out[j * d..(j + 1) * d];
            for &(k, v) in row {
                let w = factor * v.conj();
                let xc = &x[k * d..(k + 1) * d];
                for (o, xv) in oc.iter_mut().zip(xc) {
                    *o += w * xv;
                }
            }
        }
    }
}

/// `dρ/dt = -i (H_eff ρ - ρ H_eff†) + Σ γ L ρ L†`, `H_eff = H - (i/2) Σ γ L†L`.
#[derive(Debug, Clone)]
pub(crate) struct Generator {
    dim: usize,
    heff: SparseOp,
    jumps: Vec<(f64, SparseOp)>,
}

impl Generator {
    /// Apply to a column-major `d x d` buffer. `scratch` has length `d²`.
    pub(crate) fn apply(&self, rho: &[C64], out: &mut [C64], scratch: &mut [C64]) {
        let d = self.dim;
        self.heff.mul_left(rho, out, d);
        let minus_i = C64::new(0.0, -1.0);
        out.iter_mut().for_each(|z| *z *= minus_i);
        self.heff.mul_right_adjoint_acc(rho, C64::new(0.0, 1.0), out, d);
        for (rate, op) in &self.jumps {
            op.mul_left(rho, scratch, d);
            op.mul_right_adjoint_acc(scratch, C64::new(*rate, 0.0), out, d);
        }
    }
}
