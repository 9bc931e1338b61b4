//! Steady state from the null space of the dense Liouvillian.

use faer::prelude::*;
use faer::Mat;
use num_complex::Complex64 as C64;

use super::model::LindbladModel;
use super::operators::CMatrix;
use super::state::DensityMatrix;
use crate::error::{Error, Invariant, Result};

/// Smallest accepted `min |U_ii| / max |U_ii|` of the bordered Liouvillian.
const PIVOT_RATIO_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub state: DensityMatrix,
    /// `||L ρ||_F` in 1/s.
    pub residual: f64,
    /// `||L ρ||_F` divided by the generator's rate scale.
    pub relative_residual: f64,
}

/// Dense Liouvillian acting on column-major `vec(ρ)`.
pub fn liouvillian(model: &LindbladModel) -> Mat<C64> {
    let d = model.dim();
    let len = d * d;
    let gen = model.generator();
    let zero = C64::new(0.0, 0.0);
    let mut basis = vec![zero; len];
    let mut column = vec![zero; len];
    let mut scratch = vec![zero; len];
    let mut out = Mat::<C64>::zeros(len, len);
    for idx in 0..len {
        basis[idx] = C64::new(1.0, 0.0);
        gen.apply(&basis, &mut column, &mut scratch);
        basis[idx] = zero;
        for (row, v) in column.iter().enumerate() {
            out[(row, idx)] = *v;
        }
    }
    out
}

pub fn steady_state(model: &LindbladModel) -> Result<SteadyState> {
    if !model.is_dissipative() {
        return Err(Error::NoDissipation);
    }
    let d = model.dim();
    let len = d * d;
    let mut system = liouvillian(model);
    let scale = (0..len)
        .flat_map(|j| (0..len).map(move |i| (i, j)))
        .map(|(i, j)| system[(i, j)].norm())
        .fold(0.0f64, f64::max);

    // the diagonal rows sum to zero (trace preservation), so one is replaced
    // by the normalization Tr ρ = 1
    for j in 0..len {
        system[(0, j)] = C64::new(0.0, 0.0);
    }
    for k in 0..d {
        system[(0, k * d + k)] = C64::new(scale, 0.0);
    }
    let lu = system.partial_piv_lu();
    let pivots: Vec<f64> = (0..len).map(|i| lu.U()[(i, i)].norm()).collect();
    let max_pivot = pivots.iter().copied().fold(0.0, f64::max);
    let min_pivot = pivots.iter().copied().fold(f64::INFINITY, f64::min);
    let pivot_ratio = min_pivot / max_pivot;
    if !(pivot_ratio > PIVOT_RATIO_FLOOR) {
        return Err(Error::NonUniqueSteadyState { pivot_ratio });
    }
    let mut rhs = Mat::<C64>::zeros(len, 1);
    rhs[(0, 0)] = C64::new(scale, 0.0);
    let x = lu.solve(&rhs);

    let raw = CMatrix::from_fn(d, d, |i, j| x[(j * d + i, 0)]);
    let mut rho = (&raw + raw.adjoint()) * C64::new(0.5, 0.0);
    let tr = rho.trace();
    rho /= tr;

    let gen = model.generator();
    let mut out = vec![C64::new(0.0, 0.0); len];
    let mut scratch = out.clone();
    gen.apply(rho.as_slice(), &mut out, &mut scratch);
    let residual = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let state = DensityMatrix::new_unchecked(rho, model.fock_dim())?;
    if let Some((invariant, value)) = state.diagnostics().violation() {
        return Err(Error::InvalidState { invariant, value });
    }
    debug_assert!(!matches!(state.diagnostics().violation(), Some((Invariant::Trace, _))));
    Ok(SteadyState {
        state,
        residual,
        relative_residual: residual / model.rate_scale(),
    })
}
