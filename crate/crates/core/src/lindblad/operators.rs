//! Qubit and truncated-oscillator operators on the `qubit ⊗ Fock(N)` space.
//!
//! Qubit basis: index 0 is `|↑⟩` (σz = +1), index 1 is `|↓⟩`. The full-space
//! index of `|q, n⟩` is `q * N + n`.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

pub type CMatrix = DMatrix<C64>;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

pub fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

pub fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn sigma_y() -> CMatrix {
    let i = C64::i();
    CMatrix::from_row_slice(2, 2, &[ZERO, -i, i, ZERO])
}

/// Lowering operator `|↓⟩⟨↑|`.
pub fn sigma_minus() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ZERO, ONE, ZERO])
}

/// Raising operator `|↑⟩⟨↓|`.
pub fn sigma_plus() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO])
}

/// Projector onto `|↑⟩`, i.e. `σ+σ-`.
pub fn excited_projector() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO])
}

/// Truncated ladder operators and quadratures of one oscillator mode.
#[derive(Debug, Clone)]
pub struct FockOperators {
    pub dim: usize,
    pub annihilation: CMatrix,
    pub creation: CMatrix,
    pub number: CMatrix,
    /// `x / x_zp = b + b†`.
    pub position: CMatrix,
    /// `p x_zp / ħ = i (b† - b) / 2`.
    pub momentum: CMatrix,
}

pub fn fock_operators(dim: usize) -> FockOperators {
    assert!(dim >= 1, "Fock dimension must be at least 1");
    let annihilation = CMatrix::from_fn(dim, dim, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    let creation = annihilation.adjoint();
    let number = &creation * &annihilation;
    let position = &annihilation + &creation;
    let momentum = (&creation - &annihilation) * C64::new(0.0, 0.5);
    FockOperators {
        dim,
        annihilation,
        creation,
        number,
        position,
        momentum,
    }
}

/// `q ⊗ 1_N`.
pub fn on_qubit(q: &CMatrix, fock_dim: usize) -> CMatrix {
    q.kronecker(&CMatrix::identity(fock_dim, fock_dim))
}

/// `1_2 ⊗ f`.
pub fn on_oscillator(f: &CMatrix) -> CMatrix {
    CMatrix::identity(2, 2).kronecker(f)
}

/// `q ⊗ f`.
pub fn joint(q: &CMatrix, f: &CMatrix) -> CMatrix {
    q.kronecker(f)
}

/// Largest elementwise deviation from Hermiticity, `max |A - A†|`.
pub fn hermiticity_error(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of a Hermitian matrix in nondecreasing order. Reads the lower
/// triangle only.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Option<Vec<f64>> {
    let m = faer::Mat::<C64>::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)]);
    m.self_adjoint_eigenvalues(faer::Side::Lower).ok()
}

/// `exp(-i t G)` for Hermitian `G`, through its eigendecomposition.
pub fn unitary_exp(generator: &CMatrix, t: f64) -> CMatrix {
    let eig = nalgebra::SymmetricEigen::new(generator.clone());
    let phases = CMatrix::from_diagonal(&eig.eigenvalues.map(|e| C64::from_polar(1.0, -e * t)));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}
