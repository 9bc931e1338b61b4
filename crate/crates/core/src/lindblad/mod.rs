//! Open-system dynamics on the truncated `qubit ⊗ Fock(N)` space.

mod evolve;
mod model;
pub mod operators;
mod state;
mod steady;

pub use evolve::{evolve, uniform_times, RunDiagnostics, StepControl, Trajectory};
pub use model::{Channel, LindbladModel};
pub use operators::{fock_operators, CMatrix, FockOperators};
pub use state::{
    expectation, partial_trace_oscillator, partial_trace_qubit, DensityMatrix, QubitState,
    StateDiagnostics, HERMITICITY_TOLERANCE, POSITIVITY_TOLERANCE, TRACE_TOLERANCE,
    TRUNCATION_TOLERANCE,
};
pub use steady::{liouvillian, steady_state, SteadyState};
