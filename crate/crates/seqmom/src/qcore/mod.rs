//! Exact complex linear algebra and qubit-operator primitives.
//!
//! Everything else in the crate is built on the three types defined here:
//! [`ComplexMatrix`] (dense complex matrices with row-major constructor
//! semantics), [`UnitaryOperator`] (validated unitaries, with analytic
//! single-axis exponentials), and [`DensityMatrix`] (validated quantum
//! states of one or more qubits).
//!
//! Conventions used throughout the crate:
//!
//! * Qubit 0 is the **leftmost** tensor factor, i.e. the most significant
//!   bit of a computational-basis index.
//! * Exponentials of the form `exp(-i σ_a θ/2)` are always evaluated
//!   analytically as `cos(θ/2)·I − i·sin(θ/2)·σ_a`, never by a general
//!   matrix exponential.

mod matrix;
mod operator;
mod state;

pub use matrix::ComplexMatrix;
pub use operator::{conjugate_by, pauli, Axis, UnitaryOperator};
pub use state::{expectation, random_single_qubit, DensityMatrix};

/// Tolerance on `‖M − M†‖` for a matrix to count as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Eigenvalues of a density matrix may undershoot zero by at most this much.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Tolerance on `‖U†U − I‖_F` for a matrix to count as unitary.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Measurement branches with probability at or below this threshold are
/// treated as exact zeros: no post-measurement state is defined for them.
pub const DEGENERACY_TOL: f64 = 1e-14;
