use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::UNITARITY_TOL;
use crate::error::{Error, Result};

/// One of the three Pauli axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// The 2x2 Pauli matrix for the given axis.
pub fn pauli(axis: Axis) -> ComplexMatrix {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let entries = match axis {
        Axis::X => [z, one, one, z],
        Axis::Y => [z, -i, i, z],
        Axis::Z => [one, z, z, -one],
    };
    ComplexMatrix::from_row_slice(2, 2, &entries).expect("pauli matrices are valid")
}

/// A square matrix validated to satisfy `‖U†U − I‖_F ≤ 1e-12`.
#[derive(Debug, Clone)]
pub struct UnitaryOperator {
    matrix: ComplexMatrix,
}

impl UnitaryOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape(format!(
                "unitary must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let gram = matrix.dagger().matmul(&matrix)?;
        let identity = ComplexMatrix::identity(matrix.rows());
        let defect = (&gram - &identity).frobenius_norm();
        if defect > UNITARITY_TOL {
            return Err(Error::Validation(format!(
                "matrix is not unitary: ‖U†U − I‖_F = {defect:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// The identity on a `dim`-dimensional space.
    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    /// The rotation `exp(-i σ_axis angle/2)`, evaluated analytically as
    /// `cos(angle/2)·I − i·sin(angle/2)·σ_axis`.
    pub fn rotation(axis: Axis, angle: f64) -> Self {
        let half = angle / 2.0;
        let cos_term = &ComplexMatrix::identity(2) * Complex64::new(half.cos(), 0.0);
        let sin_term = &pauli(axis) * Complex64::new(0.0, -half.sin());
        Self {
            matrix: &cos_term + &sin_term,
        }
    }

    /// The single-qubit Hadamard gate.
    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            matrix: ComplexMatrix::from_real_row_slice(2, 2, &[h, h, h, -h])
                .expect("hadamard is valid"),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.dagger(),
        }
    }
}

/// Conjugates an observable by a unitary: returns `U†·obs·U`.
///
/// This is the Heisenberg-picture transport of `obs`; it preserves
/// Hermiticity and the spectrum.
pub fn conjugate_by(u: &UnitaryOperator, obs: &ComplexMatrix) -> Result<ComplexMatrix> {
    if obs.rows() != u.dim() || obs.cols() != u.dim() {
        return Err(Error::Shape(format!(
            "observable is {}x{} but unitary acts on dimension {}",
            obs.rows(),
            obs.cols(),
            u.dim()
        )));
    }
    u.matrix().dagger().matmul(obs)?.matmul(u.matrix())
}
