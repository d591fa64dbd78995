use num_complex::Complex64;
use rand::Rng;

use super::matrix::ComplexMatrix;
use super::operator::{pauli, Axis};
use super::{HERMITICITY_TOL, POSITIVITY_TOL};
use crate::error::{Error, Result};

/// A validated quantum state of `num_qubits` qubits: Hermitian, unit trace,
/// and positive within tolerance.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(num_qubits: usize, matrix: ComplexMatrix) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidArgument(
                "density matrix needs at least one qubit".into(),
            ));
        }
        let dim = 1usize << num_qubits;
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::Shape(format!(
                "{num_qubits}-qubit state must be {dim}x{dim}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_hermitian(HERMITICITY_TOL) {
            return Err(Error::Validation("density matrix is not Hermitian".into()));
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > HERMITICITY_TOL {
            return Err(Error::Validation(format!(
                "density matrix trace is {trace}, expected 1"
            )));
        }
        let min_eig = matrix
            .hermitian_eigenvalues()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::Validation(format!(
                "density matrix has negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { num_qubits, matrix })
    }

    /// The maximally mixed state `I / 2^n`.
    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        Self {
            num_qubits,
            matrix: &ComplexMatrix::identity(dim) * (1.0 / dim as f64),
        }
    }

    /// The computational-basis projector `|index⟩⟨index|`.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {num_qubits} qubit(s)"
            )));
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        entries[index * dim + index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            matrix: ComplexMatrix::from_row_slice(dim, dim, &entries)?,
        })
    }

    /// Single-qubit state from a Bloch vector, `ρ = (I + r·σ)/2`.
    pub fn from_bloch(rx: f64, ry: f64, rz: f64) -> Result<Self> {
        let norm = (rx * rx + ry * ry + rz * rz).sqrt();
        if norm > 1.0 + POSITIVITY_TOL {
            return Err(Error::InvalidArgument(format!(
                "Bloch vector has length {norm} > 1"
            )));
        }
        let m = &(&(&pauli(Axis::X) * rx) + &(&pauli(Axis::Y) * ry))
            + &(&(&pauli(Axis::Z) * rz) + &ComplexMatrix::identity(2));
        Self::new(1, &m * 0.5)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.num_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Computational-basis populations (real parts of the diagonal).
    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.real_diagonal()
    }

    /// Traces out the given qubit, returning the state of the rest.
    ///
    /// Qubit 0 is the leftmost tensor factor (most significant bit).
    pub fn partial_trace(&self, qubit: usize) -> Result<DensityMatrix> {
        if qubit >= self.num_qubits {
            return Err(Error::InvalidArgument(format!(
                "qubit {qubit} out of range for {} qubit(s)",
                self.num_qubits
            )));
        }
        if self.num_qubits == 1 {
            return Err(Error::InvalidArgument(
                "cannot trace out the only qubit".into(),
            ));
        }
        let kept = self.num_qubits - 1;
        let dim = 1usize << kept;
        let low_bits = self.num_qubits - 1 - qubit;
        let low_mask = (1usize << low_bits) - 1;
        let insert = |idx: usize, bit: usize| -> usize {
            ((idx & !low_mask) << 1) | (bit << low_bits) | (idx & low_mask)
        };
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for row in 0..dim {
            for col in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for bit in 0..2 {
                    acc += self.matrix[(insert(row, bit), insert(col, bit))];
                }
                entries[row * dim + col] = acc;
            }
        }
        DensityMatrix::new(kept, ComplexMatrix::from_row_slice(dim, dim, &entries)?)
    }
}

/// Expectation value `Tr[ρ·obs]`. Real up to rounding when `obs` is Hermitian.
pub fn expectation(rho: &DensityMatrix, obs: &ComplexMatrix) -> Result<Complex64> {
    if obs.rows() != rho.dim() || obs.cols() != rho.dim() {
        return Err(Error::Shape(format!(
            "observable is {}x{} but state has dimension {}",
            obs.rows(),
            obs.cols(),
            rho.dim()
        )));
    }
    Ok(rho.matrix().matmul(obs)?.trace())
}

/// Uniformly seeded single-qubit state: a Bloch vector drawn from the unit
/// ball by rejection sampling.
pub fn random_single_qubit<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    loop {
        let rx = rng.random_range(-1.0..1.0);
        let ry = rng.random_range(-1.0..1.0);
        let rz = rng.random_range(-1.0..1.0);
        if rx * rx + ry * ry + rz * rz <= 1.0 {
            return DensityMatrix::from_bloch(rx, ry, rz).expect("ball sample is valid");
        }
    }
}
