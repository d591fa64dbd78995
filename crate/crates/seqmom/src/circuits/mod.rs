//! Gate-level simulations of the two ancilla-assisted measurement
//! protocols.
//!
//! Both protocols extract sequential-measurement statistics without ever
//! "collapsing" the simulated register: the INRM scheme ([`inrm`]) encodes
//! outcomes onto ancilla qubits through controlled gates that fire only on
//! the complementary outcome, and the Moussa scheme ([`moussa`]) imprints
//! operator-product traces onto the coherence of an ancilla prepared in
//! `|+⟩`.
//!
//! Qubit 0 is the leftmost tensor factor throughout, and the basis/outcome
//! mapping is fixed globally: `x = +1 ↔ |0⟩`, `x = −1 ↔ |1⟩`.

mod inrm;
mod moussa;

pub use inrm::{build_inrm_circuit, extract_ttjp_inrm, ControlledGateKind, InrmVariant};
pub use moussa::{
    build_moussa_circuit, moussa_assembly, moussa_moment, moussa_readout, AncillaReadout,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{Axis, ComplexMatrix, DensityMatrix, UnitaryOperator};
use crate::sequential::EvolutionParams;

/// Whether a controlled gate fires on `|0⟩` or `|1⟩` of the control qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlPolarity {
    OnZero,
    OnOne,
}

/// One register operation.
#[derive(Debug, Clone)]
pub enum Gate {
    /// Hadamard on a single qubit.
    Hadamard { qubit: usize },
    /// The delay propagator `exp(-i σ_z angle/2)`: free z-precession
    /// accumulated over the corresponding interval.
    DelayZ { qubit: usize, angle: f64 },
    /// A single-qubit unitary applied to `target` when `control` is in the
    /// state selected by `polarity`.
    Controlled {
        control: usize,
        polarity: ControlPolarity,
        target: usize,
        op: UnitaryOperator,
    },
    /// An uncontrolled single-qubit unitary.
    Local { qubit: usize, op: UnitaryOperator },
}

impl Gate {
    /// A controlled-NOT firing on `|1⟩` of the control.
    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::Controlled {
            control,
            polarity: ControlPolarity::OnOne,
            target,
            op: UnitaryOperator::new(crate::qcore::pauli(Axis::X)).expect("σ_x is unitary"),
        }
    }

    /// A controlled-NOT firing on `|0⟩` of the control.
    pub fn anti_cnot(control: usize, target: usize) -> Gate {
        Gate::Controlled {
            control,
            polarity: ControlPolarity::OnZero,
            target,
            op: UnitaryOperator::new(crate::qcore::pauli(Axis::X)).expect("σ_x is unitary"),
        }
    }

    fn validate(&self, num_qubits: usize) -> Result<()> {
        let check = |qubit: usize| {
            if qubit < num_qubits {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "gate qubit {qubit} out of range for {num_qubits}-qubit circuit"
                )))
            }
        };
        match self {
            Gate::Hadamard { qubit } | Gate::DelayZ { qubit, .. } => check(*qubit),
            Gate::Local { qubit, op } => {
                check(*qubit)?;
                if op.dim() != 2 {
                    return Err(Error::Shape(
                        "local gate operator must act on one qubit".into(),
                    ));
                }
                Ok(())
            }
            Gate::Controlled {
                control,
                target,
                op,
                ..
            } => {
                check(*control)?;
                check(*target)?;
                if control == target {
                    return Err(Error::InvalidArgument(
                        "control and target qubits must be distinct".into(),
                    ));
                }
                if op.dim() != 2 {
                    return Err(Error::Shape(
                        "controlled operator must act on one qubit".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// An ordered gate list on a fixed-width register.
#[derive(Debug, Clone)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidArgument(
                "circuit needs at least one qubit".into(),
            ));
        }
        for gate in &gates {
            gate.validate(num_qubits)?;
        }
        Ok(Self { num_qubits, gates })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }
}

/// Kronecker chain with `op` at `qubit` and identities elsewhere.
fn embed_single(num_qubits: usize, qubit: usize, op: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(1);
    for q in 0..num_qubits {
        if q == qubit {
            out = out.kron(op);
        } else {
            out = out.kron(&ComplexMatrix::identity(2));
        }
    }
    out
}

/// Full-register unitary for one gate.
fn embed_gate(num_qubits: usize, gate: &Gate) -> ComplexMatrix {
    match gate {
        Gate::Hadamard { qubit } => {
            embed_single(num_qubits, *qubit, UnitaryOperator::hadamard().matrix())
        }
        Gate::DelayZ { qubit, angle } => embed_single(
            num_qubits,
            *qubit,
            UnitaryOperator::rotation(Axis::Z, *angle).matrix(),
        ),
        Gate::Local { qubit, op } => embed_single(num_qubits, *qubit, op.matrix()),
        Gate::Controlled {
            control,
            polarity,
            target,
            op,
        } => {
            let fire_bit = match polarity {
                ControlPolarity::OnZero => 0usize,
                ControlPolarity::OnOne => 1usize,
            };
            let mut total = ComplexMatrix::zeros(1 << num_qubits, 1 << num_qubits);
            for control_bit in 0..2usize {
                let mut factor = ComplexMatrix::identity(1);
                for q in 0..num_qubits {
                    let next = if q == *control {
                        basis_projector(control_bit)
                    } else if q == *target && control_bit == fire_bit {
                        op.matrix().clone()
                    } else {
                        ComplexMatrix::identity(2)
                    };
                    factor = factor.kron(&next);
                }
                total = &total + &factor;
            }
            total
        }
    }
}

fn basis_projector(bit: usize) -> ComplexMatrix {
    let mut entries = [Complex64::new(0.0, 0.0); 4];
    entries[3 * (bit & 1)] = Complex64::new(1.0, 0.0);
    ComplexMatrix::from_row_slice(2, 2, &entries).expect("basis projector is valid")
}

/// Product of the embeddings of a gate list, in application order (the
/// last gate ends up leftmost), as a validated unitary.
pub fn register_unitary(num_qubits: usize, gates: &[Gate]) -> Result<UnitaryOperator> {
    for gate in gates {
        gate.validate(num_qubits)?;
    }
    let mut total = ComplexMatrix::identity(1 << num_qubits);
    for gate in gates {
        total = embed_gate(num_qubits, gate).matmul(&total)?;
    }
    UnitaryOperator::new(total)
}

/// Applies each gate as `ρ → GρG†` and returns the re-validated final state.
pub fn run_circuit(circuit: &Circuit, initial: &DensityMatrix) -> Result<DensityMatrix> {
    if initial.num_qubits() != circuit.num_qubits() {
        return Err(Error::Shape(format!(
            "circuit acts on {} qubit(s) but the state has {}",
            circuit.num_qubits(),
            initial.num_qubits()
        )));
    }
    let mut state = initial.matrix().clone();
    for gate in &circuit.gates {
        let g = embed_gate(circuit.num_qubits, gate);
        state = g.matmul(&state)?.matmul(&g.dagger())?;
    }
    DensityMatrix::new(circuit.num_qubits, state)
}

/// The pseudopure register of one system qubit and `num_ancillas` ancillas:
///
/// ```text
/// (1 − ε)/2^n · I  +  ε · (I_S / 2) ⊗ |0…0⟩⟨0…0|_A
/// ```
///
/// At ε = 1 this is the ideal initial state; smaller ε mixes in the
/// identity background that an ensemble experiment cannot observe.
pub fn pseudopure_state(epsilon: f64, num_ancillas: usize) -> Result<DensityMatrix> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "purity factor must lie in (0, 1], got {epsilon}"
        )));
    }
    let num_qubits = 1 + num_ancillas;
    let dim = 1usize << num_qubits;
    let system = &ComplexMatrix::identity(2) * 0.5;
    let target = if num_ancillas == 0 {
        system
    } else {
        let ancilla_dim = 1usize << num_ancillas;
        let mut entries = vec![Complex64::new(0.0, 0.0); ancilla_dim * ancilla_dim];
        entries[0] = Complex64::new(1.0, 0.0);
        let ancillas = ComplexMatrix::from_row_slice(ancilla_dim, ancilla_dim, &entries)?;
        system.kron(&ancillas)
    };
    let background = &ComplexMatrix::identity(dim) * ((1.0 - epsilon) / dim as f64);
    DensityMatrix::new(num_qubits, &background + &(&target * epsilon))
}

/// Gate block implementing the basis rotation for the 1-based time index:
/// the propagator `U_i = exp(-i σ_x ω t_i / 2)` on the system qubit,
/// realized as the cascade `H · DelayZ(ω t_i) · H`.
///
/// Measuring the rotated observable `X(t_i)` in the computational basis
/// means running this block, encoding/reading out, then running
/// [`rotated_basis_block_inverse`].
pub fn rotated_basis_block(params: &EvolutionParams, time_index: usize) -> Result<Vec<Gate>> {
    let phase = params.phase(time_index)?;
    Ok(vec![
        Gate::Hadamard { qubit: 0 },
        Gate::DelayZ {
            qubit: 0,
            angle: phase,
        },
        Gate::Hadamard { qubit: 0 },
    ])
}

/// Inverse of [`rotated_basis_block`]: the cascade for `U_i†`.
pub fn rotated_basis_block_inverse(
    params: &EvolutionParams,
    time_index: usize,
) -> Result<Vec<Gate>> {
    let phase = params.phase(time_index)?;
    Ok(vec![
        Gate::Hadamard { qubit: 0 },
        Gate::DelayZ {
            qubit: 0,
            angle: -phase,
        },
        Gate::Hadamard { qubit: 0 },
    ])
}
