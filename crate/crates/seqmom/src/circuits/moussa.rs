//! The interferometric protocol for reading operator-product traces off an
//! ancilla coherence.
//!
//! With the ancilla prepared in `|+⟩` and each dichotomic observable
//! applied to the system as an ancilla-controlled gate, the final ancilla
//! state carries `Tr[X_m···X_1 ρ]` in its off-diagonal: the transverse
//! spin expectations `⟨I_x⟩` and `⟨I_y⟩` then recover the full complex
//! moment even when the observables do not commute.

use num_complex::Complex64;

use super::{run_circuit, Circuit, ControlPolarity, Gate};
use crate::error::{Error, Result};
use crate::moments::MomentVector;
use crate::qcore::{expectation, pauli, Axis, DensityMatrix};
use crate::sequential::{observable_at_time, DichotomicObservable, EvolutionParams};

/// Transverse ancilla readout: expectations of `I_x = σ_x/2` and
/// `I_y = σ_y/2`, each bounded by ½ in magnitude.
#[derive(Debug, Clone, Copy)]
pub struct AncillaReadout {
    pub exp_ix: f64,
    pub exp_iy: f64,
}

impl AncillaReadout {
    pub fn new(exp_ix: f64, exp_iy: f64) -> Result<Self> {
        if exp_ix.abs() > 0.5 + 1e-12 || exp_iy.abs() > 0.5 + 1e-12 {
            return Err(Error::Validation(format!(
                "transverse spin expectation out of range: ⟨I_x⟩ = {exp_ix}, ⟨I_y⟩ = {exp_iy}"
            )));
        }
        Ok(Self { exp_ix, exp_iy })
    }
}

/// Builds the two-qubit protocol circuit: system on qubit 0, ancilla on
/// qubit 1, one ancilla-controlled observable gate per entry of
/// `observables`, in the given order.
///
/// The ancilla is *not* prepared here; callers supply `ρ_S ⊗ |+⟩⟨+|`.
pub fn build_moussa_circuit(observables: &[DichotomicObservable]) -> Result<Circuit> {
    if observables.is_empty() {
        return Err(Error::InvalidArgument(
            "protocol needs at least one observable".into(),
        ));
    }
    let gates = observables
        .iter()
        .map(|obs| Gate::Controlled {
            control: 1,
            polarity: ControlPolarity::OnOne,
            target: 0,
            op: obs.to_unitary(),
        })
        .collect();
    Circuit::new(2, gates)
}

/// Runs the protocol and returns the transverse ancilla expectations.
pub fn moussa_readout(
    observables: &[DichotomicObservable],
    rho_system: &DensityMatrix,
) -> Result<AncillaReadout> {
    if rho_system.num_qubits() != 1 {
        return Err(Error::Shape(format!(
            "protocol expects a single-qubit system state, got {} qubits",
            rho_system.num_qubits()
        )));
    }
    let circuit = build_moussa_circuit(observables)?;
    let plus = {
        let h = Complex64::new(0.5, 0.0);
        crate::qcore::ComplexMatrix::from_row_slice(2, 2, &[h, h, h, h])?
    };
    let initial = DensityMatrix::new(2, rho_system.matrix().kron(&plus))?;
    let final_state = run_circuit(&circuit, &initial)?;
    let ancilla = final_state.partial_trace(0)?;
    let exp_ix = 0.5 * expectation(&ancilla, &pauli(Axis::X))?.re;
    let exp_iy = 0.5 * expectation(&ancilla, &pauli(Axis::Y))?.re;
    AncillaReadout::new(exp_ix, exp_iy)
}

/// The complex moment `Tr[ρ X̂_1 X̂_2 ··· X̂_m]` recovered from the ancilla
/// readout as `2(⟨I_x⟩ − i⟨I_y⟩)`.
///
/// The real part equals the symmetrized trace
/// `½·Tr[ρ(X̂_m···X̂_1 + X̂_1···X̂_m)]` and is what plays the role of "the
/// moment" for non-commuting observables; for commuting observables the
/// imaginary part vanishes and the value is `Tr[ρ X̂_1 X̂_2 X̂_3]` itself.
pub fn moussa_moment(
    observables: &[DichotomicObservable],
    rho_system: &DensityMatrix,
) -> Result<Complex64> {
    let readout = moussa_readout(observables, rho_system)?;
    Ok(Complex64::new(
        2.0 * readout.exp_ix,
        -2.0 * readout.exp_iy,
    ))
}

/// Assembles the full moment vector of the grid observables through the
/// protocol: every exponent pattern runs its own circuit containing
/// exactly the selected observables in time order, and the real part of
/// the readout is booked as that moment.
pub fn moussa_assembly(params: &EvolutionParams, rho: &DensityMatrix) -> Result<MomentVector> {
    let k = params.num_times();
    if k == 0 || k > 10 {
        return Err(Error::InvalidArgument(format!(
            "moment assembly supports 1..=10 measurement times, got {k}"
        )));
    }
    let size = 1usize << k;
    let mut values = vec![0.0; size];
    values[0] = 1.0;
    for (n, value) in values.iter_mut().enumerate().skip(1) {
        let observables = (0..k)
            .filter(|j| (n >> (k - 1 - j)) & 1 == 1)
            .map(|j| observable_at_time(params, j + 1))
            .collect::<Result<Vec<_>>>()?;
        *value = moussa_moment(&observables, rho)?.re;
    }
    MomentVector::new(k, values)
}
