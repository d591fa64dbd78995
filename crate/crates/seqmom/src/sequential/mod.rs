//! Heisenberg-picture observables and Lüders-rule sequential measurement.
//!
//! A single qubit precesses under the Hamiltonian `H = ω σ_x / 2` (ħ = 1,
//! so only the product ω·t ever matters). The dynamical observable is the
//! transported spin component
//!
//! ```text
//! X(t) = U†(t) σ_z U(t) = σ_z cos(ωt) + σ_y sin(ωt),   U(t) = exp(-i σ_x ω t / 2)
//! ```
//!
//! measured projectively at each time in an [`EvolutionParams`] grid. The
//! joint statistics of the outcome sequence are produced by iterating the
//! Lüders update `ρ → ΠρΠ / Tr[ρΠ]` along every branch, which is
//! well-defined even where a conditional-probability factorization would
//! hit 0/0: branches with probability ≤ 1e-14 simply contribute zero
//! weight to all of their refinements.

mod distribution;
mod outcome;

pub use distribution::{JointDistribution, OutcomeWeights, NORMALIZATION_TOL, WEIGHT_CLIP_TOL};
pub use outcome::{OutcomeTuple, Sign};

pub(crate) use distribution::validate_keep;
pub(crate) use outcome::marginalize_weights;

use rand::Rng;

use crate::error::{Error, Result};
use crate::qcore::{
    expectation, pauli, Axis, ComplexMatrix, DensityMatrix, UnitaryOperator, DEGENERACY_TOL,
    HERMITICITY_TOL,
};

/// Angular frequency and measurement-time grid for the precessing qubit.
#[derive(Debug, Clone)]
pub struct EvolutionParams {
    omega: f64,
    times: Vec<f64>,
}

impl EvolutionParams {
    /// The default grid of the three-time experiment:
    /// `t_1 = 0, t_2 = Δt, t_3 = 2Δt`.
    pub fn three_times(omega: f64, delta_t: f64) -> Self {
        Self {
            omega,
            times: vec![0.0, delta_t, 2.0 * delta_t],
        }
    }

    /// Three-time grid parameterized directly by the dimensionless phase
    /// step ωΔt (ω is set to 1).
    pub fn from_omega_dt(omega_dt: f64) -> Self {
        Self::three_times(1.0, omega_dt)
    }

    /// A custom strictly increasing time grid.
    pub fn with_times(omega: f64, times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidArgument(
                "time grid must not be empty".into(),
            ));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "measurement times must be strictly increasing".into(),
            ));
        }
        Ok(Self { omega, times })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn num_times(&self) -> usize {
        self.times.len()
    }

    /// Spacing of the first interval.
    pub fn delta_t(&self) -> f64 {
        if self.times.len() >= 2 {
            self.times[1] - self.times[0]
        } else {
            0.0
        }
    }

    /// The dimensionless phase step ω·Δt.
    pub fn omega_dt(&self) -> f64 {
        self.omega * self.delta_t()
    }

    /// Accumulated phase ω·t_i for a 1-based time index.
    pub fn phase(&self, index: usize) -> Result<f64> {
        if index == 0 || index > self.times.len() {
            return Err(Error::InvalidArgument(format!(
                "time index {index} out of range 1..={}",
                self.times.len()
            )));
        }
        Ok(self.omega * self.times[index - 1])
    }
}

/// A 2x2 Hermitian involution: spectrum exactly `{+1, −1}`.
///
/// Such an operator is simultaneously a valid observable and a valid
/// unitary gate, which is what the ancilla protocols exploit.
#[derive(Debug, Clone)]
pub struct DichotomicObservable {
    matrix: ComplexMatrix,
}

impl DichotomicObservable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != 2 || matrix.cols() != 2 {
            return Err(Error::Shape(format!(
                "dichotomic observable must be 2x2, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_hermitian(HERMITICITY_TOL) {
            return Err(Error::Validation(
                "dichotomic observable must be Hermitian".into(),
            ));
        }
        let square = matrix.matmul(&matrix)?;
        if !square.approx_eq(&ComplexMatrix::identity(2), HERMITICITY_TOL) {
            return Err(Error::Validation(
                "dichotomic observable must square to the identity".into(),
            ));
        }
        Ok(Self { matrix })
    }

    /// `n̂·σ` for a unit Bloch axis.
    pub fn from_unit_axis(nx: f64, ny: f64, nz: f64) -> Result<Self> {
        let norm = (nx * nx + ny * ny + nz * nz).sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "axis must be a unit vector, got length {norm}"
            )));
        }
        let m = &(&(&pauli(Axis::X) * nx) + &(&pauli(Axis::Y) * ny)) + &(&pauli(Axis::Z) * nz);
        Self::new(m)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Reinterprets the involution as a gate.
    pub fn to_unitary(&self) -> UnitaryOperator {
        UnitaryOperator::new(self.matrix.clone()).expect("involutions are unitary")
    }
}

/// A uniformly random dichotomic observable (Bloch axis on the unit sphere).
pub fn random_dichotomic<R: Rng + ?Sized>(rng: &mut R) -> DichotomicObservable {
    loop {
        let nx: f64 = rng.random_range(-1.0..1.0);
        let ny: f64 = rng.random_range(-1.0..1.0);
        let nz: f64 = rng.random_range(-1.0..1.0);
        let norm2 = nx * nx + ny * ny + nz * nz;
        if norm2 > 1e-4 && norm2 <= 1.0 {
            let norm = norm2.sqrt();
            return DichotomicObservable::from_unit_axis(nx / norm, ny / norm, nz / norm)
                .expect("normalized axis");
        }
    }
}

/// The dynamical observable at the 1-based time index:
/// `X(t_i) = σ_z cos(ω t_i) + σ_y sin(ω t_i)`.
pub fn observable_at_time(
    params: &EvolutionParams,
    index: usize,
) -> Result<DichotomicObservable> {
    let phase = params.phase(index)?;
    let m = &(&pauli(Axis::Z) * phase.cos()) + &(&pauli(Axis::Y) * phase.sin());
    DichotomicObservable::new(m)
}

/// All grid observables `X(t_1), …, X(t_k)` in time order.
pub fn grid_observables(params: &EvolutionParams) -> Result<Vec<DichotomicObservable>> {
    (1..=params.num_times())
        .map(|i| observable_at_time(params, i))
        .collect()
}

/// The eigenprojector `(I + x·X)/2` of a dichotomic observable.
///
/// The two projectors for `x = ±1` are rank one, idempotent, and sum to
/// the identity.
pub fn projector(obs: &DichotomicObservable, outcome: Sign) -> ComplexMatrix {
    let signed = obs.matrix().scale(num_complex::Complex64::new(outcome.value(), 0.0));
    (&ComplexMatrix::identity(2) + &signed).scale(num_complex::Complex64::new(0.5, 0.0))
}

/// Result of one projective-measurement branch.
#[derive(Debug, Clone)]
pub struct LuedersOutcome {
    /// `Tr[ρ·Π]`, clamped into `[0, 1]`.
    pub probability: f64,
    /// `ΠρΠ / Tr[ρΠ]`, absent when the branch probability is ≤ 1e-14.
    pub post_state: Option<DensityMatrix>,
}

/// Applies the Lüders rule for one projector.
///
/// A branch with probability at or below [`DEGENERACY_TOL`] yields no
/// post-measurement state; this is the zero-probability branch, not an
/// error.
pub fn lueders_update(rho: &DensityMatrix, proj: &ComplexMatrix) -> Result<LuedersOutcome> {
    if proj.rows() != rho.dim() || proj.cols() != rho.dim() {
        return Err(Error::Shape(format!(
            "projector is {}x{} but state has dimension {}",
            proj.rows(),
            proj.cols(),
            rho.dim()
        )));
    }
    if !proj.is_hermitian(HERMITICITY_TOL) {
        return Err(Error::InvalidArgument("projector must be Hermitian".into()));
    }
    let square = proj.matmul(proj)?;
    if !square.approx_eq(proj, 1e-10) {
        return Err(Error::InvalidArgument(
            "projector must be idempotent".into(),
        ));
    }

    let probability = expectation(rho, proj)?.re.clamp(0.0, 1.0);
    if probability <= DEGENERACY_TOL {
        return Ok(LuedersOutcome {
            probability,
            post_state: None,
        });
    }
    let numerator = proj.matmul(rho.matrix())?.matmul(proj)?;
    // Normalize by the numerator's own trace (equal to the probability up
    // to rounding): dividing by the separately computed probability can
    // leave a relative trace error far above tolerance on rare branches.
    let norm = numerator.trace().re;
    if norm <= DEGENERACY_TOL {
        return Ok(LuedersOutcome {
            probability,
            post_state: None,
        });
    }
    let post = DensityMatrix::new(
        rho.num_qubits(),
        numerator.scale(num_complex::Complex64::new(1.0 / norm, 0.0)),
    )?;
    Ok(LuedersOutcome {
        probability,
        post_state: Some(post),
    })
}

/// Joint distribution of the outcome sequence when the given observables
/// are measured one after another, starting from `rho`.
///
/// Each weight is the projector-chain probability
/// `Tr[Π_{x_k}···Π_{x_1} ρ Π_{x_1}···Π_{x_k}]`, accumulated by iterated
/// Lüders updates along every branch of the outcome tree.
pub fn sequential_joint_distribution(
    rho: &DensityMatrix,
    observables: &[DichotomicObservable],
) -> Result<JointDistribution> {
    let k = observables.len();
    if k == 0 || k > 10 {
        return Err(Error::InvalidArgument(format!(
            "need between 1 and 10 observables, got {k}"
        )));
    }
    if rho.num_qubits() != 1 {
        return Err(Error::Shape(format!(
            "sequential measurement expects a single-qubit state, got {} qubits",
            rho.num_qubits()
        )));
    }
    let mut weights = vec![0.0; 1 << k];
    descend(rho, 1.0, 0, observables, &mut weights)?;
    JointDistribution::new(k, weights)
}

fn descend(
    rho: &DensityMatrix,
    prob: f64,
    prefix: usize,
    remaining: &[DichotomicObservable],
    weights: &mut [f64],
) -> Result<()> {
    let Some((obs, rest)) = remaining.split_first() else {
        weights[prefix] = prob;
        return Ok(());
    };
    for sign in [Sign::Plus, Sign::Minus] {
        let branch = lueders_update(rho, &projector(obs, sign))?;
        let index = (prefix << 1) | sign.bit();
        if let Some(post) = branch.post_state {
            descend(&post, prob * branch.probability, index, rest, weights)?;
        }
        // Dead branches leave all refinement weights at zero.
    }
    Ok(())
}

/// Closed-form two-time probability for the maximally mixed initial state:
/// `P(x_i, x_j) = ¼·[1 + x_i·x_j·cos(ω(t_j − t_i))]`.
pub fn analytic_two_time(
    params: &EvolutionParams,
    i: usize,
    j: usize,
    xi: Sign,
    xj: Sign,
) -> Result<f64> {
    if i >= j {
        return Err(Error::InvalidArgument(format!(
            "need i < j, got i={i}, j={j}"
        )));
    }
    let phase = params.phase(j)? - params.phase(i)?;
    Ok(0.25 * (1.0 + xi.value() * xj.value() * phase.cos()))
}

/// Closed-form three-time joint probabilities for the maximally mixed
/// initial state, `⅛·[1 + x_1x_2·cos(ω(t_2−t_1))]·[1 + x_2x_3·cos(ω(t_3−t_2))]`.
///
/// On the default equal-spaced grid this is the direct-measurement table
/// with entries `⅛(1±cos ωΔt)²` and `⅛(1−cos²ωΔt)`; it matches
/// [`sequential_joint_distribution`] to machine precision.
pub fn analytic_direct_ttjp(params: &EvolutionParams) -> Result<JointDistribution> {
    if params.num_times() != 3 {
        return Err(Error::InvalidArgument(format!(
            "three-time formula needs exactly 3 measurement times, got {}",
            params.num_times()
        )));
    }
    let c12 = (params.phase(2)? - params.phase(1)?).cos();
    let c23 = (params.phase(3)? - params.phase(2)?).cos();
    let mut weights = vec![0.0; 8];
    for outcome in OutcomeTuple::enumerate(3) {
        let [x1, x2, x3] = [
            outcome.signs()[0].value(),
            outcome.signs()[1].value(),
            outcome.signs()[2].value(),
        ];
        weights[outcome.index()] = 0.125 * (1.0 + x1 * x2 * c12) * (1.0 + x2 * x3 * c23);
    }
    JointDistribution::new(3, weights)
}

/// One row of the x₁,x₃ marginal-consistency comparison.
#[derive(Debug, Clone)]
pub struct MarginalComparison {
    pub x1: Sign,
    pub x3: Sign,
    /// Two-time probability measured in its own (x₁, x₃) experiment.
    pub two_time: f64,
    /// The same pair probability obtained by summing the three-time joint
    /// distribution over x₂.
    pub marginalized_ttjp: f64,
    pub abs_gap: f64,
}

/// Side-by-side comparison of `P(x_1, x_3)` with `Σ_{x_2} P_d(x_1, x_2, x_3)`.
///
/// For a precessing qubit the two disagree by `sin²(ωΔt)/4` at equal-sign
/// outcomes: the middle measurement disturbs the (x₁, x₃) statistics even
/// though it is never read out.
#[derive(Debug, Clone)]
pub struct MarginalConsistencyReport {
    pub entries: Vec<MarginalComparison>,
    pub max_abs_gap: f64,
}

pub fn marginal_consistency_report(
    params: &EvolutionParams,
) -> Result<MarginalConsistencyReport> {
    if params.num_times() != 3 {
        return Err(Error::InvalidArgument(format!(
            "marginal-consistency report needs exactly 3 measurement times, got {}",
            params.num_times()
        )));
    }
    let rho = DensityMatrix::maximally_mixed(1);
    let direct = sequential_joint_distribution(&rho, &grid_observables(params)?)?;
    let pair_from_ttjp = direct.marginalize(&[1, 3])?;

    let mut entries = Vec::with_capacity(4);
    let mut max_abs_gap: f64 = 0.0;
    for outcome in OutcomeTuple::enumerate(2) {
        let x1 = outcome.signs()[0];
        let x3 = outcome.signs()[1];
        let two_time = analytic_two_time(params, 1, 3, x1, x3)?;
        let marginalized = pair_from_ttjp.weight(&outcome);
        let abs_gap = (two_time - marginalized).abs();
        max_abs_gap = max_abs_gap.max(abs_gap);
        entries.push(MarginalComparison {
            x1,
            x3,
            two_time,
            marginalized_ttjp: marginalized,
            abs_gap,
        });
    }
    Ok(MarginalConsistencyReport {
        entries,
        max_abs_gap,
    })
}
