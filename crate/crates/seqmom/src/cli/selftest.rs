use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuits::{extract_ttjp_inrm, moussa_assembly, moussa_moment};
use crate::error::Result;
use crate::moments::{
    invert_moments, moments_from_distribution, quantum_moment_assembly, random_distribution,
};
use crate::qcore::{expectation, random_single_qubit, ComplexMatrix, DensityMatrix};
use crate::sequential::{
    analytic_direct_ttjp, analytic_two_time, grid_observables, projector, random_dichotomic,
    sequential_joint_distribution, EvolutionParams, OutcomeTuple, Sign,
};

/// Outcome of one self-test property.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn from_max_error(name: &'static str, max_error: f64, tol: f64) -> Self {
        Self {
            name,
            passed: max_error <= tol,
            detail: format!("max error {max_error:.3e} (tolerance {tol:.0e})"),
        }
    }
}

const GRID_POINTS: usize = 100;

fn grid() -> Vec<f64> {
    (0..GRID_POINTS)
        .map(|i| std::f64::consts::PI * i as f64 / (GRID_POINTS - 1) as f64)
        .collect()
}

/// Runs the full invariant suite with a fixed seed. Deterministic.
pub fn run_selftest() -> Result<Vec<CheckResult>> {
    Ok(vec![
        round_trip_inversion()?,
        two_time_closed_form()?,
        direct_ttjp_closed_form()?,
        chain_rule_identity()?,
        circuit_equivalence()?,
        moussa_symmetrized_trace()?,
        moussa_matches_assembly()?,
        gap_law()?,
    ])
}

/// Moment inversion is the identity on classical data, k = 1..6.
fn round_trip_inversion() -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut max_error: f64 = 0.0;
    for trial in 0..600usize {
        let k = 1 + trial % 6;
        let dist = random_distribution(k, &mut rng);
        let back = invert_moments(&moments_from_distribution(&dist))?;
        for (a, b) in dist.weights().iter().zip(back.weights()) {
            max_error = max_error.max((a - b).abs());
        }
    }
    Ok(CheckResult::from_max_error(
        "moment round-trip on random distributions (k = 1..6)",
        max_error,
        1e-12,
    ))
}

/// Lüders pairs match ¼[1 + x_i x_j cos(ω(t_j − t_i))] across the grid.
fn two_time_closed_form() -> Result<CheckResult> {
    let rho = DensityMatrix::maximally_mixed(1);
    let mut max_error: f64 = 0.0;
    for &theta in &grid() {
        let params = EvolutionParams::from_omega_dt(theta);
        let obs = grid_observables(&params)?;
        for (i, j) in [(1usize, 2usize), (2, 3), (1, 3)] {
            let dist =
                sequential_joint_distribution(&rho, &[obs[i - 1].clone(), obs[j - 1].clone()])?;
            for outcome in OutcomeTuple::enumerate(2) {
                let expected =
                    analytic_two_time(&params, i, j, outcome.signs()[0], outcome.signs()[1])?;
                max_error = max_error.max((dist.weight(&outcome) - expected).abs());
            }
        }
    }
    Ok(CheckResult::from_max_error(
        "two-time probabilities match the closed form",
        max_error,
        1e-12,
    ))
}

/// The three-time Lüders chain matches the closed-form table.
fn direct_ttjp_closed_form() -> Result<CheckResult> {
    let rho = DensityMatrix::maximally_mixed(1);
    let mut max_error: f64 = 0.0;
    for &theta in &grid() {
        let params = EvolutionParams::from_omega_dt(theta);
        let engine = sequential_joint_distribution(&rho, &grid_observables(&params)?)?;
        let formula = analytic_direct_ttjp(&params)?;
        for (a, b) in engine.weights().iter().zip(formula.weights()) {
            max_error = max_error.max((a - b).abs());
        }
    }
    Ok(CheckResult::from_max_error(
        "direct three-time probabilities match the closed form",
        max_error,
        1e-12,
    ))
}

/// P(x1,x2,x3)·P(x2) = P(x1,x2)·P(x2,x3) for arbitrary initial states.
fn chain_rule_identity() -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut max_error: f64 = 0.0;
    for _ in 0..100 {
        let rho = random_single_qubit(&mut rng);
        let params = EvolutionParams::from_omega_dt(rng.random_range(0.0..std::f64::consts::PI));
        let obs = grid_observables(&params)?;
        let three = sequential_joint_distribution(&rho, &obs)?;
        let pair12 = sequential_joint_distribution(&rho, &[obs[0].clone(), obs[1].clone()])?;
        let pair23 = sequential_joint_distribution(&rho, &[obs[1].clone(), obs[2].clone()])?;
        for x2 in [Sign::Plus, Sign::Minus] {
            let p2 = expectation(&rho, &projector(&obs[1], x2))?.re;
            if p2 <= 1e-12 {
                continue;
            }
            for x1 in [Sign::Plus, Sign::Minus] {
                for x3 in [Sign::Plus, Sign::Minus] {
                    let lhs = three.weight(&OutcomeTuple::new(vec![x1, x2, x3])) * p2;
                    let rhs = pair12.weight(&OutcomeTuple::new(vec![x1, x2]))
                        * pair23.weight(&OutcomeTuple::new(vec![x2, x3]));
                    max_error = max_error.max((lhs - rhs).abs());
                }
            }
        }
    }
    Ok(CheckResult::from_max_error(
        "chain-rule identity on random initial states",
        max_error,
        1e-12,
    ))
}

/// The four-experiment circuit scheme reproduces the Lüders chain.
fn circuit_equivalence() -> Result<CheckResult> {
    let rho = DensityMatrix::maximally_mixed(1);
    let mut max_error: f64 = 0.0;
    for &theta in &grid() {
        let params = EvolutionParams::from_omega_dt(theta);
        let circuit = extract_ttjp_inrm(&params, 1.0)?;
        let direct = sequential_joint_distribution(&rho, &grid_observables(&params)?)?;
        for (a, b) in circuit.weights().iter().zip(direct.weights()) {
            max_error = max_error.max((a - b).abs());
        }
    }
    Ok(CheckResult::from_max_error(
        "INRM circuit equivalence on a 100-point grid",
        max_error,
        1e-10,
    ))
}

/// Re(moussa) = ½Tr[ρ(X_m···X_1 + X_1···X_m)] for random inputs.
fn moussa_symmetrized_trace() -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut max_error: f64 = 0.0;
    for _ in 0..100 {
        let m = rng.random_range(1..=4);
        let observables: Vec<_> = (0..m).map(|_| random_dichotomic(&mut rng)).collect();
        let rho = random_single_qubit(&mut rng);
        let moment = moussa_moment(&observables, &rho)?;
        let mut forward = ComplexMatrix::identity(2);
        for obs in &observables {
            forward = forward.matmul(obs.matrix())?;
        }
        let mut backward = ComplexMatrix::identity(2);
        for obs in observables.iter().rev() {
            backward = backward.matmul(obs.matrix())?;
        }
        let symmetrized = 0.5 * rho.matrix().matmul(&(&forward + &backward))?.trace().re;
        max_error = max_error.max((moment.re - symmetrized).abs());
    }
    Ok(CheckResult::from_max_error(
        "ancilla readout equals the symmetrized trace",
        max_error,
        1e-12,
    ))
}

/// Protocol moments agree with the per-marginal assembly on the grid.
fn moussa_matches_assembly() -> Result<CheckResult> {
    let rho = DensityMatrix::maximally_mixed(1);
    let mut max_error: f64 = 0.0;
    for &theta in &grid() {
        let params = EvolutionParams::from_omega_dt(theta);
        let protocol = moussa_assembly(&params, &rho)?;
        let assembled = quantum_moment_assembly(&params)?;
        for (a, b) in protocol.values().iter().zip(assembled.values()) {
            max_error = max_error.max((a - b).abs());
        }
    }
    Ok(CheckResult::from_max_error(
        "protocol moments match the sequential assembly",
        max_error,
        1e-10,
    ))
}

/// max |P_d − P_μ| follows sin²(ωΔt)/8 across the grid.
fn gap_law() -> Result<CheckResult> {
    let mut max_error: f64 = 0.0;
    for &theta in &grid() {
        let params = EvolutionParams::from_omega_dt(theta);
        let report = crate::moments::incompatibility_gap(&params)?;
        let predicted = theta.sin().powi(2) / 8.0;
        max_error = max_error.max((report.max_abs_difference - predicted).abs());
    }
    Ok(CheckResult::from_max_error(
        "incompatibility gap follows sin²(ωΔt)/8",
        max_error,
        1e-10,
    ))
}
