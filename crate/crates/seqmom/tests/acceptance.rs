//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured error (visible with `--nocapture`).

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seqmom::circuits::{extract_ttjp_inrm, moussa_assembly, moussa_moment};
use seqmom::moments::{
    analytic_moment_inverted_ttjp, incompatibility_gap, invert_moments, moments_from_distribution,
    quantum_moment_assembly, random_distribution,
};
use seqmom::qcore::{expectation, random_single_qubit, DensityMatrix};
use seqmom::sequential::{
    analytic_direct_ttjp, analytic_two_time, grid_observables, projector, random_dichotomic,
    sequential_joint_distribution, EvolutionParams, OutcomeTuple, Sign,
};

const GRID_POINTS: usize = 100;

fn grid() -> Vec<f64> {
    (0..GRID_POINTS)
        .map(|i| PI * i as f64 / (GRID_POINTS - 1) as f64)
        .collect()
}

fn max_table_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn criterion_01_classical_moment_determinacy() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut max_error: f64 = 0.0;
    for trial in 0..1000usize {
        let k = 1 + trial % 6;
        let dist = random_distribution(k, &mut rng);
        let back = invert_moments(&moments_from_distribution(&dist)).unwrap();
        max_error = max_error.max(max_table_gap(dist.weights(), back.weights()));
    }
    let elapsed = start.elapsed();
    assert!(max_error <= 1e-12, "round-trip error {max_error:.3e}");
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE PASS: criterion 1 — classical moment determinacy \
         (1000 distributions, max err {max_error:.3e}, {elapsed:.2?})"
    );
}

#[test]
fn criterion_02_two_time_formulas() {
    let rho = DensityMatrix::maximally_mixed(1);
    let mut max_error: f64 = 0.0;
    for &theta in &grid() {
        let params = EvolutionParams::from_omega_dt(theta);
        let obs = grid_observables(&params).unwrap();
        for (i, j) in [(1usize, 2usize), (2, 3), (1, 3)] {
            let dist =
                sequential_joint_distribution(&rho, &[obs[i - 1].clone(), obs[j - 1].clone()])
                    .unwrap();
            for outcome in OutcomeTuple::enumerate(2) {
                let formula =
                    analytic_two_time(&params, i, j, outcome.signs()[0], outcome.signs()[1])
                        .unwrap();
                max_error = max_error.max((dist.weight(&outcome) - formula).abs());
            }
        }
    }
    assert!(max_error <= 1e-12, "two-time error {max_error:.3e}");
    println!(
        "ACCEPTANCE PASS: criterion 2 — two-time formulas on a {GRID_POINTS}-point grid \
         (max err {max_error:.3e})"
    );
}

#[test]
fn criterion_03_direct_ttjp() {
    let rho = DensityMatrix::maximally_mixed(1);
    let mut max_error: f64 = 0.0;
    for &theta in &grid() {
        let params = EvolutionParams::from_omega_dt(theta);
        let engine =
            sequential_joint_distribution(&rho, &grid_observables(&params).unwrap()).unwrap();
        let formula = analytic_direct_ttjp(&params).unwrap();
        max_error = max_error.max(max_table_gap(engine.weights(), formula.weights()));
    }
    assert!(max_error <= 1e-12, "direct TTJP error {max_error:.3e}");

    // Spot value: P_d(+1,+1,+1) = ⅛(1 + ½)² = 0.28125 at ωΔt = π/3.
    let params = EvolutionParams::from_omega_dt(PI / 3.0);
    let dist = sequential_joint_distribution(&rho, &grid_observables(&params).unwrap()).unwrap();
    let spot = dist.weights()[0];
    assert!((spot - 0.28125).abs() <= 1e-12, "spot value {spot}");
    println!(
        "ACCEPTANCE PASS: criterion 3 — direct three-time probabilities \
         (max err {max_error:.3e}, P_d(+1,+1,+1) = {spot} at ωΔt = π/3)"
    );
}

#[test]
fn criterion_04_moment_inverted_ttjp() {
    let mut max_error: f64 = 0.0;
    for &theta in &grid() {
        let params = EvolutionParams::from_omega_dt(theta);
        let assembled = invert_moments(&quantum_moment_assembly(&params).unwrap()).unwrap();
        let formula = analytic_moment_inverted_ttjp(&params).unwrap();
        max_error = max_error.max(max_table_gap(assembled.weights(), formula.weights()));
    }
    assert!(max_error <= 1e-12, "inverted TTJP error {max_error:.3e}");

    let params = EvolutionParams::from_omega_dt(PI / 3.0);
    let inverted = invert_moments(&quantum_moment_assembly(&params).unwrap()).unwrap();
    let ppp = inverted.weights()[0];
    let pmp = inverted.weights()[2];
    assert!((ppp - 0.1875).abs() <= 1e-12, "P_μ(+1,+1,+1) = {ppp}");
    assert!((pmp - (-0.0625)).abs() <= 1e-12, "P_μ(+1,−1,+1) = {pmp}");
    println!(
        "ACCEPTANCE PASS: criterion 4 — moment-inverted probabilities \
         (max err {max_error:.3e}, P_μ(+1,+1,+1) = {ppp}, P_μ(+1,−1,+1) = {pmp})"
    );
}

#[test]
fn criterion_05_incompatibility_gap_and_negativity() {
    let mut max_law_error: f64 = 0.0;
    for &theta in &grid() {
        let report = incompatibility_gap(&EvolutionParams::from_omega_dt(theta)).unwrap();
        let predicted_gap = theta.sin().powi(2) / 8.0;
        max_law_error = max_law_error.max((report.max_abs_difference - predicted_gap).abs());
    }
    assert!(max_law_error <= 1e-10, "gap-law error {max_law_error:.3e}");

    let at_quarter = incompatibility_gap(&EvolutionParams::from_omega_dt(PI / 2.0)).unwrap();
    assert!((at_quarter.max_abs_difference - 0.125).abs() <= 1e-10);

    // Negativity certificate on the open interval (0, π/2).
    let mut max_certificate_error: f64 = 0.0;
    for i in 1..50 {
        let theta = PI / 2.0 * i as f64 / 50.0;
        let report = incompatibility_gap(&EvolutionParams::from_omega_dt(theta)).unwrap();
        let c = theta.cos();
        let predicted_min = c * (c - 1.0) / 4.0;
        assert!(
            report.min_quasi_weight < 0.0,
            "no negativity at ωΔt = {theta}"
        );
        max_certificate_error =
            max_certificate_error.max((report.min_quasi_weight - predicted_min).abs());
    }
    assert!(max_certificate_error <= 1e-10);
    println!(
        "ACCEPTANCE PASS: criterion 5 — incompatibility gap sin²(ωΔt)/8 and negativity \
         certificate c(c−1)/4 (law err {max_law_error:.3e}, certificate err \
         {max_certificate_error:.3e}, gap 0.125 at π/2)"
    );
}

#[test]
fn criterion_06_marginal_inconsistency() {
    let rho = DensityMatrix::maximally_mixed(1);
    let mut max_gap_law_error: f64 = 0.0;
    let mut max_consistency_error: f64 = 0.0;
    for &theta in &grid() {
        let params = EvolutionParams::from_omega_dt(theta);
        let three =
            sequential_joint_distribution(&rho, &grid_observables(&params).unwrap()).unwrap();

        // The (x₁, x₃) marginal misses the pair experiment by sin²(ωΔt)/4
        // at equal-sign outcomes.
        let pair13 = three.marginalize(&[1, 3]).unwrap();
        let expected_gap = theta.sin().powi(2) / 4.0;
        for signs in [[Sign::Plus, Sign::Plus], [Sign::Minus, Sign::Minus]] {
            let outcome = OutcomeTuple::new(signs.to_vec());
            let reference =
                analytic_two_time(&params, 1, 3, signs[0], signs[1]).unwrap();
            let gap = (pair13.weight(&outcome) - reference).abs();
            max_gap_law_error = max_gap_law_error.max((gap - expected_gap).abs());
        }

        // Marginalizing out the *last* measurement is perfectly consistent.
        let obs = grid_observables(&params).unwrap();
        let pair12 =
            sequential_joint_distribution(&rho, &[obs[0].clone(), obs[1].clone()]).unwrap();
        let reduced = three.marginalize(&[1, 2]).unwrap();
        max_consistency_error = max_consistency_error
            .max(max_table_gap(reduced.weights(), pair12.weights()));
    }
    assert!(max_gap_law_error <= 1e-10, "gap law err {max_gap_law_error:.3e}");
    assert!(
        max_consistency_error <= 1e-12,
        "x₃ marginal err {max_consistency_error:.3e}"
    );

    // Spot value: gap 0.1875 at ωΔt = π/3.
    let params = EvolutionParams::from_omega_dt(PI / 3.0);
    let three = sequential_joint_distribution(&rho, &grid_observables(&params).unwrap()).unwrap();
    let pair13 = three.marginalize(&[1, 3]).unwrap();
    let outcome = OutcomeTuple::new(vec![Sign::Plus, Sign::Plus]);
    let gap = (pair13.weight(&outcome)
        - analytic_two_time(&params, 1, 3, Sign::Plus, Sign::Plus).unwrap())
    .abs();
    assert!((gap - 0.1875).abs() <= 1e-10, "spot gap {gap}");
    println!(
        "ACCEPTANCE PASS: criterion 6 — marginal inconsistency sin²(ωΔt)/4 \
         (law err {max_gap_law_error:.3e}, x₃-marginal err {max_consistency_error:.3e}, \
         gap {gap} at π/3)"
    );
}

#[test]
fn criterion_07_inrm_circuit_equivalence() {
    let start = Instant::now();
    let rho = DensityMatrix::maximally_mixed(1);
    let mut max_ideal_error: f64 = 0.0;
    let mut max_pseudopure_error: f64 = 0.0;
    for &theta in &grid() {
        let params = EvolutionParams::from_omega_dt(theta);
        let direct =
            sequential_joint_distribution(&rho, &grid_observables(&params).unwrap()).unwrap();
        let ideal = extract_ttjp_inrm(&params, 1.0).unwrap();
        max_ideal_error =
            max_ideal_error.max(max_table_gap(ideal.weights(), direct.weights()));
        for &eps in &[0.5, 1e-3] {
            let noisy = extract_ttjp_inrm(&params, eps).unwrap();
            max_pseudopure_error =
                max_pseudopure_error.max(max_table_gap(noisy.weights(), direct.weights()));
        }
    }
    let elapsed = start.elapsed();
    assert!(max_ideal_error <= 1e-10, "ideal err {max_ideal_error:.3e}");
    assert!(
        max_pseudopure_error <= 1e-8,
        "pseudopure err {max_pseudopure_error:.3e}"
    );
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE PASS: criterion 7 — INRM circuit equivalence \
         (ε=1 err {max_ideal_error:.3e}, ε∈{{0.5,1e-3}} err {max_pseudopure_error:.3e}, \
         {elapsed:.2?})"
    );
}

// Hand-rolled complex 2x2 arithmetic, independent of the library's matrix
// path, used as the brute-force oracle for the readout protocol.
mod oracle {
    pub type C = (f64, f64);
    pub type M2 = [[C; 2]; 2];

    fn cmul(a: C, b: C) -> C {
        (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
    }

    fn cadd(a: C, b: C) -> C {
        (a.0 + b.0, a.1 + b.1)
    }

    pub fn mmul(a: &M2, b: &M2) -> M2 {
        let mut out = [[(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = cadd(cmul(a[i][0], b[0][j]), cmul(a[i][1], b[1][j]));
            }
        }
        out
    }

    pub fn madd(a: &M2, b: &M2) -> M2 {
        let mut out = [[(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = cadd(a[i][j], b[i][j]);
            }
        }
        out
    }

    pub fn mtrace(a: &M2) -> C {
        cadd(a[0][0], a[1][1])
    }

    pub const IDENTITY: M2 = [[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (1.0, 0.0)]];
}

#[test]
fn criterion_08_moussa_protocol() {
    // Grid: the protocol's real parts reproduce the closed-form moments of
    // the maximally mixed state.
    let rho = DensityMatrix::maximally_mixed(1);
    let mut max_grid_error: f64 = 0.0;
    for &theta in &grid() {
        let params = EvolutionParams::from_omega_dt(theta);
        let protocol = moussa_assembly(&params, &rho).unwrap();
        let mut expected = vec![0.0; 8];
        expected[0] = 1.0;
        expected[0b110] = theta.cos();
        expected[0b011] = theta.cos();
        expected[0b101] = (2.0 * theta).cos();
        max_grid_error = max_grid_error.max(max_table_gap(protocol.values(), &expected));
    }
    assert!(max_grid_error <= 1e-10, "grid err {max_grid_error:.3e}");

    // Randomized: the real part equals the symmetrized trace computed with
    // the hand-rolled oracle above.
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut max_oracle_error: f64 = 0.0;
    for _ in 0..200 {
        let m = rng.random_range(1..=4);
        let observables: Vec<_> = (0..m).map(|_| random_dichotomic(&mut rng)).collect();
        let rho = random_single_qubit(&mut rng);
        let moment = moussa_moment(&observables, &rho).unwrap();

        let as_m2 = |matrix: &seqmom::qcore::ComplexMatrix| -> oracle::M2 {
            let mut out = [[(0.0, 0.0); 2]; 2];
            for (i, row) in out.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    let z = matrix[(i, j)];
                    *cell = (z.re, z.im);
                }
            }
            out
        };
        let mut forward = oracle::IDENTITY; // X_1···X_m
        for obs in &observables {
            forward = oracle::mmul(&forward, &as_m2(obs.matrix()));
        }
        let mut backward = oracle::IDENTITY; // X_m···X_1
        for obs in observables.iter().rev() {
            backward = oracle::mmul(&backward, &as_m2(obs.matrix()));
        }
        let symmetrized = oracle::madd(&forward, &backward);
        let product = oracle::mmul(&as_m2(rho.matrix()), &symmetrized);
        let expected = 0.5 * oracle::mtrace(&product).0;
        max_oracle_error = max_oracle_error.max((moment.re - expected).abs());
    }
    assert!(max_oracle_error <= 1e-12, "oracle err {max_oracle_error:.3e}");
    println!(
        "ACCEPTANCE PASS: criterion 8 — ancilla moment protocol \
         (grid err {max_grid_error:.3e}, symmetrized-trace oracle err {max_oracle_error:.3e})"
    );
}

#[test]
fn criterion_09_chain_rule_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut max_error: f64 = 0.0;
    for _ in 0..200 {
        let rho = random_single_qubit(&mut rng);
        let params = EvolutionParams::from_omega_dt(rng.random_range(0.0..PI));
        let obs = grid_observables(&params).unwrap();
        let three = sequential_joint_distribution(&rho, &obs).unwrap();
        let pair12 =
            sequential_joint_distribution(&rho, &[obs[0].clone(), obs[1].clone()]).unwrap();
        let pair23 =
            sequential_joint_distribution(&rho, &[obs[1].clone(), obs[2].clone()]).unwrap();
        for x2 in [Sign::Plus, Sign::Minus] {
            let p2 = expectation(&rho, &projector(&obs[1], x2)).unwrap().re;
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
    assert!(max_error <= 1e-12, "chain-rule error {max_error:.3e}");
    println!(
        "ACCEPTANCE PASS: criterion 9 — chain-rule identity on random states \
         (max err {max_error:.3e})"
    );
}

#[test]
fn criterion_10_determinism_and_format() {
    let binary = env!("CARGO_BIN_EXE_seqmom");
    let dir = tempfile::tempdir().unwrap();

    // Exact mode: byte-identical output across runs.
    let exact_args = [
        "sweep", "--start", "0", "--end", "3.141592653589793", "--points", "7", "--engines",
        "analytic,lueders,moments",
    ];
    let run = |out: &str, extra: &[&str]| {
        let path = dir.path().join(out);
        let status = Command::new(binary)
            .args(exact_args)
            .args(extra)
            .arg("--out")
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success(), "sweep failed");
        std::fs::read(path).unwrap()
    };
    let first = run("a.csv", &[]);
    let second = run("b.csv", &[]);
    assert_eq!(first, second, "exact sweep must be byte-identical");

    // Sampling mode with a fixed seed: also byte-identical.
    let sampled_first = run("c.csv", &["--shots", "200", "--seed", "7"]);
    let sampled_second = run("d.csv", &["--shots", "200", "--seed", "7"]);
    assert_eq!(sampled_first, sampled_second, "seeded sampling must be byte-identical");

    // Format: documented header, LF endings, one row per grid point.
    let text = String::from_utf8(first).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "omega_dt,pd_ppp,pd_ppm,pd_pmp,pd_pmm,pd_mpp,pd_mpm,pd_mmp,pd_mmm,\
         pmu_ppp,pmu_ppm,pmu_pmp,pmu_pmm,pmu_mpp,pmu_mpm,pmu_mmp,pmu_mmm,\
         mu_100,mu_010,mu_001,mu_110,mu_011,mu_101,mu_111,max_gap,min_quasi,marginal_gap"
    );
    assert_eq!(lines.count(), 7);

    // Selftest exits 0.
    let status = Command::new(binary).arg("selftest").status().unwrap();
    assert!(status.success(), "selftest must exit 0");
    println!(
        "ACCEPTANCE PASS: criterion 10 — deterministic sweep output and clean selftest exit"
    );
}
