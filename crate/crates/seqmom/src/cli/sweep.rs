use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Engine, SweepConfig, CROSS_CHECK_TOL};
use crate::circuits::{extract_ttjp_inrm, moussa_assembly};
use crate::error::{Error, Result};
use crate::moments::{
    analytic_moment_inverted_ttjp, empirical_distribution, invert_moments,
    quantum_moment_assembly, quantum_moment_assembly_sampled, MomentVector, QuasiDistribution,
};
use crate::qcore::DensityMatrix;
use crate::sequential::{
    analytic_direct_ttjp, analytic_two_time, grid_observables, sequential_joint_distribution,
    EvolutionParams, JointDistribution, OutcomeTuple, OutcomeWeights,
};

/// Fixed CSV column order. Appended with a `shots` column in sampling mode.
pub const CSV_HEADER: &str = "omega_dt,pd_ppp,pd_ppm,pd_pmp,pd_pmm,pd_mpp,pd_mpm,pd_mmp,pd_mmm,\
pmu_ppp,pmu_ppm,pmu_pmp,pmu_pmm,pmu_mpp,pmu_mpm,pmu_mmp,pmu_mmm,\
mu_100,mu_010,mu_001,mu_110,mu_011,mu_101,mu_111,max_gap,min_quasi,marginal_gap";

/// Flat positions of the seven reported moments, in column order.
const MOMENT_COLUMNS: [usize; 7] = [0b100, 0b010, 0b001, 0b110, 0b011, 0b101, 0b111];

/// One grid point of the sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub omega_dt: f64,
    /// Direct three-time probabilities, outcome enumeration order.
    pub direct: [f64; 8],
    /// Moment-inverted three-time quasi-probabilities.
    pub inverted: [f64; 8],
    /// μ₁₀₀, μ₀₁₀, μ₀₀₁, μ₁₁₀, μ₀₁₁, μ₁₀₁, μ₁₁₁.
    pub moments: [f64; 7],
    /// max over outcomes of |P_d − P_μ|.
    pub max_gap: f64,
    /// Most negative entry of the inverted table.
    pub min_quasi: f64,
    /// max over (x₁, x₃) of |Σ_{x₂} P_d − P(x₁, x₃)|.
    pub marginal_gap: f64,
    pub shots: Option<u64>,
}

impl SweepRow {
    fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        let mut fields: Vec<String> = Vec::with_capacity(27);
        fields.push(fmt_value(self.omega_dt));
        fields.extend(self.direct.iter().map(|&v| fmt_value(v)));
        fields.extend(self.inverted.iter().map(|&v| fmt_value(v)));
        fields.extend(self.moments.iter().map(|&v| fmt_value(v)));
        fields.push(fmt_value(self.max_gap));
        fields.push(fmt_value(self.min_quasi));
        fields.push(fmt_value(self.marginal_gap));
        if let Some(shots) = self.shots {
            fields.push(shots.to_string());
        }
        writeln!(out, "{}", fields.join(","))?;
        Ok(())
    }
}

/// 17 significant digits: enough to round-trip any f64, stable across runs.
fn fmt_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn to_array8<D: OutcomeWeights>(dist: &D) -> [f64; 8] {
    let mut out = [0.0; 8];
    out.copy_from_slice(dist.weights());
    out
}

/// Largest entrywise difference between two eight-entry tables.
fn table_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn cross_check(omega_dt: f64, what: &str, a: &[f64], b: &[f64]) -> Result<()> {
    let gap = table_gap(a, b);
    if gap > CROSS_CHECK_TOL {
        return Err(Error::Validation(format!(
            "engine disagreement at omega_dt = {omega_dt:.6}: {what} differ by {gap:.3e}"
        )));
    }
    Ok(())
}

/// The closed-form moment vector for the default grid at the given angle.
fn analytic_moments(params: &EvolutionParams) -> Result<MomentVector> {
    let c12 = (params.phase(2)? - params.phase(1)?).cos();
    let c23 = (params.phase(3)? - params.phase(2)?).cos();
    let c13 = (params.phase(3)? - params.phase(1)?).cos();
    let mut values = vec![0.0; 8];
    values[0] = 1.0;
    values[0b110] = c12;
    values[0b011] = c23;
    values[0b101] = c13;
    MomentVector::new(3, values)
}

/// Computes one sweep row in exact mode, running every selected engine and
/// cross-checking them against each other.
pub fn compute_sweep_row(omega_dt: f64, config: &SweepConfig) -> Result<SweepRow> {
    let params = EvolutionParams::from_omega_dt(omega_dt);
    let engines = &config.engines;
    let rho = DensityMatrix::maximally_mixed(1);

    // Direct three-time table: every selected source computes it, the most
    // direct one is reported.
    let lueders = engines
        .contains(Engine::Lueders)
        .then(|| sequential_joint_distribution(&rho, &grid_observables(&params)?))
        .transpose()?;
    let analytic = engines
        .contains(Engine::Analytic)
        .then(|| analytic_direct_ttjp(&params))
        .transpose()?;
    let inrm = engines
        .contains(Engine::Inrm)
        .then(|| extract_ttjp_inrm(&params, config.epsilon))
        .transpose()?;
    if let (Some(a), Some(b)) = (&lueders, &analytic) {
        cross_check(omega_dt, "direct TTJP (lueders vs analytic)", a.weights(), b.weights())?;
    }
    if let (Some(a), Some(b)) = (&inrm, &lueders) {
        cross_check(omega_dt, "direct TTJP (inrm vs lueders)", a.weights(), b.weights())?;
    }
    if let (Some(a), Some(b)) = (&inrm, &analytic) {
        cross_check(omega_dt, "direct TTJP (inrm vs analytic)", a.weights(), b.weights())?;
    }
    let direct: JointDistribution = lueders
        .or(analytic)
        .or(inrm)
        .expect("validated config has a direct source");

    // Moment vector, same pattern.
    let assembled = engines
        .contains(Engine::Moments)
        .then(|| quantum_moment_assembly(&params))
        .transpose()?;
    let moussa = engines
        .contains(Engine::Moussa)
        .then(|| moussa_assembly(&params, &rho))
        .transpose()?;
    let closed_form = engines
        .contains(Engine::Analytic)
        .then(|| analytic_moments(&params))
        .transpose()?;
    if let (Some(a), Some(b)) = (&assembled, &moussa) {
        cross_check(omega_dt, "moments (assembly vs moussa)", a.values(), b.values())?;
    }
    if let (Some(a), Some(b)) = (&assembled, &closed_form) {
        cross_check(omega_dt, "moments (assembly vs analytic)", a.values(), b.values())?;
    }
    if let (Some(a), Some(b)) = (&moussa, &closed_form) {
        cross_check(omega_dt, "moments (moussa vs analytic)", a.values(), b.values())?;
    }
    let moment_vector: MomentVector = assembled
        .or(moussa)
        .or(closed_form)
        .expect("validated config has a moment source");

    let inverted = invert_moments(&moment_vector)?;
    if engines.contains(Engine::Analytic) {
        let closed = analytic_moment_inverted_ttjp(&params)?;
        cross_check(
            omega_dt,
            "inverted TTJP (moments vs analytic)",
            inverted.weights(),
            closed.weights(),
        )?;
    }

    finish_row(omega_dt, &params, direct, inverted, &moment_vector, None)
}

/// Computes one sweep row in sampling mode: the direct table and every
/// moment become empirical estimates from `shots` simulated runs each.
pub fn compute_sweep_row_sampled(
    omega_dt: f64,
    shots: u64,
    rng: &mut ChaCha8Rng,
) -> Result<SweepRow> {
    let params = EvolutionParams::from_omega_dt(omega_dt);
    let rho = DensityMatrix::maximally_mixed(1);
    let exact = sequential_joint_distribution(&rho, &grid_observables(&params)?)?;
    let direct = empirical_distribution(&exact, shots, rng)?;
    let moment_vector = quantum_moment_assembly_sampled(&params, &rho, shots, rng)?;
    let inverted = invert_moments(&moment_vector)?;
    finish_row(
        omega_dt,
        &params,
        direct,
        inverted,
        &moment_vector,
        Some(shots),
    )
}

fn finish_row(
    omega_dt: f64,
    params: &EvolutionParams,
    direct: JointDistribution,
    inverted: QuasiDistribution,
    moment_vector: &MomentVector,
    shots: Option<u64>,
) -> Result<SweepRow> {
    let max_gap = table_gap(direct.weights(), inverted.weights());
    let min_quasi = inverted.min_weight();

    let pair_from_ttjp = direct.marginalize(&[1, 3])?;
    let mut marginal_gap: f64 = 0.0;
    for outcome in OutcomeTuple::enumerate(2) {
        let reference =
            analytic_two_time(params, 1, 3, outcome.signs()[0], outcome.signs()[1])?;
        marginal_gap = marginal_gap.max((pair_from_ttjp.weight(&outcome) - reference).abs());
    }

    let mut moments = [0.0; 7];
    for (slot, &flat) in MOMENT_COLUMNS.iter().enumerate() {
        moments[slot] = moment_vector.value_at(flat);
    }

    Ok(SweepRow {
        omega_dt,
        direct: to_array8(&direct),
        inverted: to_array8(&inverted),
        moments,
        max_gap,
        min_quasi,
        marginal_gap,
        shots,
    })
}

/// Runs the sweep and writes the CSV (header plus one row per grid point,
/// LF line endings) to `out`.
pub fn run_sweep<W: Write>(config: &SweepConfig, out: &mut W) -> Result<()> {
    config.validate()?;
    let mut header = CSV_HEADER.to_string();
    if config.shots.is_some() {
        header.push_str(",shots");
    }
    writeln!(out, "{header}")?;
    match config.shots {
        None => {
            for &omega_dt in &config.grid() {
                compute_sweep_row(omega_dt, config)?.write_csv(out)?;
            }
        }
        Some(shots) => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.unwrap_or(0));
            for &omega_dt in &config.grid() {
                compute_sweep_row_sampled(omega_dt, shots, &mut rng)?.write_csv(out)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::EngineSet;
    use std::f64::consts::PI;

    #[test]
    fn header_has_expected_columns() {
        assert_eq!(CSV_HEADER.split(',').count(), 27);
        assert!(CSV_HEADER.starts_with("omega_dt,pd_ppp"));
        assert!(CSV_HEADER.ends_with("max_gap,min_quasi,marginal_gap"));
    }

    #[test]
    fn row_at_quarter_period() {
        let config = SweepConfig::default();
        let row = compute_sweep_row(PI / 2.0, &config).unwrap();
        assert!((row.max_gap - 0.125).abs() < 1e-10);
        assert!((row.marginal_gap - 0.25).abs() < 1e-10);
        // All eight direct probabilities are 1/8 here.
        for &p in &row.direct {
            assert!((p - 0.125).abs() < 1e-10);
        }
    }

    #[test]
    fn commuting_row_has_no_gap() {
        let config = SweepConfig::default();
        let row = compute_sweep_row(0.0, &config).unwrap();
        assert!(row.max_gap < 1e-10);
        for (d, m) in row.direct.iter().zip(&row.inverted) {
            assert!((d - m).abs() < 1e-10);
        }
    }

    #[test]
    fn analytic_only_engine_set_works() {
        let config = SweepConfig {
            engines: EngineSet::parse_list("analytic").unwrap(),
            ..SweepConfig::default()
        };
        let row = compute_sweep_row(PI / 3.0, &config).unwrap();
        assert!((row.direct[0] - 0.28125).abs() < 1e-12);
        assert!((row.inverted[0] - 0.1875).abs() < 1e-12);
        assert!((row.inverted[2] - (-0.0625)).abs() < 1e-12);
    }

    #[test]
    fn sweep_output_is_deterministic() {
        let config = SweepConfig {
            points: 4,
            engines: EngineSet::parse_list("analytic,lueders,moments").unwrap(),
            ..SweepConfig::default()
        };
        let mut a = Vec::new();
        run_sweep(&config, &mut a).unwrap();
        let mut b = Vec::new();
        run_sweep(&config, &mut b).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().filter(|&&c| c == b'\n').count(), 5);
        assert!(!a.windows(2).any(|w| w == b"\r\n"));
    }

    #[test]
    fn sampled_sweep_is_seed_deterministic() {
        let config = SweepConfig {
            points: 3,
            engines: EngineSet::parse_list("analytic,lueders,moments").unwrap(),
            shots: Some(500),
            seed: Some(9),
            ..SweepConfig::default()
        };
        let mut a = Vec::new();
        run_sweep(&config, &mut a).unwrap();
        let mut b = Vec::new();
        run_sweep(&config, &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.lines().next().unwrap().ends_with(",shots"));
        assert!(text.lines().nth(1).unwrap().ends_with(",500"));
    }
}
