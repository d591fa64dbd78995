//! Moments of dichotomic variables and their inversion.
//!
//! For `k` variables taking values ±1, the `2^k` moments
//! `μ_{n_1…n_k} = ⟨X_1^{n_1}···X_k^{n_k}⟩` (each `n_i ∈ {0,1}`) determine
//! a unique normalized weight function over the outcome tuples:
//!
//! ```text
//! P(x_1,…,x_k) = 2^{-k} Σ_n x_1^{n_1}···x_k^{n_k} μ_{n_1…n_k}
//! ```
//!
//! For classical data the inversion returns the distribution the moments
//! came from. For moments gathered from *separate* quantum experiments —
//! one per marginal, as an experimenter would gather them — the inversion
//! can go negative. That negativity is the point: it certifies that no
//! genuine joint distribution is compatible with the measured marginals,
//! and this module computes it exactly. Inversion output is therefore a
//! [`QuasiDistribution`] and is never clipped to nonnegative values.

use rand::Rng;

use crate::error::{Error, Result};
use crate::qcore::{expectation, DensityMatrix};
use crate::sequential::{
    grid_observables, marginalize_weights, observable_at_time, sequential_joint_distribution,
    validate_keep, EvolutionParams, JointDistribution, OutcomeTuple, OutcomeWeights,
    NORMALIZATION_TOL,
};

/// Which moment a value belongs to: one exponent bit per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MomentIndex {
    bits: Vec<bool>,
}

impl MomentIndex {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Index from its flat position, first variable as the most
    /// significant bit (mirroring [`OutcomeTuple`] enumeration).
    pub fn from_flat(k: usize, flat: usize) -> Self {
        assert!(flat < (1 << k), "moment index out of range");
        Self {
            bits: (0..k).map(|j| (flat >> (k - 1 - j)) & 1 == 1).collect(),
        }
    }

    pub fn flat(&self) -> usize {
        self.bits
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b))
    }

    pub fn k(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Digit string such as `"110"` for ⟨X₁X₂⟩ of three variables.
    pub fn label(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// The `2^k` moments of a `k`-variable dichotomic ensemble, stored dense
/// in [`MomentIndex::from_flat`] order. The all-zero moment is the
/// normalization and always equals 1.
#[derive(Debug, Clone)]
pub struct MomentVector {
    k: usize,
    values: Vec<f64>,
}

impl MomentVector {
    pub fn new(k: usize, values: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "moment vector needs at least one variable".into(),
            ));
        }
        if values.len() != (1 << k) {
            return Err(Error::Shape(format!(
                "{k}-variable moment vector needs {} values, got {}",
                1 << k,
                values.len()
            )));
        }
        if (values[0] - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!(
                "normalization moment μ_0…0 must be 1, got {}",
                values[0]
            )));
        }
        if let Some(bad) = values
            .iter()
            .find(|v| !v.is_finite() || v.abs() > 1.0 + NORMALIZATION_TOL)
        {
            return Err(Error::Validation(format!(
                "moment {bad} outside [−1, 1] for dichotomic variables"
            )));
        }
        Ok(Self { k, values })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, index: &MomentIndex) -> f64 {
        assert_eq!(index.k(), self.k, "moment index arity mismatch");
        self.values[index.flat()]
    }

    pub fn value_at(&self, flat: usize) -> f64 {
        self.values[flat]
    }

    pub fn iter(&self) -> impl Iterator<Item = (MomentIndex, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(flat, &v)| (MomentIndex::from_flat(self.k, flat), v))
    }
}

/// A normalized signed weight function over `{±1}^k`.
///
/// Negative entries are allowed and meaningful; they witness the absence
/// of a genuine joint distribution with the same moments.
#[derive(Debug, Clone)]
pub struct QuasiDistribution {
    k: usize,
    weights: Vec<f64>,
}

impl QuasiDistribution {
    pub fn new(k: usize, weights: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "quasi-distribution needs at least one variable".into(),
            ));
        }
        if weights.len() != (1 << k) {
            return Err(Error::Shape(format!(
                "{k}-variable quasi-distribution needs {} weights, got {}",
                1 << k,
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::Validation("non-finite quasi-weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Validation(format!(
                "quasi-weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { k, weights })
    }

    /// Number of variables.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Weights in enumeration order ([`OutcomeTuple::from_index`]).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Signed weight of one outcome tuple.
    pub fn weight(&self, outcome: &OutcomeTuple) -> f64 {
        assert_eq!(outcome.len(), self.k, "outcome arity mismatch");
        self.weights[outcome.index()]
    }

    pub fn iter_outcomes(&self) -> impl Iterator<Item = (OutcomeTuple, f64)> + '_ {
        let k = self.k;
        self.weights
            .iter()
            .enumerate()
            .map(move |(i, &w)| (OutcomeTuple::from_index(k, i), w))
    }

    /// The most negative entry (or the smallest positive one if none are
    /// negative).
    pub fn min_weight(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_nonnegative(&self, tol: f64) -> bool {
        self.weights.iter().all(|&w| w >= -tol)
    }

    /// Sums out every variable not in `keep` (1-based indices, ascending
    /// output order).
    pub fn marginalize(&self, keep: &[usize]) -> Result<QuasiDistribution> {
        let keep0 = validate_keep(self.k, keep)?;
        let weights = marginalize_weights(self.k, &self.weights, &keep0);
        QuasiDistribution::new(keep0.len(), weights)
    }
}

impl OutcomeWeights for QuasiDistribution {
    fn k(&self) -> usize {
        self.k
    }

    fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl From<JointDistribution> for QuasiDistribution {
    fn from(dist: JointDistribution) -> Self {
        Self {
            k: dist.k(),
            weights: dist.weights().to_vec(),
        }
    }
}

/// Sign `(−1)^{|i ∧ n|}`: the product `x_1^{n_1}···x_k^{n_k}` for the
/// outcome tuple at flat index `i` and the moment at flat index `n`.
fn parity_sign(outcome: usize, moment: usize) -> f64 {
    if (outcome & moment).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Forward moment computation: `μ_n = Σ_x x_1^{n_1}···x_k^{n_k} P(x)` for
/// every exponent pattern `n`. The normalization moment is set to exactly 1.
pub fn moments_from_distribution<D: OutcomeWeights + ?Sized>(dist: &D) -> MomentVector {
    let k = dist.k();
    let weights = dist.weights();
    let size = 1usize << k;
    let mut values = vec![0.0; size];
    values[0] = 1.0;
    for (n, value) in values.iter_mut().enumerate().skip(1) {
        *value = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| parity_sign(i, n) * w)
            .sum();
    }
    MomentVector::new(k, values).expect("forward moments of a normalized distribution are valid")
}

/// Inverts a moment vector into the unique normalized (quasi-)distribution
/// with those moments.
///
/// Round-trips with [`moments_from_distribution`] to machine precision;
/// the output always sums to 1 because the normalization moment alone
/// contributes `2^{-k}` per outcome.
pub fn invert_moments(mv: &MomentVector) -> Result<QuasiDistribution> {
    if (mv.value_at(0) - 1.0).abs() > 1e-12 {
        return Err(Error::Validation(format!(
            "cannot invert moments with μ_0…0 = {}",
            mv.value_at(0)
        )));
    }
    let k = mv.k();
    let size = 1usize << k;
    let scale = 1.0 / size as f64;
    let weights: Vec<f64> = (0..size)
        .map(|i| {
            scale
                * mv.values()
                    .iter()
                    .enumerate()
                    .map(|(n, &mu)| parity_sign(i, n) * mu)
                    .sum::<f64>()
        })
        .collect();
    QuasiDistribution::new(k, weights)
}

/// Assembles the moment vector the way an experimenter would: every moment
/// comes from its own dedicated experiment on the maximally mixed state.
///
/// Single-variable moments are expectation values of one observable;
/// higher moments are full correlators of a sequential measurement of
/// exactly the observables in the exponent pattern, in time order. Nothing
/// is shared between patterns — that independence is what makes the
/// inversion's failure meaningful.
pub fn quantum_moment_assembly(params: &EvolutionParams) -> Result<MomentVector> {
    quantum_moment_assembly_with_state(params, &DensityMatrix::maximally_mixed(1))
}

/// [`quantum_moment_assembly`] from an arbitrary single-qubit initial state.
pub fn quantum_moment_assembly_with_state(
    params: &EvolutionParams,
    rho: &DensityMatrix,
) -> Result<MomentVector> {
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
        let members: Vec<usize> = (0..k).filter(|j| (n >> (k - 1 - j)) & 1 == 1).collect();
        if members.len() == 1 {
            let obs = observable_at_time(params, members[0] + 1)?;
            *value = expectation(rho, obs.matrix())?.re;
        } else {
            let obs = members
                .iter()
                .map(|&j| observable_at_time(params, j + 1))
                .collect::<Result<Vec<_>>>()?;
            let dist = sequential_joint_distribution(rho, &obs)?;
            *value = full_correlation(&dist);
        }
    }
    MomentVector::new(k, values)
}

/// `⟨∏ x_i⟩` over all variables of a distribution.
fn full_correlation<D: OutcomeWeights>(dist: &D) -> f64 {
    dist.iter_outcomes().map(|(o, w)| o.product() * w).sum()
}

/// Sampled variant of [`quantum_moment_assembly`]: every moment is
/// estimated from `shots` simulated runs of its own experiment, drawn from
/// the exact branch distribution with the supplied generator.
pub fn quantum_moment_assembly_sampled<R: Rng + ?Sized>(
    params: &EvolutionParams,
    rho: &DensityMatrix,
    shots: u64,
    rng: &mut R,
) -> Result<MomentVector> {
    let k = params.num_times();
    if k == 0 || k > 10 {
        return Err(Error::InvalidArgument(format!(
            "moment assembly supports 1..=10 measurement times, got {k}"
        )));
    }
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let size = 1usize << k;
    let mut values = vec![0.0; size];
    values[0] = 1.0;
    for (n, value) in values.iter_mut().enumerate().skip(1) {
        let members: Vec<usize> = (0..k).filter(|j| (n >> (k - 1 - j)) & 1 == 1).collect();
        let obs = members
            .iter()
            .map(|&j| observable_at_time(params, j + 1))
            .collect::<Result<Vec<_>>>()?;
        let dist = sequential_joint_distribution(rho, &obs)?;
        let mut acc = 0.0;
        for _ in 0..shots {
            acc += OutcomeTuple::from_index(obs.len(), draw_index(&dist, rng)).product();
        }
        *value = acc / shots as f64;
    }
    MomentVector::new(k, values)
}

/// One outcome index drawn from a distribution by inverse-CDF sampling.
fn draw_index<R: Rng + ?Sized, D: OutcomeWeights>(dist: &D, rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    let weights = dist.weights();
    for (i, &w) in weights.iter().enumerate() {
        cumulative += w;
        if u < cumulative {
            return i;
        }
    }
    weights.len() - 1
}

/// Empirical estimate of a distribution from `shots` draws.
pub fn empirical_distribution<R: Rng + ?Sized>(
    dist: &JointDistribution,
    shots: u64,
    rng: &mut R,
) -> Result<JointDistribution> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let mut counts = vec![0u64; dist.weights().len()];
    for _ in 0..shots {
        counts[draw_index(dist, rng)] += 1;
    }
    let weights = counts
        .iter()
        .map(|&c| c as f64 / shots as f64)
        .collect::<Vec<_>>();
    JointDistribution::new(dist.k(), weights)
}

/// A random distribution over `{±1}^k` (uniform weights, normalized);
/// used by the self-test and the property suites.
pub fn random_distribution<R: Rng + ?Sized>(k: usize, rng: &mut R) -> JointDistribution {
    let size = 1usize << k;
    let mut weights: Vec<f64> = (0..size).map(|_| rng.random_range(0.0..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    JointDistribution::new(k, weights).expect("normalized random weights are valid")
}

/// Closed-form moment-inverted three-time table for the maximally mixed
/// state: `P_μ(x) = ⅛[1 + x_1x_2·c₁₂ + x_2x_3·c₂₃ + x_1x_3·c₁₃]` with
/// `c_ij = cos(ω(t_j − t_i))`.
///
/// On the default grid these are the entries
/// `⅛[1 ± 2cos(ωΔt) + cos(2ωΔt)]` and `⅛[1 − cos(2ωΔt)]`; the same table
/// comes out of `invert_moments(quantum_moment_assembly(…))` to machine
/// precision.
pub fn analytic_moment_inverted_ttjp(params: &EvolutionParams) -> Result<QuasiDistribution> {
    if params.num_times() != 3 {
        return Err(Error::InvalidArgument(format!(
            "three-time formula needs exactly 3 measurement times, got {}",
            params.num_times()
        )));
    }
    let c12 = (params.phase(2)? - params.phase(1)?).cos();
    let c23 = (params.phase(3)? - params.phase(2)?).cos();
    let c13 = (params.phase(3)? - params.phase(1)?).cos();
    let mut weights = vec![0.0; 8];
    for outcome in OutcomeTuple::enumerate(3) {
        let [x1, x2, x3] = [
            outcome.signs()[0].value(),
            outcome.signs()[1].value(),
            outcome.signs()[2].value(),
        ];
        weights[outcome.index()] =
            0.125 * (1.0 + x1 * x2 * c12 + x2 * x3 * c23 + x1 * x3 * c13);
    }
    QuasiDistribution::new(3, weights)
}

/// Outcome-by-outcome mismatch between the directly measured three-time
/// distribution and its moment-inverted reconstruction.
#[derive(Debug, Clone)]
pub struct IncompatibilityReport {
    pub omega_dt: f64,
    /// The direct (Lüders-chain) three-time joint distribution.
    pub direct: JointDistribution,
    /// The reconstruction from the eight independently gathered moments.
    pub inverted: QuasiDistribution,
    /// `P_d − P_μ` in outcome enumeration order.
    pub differences: Vec<f64>,
    /// `max |P_d − P_μ|`; equals `sin²(ωΔt)/8` on the default grid.
    pub max_abs_difference: f64,
    /// Most negative reconstructed entry; equals `c(c−1)/4` with
    /// `c = cos(ωΔt)` on the default grid, strictly negative for
    /// `ωΔt ∈ (0, π/2)`.
    pub min_quasi_weight: f64,
}

/// Runs both computation paths and tabulates their disagreement.
pub fn incompatibility_gap(params: &EvolutionParams) -> Result<IncompatibilityReport> {
    if params.num_times() != 3 {
        return Err(Error::InvalidArgument(format!(
            "incompatibility report needs exactly 3 measurement times, got {}",
            params.num_times()
        )));
    }
    let rho = DensityMatrix::maximally_mixed(1);
    let direct = sequential_joint_distribution(&rho, &grid_observables(params)?)?;
    let inverted = invert_moments(&quantum_moment_assembly(params)?)?;
    let differences: Vec<f64> = direct
        .weights()
        .iter()
        .zip(inverted.weights())
        .map(|(d, m)| d - m)
        .collect();
    let max_abs_difference = differences.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
    let min_quasi_weight = inverted.min_weight();
    Ok(IncompatibilityReport {
        omega_dt: params.omega_dt(),
        direct,
        inverted,
        differences,
        max_abs_difference,
        min_quasi_weight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequential::Sign;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn uniform_has_trivial_moments() {
        let mv = moments_from_distribution(&JointDistribution::uniform(2));
        assert_eq!(mv.value_at(0), 1.0);
        assert_eq!(&mv.values()[1..], &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn correlated_pair_moments() {
        // P(x_1, x_2) = ¼[1 + x_1x_2·c] with c = 0.5.
        let c = 0.5;
        let weights = vec![
            0.25 * (1.0 + c),
            0.25 * (1.0 - c),
            0.25 * (1.0 - c),
            0.25 * (1.0 + c),
        ];
        let mv = moments_from_distribution(&JointDistribution::new(2, weights).unwrap());
        let mu = |bits: &[bool]| mv.value(&MomentIndex::new(bits.to_vec()));
        assert!((mu(&[true, true]) - 0.5).abs() < 1e-15);
        assert!(mu(&[true, false]).abs() < 1e-15);
        assert!(mu(&[false, true]).abs() < 1e-15);
    }

    #[test]
    fn point_mass_has_unit_moments() {
        let mut weights = vec![0.0; 8];
        weights[0] = 1.0; // (+1,+1,+1)
        let mv = moments_from_distribution(&JointDistribution::new(3, weights).unwrap());
        assert!(mv.values().iter().all(|&v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn single_variable_inversion() {
        // μ_1 = 0 inverts to the fair coin.
        let mv = MomentVector::new(1, vec![1.0, 0.0]).unwrap();
        let dist = invert_moments(&mv).unwrap();
        assert_eq!(dist.weights(), &[0.5, 0.5]);
    }

    #[test]
    fn perfectly_correlated_pair_inverts_to_point_mass() {
        let mv = MomentVector::new(2, vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        let dist = invert_moments(&mv).unwrap();
        assert_eq!(dist.weights()[0], 1.0);
        assert_eq!(&dist.weights()[1..], &[0.0, 0.0, 0.0]);
    }

    // Frozen inversion of the grid moments at ωΔt = π/3:
    // (μ_110, μ_011, μ_101) = (0.5, 0.5, −0.5), everything else 0.
    #[test]
    fn paper_grid_moments_invert_with_negativity() {
        let mut values = vec![0.0; 8];
        values[0] = 1.0;
        values[0b110] = 0.5;
        values[0b011] = 0.5;
        values[0b101] = -0.5;
        let mv = MomentVector::new(3, values).unwrap();
        let dist = invert_moments(&mv).unwrap();
        let w = |signs: Vec<Sign>| dist.weight(&OutcomeTuple::new(signs));
        assert!((w(vec![Sign::Plus, Sign::Plus, Sign::Plus]) - 0.1875).abs() < 1e-15);
        assert!((w(vec![Sign::Plus, Sign::Minus, Sign::Plus]) - (-0.0625)).abs() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized_moments() {
        assert!(matches!(
            MomentVector::new(1, vec![0.9, 0.0]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            MomentVector::new(1, vec![1.0, 1.5]),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn round_trip_random_distributions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 1..=6 {
            for _ in 0..50 {
                let dist = random_distribution(k, &mut rng);
                let back = invert_moments(&moments_from_distribution(&dist)).unwrap();
                for (a, b) in dist.weights().iter().zip(back.weights()) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn forward_round_trip_random_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for k in 1..=5 {
            for _ in 0..50 {
                let mut values: Vec<f64> =
                    (0..(1 << k)).map(|_| rng.random_range(-1.0..1.0)).collect();
                values[0] = 1.0;
                let mv = MomentVector::new(k, values).unwrap();
                let back = moments_from_distribution(&invert_moments(&mv).unwrap());
                for (a, b) in mv.values().iter().zip(back.values()) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn assembly_matches_paper_values() {
        let params = EvolutionParams::from_omega_dt(PI / 3.0);
        let mv = quantum_moment_assembly(&params).unwrap();
        let mu = |label: usize| mv.value_at(label);
        assert!(mu(0b100).abs() < 1e-12);
        assert!(mu(0b010).abs() < 1e-12);
        assert!(mu(0b001).abs() < 1e-12);
        assert!((mu(0b110) - 0.5).abs() < 1e-12);
        assert!((mu(0b011) - 0.5).abs() < 1e-12);
        assert!((mu(0b101) - (-0.5)).abs() < 1e-12);
        assert!(mu(0b111).abs() < 1e-12);
    }

    #[test]
    fn assembly_commuting_and_orthogonal_limits() {
        let mv = quantum_moment_assembly(&EvolutionParams::from_omega_dt(0.0)).unwrap();
        assert!((mv.value_at(0b110) - 1.0).abs() < 1e-12);
        assert!((mv.value_at(0b011) - 1.0).abs() < 1e-12);
        assert!((mv.value_at(0b101) - 1.0).abs() < 1e-12);

        let mv = quantum_moment_assembly(&EvolutionParams::from_omega_dt(PI / 2.0)).unwrap();
        assert!(mv.value_at(0b110).abs() < 1e-12);
        assert!(mv.value_at(0b011).abs() < 1e-12);
        assert!((mv.value_at(0b101) - (-1.0)).abs() < 1e-12);
    }

    #[test]
    fn closed_form_inverted_ttjp() {
        let params = EvolutionParams::from_omega_dt(PI / 3.0);
        let table = analytic_moment_inverted_ttjp(&params).unwrap();
        assert!((table.weights()[0] - 0.1875).abs() < 1e-15); // (+1,+1,+1)
        assert!((table.weights()[2] - (-0.0625)).abs() < 1e-15); // (+1,−1,+1)

        // Commuting limit agrees with the direct table.
        let table = analytic_moment_inverted_ttjp(&EvolutionParams::from_omega_dt(0.0)).unwrap();
        assert!((table.weights()[0] - 0.5).abs() < 1e-15);
        assert!(table.weights()[4].abs() < 1e-15); // (−1,+1,+1)
    }

    #[test]
    fn closed_form_matches_assembled_inversion() {
        for &theta in &[0.0, 0.4, PI / 3.0, 1.8, PI] {
            let params = EvolutionParams::from_omega_dt(theta);
            let assembled = invert_moments(&quantum_moment_assembly(&params).unwrap()).unwrap();
            let formula = analytic_moment_inverted_ttjp(&params).unwrap();
            for (a, b) in assembled.weights().iter().zip(formula.weights()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gap_report_reference_points() {
        let report = incompatibility_gap(&EvolutionParams::from_omega_dt(PI / 2.0)).unwrap();
        assert!((report.max_abs_difference - 0.125).abs() < 1e-12);

        let report = incompatibility_gap(&EvolutionParams::from_omega_dt(PI / 3.0)).unwrap();
        assert!((report.min_quasi_weight - (-0.0625)).abs() < 1e-12);

        let report = incompatibility_gap(&EvolutionParams::from_omega_dt(0.0)).unwrap();
        assert!(report.max_abs_difference < 1e-12);
    }

    #[test]
    fn quasi_marginals_reproduce_two_time_tables() {
        // Moment inversion is marginal-faithful: its pairwise marginals are
        // exactly the independently measured two-time distributions.
        let params = EvolutionParams::from_omega_dt(1.3);
        let quasi = invert_moments(&quantum_moment_assembly(&params).unwrap()).unwrap();
        for (i, j) in [(1usize, 2usize), (2, 3), (1, 3)] {
            let pair = quasi.marginalize(&[i, j]).unwrap();
            for outcome in OutcomeTuple::enumerate(2) {
                let expected = crate::sequential::analytic_two_time(
                    &params,
                    i,
                    j,
                    outcome.signs()[0],
                    outcome.signs()[1],
                )
                .unwrap();
                assert!((pair.weight(&outcome) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sampled_assembly_converges() {
        let params = EvolutionParams::from_omega_dt(PI / 3.0);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let sampled =
            quantum_moment_assembly_sampled(&params, &DensityMatrix::maximally_mixed(1), 200_000, &mut rng)
                .unwrap();
        let exact = quantum_moment_assembly(&params).unwrap();
        for (s, e) in sampled.values().iter().zip(exact.values()) {
            assert!((s - e).abs() < 0.01, "sampled {s} vs exact {e}");
        }
    }

    #[test]
    fn empirical_distribution_is_deterministic_for_fixed_seed() {
        let params = EvolutionParams::from_omega_dt(0.9);
        let dist = sequential_joint_distribution(
            &DensityMatrix::maximally_mixed(1),
            &grid_observables(&params).unwrap(),
        )
        .unwrap();
        let a = empirical_distribution(&dist, 5_000, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = empirical_distribution(&dist, 5_000, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a.weights(), b.weights());
    }
}
