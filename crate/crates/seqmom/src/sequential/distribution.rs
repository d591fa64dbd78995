use super::outcome::{marginalize_weights, OutcomeTuple};
use crate::error::{Error, Result};

/// Weights below zero by at most this much are clipped to zero on
/// construction; anything lower is rejected.
pub const WEIGHT_CLIP_TOL: f64 = 1e-12;

/// Total weight must equal 1 within this tolerance.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// Common read access for genuine and quasi- distributions over `{±1}^k`,
/// for code generic over the two kinds. Both implementors also expose the
/// same methods inherently, so the trait import is only needed for
/// generics.
pub trait OutcomeWeights {
    /// Number of variables.
    fn k(&self) -> usize;

    /// Weights in enumeration order ([`OutcomeTuple::from_index`]).
    fn weights(&self) -> &[f64];

    fn weight(&self, outcome: &OutcomeTuple) -> f64 {
        assert_eq!(outcome.len(), self.k(), "outcome arity mismatch");
        self.weights()[outcome.index()]
    }

    fn iter_outcomes(&self) -> Box<dyn Iterator<Item = (OutcomeTuple, f64)> + '_> {
        let k = self.k();
        Box::new(
            self.weights()
                .iter()
                .enumerate()
                .map(move |(i, &w)| (OutcomeTuple::from_index(k, i), w)),
        )
    }
}

/// A genuine joint probability distribution over outcome tuples `{±1}^k`:
/// nonnegative weights summing to 1.
#[derive(Debug, Clone)]
pub struct JointDistribution {
    k: usize,
    weights: Vec<f64>,
}

impl JointDistribution {
    /// Validates and normalizes raw weights: entries in `[−1e-12, 0)` are
    /// clipped to 0 and entries in `(1, 1+1e-12]` to 1; anything further
    /// outside `[0, 1]`, or a total differing from 1 by more than 1e-10,
    /// is rejected.
    pub fn new(k: usize, weights: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "distribution needs at least one variable".into(),
            ));
        }
        if weights.len() != (1 << k) {
            return Err(Error::Shape(format!(
                "{k}-variable distribution needs {} weights, got {}",
                1 << k,
                weights.len()
            )));
        }
        let mut clipped = weights;
        for w in clipped.iter_mut() {
            if !w.is_finite() || *w < -WEIGHT_CLIP_TOL || *w > 1.0 + WEIGHT_CLIP_TOL {
                return Err(Error::Validation(format!(
                    "weight {w} outside [0, 1] beyond clip tolerance"
                )));
            }
            *w = w.clamp(0.0, 1.0);
        }
        let total: f64 = clipped.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Validation(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(Self {
            k,
            weights: clipped,
        })
    }

    /// The uniform distribution over `{±1}^k`.
    pub fn uniform(k: usize) -> Self {
        let n = 1usize << k;
        Self {
            k,
            weights: vec![1.0 / n as f64; n],
        }
    }

    /// Number of variables.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Weights in enumeration order ([`OutcomeTuple::from_index`]).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Probability of one outcome tuple.
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

    /// Sums out every variable not in `keep`; `keep` holds 1-based variable
    /// indices and the output keeps them in ascending (time) order.
    pub fn marginalize(&self, keep: &[usize]) -> Result<JointDistribution> {
        let keep0 = validate_keep(self.k, keep)?;
        let weights = marginalize_weights(self.k, &self.weights, &keep0);
        JointDistribution::new(keep0.len(), weights)
    }
}

impl OutcomeWeights for JointDistribution {
    fn k(&self) -> usize {
        self.k
    }

    fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Checks a 1-based `keep` set and converts it to sorted 0-based positions.
pub(crate) fn validate_keep(k: usize, keep: &[usize]) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::InvalidArgument(
            "marginalization must keep at least one variable".into(),
        ));
    }
    let mut keep0: Vec<usize> = Vec::with_capacity(keep.len());
    for &v in keep {
        if v == 0 || v > k {
            return Err(Error::InvalidArgument(format!(
                "variable index {v} out of range 1..={k}"
            )));
        }
        keep0.push(v - 1);
    }
    keep0.sort_unstable();
    keep0.dedup();
    Ok(keep0)
}
