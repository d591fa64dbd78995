//! Machinery behind the `seqmom` binary: the ωΔt sweep, the single-angle
//! comparison report, and the self-test suite.
//!
//! Everything here is deterministic: exact mode touches no randomness at
//! all, and sampling mode draws from one seeded generator in fixed row
//! order, so identical configurations produce byte-identical output.

mod compare;
mod selftest;
mod sweep;

pub use compare::compare_report;
pub use selftest::{run_selftest, CheckResult};
pub use sweep::{compute_sweep_row, run_sweep, SweepRow, CSV_HEADER};

use std::collections::BTreeSet;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Engines disagreeing by more than this abort the sweep.
pub const CROSS_CHECK_TOL: f64 = 1e-8;

/// A computation path selectable on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Engine {
    /// Closed-form tables.
    Analytic,
    /// The Lüders measurement chain.
    Lueders,
    /// The four-experiment negative-result circuit scheme.
    Inrm,
    /// Per-marginal moment experiments plus inversion.
    Moments,
    /// Ancilla-interferometric moment readout plus inversion.
    Moussa,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::Lueders => "lueders",
            Engine::Inrm => "inrm",
            Engine::Moments => "moments",
            Engine::Moussa => "moussa",
        }
    }

    pub fn parse(name: &str) -> Result<Engine> {
        match name.trim() {
            "analytic" => Ok(Engine::Analytic),
            "lueders" => Ok(Engine::Lueders),
            "inrm" => Ok(Engine::Inrm),
            "moments" => Ok(Engine::Moments),
            "moussa" => Ok(Engine::Moussa),
            other => Err(Error::InvalidArgument(format!(
                "unknown engine '{other}' (expected analytic, lueders, inrm, moments, moussa)"
            ))),
        }
    }
}

/// The set of engines a sweep runs. All selected engines are computed and
/// cross-checked; the CSV carries one value per column, sourced from the
/// most direct selected engine (lueders before analytic before inrm for
/// probabilities; moments before moussa before analytic for moments).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineSet {
    engines: BTreeSet<Engine>,
}

impl EngineSet {
    pub fn all() -> Self {
        Self {
            engines: BTreeSet::from([
                Engine::Analytic,
                Engine::Lueders,
                Engine::Inrm,
                Engine::Moments,
                Engine::Moussa,
            ]),
        }
    }

    pub fn from_engines(engines: &[Engine]) -> Result<Self> {
        if engines.is_empty() {
            return Err(Error::InvalidArgument(
                "engine set must not be empty".into(),
            ));
        }
        Ok(Self {
            engines: engines.iter().copied().collect(),
        })
    }

    /// Parses a comma-separated list such as `analytic,lueders`.
    pub fn parse_list(list: &str) -> Result<Self> {
        let engines = list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(Engine::parse)
            .collect::<Result<Vec<_>>>()?;
        Self::from_engines(&engines)
    }

    pub fn contains(&self, engine: Engine) -> bool {
        self.engines.contains(&engine)
    }

    pub fn iter(&self) -> impl Iterator<Item = Engine> + '_ {
        self.engines.iter().copied()
    }

    /// At least one engine that can produce the direct three-time table.
    pub fn has_direct_source(&self) -> bool {
        self.contains(Engine::Lueders)
            || self.contains(Engine::Analytic)
            || self.contains(Engine::Inrm)
    }

    /// At least one engine that can produce the moment vector.
    pub fn has_moment_source(&self) -> bool {
        self.contains(Engine::Moments)
            || self.contains(Engine::Moussa)
            || self.contains(Engine::Analytic)
    }
}

/// Validated sweep parameters.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Grid start, in radians of ωΔt.
    pub start: f64,
    /// Grid end, in radians of ωΔt.
    pub end: f64,
    /// Number of grid points, endpoints included.
    pub points: usize,
    /// Pseudopure purity factor used by the circuit engine.
    pub epsilon: f64,
    pub engines: EngineSet,
    /// When set, probabilities and moments become empirical estimates
    /// from this many simulated runs per experiment.
    pub shots: Option<u64>,
    /// Seed for sampling mode; 0 when unset.
    pub seed: Option<u64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            start: 0.0,
            end: PI,
            points: 101,
            epsilon: 1.0,
            engines: EngineSet::all(),
            shots: None,
            seed: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.end.is_finite() {
            return Err(Error::InvalidArgument(
                "grid endpoints must be finite".into(),
            ));
        }
        if self.start >= self.end {
            return Err(Error::InvalidArgument(format!(
                "grid start {} must be below end {}",
                self.start, self.end
            )));
        }
        if self.points < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 2 points, got {}",
                self.points
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "purity factor must lie in (0, 1], got {}",
                self.epsilon
            )));
        }
        if self.shots == Some(0) {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        if !self.engines.has_direct_source() {
            return Err(Error::InvalidArgument(
                "engine set needs a direct-probability source (analytic, lueders, or inrm)"
                    .into(),
            ));
        }
        if !self.engines.has_moment_source() {
            return Err(Error::InvalidArgument(
                "engine set needs a moment source (analytic, moments, or moussa)".into(),
            ));
        }
        Ok(())
    }

    /// The evenly spaced grid points, endpoints included.
    pub fn grid(&self) -> Vec<f64> {
        let step = (self.end - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| self.start + step * i as f64)
            .collect()
    }
}
