//! Exact simulator and analysis toolkit for sequential projective
//! measurements of a single qubit.
//!
//! The crate answers one sharp question: if a dichotomic observable is
//! measured sequentially at several times, do the recorded moments
//! determine the joint probabilities of the outcome sequences? For
//! classical ±1 variables they always do. For the quantum chain the two
//! reconstructions disagree, and the disagreement is quantified here
//! exactly.
//!
//! The pieces:
//!
//! * [`qcore`] — small dense complex matrices, unitaries, density matrices.
//! * [`sequential`] — Heisenberg-picture observables, Lüders-rule
//!   measurement chains, and closed-form two- and three-time probabilities.
//! * [`moments`] — forward moments, moment inversion for any number of
//!   dichotomic variables, and quasi-probability diagnostics.
//! * [`circuits`] — gate-level simulations of the two ancilla-assisted
//!   protocols that extract the same quantities from circuit runs.
//! * [`cli`] — sweep/compare/selftest front end used by the `seqmom` binary.
//!
//! ```
//! use seqmom::moments::{invert_moments, quantum_moment_assembly};
//! use seqmom::sequential::{analytic_direct_ttjp, EvolutionParams};
//!
//! // Measurement times t = 0, Δt, 2Δt with ωΔt = π/3.
//! let params = EvolutionParams::from_omega_dt(std::f64::consts::PI / 3.0);
//!
//! // Joint probabilities measured directly…
//! let direct = analytic_direct_ttjp(&params).unwrap();
//! // …versus the reconstruction from the eight experimentally accessible moments.
//! let inverted = invert_moments(&quantum_moment_assembly(&params).unwrap()).unwrap();
//!
//! // The reconstruction goes negative: no joint distribution has these moments.
//! let min = inverted.min_weight();
//! assert!((min - (-0.0625)).abs() < 1e-12);
//! assert!(direct.weights().iter().all(|&w| w >= 0.0));
//! ```

pub mod circuits;
pub mod cli;
pub mod error;
pub mod moments;
pub mod qcore;
pub mod sequential;

pub use error::{Error, Result};
pub use num_complex::Complex64;

// The guide under book/ is part of the test suite: every Rust fence in the
// chapters below is compiled and run by `cargo test --doc`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/moment-inversion.md")]
    mod moment_inversion {}
    #[doc = include_str!("../../../book/src/sequential-measurements.md")]
    mod sequential_measurements {}
    #[doc = include_str!("../../../book/src/quasi-probabilities.md")]
    mod quasi_probabilities {}
    #[doc = include_str!("../../../book/src/measurement-circuits.md")]
    mod measurement_circuits {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
}
