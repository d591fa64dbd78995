use std::fmt::Write as _;

use crate::circuits::{extract_ttjp_inrm, moussa_assembly};
use crate::error::Result;
use crate::moments::{analytic_moment_inverted_ttjp, incompatibility_gap, quantum_moment_assembly};
use crate::qcore::DensityMatrix;
use crate::sequential::{
    analytic_direct_ttjp, marginal_consistency_report, EvolutionParams, OutcomeTuple,
};

/// Largest entrywise difference between two weight tables.
fn table_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Human-readable comparison of every computation path at one angle:
/// the per-outcome table, the marginal-consistency report, the negativity
/// certificate, and circuit-vs-analytic residuals.
pub fn compare_report(omega_dt: f64, epsilon: f64) -> Result<String> {
    let params = EvolutionParams::from_omega_dt(omega_dt);
    let gap = incompatibility_gap(&params)?;
    let marginals = marginal_consistency_report(&params)?;

    let mut out = String::new();
    let c = omega_dt.cos();
    writeln!(out, "ωΔt = {omega_dt:.6} rad  (cos ωΔt = {c:.6})").unwrap();
    writeln!(out).unwrap();
    writeln!(
        out,
        "{:>14}  {:>12}  {:>12}  {:>12}",
        "outcome", "P_direct", "P_moments", "difference"
    )
    .unwrap();
    for outcome in OutcomeTuple::enumerate(3) {
        let d = gap.direct.weight(&outcome);
        let m = gap.inverted.weight(&outcome);
        writeln!(
            out,
            "{:>14}  {:>12.8}  {:>12.8}  {:>12.8}",
            outcome.to_string(),
            d,
            m,
            d - m
        )
        .unwrap();
    }
    writeln!(out).unwrap();
    writeln!(
        out,
        "max |P_direct − P_moments| = {:.3e}   (sin²(ωΔt)/8 = {:.3e})",
        gap.max_abs_difference,
        omega_dt.sin().powi(2) / 8.0
    )
    .unwrap();

    writeln!(out).unwrap();
    writeln!(out, "marginal consistency of (x1, x3):").unwrap();
    for entry in &marginals.entries {
        writeln!(
            out,
            "  ({}, {}):  pair experiment {:.8}   from TTJP {:.8}   gap {:.3e}",
            entry.x1, entry.x3, entry.two_time, entry.marginalized_ttjp, entry.abs_gap
        )
        .unwrap();
    }
    writeln!(
        out,
        "  max gap = {:.3e}   (sin²(ωΔt)/4 = {:.3e})",
        marginals.max_abs_gap,
        omega_dt.sin().powi(2) / 4.0
    )
    .unwrap();

    writeln!(out).unwrap();
    let min = gap.min_quasi_weight;
    let predicted = c * (c - 1.0) / 4.0;
    if min < 0.0 {
        writeln!(
            out,
            "negativity certificate: min P_moments = {min:.8} < 0 \
             (closed form c(c−1)/4 = {predicted:.8})"
        )
        .unwrap();
        writeln!(
            out,
            "no joint probability distribution reproduces the measured moments."
        )
        .unwrap();
    } else {
        writeln!(
            out,
            "no negativity: min P_moments = {min:.8}; the tables are compatible \
             (commuting-limit behaviour)."
        )
        .unwrap();
    }

    // Residuals between independent computation routes.
    writeln!(out).unwrap();
    writeln!(out, "cross-engine residuals:").unwrap();
    let closed_direct = analytic_direct_ttjp(&params)?;
    writeln!(
        out,
        "  lueders vs closed form:      {:.3e}",
        table_gap(gap.direct.weights(), closed_direct.weights())
    )
    .unwrap();
    let inrm = extract_ttjp_inrm(&params, epsilon)?;
    writeln!(
        out,
        "  INRM (ε = {epsilon}) vs closed form: {:.3e}",
        table_gap(inrm.weights(), closed_direct.weights())
    )
    .unwrap();
    let assembled = quantum_moment_assembly(&params)?;
    let moussa = moussa_assembly(&params, &DensityMatrix::maximally_mixed(1))?;
    writeln!(
        out,
        "  moussa vs assembled moments: {:.3e}",
        table_gap(moussa.values(), assembled.values())
    )
    .unwrap();
    let closed_inverted = analytic_moment_inverted_ttjp(&params)?;
    writeln!(
        out,
        "  inversion vs closed form:    {:.3e}",
        table_gap(gap.inverted.weights(), closed_inverted.weights())
    )
    .unwrap();

    Ok(out)
}
