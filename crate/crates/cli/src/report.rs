//! The self-contained run report and its serialization.

use std::collections::BTreeMap;
use std::path::Path;

use gram_recur_core::gram::SpectrumSummary;
use serde::Serialize;

use crate::error::CliError;

/// Spectrum summary block of a report.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryBlock {
    pub k: usize,
    pub trace: f64,
    pub min_eig: f64,
    pub zero_count: usize,
    pub near_one_mass: f64,
    pub zero_tol: f64,
    pub delta: f64,
}

impl SummaryBlock {
    pub fn from_summary(k: usize, s: &SpectrumSummary) -> Self {
        SummaryBlock {
            k,
            trace: s.trace,
            min_eig: s.min_eig,
            zero_count: s.zero_count,
            near_one_mass: s.near_one_mass,
            zero_tol: s.zero_tol,
            delta: s.delta,
        }
    }
}

/// Classical return-statistics block.
#[derive(Debug, Clone, Serialize)]
pub struct ClassicalBlock {
    pub kac_mu: f64,
    pub kac_mean_return: f64,
    pub kac_expected_return: f64,
    pub kac_completed_returns: usize,
    pub hit_mu: f64,
    pub hit_mean_rescaled: f64,
    pub hit_ks_exp1: f64,
    pub hit_trials: u64,
    pub hit_censored: u64,
}

/// Everything one run produced, minus the bulk data written to CSV.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub config: BTreeMap<String, String>,
    pub summary: Option<SummaryBlock>,
    pub distances: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalBlock>,
    pub timings: BTreeMap<String, u64>,
    pub seed: u64,
    pub rng_tag: String,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String, CliError> {
        serde_json::to_string_pretty(self)
            .map_err(|e| CliError::io(format!("report serialization failed: {e}")))
    }
}

pub fn write_text(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

/// Formats a float with the shortest representation that parses back to the
/// identical bits, keeping CSV output byte-stable across runs.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// `index,eigenvalue` rows.
pub fn spectrum_csv(values: &[f64]) -> String {
    let mut out = String::from("index,eigenvalue\n");
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{i},{}\n", fmt_f64(*v)));
    }
    out
}

/// `bin_lo,bin_hi,mass,<reference>_density_at_midpoint` rows.
pub fn histogram_csv(
    edges: &[f64],
    masses: &[f64],
    reference_column: &str,
    reference_density: impl Fn(f64) -> f64,
) -> String {
    let mut out = format!("bin_lo,bin_hi,mass,{reference_column}\n");
    for (i, mass) in masses.iter().enumerate() {
        let (lo, hi) = (edges[i], edges[i + 1]);
        let midpoint = 0.5 * (lo + hi);
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(lo),
            fmt_f64(hi),
            fmt_f64(*mass),
            fmt_f64(reference_density(midpoint))
        ));
    }
    out
}

/// `t,mp_density,mp_cdf` rows for the analytic curve.
pub fn curve_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("t,mp_density,mp_cdf\n");
    for (t, density, cdf) in rows {
        out.push_str(&format!("{},{},{}\n", fmt_f64(*t), fmt_f64(*density), fmt_f64(*cdf)));
    }
    out
}
