//! Grid sweeps: one experiment per cell, cells independent and run in
//! parallel, with an index file tying the outputs together.

use std::collections::BTreeMap;
use std::path::Path;

use gram_recur_core::randmat::{splitmix64, SeededSampler};
use serde::Serialize;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::CliError;
use crate::experiment::run_experiment;
use crate::report::write_text;

#[derive(Debug, Clone, Serialize)]
struct CellRecord {
    name: String,
    seed: u64,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<String>,
}

#[derive(Debug, Serialize)]
struct SweepIndex {
    kind: String,
    base_seed: u64,
    rng_tag: String,
    config: BTreeMap<String, String>,
    cells: Vec<CellRecord>,
}

/// Expands the grid, runs every cell, writes `sweep.json`, and returns the
/// error of the first failed cell (after all cells have run), if any.
pub fn run_sweep(
    base: &ExperimentConfig,
    out_dir: &Path,
    jobs: Option<usize>,
) -> Result<(), CliError> {
    let cells = expand_cells(base)?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", out_dir.display())))?;

    let run_cell = |(name, cfg): &(String, ExperimentConfig)| -> CellRecord {
        let cell_dir = out_dir.join("cells").join(name);
        match run_experiment(cfg, &cell_dir) {
            Ok(_) => CellRecord {
                name: name.clone(),
                seed: cfg.seed,
                status: "ok".to_string(),
                error: None,
                report: Some(format!("cells/{name}/report.json")),
            },
            Err(e) => CellRecord {
                name: name.clone(),
                seed: cfg.seed,
                status: "error".to_string(),
                error: Some(e.to_string()),
                report: None,
            },
        }
    };

    let records: Vec<CellRecord> = match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| CliError::config(format!("cannot build thread pool: {e}")))?;
            pool.install(|| {
                use rayon::prelude::*;
                cells.par_iter().map(run_cell).collect()
            })
        }
        None => {
            use rayon::prelude::*;
            cells.par_iter().map(run_cell).collect()
        }
    };

    let failed = records.iter().filter(|r| r.status == "error").count();
    let first_error = records
        .iter()
        .find(|r| r.status == "error")
        .map(|r| r.error.clone().unwrap_or_default());
    let total = records.len();

    let index = SweepIndex {
        kind: base.kind.as_str().to_string(),
        base_seed: base.seed,
        rng_tag: SeededSampler::ALGORITHM.to_string(),
        config: base.echo(),
        cells: records,
    };
    let json = serde_json::to_string_pretty(&index)
        .map_err(|e| CliError::io(format!("index serialization failed: {e}")))?;
    write_text(&out_dir.join("sweep.json"), &json)?;

    match first_error {
        None => Ok(()),
        Some(msg) => Err(CliError::numerical(format!(
            "{failed} of {total} sweep cells failed; first error: {msg}"
        ))),
    }
}

fn expand_cells(base: &ExperimentConfig) -> Result<Vec<(String, ExperimentConfig)>, CliError> {
    match base.kind {
        ExperimentKind::BakerSpectrum
        | ExperimentKind::RandomSpectrum
        | ExperimentKind::TopSpectrum
        | ExperimentKind::Compare => {}
        other => {
            return Err(CliError::config(format!(
                "sweep supports the spectrum kinds, not {other}"
            )))
        }
    }
    if base.grid_n.is_empty() && base.grid_tau.is_empty() && base.grid_kp.is_empty() {
        return Err(CliError::config(
            "empty grid: set at least one of grid_n, grid_tau, grid_kp",
        ));
    }
    let taus = if base.grid_tau.is_empty() { vec![base.tau] } else { base.grid_tau.clone() };

    let mut cells = Vec::new();
    let mut index = 0u64;
    if base.kind == ExperimentKind::TopSpectrum {
        if !base.grid_n.is_empty() {
            return Err(CliError::config(
                "top-spectrum sweeps vary grid_kp and grid_tau; grid_n does not apply",
            ));
        }
        let kps = if base.grid_kp.is_empty() { vec![(base.k, base.p)] } else { base.grid_kp.clone() };
        for (k, p) in &kps {
            for tau in &taus {
                let mut cfg = base.clone();
                cfg.k = *k;
                cfg.p = *p;
                cfg.tau = *tau;
                clear_grids_and_seed(&mut cfg, base.seed, index);
                cells.push((format!("k{k}_p{p}_tau{tau}"), cfg));
                index += 1;
            }
        }
    } else {
        if !base.grid_kp.is_empty() {
            return Err(CliError::config(format!(
                "grid_kp only applies to top-spectrum sweeps, not {}",
                base.kind
            )));
        }
        let ns = if base.grid_n.is_empty() { vec![base.n] } else { base.grid_n.clone() };
        for n in &ns {
            for tau in &taus {
                let mut cfg = base.clone();
                cfg.n = *n;
                cfg.tau = *tau;
                clear_grids_and_seed(&mut cfg, base.seed, index);
                cells.push((format!("n{n}_tau{tau}"), cfg));
                index += 1;
            }
        }
    }
    Ok(cells)
}

fn clear_grids_and_seed(cfg: &mut ExperimentConfig, base_seed: u64, index: u64) {
    cfg.grid_n.clear();
    cfg.grid_tau.clear();
    cfg.grid_kp.clear();
    cfg.seed = base_seed ^ splitmix64(index);
}
