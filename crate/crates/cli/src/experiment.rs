//! Experiment pipelines: build the evolution, evolve a coherent state,
//! assemble the Gram spectrum, and write the declared artifacts.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use gram_recur_core::classical::{
    baker_hitting_experiment, baker_return_times, symbol_gram_spectrum, DyadicCell,
};
use gram_recur_core::gram::{
    default_histogram_upper, default_zero_tol, empirical_histogram, gram_from_autocorrelation,
    gram_spectrum, spectrum_summary, DEFAULT_DELTA,
};
use gram_recur_core::maps::{baker_unitary, kicked_top_unitary, BakerParams, TopParams};
use gram_recur_core::numerics::{evolve_autocorrelations, SpectrumSample};
use gram_recur_core::randmat::{
    distribution_distance, ks_to_cdf, random_gram_spectrum, Metric, MpLaw, Reference,
    SeededSampler,
};
use gram_recur_core::states::{coherent_state, spin_coherent_state, SphereDirection, TorusSite};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::CliError;
use crate::report::{
    curve_csv, fmt_f64, histogram_csv, spectrum_csv, write_text, ClassicalBlock, RunReport,
    SummaryBlock,
};
use crate::svg::histogram_svg;

struct Timer {
    start: Instant,
    last: Instant,
    laps: BTreeMap<String, u64>,
}

impl Timer {
    fn new() -> Self {
        let now = Instant::now();
        Timer { start: now, last: now, laps: BTreeMap::new() }
    }

    fn lap(&mut self, name: &str) {
        let now = Instant::now();
        self.laps.insert(name.to_string(), now.duration_since(self.last).as_millis() as u64);
        self.last = now;
    }

    fn finish(mut self) -> BTreeMap<String, u64> {
        self.laps
            .insert("total_ms".to_string(), self.start.elapsed().as_millis() as u64);
        self.laps
    }
}

/// Files a run produced, in a fixed order.
pub struct RunOutput {
    pub report: RunReport,
    pub files: Vec<PathBuf>,
}

/// Executes the configured experiment and writes its artifacts to `out_dir`.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunOutput, CliError> {
    cfg.validate()?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", out_dir.display())))?;
    match cfg.kind {
        ExperimentKind::BakerSpectrum => run_baker(cfg, out_dir),
        ExperimentKind::TopSpectrum => run_top(cfg, out_dir),
        ExperimentKind::RandomSpectrum => run_random(cfg, out_dir),
        ExperimentKind::MpCurve => run_mp_curve(cfg, out_dir),
        ExperimentKind::ClassicalReturns => run_classical(cfg, out_dir),
        ExperimentKind::SymbolDemo => run_symbol_demo(cfg, out_dir),
        ExperimentKind::Compare => run_compare(cfg, out_dir),
    }
}

/// Unitary-orbit spectrum of the baker map from a torus coherent state.
pub fn baker_orbit_spectrum(cfg: &ExperimentConfig) -> Result<SpectrumSample, CliError> {
    let n = cfg.n;
    let steps = cfg.time_steps(n)?;
    let u = baker_unitary(BakerParams::new(n)?)?;
    let (a, b) = cfg.baker_site();
    let psi0 = coherent_state(n, TorusSite::new(a, b))?;
    let autocorr = evolve_autocorrelations(&u, &psi0, steps)?;
    Ok(gram_spectrum(&gram_from_autocorrelation(&autocorr)?)?)
}

fn run_baker(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunOutput, CliError> {
    let mut timer = Timer::new();
    let n = cfg.n;
    let steps = cfg.time_steps(n)?;
    let u = baker_unitary(BakerParams::new(n)?)?;
    timer.lap("build_ms");
    let (a, b) = cfg.baker_site();
    let psi0 = coherent_state(n, TorusSite::new(a, b))?;
    timer.lap("state_ms");
    let autocorr = evolve_autocorrelations(&u, &psi0, steps)?;
    timer.lap("evolve_ms");
    let spectrum = gram_spectrum(&gram_from_autocorrelation(&autocorr)?)?;
    timer.lap("spectrum_ms");
    finish_spectrum_run(cfg, out_dir, spectrum, n, timer)
}

fn run_top(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunOutput, CliError> {
    let mut timer = Timer::new();
    let dim = cfg.top_dim()?;
    let steps = cfg.time_steps(dim)?;
    let u = kicked_top_unitary(TopParams::new(cfg.j, cfg.k, cfg.p)?)?;
    timer.lap("build_ms");
    let psi0 = spin_coherent_state(cfg.j, SphereDirection::new(cfg.theta, cfg.phi)?)?;
    timer.lap("state_ms");
    let autocorr = evolve_autocorrelations(&u, &psi0, steps)?;
    timer.lap("evolve_ms");
    let spectrum = gram_spectrum(&gram_from_autocorrelation(&autocorr)?)?;
    timer.lap("spectrum_ms");
    finish_spectrum_run(cfg, out_dir, spectrum, dim, timer)
}

fn run_random(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunOutput, CliError> {
    let mut timer = Timer::new();
    let steps = cfg.time_steps(cfg.n)?;
    let mut rng = SeededSampler::new(cfg.seed);
    let spectrum = random_gram_spectrum(cfg.n, steps, &mut rng)?;
    timer.lap("spectrum_ms");
    finish_spectrum_run(cfg, out_dir, spectrum, cfg.n, timer)
}

fn finish_spectrum_run(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    spectrum: SpectrumSample,
    dim: usize,
    mut timer: Timer,
) -> Result<RunOutput, CliError> {
    let k = spectrum.len();
    let tau_eff = k as f64 / dim as f64;
    let law = MpLaw::new(tau_eff)?;
    let upper = cfg.upper.unwrap_or_else(|| default_histogram_upper(tau_eff));
    let hist = empirical_histogram(&spectrum, cfg.bins, upper)?;
    let summary = spectrum_summary(&spectrum, default_zero_tol(k), DEFAULT_DELTA)?;

    let mut distances = BTreeMap::new();
    distances.insert(
        "mp_ks".to_string(),
        distribution_distance(&spectrum, Reference::Law(&law), Metric::Ks)?,
    );
    distances.insert(
        "mp_w1".to_string(),
        distribution_distance(&spectrum, Reference::Law(&law), Metric::W1)?,
    );
    timer.lap("distances_ms");

    let report = RunReport {
        config: cfg.echo(),
        summary: Some(SummaryBlock::from_summary(k, &summary)),
        distances,
        classical: None,
        timings: timer.finish(),
        seed: cfg.seed,
        rng_tag: SeededSampler::ALGORITHM.to_string(),
    };

    let mut files = Vec::new();
    if cfg.formats.csv {
        let spectrum_path = out_dir.join("spectrum.csv");
        write_text(&spectrum_path, &spectrum_csv(spectrum.values()))?;
        files.push(spectrum_path);
        let hist_path = out_dir.join("histogram.csv");
        write_text(
            &hist_path,
            &histogram_csv(hist.edges(), hist.masses(), "mp_density_at_midpoint", |t| {
                law.density(t)
            }),
        )?;
        files.push(hist_path);
    }
    if cfg.formats.json {
        let report_path = out_dir.join("report.json");
        write_text(&report_path, &report.to_json()?)?;
        files.push(report_path);
    }
    if cfg.formats.svg {
        let svg_path = out_dir.join("histogram.svg");
        let title = format!(
            "{} N={} tau={} K={}",
            cfg.kind,
            dim,
            fmt_f64(tau_eff),
            k
        );
        write_text(&svg_path, &histogram_svg(&hist, &density_curve(&law, upper), &title))?;
        files.push(svg_path);
    }
    Ok(RunOutput { report, files })
}

fn density_curve(law: &MpLaw, upper: f64) -> Vec<(f64, f64)> {
    const SAMPLES: usize = 257;
    (0..SAMPLES)
        .map(|i| {
            let t = upper * i as f64 / (SAMPLES - 1) as f64;
            (t, law.density(t))
        })
        .collect()
}

fn run_mp_curve(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunOutput, CliError> {
    let mut timer = Timer::new();
    let law = MpLaw::new(cfg.tau)?;
    let upper = cfg.upper.unwrap_or_else(|| default_histogram_upper(cfg.tau));
    let rows: Vec<(f64, f64, f64)> = (0..=cfg.points)
        .map(|i| {
            let t = upper * i as f64 / cfg.points as f64;
            (t, law.density(t), law.cdf(t))
        })
        .collect();
    timer.lap("curve_ms");

    let mut distances = BTreeMap::new();
    distances.insert("mp_atom".to_string(), law.atom());
    distances.insert("mp_mass_at_upper".to_string(), rows[rows.len() - 1].2);

    let report = RunReport {
        config: cfg.echo(),
        summary: None,
        distances,
        classical: None,
        timings: timer.finish(),
        seed: cfg.seed,
        rng_tag: SeededSampler::ALGORITHM.to_string(),
    };

    let mut files = Vec::new();
    if cfg.formats.csv {
        let path = out_dir.join("curve.csv");
        write_text(&path, &curve_csv(&rows))?;
        files.push(path);
    }
    if cfg.formats.json {
        let path = out_dir.join("report.json");
        write_text(&path, &report.to_json()?)?;
        files.push(path);
    }
    Ok(RunOutput { report, files })
}

fn run_classical(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunOutput, CliError> {
    let mut timer = Timer::new();
    let base = SeededSampler::new(cfg.seed);

    let kac_cell = DyadicCell::zeros(cfg.cell_bits);
    let kac = baker_return_times(&kac_cell, cfg.steps, base.derive(1).seed())?;
    timer.lap("kac_ms");

    let hit_cell = DyadicCell::one_zeros(cfg.hit_bits)?;
    let hits = baker_hitting_experiment(&hit_cell, cfg.trials, cfg.hit_cap, base.derive(2).seed())?;
    let sorted = hits.sorted();
    let ks = ks_to_cdf(&sorted, |t| 1.0 - (-t).exp())?;
    timer.lap("hitting_ms");

    let rescaled = SpectrumSample::new(sorted)?;
    let upper = cfg.upper.unwrap_or(6.0);
    let hist = empirical_histogram(&rescaled, cfg.bins, upper)?;

    let classical = ClassicalBlock {
        kac_mu: kac.mu,
        kac_mean_return: kac.mean(),
        kac_expected_return: 1.0 / kac.mu,
        kac_completed_returns: kac.len(),
        hit_mu: hits.mu,
        hit_mean_rescaled: hits.mean(),
        hit_ks_exp1: ks,
        hit_trials: cfg.trials,
        hit_censored: hits.censored,
    };
    let mut distances = BTreeMap::new();
    distances.insert("hit_ks_exp1".to_string(), ks);

    let report = RunReport {
        config: cfg.echo(),
        summary: None,
        distances,
        classical: Some(classical),
        timings: timer.finish(),
        seed: cfg.seed,
        rng_tag: SeededSampler::ALGORITHM.to_string(),
    };

    let mut files = Vec::new();
    if cfg.formats.csv {
        let path = out_dir.join("histogram.csv");
        write_text(
            &path,
            &histogram_csv(hist.edges(), hist.masses(), "exp1_density_at_midpoint", |t| {
                (-t).exp()
            }),
        )?;
        files.push(path);
    }
    if cfg.formats.json {
        let path = out_dir.join("report.json");
        write_text(&path, &report.to_json()?)?;
        files.push(path);
    }
    if cfg.formats.svg {
        let path = out_dir.join("histogram.svg");
        let curve: Vec<(f64, f64)> = (0..=256)
            .map(|i| {
                let t = upper * i as f64 / 256.0;
                (t, (-t).exp())
            })
            .collect();
        let title = format!(
            "rescaled hitting times mu=2^-{} trials={}",
            cfg.hit_bits, cfg.trials
        );
        write_text(&path, &histogram_svg(&hist, &curve, &title))?;
        files.push(path);
    }
    Ok(RunOutput { report, files })
}

fn run_symbol_demo(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunOutput, CliError> {
    let mut timer = Timer::new();
    let spectrum = symbol_gram_spectrum(&cfg.symbols)?;
    let k = spectrum.len();
    let summary = spectrum_summary(&spectrum, default_zero_tol(k).max(1e-9), DEFAULT_DELTA)?;
    timer.lap("spectrum_ms");

    let report = RunReport {
        config: cfg.echo(),
        summary: Some(SummaryBlock::from_summary(k, &summary)),
        distances: BTreeMap::new(),
        classical: None,
        timings: timer.finish(),
        seed: cfg.seed,
        rng_tag: SeededSampler::ALGORITHM.to_string(),
    };

    let mut files = Vec::new();
    if cfg.formats.csv {
        let path = out_dir.join("spectrum.csv");
        write_text(&path, &spectrum_csv(spectrum.values()))?;
        files.push(path);
    }
    if cfg.formats.json {
        let path = out_dir.join("report.json");
        write_text(&path, &report.to_json()?)?;
        files.push(path);
    }
    Ok(RunOutput { report, files })
}

fn run_compare(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunOutput, CliError> {
    let mut timer = Timer::new();
    let baker = baker_orbit_spectrum(cfg)?;
    timer.lap("baker_ms");
    let steps = cfg.time_steps(cfg.n)?;
    let mut rng = SeededSampler::new(cfg.seed);
    let random = random_gram_spectrum(cfg.n, steps, &mut rng)?;
    timer.lap("random_ms");

    let k = baker.len();
    let tau_eff = k as f64 / cfg.n as f64;
    let law = MpLaw::new(tau_eff)?;
    let upper = cfg.upper.unwrap_or_else(|| default_histogram_upper(tau_eff));
    let hist = empirical_histogram(&baker, cfg.bins, upper)?;
    let summary = spectrum_summary(&baker, default_zero_tol(k), DEFAULT_DELTA)?;

    let mut distances = BTreeMap::new();
    distances.insert(
        "mp_ks".to_string(),
        distribution_distance(&baker, Reference::Law(&law), Metric::Ks)?,
    );
    distances.insert(
        "mp_w1".to_string(),
        distribution_distance(&baker, Reference::Law(&law), Metric::W1)?,
    );
    distances.insert(
        "random_mp_ks".to_string(),
        distribution_distance(&random, Reference::Law(&law), Metric::Ks)?,
    );
    distances.insert(
        "random_mp_w1".to_string(),
        distribution_distance(&random, Reference::Law(&law), Metric::W1)?,
    );
    distances.insert(
        "baker_random_ks".to_string(),
        distribution_distance(&baker, Reference::Sample(&random), Metric::Ks)?,
    );
    distances.insert(
        "baker_random_w1".to_string(),
        distribution_distance(&baker, Reference::Sample(&random), Metric::W1)?,
    );
    timer.lap("distances_ms");

    let report = RunReport {
        config: cfg.echo(),
        summary: Some(SummaryBlock::from_summary(k, &summary)),
        distances,
        classical: None,
        timings: timer.finish(),
        seed: cfg.seed,
        rng_tag: SeededSampler::ALGORITHM.to_string(),
    };

    let mut files = Vec::new();
    if cfg.formats.csv {
        let spectrum_path = out_dir.join("spectrum.csv");
        write_text(&spectrum_path, &spectrum_csv(baker.values()))?;
        files.push(spectrum_path);
        let hist_path = out_dir.join("histogram.csv");
        write_text(
            &hist_path,
            &histogram_csv(hist.edges(), hist.masses(), "mp_density_at_midpoint", |t| {
                law.density(t)
            }),
        )?;
        files.push(hist_path);
    }
    if cfg.formats.json {
        let path = out_dir.join("report.json");
        write_text(&path, &report.to_json()?)?;
        files.push(path);
    }
    if cfg.formats.svg {
        let path = out_dir.join("histogram.svg");
        let title = format!("compare N={} tau={} K={}", cfg.n, fmt_f64(tau_eff), k);
        write_text(&path, &histogram_svg(&hist, &density_curve(&law, upper), &title))?;
        files.push(path);
    }
    Ok(RunOutput { report, files })
}

