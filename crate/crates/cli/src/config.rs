//! Flat key=value experiment configuration with command-line overrides.
//!
//! Every key is always echoed back into reports, so a report's `config`
//! block can be fed straight back in to reproduce the run.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use gram_recur_core::classical::TopVariant;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    BakerSpectrum,
    TopSpectrum,
    RandomSpectrum,
    MpCurve,
    ClassicalReturns,
    SymbolDemo,
    Compare,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::BakerSpectrum,
        ExperimentKind::TopSpectrum,
        ExperimentKind::RandomSpectrum,
        ExperimentKind::MpCurve,
        ExperimentKind::ClassicalReturns,
        ExperimentKind::SymbolDemo,
        ExperimentKind::Compare,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::BakerSpectrum => "baker-spectrum",
            ExperimentKind::TopSpectrum => "top-spectrum",
            ExperimentKind::RandomSpectrum => "random-spectrum",
            ExperimentKind::MpCurve => "mp-curve",
            ExperimentKind::ClassicalReturns => "classical-returns",
            ExperimentKind::SymbolDemo => "symbol-demo",
            ExperimentKind::Compare => "compare",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        Self::ALL
            .iter()
            .find(|k| k.as_str() == s)
            .copied()
            .ok_or_else(|| {
                CliError::config(format!(
                    "unknown experiment kind '{s}'; expected one of {}",
                    Self::ALL.map(|k| k.as_str()).join(", ")
                ))
            })
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputFormats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl OutputFormats {
    fn parse(s: &str) -> Result<Self, CliError> {
        let mut out = OutputFormats { csv: false, json: false, svg: false };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "csv" => out.csv = true,
                "json" => out.json = true,
                "svg" => out.svg = true,
                other => {
                    return Err(CliError::config(format!(
                        "unknown output format '{other}' in formats={s}"
                    )))
                }
            }
        }
        if !(out.csv || out.json || out.svg) {
            return Err(CliError::config("formats must select at least one of csv,json,svg"));
        }
        Ok(out)
    }

    fn echo(&self) -> String {
        let mut parts = Vec::new();
        if self.csv {
            parts.push("csv");
        }
        if self.json {
            parts.push("json");
        }
        if self.svg {
            parts.push("svg");
        }
        parts.join(",")
    }
}

/// Complete description of one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Hilbert-space dimension for the baker map and the random model.
    pub n: usize,
    /// Spin of the kicked top; its dimension is 2j + 1.
    pub j: f64,
    /// Heisenberg-scale duration: K = round(tau * N) time steps.
    pub tau: f64,
    /// Kicked-top torsion strength.
    pub k: f64,
    /// Kicked-top rotation angle.
    pub p: f64,
    /// Coherent-state centre on the torus lattice; `None` means (N/4, N/2).
    pub site: Option<(usize, usize)>,
    /// Spin coherent-state centre.
    pub theta: f64,
    pub phi: f64,
    pub bins: usize,
    /// Histogram upper edge; `None` picks one just past the MP support.
    pub upper: Option<f64>,
    pub seed: u64,
    pub formats: OutputFormats,
    pub top_variant: TopVariant,
    /// Kac cell: measure 2^-cell_bits.
    pub cell_bits: u32,
    /// Orbit length for return-time runs.
    pub steps: u64,
    /// Hitting cell: measure 2^-hit_bits.
    pub hit_bits: u32,
    pub trials: u64,
    pub hit_cap: u64,
    pub symbols: Vec<String>,
    /// Sample count for the mp-curve grid.
    pub points: usize,
    /// Sweep grids; empty when not sweeping.
    pub grid_n: Vec<usize>,
    pub grid_tau: Vec<f64>,
    pub grid_kp: Vec<(f64, f64)>,
}

impl ExperimentConfig {
    pub fn defaults(kind: ExperimentKind) -> Self {
        ExperimentConfig {
            kind,
            n: 500,
            j: 100.0,
            tau: 1.0,
            k: 6.5,
            p: 1.5,
            site: None,
            theta: 2.0,
            phi: 0.8,
            bins: 50,
            upper: None,
            seed: 0,
            formats: OutputFormats { csv: true, json: true, svg: false },
            top_variant: TopVariant::Printed,
            cell_bits: 6,
            steps: 10_000_000,
            hit_bits: 10,
            trials: 10_000,
            hit_cap: gram_recur_core::classical::DEFAULT_HITTING_CAP,
            symbols: ["psi1", "psi2", "psi2", "psi1", "psi3", "psi4", "psi1"]
                .map(str::to_string)
                .to_vec(),
            points: 512,
            grid_n: Vec::new(),
            grid_tau: Vec::new(),
            grid_kp: Vec::new(),
        }
    }

    /// Number of time steps `K = round(tau * N)` for a given dimension.
    pub fn time_steps(&self, dim: usize) -> Result<usize, CliError> {
        let k = (self.tau * dim as f64).round();
        if !(k >= 1.0) {
            return Err(CliError::config(format!(
                "K = round(tau*N) = round({} * {dim}) must be >= 1",
                self.tau
            )));
        }
        Ok(k as usize)
    }

    /// Kicked-top dimension 2j + 1.
    pub fn top_dim(&self) -> Result<usize, CliError> {
        let two_j = 2.0 * self.j;
        if (two_j - two_j.round()).abs() > 1e-9 || two_j < 1.0 {
            return Err(CliError::config(format!(
                "j must be a positive half-integer, got {}",
                self.j
            )));
        }
        Ok(two_j.round() as usize + 1)
    }

    pub fn baker_site(&self) -> (usize, usize) {
        self.site.unwrap_or((self.n / 4, self.n / 2))
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("cannot read config file {}: {e}", path.display())))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            self.apply_kv(line).map_err(|e| {
                CliError::config(format!("{}:{}: {e}", path.display(), lineno + 1))
            })?;
        }
        Ok(())
    }

    /// Applies one `key=value` assignment.
    pub fn apply_kv(&mut self, assignment: &str) -> Result<(), CliError> {
        let (key, value) = assignment.split_once('=').ok_or_else(|| {
            CliError::config(format!("expected key=value, got '{assignment}'"))
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "kind" => self.kind = ExperimentKind::parse(value)?,
            "n" => self.n = parse_num(key, value)?,
            "j" => self.j = parse_num(key, value)?,
            "tau" => self.tau = parse_num(key, value)?,
            "k" => self.k = parse_num(key, value)?,
            "p" => self.p = parse_num(key, value)?,
            "site" => {
                self.site = if value == "auto" {
                    None
                } else {
                    let (a, b) = value.split_once(':').ok_or_else(|| {
                        CliError::config(format!("site must be 'auto' or 'a:b', got '{value}'"))
                    })?;
                    Some((parse_num(key, a.trim())?, parse_num(key, b.trim())?))
                }
            }
            "theta" => self.theta = parse_num(key, value)?,
            "phi" => self.phi = parse_num(key, value)?,
            "bins" => self.bins = parse_num(key, value)?,
            "upper" => {
                self.upper = if value == "auto" { None } else { Some(parse_num(key, value)?) }
            }
            "seed" => self.seed = parse_num(key, value)?,
            "formats" => self.formats = OutputFormats::parse(value)?,
            "top_variant" => {
                self.top_variant = match value {
                    "printed" => TopVariant::Printed,
                    "rotation" => TopVariant::Rotation,
                    other => {
                        return Err(CliError::config(format!(
                            "top_variant must be printed or rotation, got '{other}'"
                        )))
                    }
                }
            }
            "cell_bits" => self.cell_bits = parse_num(key, value)?,
            "steps" => self.steps = parse_num(key, value)?,
            "hit_bits" => self.hit_bits = parse_num(key, value)?,
            "trials" => self.trials = parse_num(key, value)?,
            "hit_cap" => self.hit_cap = parse_num(key, value)?,
            "symbols" => {
                let parts: Vec<String> = value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                if parts.is_empty() {
                    return Err(CliError::config("symbols must be a nonempty comma list"));
                }
                self.symbols = parts;
            }
            "points" => self.points = parse_num(key, value)?,
            "grid_n" => self.grid_n = parse_list(key, value)?,
            "grid_tau" => self.grid_tau = parse_list(key, value)?,
            "grid_kp" => {
                self.grid_kp = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|pair| {
                        let (k, p) = pair.split_once(':').ok_or_else(|| {
                            CliError::config(format!("grid_kp entries are 'k:p', got '{pair}'"))
                        })?;
                        Ok((parse_num("grid_kp", k.trim())?, parse_num("grid_kp", p.trim())?))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
            }
            other => return Err(CliError::config(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Sanity checks shared by every run.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.bins == 0 {
            return Err(CliError::config("bins must be >= 1"));
        }
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return Err(CliError::config(format!("tau must be positive, got {}", self.tau)));
        }
        if let Some(upper) = self.upper {
            if !(upper > 0.0) {
                return Err(CliError::config(format!("upper must be positive, got {upper}")));
            }
        }
        match self.kind {
            ExperimentKind::BakerSpectrum | ExperimentKind::Compare => {
                if self.n < 2 || self.n % 2 != 0 {
                    return Err(CliError::config(format!(
                        "n must be even and >= 2 for the baker map, got {}",
                        self.n
                    )));
                }
                if let Some((a, b)) = self.site {
                    if a >= self.n || b >= self.n {
                        return Err(CliError::config(format!(
                            "site ({a}:{b}) out of range for n = {}",
                            self.n
                        )));
                    }
                }
                self.time_steps(self.n)?;
            }
            ExperimentKind::RandomSpectrum => {
                if self.n < 1 {
                    return Err(CliError::config("n must be >= 1"));
                }
                self.time_steps(self.n)?;
            }
            ExperimentKind::TopSpectrum => {
                let dim = self.top_dim()?;
                self.time_steps(dim)?;
                if !(0.0..=std::f64::consts::PI).contains(&self.theta) {
                    return Err(CliError::config(format!(
                        "theta must lie in [0, pi], got {}",
                        self.theta
                    )));
                }
                if !(0.0..std::f64::consts::TAU).contains(&self.phi) {
                    return Err(CliError::config(format!(
                        "phi must lie in [0, 2pi), got {}",
                        self.phi
                    )));
                }
            }
            ExperimentKind::MpCurve => {
                if self.points < 2 {
                    return Err(CliError::config("points must be >= 2"));
                }
            }
            ExperimentKind::ClassicalReturns => {
                if self.hit_bits == 0 {
                    return Err(CliError::config("hit_bits must be >= 1"));
                }
                if self.steps == 0 || self.trials == 0 || self.hit_cap == 0 {
                    return Err(CliError::config("steps, trials, and hit_cap must be >= 1"));
                }
            }
            ExperimentKind::SymbolDemo => {
                if self.symbols.is_empty() {
                    return Err(CliError::config("symbols must be nonempty"));
                }
            }
        }
        Ok(())
    }

    /// Full echo of the configuration as ordered key=value pairs.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            map.insert(k.to_string(), v);
        };
        put("kind", self.kind.as_str().to_string());
        put("n", self.n.to_string());
        put("j", self.j.to_string());
        put("tau", self.tau.to_string());
        put("k", self.k.to_string());
        put("p", self.p.to_string());
        put(
            "site",
            match self.site {
                None => "auto".to_string(),
                Some((a, b)) => format!("{a}:{b}"),
            },
        );
        put("theta", self.theta.to_string());
        put("phi", self.phi.to_string());
        put("bins", self.bins.to_string());
        put(
            "upper",
            match self.upper {
                None => "auto".to_string(),
                Some(u) => u.to_string(),
            },
        );
        put("seed", self.seed.to_string());
        put("formats", self.formats.echo());
        put(
            "top_variant",
            match self.top_variant {
                TopVariant::Printed => "printed".to_string(),
                TopVariant::Rotation => "rotation".to_string(),
            },
        );
        put("cell_bits", self.cell_bits.to_string());
        put("steps", self.steps.to_string());
        put("hit_bits", self.hit_bits.to_string());
        put("trials", self.trials.to_string());
        put("hit_cap", self.hit_cap.to_string());
        put("symbols", self.symbols.join(","));
        put("points", self.points.to_string());
        put("grid_n", self.grid_n.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","));
        put("grid_tau", self.grid_tau.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(","));
        put(
            "grid_kp",
            self.grid_kp.iter().map(|(k, p)| format!("{k}:{p}")).collect::<Vec<_>>().join(","),
        );
        map
    }

    /// Rebuilds a config from an echo map; `echo(parse(echo(c))) == echo(c)`.
    #[cfg(test)]
    pub fn from_echo(map: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let kind = map
            .get("kind")
            .ok_or_else(|| CliError::config("echo is missing the kind key"))?;
        let mut cfg = ExperimentConfig::defaults(ExperimentKind::parse(kind)?);
        for (key, value) in map {
            if value.is_empty() && (key == "grid_n" || key == "grid_tau" || key == "grid_kp") {
                continue;
            }
            cfg.apply_kv(&format!("{key}={value}"))?;
        }
        Ok(cfg)
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse::<T>()
        .map_err(|_| CliError::config(format!("cannot parse {key}='{value}'")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num(key, s))
        .collect()
}
