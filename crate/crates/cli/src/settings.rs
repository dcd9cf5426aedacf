//! Shared parameter flags, the `key = value` config-file format, and the
//! flag > config > default resolution order.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::Args;

/// Error during option resolution; always maps to the usage/config exit code.
#[derive(Debug)]
pub struct SettingsError(pub String);

impl fmt::Display for SettingsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for SettingsError {}

/// Flags shared by the parameterized subcommands. Every value may also come
/// from `--config <file>`; an explicit flag wins on conflict.
#[derive(Debug, Args, Default)]
pub struct ParamOpts {
    /// Measurement-basis angle theta in radians, in [0, pi/2]
    #[arg(long)]
    pub theta: Option<f64>,

    /// Measurement-basis phase phi in radians, in [0, 2*pi)
    #[arg(long)]
    pub phi: Option<f64>,

    /// Thermal ground population p, in [1/2, 1]
    #[arg(long)]
    pub p: Option<f64>,

    /// Relaxation time tau (time units)
    #[arg(long)]
    pub tau: Option<f64>,

    /// Interval between measurements (time units)
    #[arg(long)]
    pub delta: Option<f64>,

    /// Number of measurement steps n (total time is n*delta)
    #[arg(long)]
    pub steps: Option<u32>,

    /// Stored classical bit, 0 or 1
    #[arg(long)]
    pub bit: Option<u8>,

    /// Total time t (used by sweep)
    #[arg(long)]
    pub t: Option<f64>,

    /// Output path (file, or directory for `figures`); stdout if omitted
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Seed for the deterministic sampler
    #[arg(long)]
    pub seed: Option<u64>,

    /// Number of random samples per invariant
    #[arg(long)]
    pub samples: Option<u32>,

    /// Significant digits for CSV floats
    #[arg(long)]
    pub precision: Option<usize>,

    /// Plain-text config file with one `key = value` per line, `#` comments
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Parsed config file: raw string values keyed by lowercase names.
#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "theta",
    "phi",
    "p",
    "tau",
    "delta",
    "steps",
    "bit",
    "t",
    "out",
    "seed",
    "samples",
    "precision",
];

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, SettingsError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SettingsError(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, path)
    }

    fn parse(text: &str, path: &Path) -> Result<Self, SettingsError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(SettingsError(format!(
                    "{}:{}: expected `key = value`, got `{raw}`",
                    path.display(),
                    lineno + 1
                )));
            };
            let key = key.trim().to_ascii_lowercase();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(SettingsError(format!(
                    "{}:{}: unknown key `{key}`",
                    path.display(),
                    lineno + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, SettingsError> {
        match self.get(key) {
            None => Ok(None),
            Some(text) => text.parse().map(Some).map_err(|_| {
                SettingsError(format!("config key `{key}`: cannot parse `{text}`"))
            }),
        }
    }

    /// Comma-separated list value (used by `sweep`). An empty string is an
    /// empty list.
    pub fn parsed_list(&self, key: &str) -> Result<Option<Vec<f64>>, SettingsError> {
        match self.get(key) {
            None => Ok(None),
            Some("") => Ok(Some(Vec::new())),
            Some(text) => text
                .split(',')
                .map(|item| {
                    item.trim().parse::<f64>().map_err(|_| {
                        SettingsError(format!("config key `{key}`: cannot parse `{item}`"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
        }
    }
}

/// Fully resolved parameters. Times default to units of τ = 1; the showcase
/// angle θ = π/6 and p = 0.9 match the bundled figure recipes.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub theta: f64,
    pub phi: f64,
    pub p: f64,
    pub tau: f64,
    pub delta: f64,
    pub steps: u32,
    pub bit: u8,
    pub t: f64,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub samples: u32,
    pub precision: usize,
}

impl Resolved {
    pub fn from_opts(opts: &ParamOpts) -> Result<Self, SettingsError> {
        let config = match &opts.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        Self::merge(opts, &config)
    }

    fn merge(opts: &ParamOpts, config: &ConfigFile) -> Result<Self, SettingsError> {
        let resolved = Self {
            theta: opts.theta.or(config.parsed("theta")?).unwrap_or(PI / 6.0),
            phi: opts.phi.or(config.parsed("phi")?).unwrap_or(0.0),
            p: opts.p.or(config.parsed("p")?).unwrap_or(0.9),
            tau: opts.tau.or(config.parsed("tau")?).unwrap_or(1.0),
            delta: opts.delta.or(config.parsed("delta")?).unwrap_or(0.1),
            steps: opts.steps.or(config.parsed("steps")?).unwrap_or(50),
            bit: opts.bit.or(config.parsed("bit")?).unwrap_or(0),
            t: opts.t.or(config.parsed("t")?).unwrap_or(5.0),
            out: opts
                .out
                .clone()
                .or_else(|| config.get("out").map(PathBuf::from)),
            seed: opts.seed.or(config.parsed("seed")?).unwrap_or(42),
            samples: opts.samples.or(config.parsed("samples")?).unwrap_or(200),
            precision: opts.precision.or(config.parsed("precision")?).unwrap_or(17),
        };
        if resolved.precision == 0 || resolved.precision > 50 {
            return Err(SettingsError(format!(
                "precision must be in 1..=50, got {}",
                resolved.precision
            )));
        }
        if resolved.samples == 0 {
            return Err(SettingsError("samples must be at least 1".into()));
        }
        Ok(resolved)
    }

    /// Config file loaded for this invocation, for list-valued keys.
    pub fn config_of(opts: &ParamOpts) -> Result<ConfigFile, SettingsError> {
        match &opts.config {
            Some(path) => ConfigFile::load(path),
            None => Ok(ConfigFile::default()),
        }
    }
}
