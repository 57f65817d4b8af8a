//! Run configuration. Values come from built-in defaults, then an optional
//! `key = value` file, then command-line flags; later sources win.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use jacobi_cs::{Weight, WeightMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub k: String,
    pub mode: WeightMode,
    /// Boson cutoff `N`.
    pub cutoff: usize,
    /// SU(1,1) cutoff `M`.
    pub cutoff_m: usize,
    pub tol: f64,
    pub seed: u64,
    pub samples: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            k: "1".into(),
            mode: WeightMode::Strict,
            cutoff: 60,
            cutoff_m: 60,
            tol: 1e-8,
            seed: 0,
            samples: 1_000_000,
            out: None,
            format: Format::Json,
        }
    }
}

/// Flag values; `None` means not given.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub k: Option<String>,
    pub mode: Option<String>,
    pub cutoff: Option<usize>,
    pub cutoff_m: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug)]
pub enum ConfigError {
    /// Malformed value or file syntax.
    Parse(String),
    /// Well formed but out of range.
    Domain(String),
}

fn parse_err<E: std::fmt::Display>(key: &str) -> impl Fn(E) -> ConfigError + '_ {
    move |e| ConfigError::Parse(format!("{key}: {e}"))
}

/// Reads `key = value` lines. `#` starts a comment; keys may use `-` or `_`.
pub fn read_file(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Parse(format!("{}: {e}", path.display())))?;
    parse_text(&text)
}

pub fn parse_text(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Parse(format!(
                "line {}: expected key = value",
                no + 1
            )));
        };
        let value = value.trim().trim_matches('"');
        map.insert(key.trim().replace('-', "_"), value.to_string());
    }
    Ok(map)
}

impl RunConfig {
    pub fn resolve(file: Option<&Path>, flags: Overrides) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            for (key, value) in read_file(path)? {
                cfg.set(&key, &value)?;
            }
        }
        if let Some(v) = flags.k {
            cfg.k = v;
        }
        if let Some(v) = flags.mode {
            cfg.set("mode", &v)?;
        }
        if let Some(v) = flags.cutoff {
            cfg.cutoff = v;
            // a single cutoff applies to both factors unless M is given too
            cfg.cutoff_m = flags.cutoff_m.unwrap_or(v);
        } else if let Some(v) = flags.cutoff_m {
            cfg.cutoff_m = v;
        }
        if let Some(v) = flags.tol {
            cfg.tol = v;
        }
        if let Some(v) = flags.seed {
            cfg.seed = v;
        }
        if let Some(v) = flags.samples {
            cfg.samples = v;
        }
        if flags.out.is_some() {
            cfg.out = flags.out;
        }
        if let Some(v) = flags.format {
            cfg.format = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "k" => self.k = value.to_string(),
            "mode" => self.mode = value.parse().map_err(parse_err(key))?,
            "cutoff" => {
                self.cutoff = value.parse().map_err(parse_err(key))?;
                self.cutoff_m = self.cutoff;
            }
            "cutoff_m" => self.cutoff_m = value.parse().map_err(parse_err(key))?,
            "tol" => self.tol = value.parse().map_err(parse_err(key))?,
            "seed" => self.seed = value.parse().map_err(parse_err(key))?,
            "samples" => self.samples = value.parse().map_err(parse_err(key))?,
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => {
                self.format = <Format as clap::ValueEnum>::from_str(value, true)
                    .map_err(|e| ConfigError::Parse(format!("format: {e}")))?
            }
            other => return Err(ConfigError::Parse(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if !(self.tol > 0.0) {
            return Err(ConfigError::Domain(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.cutoff < 2 || self.cutoff_m < 2 {
            return Err(ConfigError::Domain(format!(
                "cutoffs must be at least 2, got ({}, {})",
                self.cutoff, self.cutoff_m
            )));
        }
        if self.samples == 0 {
            return Err(ConfigError::Domain("sample count must be positive".into()));
        }
        Ok(())
    }

    pub fn weight(&self) -> jacobi_cs::Result<Weight> {
        Weight::parse(&self.k, self.mode)
    }
}
