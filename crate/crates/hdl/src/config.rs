//! Run configuration: a flat `key = value` file, overridden by flags.
//!
//! Recognized keys: `k`, `ks`, `grid`, `grids`, `box`, `stretch`,
//! `domain`, `max_dim`, `n_max`, `levels`, `root_tol`, `cluster_tol`,
//! `leakage_tol`, `ladder_tol`, `cubic_tol`, `casimir_tol`, `spacing_tol`,
//! `extremes_tol`, `annihilation_tol`, `format`, `out`. Lines starting with
//! `#` are comments.

use std::ops::RangeInclusive;
use std::path::PathBuf;

use serde::Serialize;

use crate::grid::{GridSpec, X2Domain};
use crate::higgs::{HiggsConfig, HiggsThresholds};
use crate::report::Format;

pub const THREADS_ENV: &str = "HDL_THREADS";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("{origin}: unknown key '{key}'")]
    UnknownKey { origin: String, key: String },
    #[error("{origin}: bad value '{value}' for '{key}': {msg}")]
    BadValue {
        origin: String,
        key: String,
        value: String,
        msg: String,
    },
    #[error("{origin}: expected 'key = value', got '{line}'")]
    Syntax { origin: String, line: String },
    #[error("cannot read config: {0}")]
    Read(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub k: f64,
    /// `k` values for sweeps.
    pub ks: Vec<f64>,
    pub grid: GridSpec,
    /// Square grid sizes for refinement studies.
    pub grids: Vec<usize>,
    pub n_max: u32,
    /// Levels examined by `higgs`, inclusive.
    pub levels: RangeInclusive<u32>,
    pub root_tol: f64,
    pub cluster_tol: f64,
    pub higgs: HiggsConfig,
    pub thresholds: HiggsThresholds,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            k: 1.0,
            ks: vec![0.5, 1.0, 2.0],
            grid: GridSpec::square(32),
            grids: vec![16, 24, 32],
            n_max: 5,
            levels: 0..=5,
            root_tol: 1e-12,
            cluster_tol: 1e-3,
            higgs: HiggsConfig::default(),
            thresholds: HiggsThresholds::default(),
            format: Format::Csv,
            out: None,
        }
    }
}

fn list<T: std::str::FromStr>(v: &str) -> Result<Vec<T>, String> {
    v.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| format!("cannot parse '{}'", s.trim())))
        .collect()
}

fn one_or_two<T: std::str::FromStr + Copy>(v: &str) -> Result<(T, T), String> {
    match list::<T>(v)?.as_slice() {
        [a] => Ok((*a, *a)),
        [a, b] => Ok((*a, *b)),
        _ => Err("expected one or two comma-separated values".into()),
    }
}

fn positive(v: &str) -> Result<f64, String> {
    match v.trim().parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(_) => Err("must be positive".into()),
        Err(_) => Err("not a number".into()),
    }
}

/// `a`, `a..b` or `a..=b`; both range forms include `b`.
pub fn parse_levels(v: &str) -> Result<RangeInclusive<u32>, String> {
    let v = v.trim();
    let (a, b) = match v.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (v, v),
    };
    let a: u32 = a.trim().parse().map_err(|_| format!("bad level '{a}'"))?;
    let b: u32 = b.trim().parse().map_err(|_| format!("bad level '{b}'"))?;
    if a > b {
        return Err("empty level range".into());
    }
    Ok(a..=b)
}

impl RunConfig {
    /// Applies one setting; `origin` names its source in error messages.
    pub fn set(&mut self, key: &str, value: &str, origin: &str) -> Result<(), ConfigError> {
        let bad = |msg: String| ConfigError::BadValue {
            origin: origin.to_string(),
            key: key.to_string(),
            value: value.to_string(),
            msg,
        };
        let value = value.trim();
        match key {
            "k" => {
                self.k = value.parse().map_err(|_| bad("not a number".into()))?;
                if !(self.k >= 0.0) {
                    return Err(bad("must be non-negative".into()));
                }
            }
            "ks" => self.ks = list(value).map_err(bad)?,
            "grid" => {
                let (m1, m2) = one_or_two::<usize>(value).map_err(bad)?;
                self.grid.m1 = m1;
                self.grid.m2 = m2;
            }
            "grids" => self.grids = list(value).map_err(bad)?,
            "box" => {
                let (l1, l2) = one_or_two::<f64>(value).map_err(bad)?;
                self.grid.l1 = l1;
                self.grid.l2 = l2;
            }
            "stretch" => self.grid.stretch = positive(value).map_err(bad)?,
            "domain" => {
                self.grid.x2_domain = match value {
                    "half-line" => X2Domain::HalfLine,
                    "full-line" => X2Domain::FullLine,
                    _ => return Err(bad("expected half-line or full-line".into())),
                }
            }
            "max_dim" => self.grid.max_dirac_dim = value.parse().map_err(|_| bad("not an integer".into()))?,
            "n_max" => self.n_max = value.parse().map_err(|_| bad("not an integer".into()))?,
            "levels" => self.levels = parse_levels(value).map_err(bad)?,
            "root_tol" => self.root_tol = positive(value).map_err(bad)?,
            "cluster_tol" => self.cluster_tol = positive(value).map_err(bad)?,
            "leakage_tol" => self.higgs.leakage_tol = positive(value).map_err(bad)?,
            "ladder_tol" => self.thresholds.ladder = positive(value).map_err(bad)?,
            "cubic_tol" => self.thresholds.cubic = positive(value).map_err(bad)?,
            "casimir_tol" => self.thresholds.casimir = positive(value).map_err(bad)?,
            "spacing_tol" => self.thresholds.spacing = positive(value).map_err(bad)?,
            "extremes_tol" => self.thresholds.extremes = positive(value).map_err(bad)?,
            "annihilation_tol" => self.thresholds.annihilation = positive(value).map_err(bad)?,
            "format" => self.format = value.parse().map_err(bad)?,
            "out" => self.out = Some(PathBuf::from(value)),
            _ => {
                return Err(ConfigError::UnknownKey {
                    origin: origin.to_string(),
                    key: key.to_string(),
                })
            }
        }
        Ok(())
    }

    /// Applies every line of a config file's text.
    pub fn apply_text(&mut self, text: &str, name: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let origin = format!("{name}:{}", i + 1);
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                origin: origin.clone(),
                line: line.to_string(),
            })?;
            self.set(key.trim(), value, &origin)?;
        }
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read(format!("{}: {e}", path.display())))?;
        let mut cfg = RunConfig::default();
        cfg.apply_text(&text, &path.display().to_string())?;
        Ok(cfg)
    }
}

/// Worker count from `HDL_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}
