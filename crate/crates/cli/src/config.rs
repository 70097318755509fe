//! Run configuration: a flat-key JSON file overridden by command-line
//! flags, with validation that maps to the usage exit code.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use g2bvp_core::suites::SuiteConfig;

#[derive(Debug, Clone, PartialEq, Eq, Copy)]
pub enum Backend {
    Exact,
    Float,
    Both,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub suite: String,
    pub length: f64,
    pub modes: i32,
    pub grid: usize,
    pub seed: u64,
    pub backend: Backend,
    pub out: PathBuf,
    pub tol: BTreeMap<String, f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suite: "all".into(),
            length: 1.0,
            modes: 2,
            grid: 100,
            seed: 7,
            backend: Backend::Both,
            out: PathBuf::from("."),
            tol: BTreeMap::new(),
        }
    }
}

/// Flat-key config file; unknown keys are rejected except `tol.*`.
#[derive(Debug, Deserialize)]
struct FileConfig {
    #[serde(flatten)]
    entries: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn num(v: &serde_json::Value, key: &str) -> Result<f64, ConfigError> {
    v.as_f64()
        .ok_or_else(|| ConfigError(format!("key {key} must be a number")))
}

impl RunConfig {
    pub fn load_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        let file: FileConfig = serde_json::from_str(&text)
            .map_err(|e| ConfigError(format!("config is not flat JSON: {e}")))?;
        for (key, value) in file.entries {
            match key.as_str() {
                "suite" => {
                    self.suite = value
                        .as_str()
                        .ok_or_else(|| ConfigError("suite must be a string".into()))?
                        .to_string()
                }
                "length" => self.length = num(&value, "length")?,
                "modes" => self.modes = num(&value, "modes")? as i32,
                "grid" => self.grid = num(&value, "grid")? as usize,
                "seed" => self.seed = num(&value, "seed")? as u64,
                "backend" => {
                    self.backend = parse_backend(
                        value
                            .as_str()
                            .ok_or_else(|| ConfigError("backend must be a string".into()))?,
                    )?
                }
                "out" => {
                    self.out = PathBuf::from(
                        value
                            .as_str()
                            .ok_or_else(|| ConfigError("out must be a string".into()))?,
                    )
                }
                k if k.starts_with("tol.") => {
                    self.tol.insert(k["tol.".len()..].to_string(), num(&value, k)?);
                }
                other => return Err(ConfigError(format!("unknown config key {other}"))),
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.length <= 0.0 {
            return Err(ConfigError(format!("length must be positive, got {}", self.length)));
        }
        if self.modes < 1 {
            return Err(ConfigError(format!("modes must be at least 1, got {}", self.modes)));
        }
        if self.grid < 8 {
            return Err(ConfigError(format!("grid must be at least 8, got {}", self.grid)));
        }
        for (id, tol) in &self.tol {
            if *tol <= 0.0 {
                return Err(ConfigError(format!("tolerance for {id} must be positive")));
            }
        }
        if !matches!(self.suite.as_str(), "all" | "algebra" | "symbol" | "spectral") {
            return Err(ConfigError(format!(
                "suite must be one of all|algebra|symbol|spectral, got {}",
                self.suite
            )));
        }
        if !self.out.is_dir() {
            return Err(ConfigError(format!(
                "output directory {} does not exist",
                self.out.display()
            )));
        }
        Ok(())
    }

    pub fn suite_config(&self) -> SuiteConfig {
        let mut cfg = SuiteConfig::default();
        cfg.seed = self.seed;
        cfg.ell = self.length;
        cfg.kmax = self.modes;
        cfg.n_t = self.grid;
        cfg.tol_overrides = self.tol.clone();
        cfg
    }
}

pub fn parse_backend(s: &str) -> Result<Backend, ConfigError> {
    match s {
        "exact" => Ok(Backend::Exact),
        "float" => Ok(Backend::Float),
        "both" => Ok(Backend::Both),
        other => Err(ConfigError(format!(
            "backend must be exact|float|both, got {other}"
        ))),
    }
}

/// Rewrite `--tol.<id>=<v>` and `--tol.<id> <v>` into the repeatable
/// `--tol <id>=<v>` form that the static parser accepts.
pub fn preprocess_tol_flags(args: Vec<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut pending_id: Option<String> = None;
    for arg in args {
        if let Some(id) = pending_id.take() {
            out.push("--tol".to_string());
            out.push(format!("{id}={arg}"));
            continue;
        }
        if let Some(rest) = arg.strip_prefix("--tol.") {
            match rest.split_once('=') {
                Some((id, value)) => {
                    out.push("--tol".to_string());
                    out.push(format!("{id}={value}"));
                }
                None => pending_id = Some(rest.to_string()),
            }
            continue;
        }
        out.push(arg);
    }
    if let Some(id) = pending_id {
        // let the parser report the missing value
        out.push("--tol".to_string());
        out.push(format!("{id}="));
    }
    out
}
