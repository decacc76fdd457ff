//! key=value configuration files.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Environment variable overriding the class group cache directory.
pub const CACHE_ENV_VAR: &str = "HECKE_CACHE_DIR";

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Default tolerance for single evaluations.
    pub tol: f64,
    /// Tolerance for scan evaluations.
    pub scan_tol: f64,
    pub cache_dir: PathBuf,
    /// Worker threads for scans (0 = one per core).
    pub workers: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { tol: 1e-10, scan_tol: 1e-8, cache_dir: std::env::temp_dir().join("hecke-cache"), workers: 0 }
    }
}

impl Config {
    /// Parses `key = value` lines; `#` starts a comment. Known keys: tol,
    /// scan_tol, cache_dir, workers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value, got {raw:?}", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| Error::Parse(format!("line {}: invalid {what} {value:?}", lineno + 1));
            match key {
                "tol" => cfg.tol = value.parse().ok().filter(|v: &f64| *v > 0.0).ok_or_else(|| bad("tolerance"))?,
                "scan_tol" => {
                    cfg.scan_tol = value.parse().ok().filter(|v: &f64| *v > 0.0).ok_or_else(|| bad("tolerance"))?
                }
                "cache_dir" => cfg.cache_dir = PathBuf::from(value),
                "workers" => cfg.workers = value.parse().map_err(|_| bad("worker count"))?,
                _ => return Err(Error::Parse(format!("line {}: unknown key {key:?}", lineno + 1))),
            }
        }
        Ok(cfg)
    }

    /// Reads a config file (or the defaults when `path` is None) and applies
    /// the cache directory override from the environment.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => Config::parse(&std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?)?,
            None => Config::default(),
        };
        if let Some(dir) = std::env::var_os(CACHE_ENV_VAR).filter(|v| !v.is_empty()) {
            cfg.cache_dir = PathBuf::from(dir);
        }
        Ok(cfg)
    }
}
