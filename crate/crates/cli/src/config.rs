//! Run configuration: defaults, then a TOML file (`--config` or
//! `HARMONIA_CONFIG`), then command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::parse::{self, Grid};

pub const CONFIG_ENV: &str = "HARMONIA_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    /// Radii for the radial and green suites and for tables.
    pub grid: Grid,
    /// Length of Jacobi trajectories in the jacobi suite.
    pub tmax: f64,
    /// Stable-tensor horizon and the radius of the μ limit check.
    pub horizon: f64,
    /// Boundary quadrature nodes.
    pub nodes: usize,
    pub martin_a: f64,
    pub martin_s: f64,
    pub parallel: bool,
    /// Tolerance overrides by check family, e.g. `"radial.mu_ode"`.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            grid: Grid { start: 0.1, stop: 5.0, step: 0.1 },
            tmax: 5.0,
            horizon: 40.0,
            nodes: 512,
            martin_a: 1.0,
            martin_s: 40.0,
            parallel: false,
            tolerances: BTreeMap::new(),
        }
    }
}

/// Partial settings from a file or from flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub grid: Option<String>,
    pub tmax: Option<f64>,
    pub horizon: Option<f64>,
    pub nodes: Option<usize>,
    pub martin_a: Option<f64>,
    pub martin_s: Option<f64>,
    pub parallel: Option<bool>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl Config {
    pub fn tol(&self, family: &str, default: f64) -> f64 {
        self.tolerances.get(family).copied().unwrap_or(default)
    }

    pub fn apply(&mut self, o: &Overrides) -> std::result::Result<(), String> {
        if let Some(g) = &o.grid {
            self.grid = parse::grid(g).map_err(|e| e.to_string())?;
        }
        let positive = |name: &str, v: f64| if v > 0.0 && v.is_finite() { Ok(v) } else { Err(format!("{name} must be positive, got {v}")) };
        if let Some(v) = o.tmax {
            self.tmax = positive("tmax", v)?;
        }
        if let Some(v) = o.horizon {
            self.horizon = positive("horizon", v)?;
        }
        if let Some(v) = o.nodes {
            self.nodes = v;
        }
        if let Some(v) = o.martin_a {
            self.martin_a = v;
        }
        if let Some(v) = o.martin_s {
            self.martin_s = positive("martin_s", v)?;
        }
        if let Some(v) = o.parallel {
            self.parallel = v;
        }
        for (k, &v) in &o.tolerances {
            if !(v >= 0.0) {
                return Err(format!("tolerance {k} must be nonnegative, got {v}"));
            }
            self.tolerances.insert(k.clone(), v);
        }
        Ok(())
    }

    /// Defaults, then `file` (or the file named by `HARMONIA_CONFIG`), then
    /// `flags`.
    pub fn load(file: Option<&Path>, flags: &Overrides) -> Result<Config> {
        let mut cfg = Config::default();
        let path = file.map(Path::to_path_buf).or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        if let Some(path) = path {
            let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            let o: Overrides =
                toml::from_str(&text).map_err(|e| CliError::Config { path: path.clone(), message: e.to_string() })?;
            cfg.apply(&o).map_err(|message| CliError::Config { path: path.clone(), message })?;
        }
        cfg.apply(flags).map_err(CliError::Parse)?;
        Ok(cfg)
    }
}
