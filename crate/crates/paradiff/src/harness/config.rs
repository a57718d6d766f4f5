//! Experiment configuration, read from TOML.
//!
//! ```toml
//! experiment = "noloss-main"   # see `paradiff list`
//! seed = 7
//!
//! [grid]
//! n = 512                      # power of two, 16..=4096
//! dim = 1                      # 2 only for lp-suite and norms-suite
//! sizes = [512, 1024]          # resolution sweep, where a suite uses one
//!
//! [time]
//! final_time = 1.0
//! samples_per_unit = 8192      # table density for mollify-suite
//!
//! [coefficients]
//! depths = [4, 6, 8]           # Weierstrass depth J
//! axis = "tx"                  # t | x | tx | tmod
//! lambda0 = 1.0
//! big_lambda0 = 2.0
//!
//! [data]
//! max_mode = 32                # initial data live on |k| <= max_mode
//! decay = 0.6                  # extra decay (1+|k|)^-decay
//!
//! [tolerances]                 # optional overrides, by check name
//! ```
//!
//! Every section is optional; missing keys take the defaults of the suite
//! named by `experiment`.

use crate::coefficients::Axis;
use crate::error::{Error, Result};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const SUITES: [&str; 9] = [
    "lp-suite",
    "norms-suite",
    "mollify-suite",
    "symb-calc-suite",
    "positivity-suite",
    "q-cancel-suite",
    "noloss-main",
    "sigma-smooth",
    "s-comparison",
];

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: String,
    seed: Option<u64>,
    #[serde(default)]
    grid: RawGrid,
    #[serde(default)]
    time: RawTime,
    #[serde(default)]
    coefficients: RawCoefficients,
    #[serde(default)]
    data: RawData,
    sigma: Option<Vec<f64>>,
    trials: Option<usize>,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
    output: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    n: Option<usize>,
    dim: Option<usize>,
    sizes: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct RawTime {
    final_time: Option<f64>,
    samples_per_unit: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct RawCoefficients {
    depths: Option<Vec<usize>>,
    axis: Option<String>,
    lambda0: Option<f64>,
    big_lambda0: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct RawData {
    max_mode: Option<usize>,
    decay: Option<f64>,
}

/// Validated configuration with every default filled in.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub seed: u64,
    pub n: usize,
    pub dim: usize,
    pub sizes: Vec<usize>,
    pub final_time: f64,
    pub samples_per_unit: usize,
    pub depths: Vec<usize>,
    pub axis: Axis,
    pub lambda0: f64,
    pub big_lambda0: f64,
    pub max_mode: usize,
    pub decay: f64,
    pub sigma: Vec<f64>,
    pub trials: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub output: Option<PathBuf>,
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

pub fn parse_axis(s: &str) -> Result<Axis> {
    match s {
        "t" => Ok(Axis::T),
        "x" => Ok(Axis::X),
        "tx" => Ok(Axis::TX),
        "tmod" => Ok(Axis::TModulated),
        other => config_err(format!("unknown axis {other:?} (expected t, x, tx or tmod)")),
    }
}

impl ExperimentConfig {
    /// Defaults of a suite, at the scale used by the acceptance run.
    pub fn default_for(experiment: &str) -> Result<Self> {
        if !SUITES.contains(&experiment) {
            return config_err(format!("unknown experiment {experiment:?}"));
        }
        let mut c = ExperimentConfig {
            experiment: experiment.to_string(),
            seed: 7,
            n: 256,
            dim: 1,
            sizes: vec![],
            final_time: 1.0,
            samples_per_unit: 8192,
            depths: vec![8],
            axis: Axis::TX,
            lambda0: 1.0,
            big_lambda0: 2.0,
            max_mode: 32,
            decay: 0.6,
            sigma: vec![0.0],
            trials: 16,
            tolerances: BTreeMap::new(),
            output: None,
        };
        match experiment {
            "lp-suite" => c.trials = 100,
            "norms-suite" => c.trials = 20,
            "mollify-suite" => {
                c.n = 16;
                c.axis = Axis::T;
                c.final_time = 2.0 * std::f64::consts::PI;
            }
            "symb-calc-suite" | "q-cancel-suite" => {
                c.n = 1024;
                c.axis = Axis::X;
                c.trials = 8;
            }
            "positivity-suite" => {
                c.depths = vec![6];
                c.trials = 100;
            }
            "noloss-main" => {
                c.n = 512;
                c.sizes = vec![512, 1024];
                c.depths = vec![4, 6, 8];
            }
            "sigma-smooth" => {
                c.n = 512;
                c.depths = vec![4, 6, 8];
                c.axis = Axis::TModulated;
                c.sigma = vec![0.0, 1.0, 2.0];
            }
            "s-comparison" => {
                c.n = 512;
                c.depths = vec![4, 6, 8];
                c.sigma = vec![-0.5, 0.0, 0.5];
            }
            _ => {}
        }
        Ok(c)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut c = Self::default_for(&raw.experiment)?;
        if let Some(s) = raw.seed {
            c.seed = s;
        }
        c.n = raw.grid.n.unwrap_or(c.n);
        c.dim = raw.grid.dim.unwrap_or(c.dim);
        if let Some(s) = raw.grid.sizes {
            c.sizes = s;
        }
        c.final_time = raw.time.final_time.unwrap_or(c.final_time);
        c.samples_per_unit = raw.time.samples_per_unit.unwrap_or(c.samples_per_unit);
        if let Some(d) = raw.coefficients.depths {
            c.depths = d;
        }
        if let Some(a) = raw.coefficients.axis {
            c.axis = parse_axis(&a)?;
        }
        c.lambda0 = raw.coefficients.lambda0.unwrap_or(c.lambda0);
        c.big_lambda0 = raw.coefficients.big_lambda0.unwrap_or(c.big_lambda0);
        c.max_mode = raw.data.max_mode.unwrap_or(c.max_mode);
        c.decay = raw.data.decay.unwrap_or(c.decay);
        if let Some(s) = raw.sigma {
            c.sigma = s;
        }
        c.trials = raw.trials.unwrap_or(c.trials);
        c.tolerances = raw.tolerances;
        c.output = raw.output;
        c.validate()?;
        Ok(c)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    fn check_n(n: usize) -> Result<()> {
        if !(n.is_power_of_two() && (16..=4096).contains(&n)) {
            return config_err(format!("grid size {n} must be a power of two in 16..=4096"));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        Self::check_n(self.n)?;
        for &n in &self.sizes {
            Self::check_n(n)?;
        }
        match self.dim {
            1 => {}
            2 if matches!(self.experiment.as_str(), "lp-suite" | "norms-suite") => {
                if self.n > 512 {
                    return config_err("two-dimensional grids are limited to n <= 512");
                }
            }
            d => return config_err(format!("dim = {d} is not supported by {}", self.experiment)),
        }
        if !(self.final_time > 0.0 && self.final_time <= 10.0) {
            return config_err("final_time must lie in (0, 10]");
        }
        if self.samples_per_unit < 64 {
            return config_err("samples_per_unit must be at least 64");
        }
        if self.depths.is_empty() || self.depths.iter().any(|&j| !(1..=12).contains(&j)) {
            return config_err("depths must be nonempty with entries in 1..=12");
        }
        if !(self.lambda0 > 0.0 && self.big_lambda0 >= self.lambda0 && self.big_lambda0 <= 100.0) {
            return config_err("coefficient bounds must satisfy 0 < lambda0 <= big_lambda0 <= 100");
        }
        let solves = matches!(self.experiment.as_str(), "noloss-main" | "sigma-smooth" | "s-comparison");
        let smallest = self.grid_sizes().into_iter().min().unwrap_or(self.n);
        if solves && (self.max_mode == 0 || self.max_mode >= smallest / 3) {
            return config_err("max_mode must be positive and below n/3");
        }
        if !(self.decay >= 0.0 && self.decay <= 4.0) {
            return config_err("decay must lie in [0, 4]");
        }
        if self.sigma.iter().any(|s| !(s.is_finite() && *s >= -0.5 && *s <= 4.0)) {
            return config_err("sigma values must lie in [-0.5, 4]");
        }
        if self.trials == 0 || self.trials > 10_000 {
            return config_err("trials must lie in 1..=10000");
        }
        if self.tolerances.values().any(|v| !v.is_finite()) {
            return config_err("tolerance overrides must be finite");
        }
        Ok(())
    }

    /// The resolution sweep, or the single grid size.
    pub fn grid_sizes(&self) -> Vec<usize> {
        if self.sizes.is_empty() {
            vec![self.n]
        } else {
            self.sizes.clone()
        }
    }

    /// Limit of a check, after overrides.
    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}
