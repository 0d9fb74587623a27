use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid configuration: {0}")]
pub struct ConfigError(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Figure1,
    Figure2,
    Figure3,
    Spectrum,
    PovmProb,
    Kernel,
    Tails,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Figure1 => "figure1",
            Command::Figure2 => "figure2",
            Command::Figure3 => "figure3",
            Command::Spectrum => "spectrum",
            Command::PovmProb => "povm-prob",
            Command::Kernel => "kernel",
            Command::Tails => "tails",
            Command::Verify => "verify",
        }
    }

    fn default_n_range(&self) -> (i64, i64) {
        match self {
            Command::Figure1 => (-2, 2),
            Command::PovmProb => (-50, 50),
            _ => (-5, 5),
        }
    }

    fn default_grid_points(&self) -> usize {
        match self {
            Command::Figure1 => 200,
            Command::Figure3 => 401,
            Command::Kernel => 100,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Validated settings for one run; unset options take per-command defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub mass: f64,
    pub tau: f64,
    pub varphi: f64,
    pub n_min: i64,
    pub n_max: i64,
    pub grid_points: usize,
    /// None keeps every check's own tolerance.
    pub tol: Option<f64>,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

/// Raw option values before defaults and validation.
#[derive(Debug, Clone, Default)]
pub struct RawOptions {
    pub mass: Option<f64>,
    pub tau: Option<f64>,
    pub phi: Option<f64>,
    pub n_min: Option<i64>,
    pub n_max: Option<i64>,
    pub grid_points: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn new(command: Command, raw: RawOptions) -> Result<Self, ConfigError> {
        let (n_lo, n_hi) = command.default_n_range();
        let cfg = RunConfig {
            command,
            mass: raw.mass.unwrap_or(1.0),
            tau: raw.tau.unwrap_or(1.0),
            varphi: raw.phi.unwrap_or(0.0),
            n_min: raw.n_min.unwrap_or(n_lo),
            n_max: raw.n_max.unwrap_or(n_hi),
            grid_points: raw.grid_points.unwrap_or(command.default_grid_points()),
            tol: raw.tol,
            seed: raw.seed.unwrap_or(0),
            output: raw.output,
            format: raw.format.unwrap_or_default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: String| Err(ConfigError(msg));
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return bad(format!("--mass must be positive and finite, got {}", self.mass));
        }
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return bad(format!("--tau must be finite and ≥ 0, got {}", self.tau));
        }
        if !(self.varphi > -PI && self.varphi <= PI) {
            return bad(format!("--phi must lie in (-pi, pi], got {}", self.varphi));
        }
        if self.n_min > self.n_max {
            return bad(format!("--n-min {} exceeds --n-max {}", self.n_min, self.n_max));
        }
        if self.n_max.unsigned_abs().max(self.n_min.unsigned_abs()) > 1_000_000 {
            return bad("|n| is limited to 10^6".into());
        }
        if self.command.default_grid_points() > 0 && !(2..=1_000_000).contains(&self.grid_points) {
            return bad(format!("--grid-points must be in [2, 10^6], got {}", self.grid_points));
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return bad(format!("--tol must be positive, got {t}"));
            }
        }
        Ok(())
    }
}
