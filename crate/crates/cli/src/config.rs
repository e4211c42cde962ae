//! Flat `key = value` run configurations (TOML syntax, no tables).
//!
//! Unknown keys are rejected. Tolerances and bin counts fall back to the
//! documented defaults when omitted.

use std::f64::consts::PI;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{CliError, Result};

pub const DEFAULT_NEWTON_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 60;
pub const DEFAULT_QUAD_TOL: f64 = 1e-8;
pub const DEFAULT_BINS: usize = 512;

fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}
fn here() -> PathBuf {
    PathBuf::from(".")
}
fn newton_tol() -> f64 {
    DEFAULT_NEWTON_TOL
}
fn max_iter() -> usize {
    DEFAULT_MAX_ITER
}
fn quad_tol() -> f64 {
    DEFAULT_QUAD_TOL
}
fn bins() -> usize {
    DEFAULT_BINS
}
fn k_min() -> f64 {
    -PI
}
fn k_max() -> f64 {
    PI
}
fn k_points() -> usize {
    201
}
fn damping() -> f64 {
    dfflab_core::hubbard::thermo::DAMPING
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverChoice {
    #[default]
    Tridiagonal,
    Dense,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LmgConfig {
    pub model: Option<String>,
    #[serde(rename = "S")]
    pub spin: u32,
    pub gamma: f64,
    #[serde(default = "one")]
    pub lambda_c: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub dh: f64,
    #[serde(default)]
    pub solver: SolverChoice,
    #[serde(default = "here")]
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HubbardConfig {
    pub model: Option<String>,
    #[serde(rename = "L")]
    pub sites: usize,
    /// Defaults to half filling.
    #[serde(rename = "N")]
    pub electrons: Option<usize>,
    /// Defaults to `N / 2`.
    #[serde(rename = "M")]
    pub down_spins: Option<usize>,
    #[serde(rename = "U_start")]
    pub u_start: f64,
    #[serde(rename = "U_end")]
    pub u_end: f64,
    #[serde(rename = "dU")]
    pub du: f64,
    #[serde(default = "bins", alias = "B")]
    pub bins: usize,
    #[serde(default = "yes")]
    pub eq6: bool,
    #[serde(default = "newton_tol")]
    pub newton_tol: f64,
    #[serde(default = "max_iter")]
    pub max_iter: usize,
    #[serde(default = "here")]
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermoConfig {
    pub model: Option<String>,
    #[serde(rename = "U")]
    pub interactions: Vec<f64>,
    #[serde(default = "k_min")]
    pub k_min: f64,
    #[serde(default = "k_max")]
    pub k_max: f64,
    #[serde(default = "k_points")]
    pub k_points: usize,
    #[serde(default = "quad_tol")]
    pub quad_tol: f64,
    #[serde(default = "damping")]
    pub damping: f64,
    #[serde(default = "here")]
    pub output_dir: PathBuf,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!(
            "{name} must be positive and finite, got {x}"
        )))
    }
}

fn finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite, got {x}")))
    }
}

fn check_model(found: &Option<String>, expected: &str) -> Result<()> {
    match found {
        Some(m) if m != expected => Err(invalid(format!(
            "model = \"{m}\" does not match the `{expected}` command"
        ))),
        _ => Ok(()),
    }
}

/// Deserializes a flat document, mapping parser spans to line numbers.
fn parse_flat<T: DeserializeOwned>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
            .unwrap_or(0);
        CliError::Syntax {
            line,
            message: e.message().to_string(),
        }
    })
}

impl LmgConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = parse_flat(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_model(&self.model, "lmg")?;
        if self.spin < 1 {
            return Err(invalid("S must be at least 1"));
        }
        finite("gamma", self.gamma)?;
        positive("lambda_c", self.lambda_c)?;
        finite("h_min", self.h_min)?;
        finite("h_max", self.h_max)?;
        if !(self.h_min < self.h_max) {
            return Err(invalid(format!(
                "field range h_min = {} .. h_max = {} is empty",
                self.h_min, self.h_max
            )));
        }
        positive("dh", self.dh)
    }
}

impl HubbardConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = parse_flat(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn electrons(&self) -> usize {
        self.electrons.unwrap_or(self.sites)
    }

    pub fn down_spins(&self) -> usize {
        self.down_spins.unwrap_or(self.electrons() / 2)
    }

    pub fn validate(&self) -> Result<()> {
        check_model(&self.model, "hubbard")?;
        positive("U_start", self.u_start)?;
        positive("U_end", self.u_end)?;
        positive("dU", self.du)?;
        if !(self.u_start >= self.u_end) {
            return Err(invalid(format!(
                "U range U_start = {} .. U_end = {} must descend",
                self.u_start, self.u_end
            )));
        }
        if self.bins < dfflab_core::hubbard::dos::MIN_BINS {
            return Err(invalid(format!(
                "B must be at least {}, got {}",
                dfflab_core::hubbard::dos::MIN_BINS,
                self.bins
            )));
        }
        positive("newton_tol", self.newton_tol)?;
        if self.max_iter == 0 {
            return Err(invalid("max_iter must be positive"));
        }
        dfflab_core::hubbard::HubbardParams::new(
            self.sites,
            self.electrons(),
            self.down_spins(),
            self.u_end,
        )
        .map_err(|e| invalid(e.to_string()))?;
        Ok(())
    }
}

impl ThermoConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = parse_flat(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_model(&self.model, "thermo-dos")?;
        if self.interactions.is_empty() {
            return Err(invalid("U list is empty"));
        }
        for &u in &self.interactions {
            positive("U", u)?;
        }
        if !(-PI - 1e-12 <= self.k_min && self.k_min < self.k_max && self.k_max <= PI + 1e-12) {
            return Err(invalid(format!(
                "k range {} .. {} must be a non-empty part of [-pi, pi]",
                self.k_min, self.k_max
            )));
        }
        if self.k_points < 2 {
            return Err(invalid("k_points must be at least 2"));
        }
        positive("quad_tol", self.quad_tol)?;
        positive("damping", self.damping)
    }

    /// `k_points` equally spaced momenta, endpoints included exactly.
    pub fn k_grid(&self) -> Vec<f64> {
        let n = self.k_points - 1;
        let step = (self.k_max - self.k_min) / n as f64;
        (0..=n)
            .map(|i| {
                if i == n {
                    self.k_max
                } else {
                    self.k_min + i as f64 * step
                }
            })
            .collect()
    }
}
