use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{default_dim_cavity, default_dim_mech, squeeze_coeffs, ModelParams};
use crate::oracle::MAX_R;

/// Physical parameters. Full-model rates are in units of `κ`; the effective
/// model runs in `τ = γt`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    /// Squeeze strength (dimensionless).
    pub r: f64,
    /// Squeeze angle (radians).
    pub theta: f64,
    /// Linearized coupling (units of κ).
    pub g2: f64,
    /// Cavity decay rate.
    pub kappa: f64,
    /// Mechanical damping rate (units of κ).
    pub gamma: f64,
    /// Thermal phonon number.
    pub n_th: f64,
    pub include_mech_bath: bool,
    /// Replaces `C₂` as the jump rate of the effective model.
    pub jump_rate_override: Option<f64>,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            r: 1.0,
            theta: 0.0,
            g2: 0.05,
            kappa: 1.0,
            gamma: 1e-5,
            n_th: 0.0,
            include_mech_bath: false,
            jump_rate_override: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// RK4 for the effective model, sparse LU for the full model.
    Auto,
    Evolve,
    Direct,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsSection {
    /// Defaults to the model's truncation rule.
    pub dim_cavity: Option<usize>,
    /// Defaults to the model's truncation rule.
    pub dim_mech: Option<usize>,
    /// Step bound in model time units, in addition to the norm bound.
    pub dt_max: Option<f64>,
    /// Residual tolerance in units of the fastest dissipator rate.
    pub stop_tol: f64,
    /// Defaults to 50 over the slowest dissipator rate.
    pub t_cap: Option<f64>,
    pub method: Method,
}

impl Default for NumericsSection {
    fn default() -> Self {
        Self {
            dim_cavity: None,
            dim_mech: None,
            dt_max: None,
            stop_tol: 1e-10,
            t_cap: None,
            method: Method::Auto,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WignerSection {
    /// Half-width of the square grid; defaults to `⌈3√(2n̄+1)⌉`.
    pub x_max: Option<f64>,
    /// Odd number of points per axis.
    pub n_points: usize,
}

impl Default for WignerSection {
    fn default() -> Self {
        Self {
            x_max: None,
            n_points: crate::wigner::DEFAULT_POINTS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub directory: PathBuf,
    pub format: Format,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
            format: Format::Csv,
        }
    }
}

/// Complete run configuration. Every section and field is optional in the
/// file; unknown keys are rejected.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: ModelSection,
    pub numerics: NumericsSection,
    pub wigner: WignerSection,
    pub output: OutputSection,
}

/// Largest accepted truncations.
pub const MAX_DIM_MECH: usize = 1024;
pub const MAX_DIM_CAVITY: usize = 128;

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.model;
        let bad = |msg: String| Err(Error::Config(msg));
        if !(0.0..=MAX_R).contains(&m.r) {
            return bad(format!("model.r must lie in [0, {MAX_R}], got {}", m.r));
        }
        if !m.theta.is_finite() {
            return bad("model.theta must be finite".into());
        }
        for (name, v) in [("g2", m.g2), ("gamma", m.gamma), ("n_th", m.n_th)] {
            if !(v >= 0.0) || !v.is_finite() {
                return bad(format!("model.{name} must be finite and ≥ 0, got {v}"));
            }
        }
        if !(m.kappa > 0.0) || !m.kappa.is_finite() {
            return bad(format!("model.kappa must be positive, got {}", m.kappa));
        }
        if let Some(rate) = m.jump_rate_override {
            if !(rate >= 0.0) || !rate.is_finite() {
                return bad(format!("model.jump_rate_override must be ≥ 0, got {rate}"));
            }
        }
        let n = &self.numerics;
        if let Some(d) = n.dim_mech {
            if !(12..=MAX_DIM_MECH).contains(&d) {
                return bad(format!(
                    "numerics.dim_mech must lie in [12, {MAX_DIM_MECH}], got {d}"
                ));
            }
        }
        if let Some(d) = n.dim_cavity {
            if !(8..=MAX_DIM_CAVITY).contains(&d) {
                return bad(format!(
                    "numerics.dim_cavity must lie in [8, {MAX_DIM_CAVITY}], got {d}"
                ));
            }
        }
        for (name, v) in [
            ("dt_max", n.dt_max),
            ("t_cap", n.t_cap),
            ("stop_tol", Some(n.stop_tol)),
        ] {
            if let Some(v) = v {
                if !(v > 0.0) || !v.is_finite() {
                    return bad(format!("numerics.{name} must be positive, got {v}"));
                }
            }
        }
        let w = &self.wigner;
        if w.n_points % 2 == 0 || !(3..=2001).contains(&w.n_points) {
            return bad(format!(
                "wigner.n_points must be odd and in [3, 2001], got {}",
                w.n_points
            ));
        }
        if let Some(x) = w.x_max {
            if !(x > 0.0) || !x.is_finite() {
                return bad(format!("wigner.x_max must be positive, got {x}"));
            }
        }
        Ok(())
    }

    /// Model parameters with truncations resolved from the defaults.
    pub fn model_params(&self) -> Result<ModelParams> {
        let m = &self.model;
        Ok(ModelParams {
            squeeze: squeeze_coeffs(m.r, m.theta)?,
            g2: m.g2,
            kappa: m.kappa,
            gamma: m.gamma,
            n_th: m.n_th,
            dim_cavity: self.numerics.dim_cavity.unwrap_or(default_dim_cavity(m.r)),
            dim_mech: match self.numerics.dim_mech {
                Some(d) => d,
                None => default_dim_mech(m.r)?,
            },
            include_mech_bath: m.include_mech_bath,
            jump_rate_override: m.jump_rate_override,
        })
    }

    /// Canonical JSON of the resolved configuration with the output
    /// directory blanked, so the hash depends only on what is computed.
    pub fn canonical_json(&self) -> Result<String> {
        let mut c = self.clone();
        c.output.directory = PathBuf::new();
        Ok(serde_json::to_string(&c)?)
    }
}
