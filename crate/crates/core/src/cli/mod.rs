//! Command-line front end: a strict JSON run configuration, flag overrides,
//! and the `steady`, `oracle`, `wigner` and `figures` commands.
//!
//! Every command writes into `output.directory`. Tables are CSV (header row,
//! LF endings, floats as `{:.16e}`) or JSON arrays of row objects; missing
//! quantities are written as the string `"undefined"`.

mod commands;
mod config;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

pub use commands::{
    cavity_fidelity, cmd_figures, cmd_oracle, cmd_steady, cmd_wigner, fidelity_with_oracle,
    figure_r_grid, oracle_reference, oracle_row, solve_steady, steady_observables, Source,
    SteadyRun, Which, WIGNER_PANELS,
};
pub use config::{
    Format, Method, ModelSection, NumericsSection, OutputSection, RunConfig, WignerSection,
    MAX_DIM_CAVITY, MAX_DIM_MECH,
};
pub use output::{density_matrix_json, format_float, sha256_hex, Cell, Table, Written, UNDEFINED};

use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "simulate",
    version,
    about = "Steady states, closed-form statistics and Wigner grids for a squeezed-reservoir optomechanical oscillator"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Numerical steady state of the full or effective model.
    Steady {
        #[arg(long, value_enum)]
        model: Which,
    },
    /// Closed-form statistics over a grid of squeeze strengths.
    Oracle {
        /// Comma-separated r values; defaults to 0, 0.05, ..., 2.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        r_grid: Option<Vec<f64>>,
    },
    /// Wigner function on a square grid with a metadata sidecar.
    Wigner {
        #[arg(long, value_enum, default_value = "oracle")]
        source: Source,
    },
    /// All figure datasets and a checksum manifest.
    Figures,
}

/// Options shared by every command. Flags override the config file.
#[derive(Debug, Default, Args)]
pub struct Common {
    /// JSON run configuration; unknown keys are rejected.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub r: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Coupling, in units of kappa.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub g2: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    /// Mechanical damping, in units of kappa.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub n_th: Option<f64>,
    #[arg(long, global = true)]
    pub include_mech_bath: bool,
    /// Jump rate of the effective model, replacing the cooperativity.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub jump_rate: Option<f64>,
    #[arg(long, global = true)]
    pub dim_cavity: Option<usize>,
    #[arg(long, global = true)]
    pub dim_mech: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long, global = true)]
    pub stop_tol: Option<f64>,
    #[arg(long, global = true)]
    pub t_cap: Option<f64>,
    #[arg(long, global = true)]
    pub dt_max: Option<f64>,
    #[arg(long, global = true)]
    pub x_max: Option<f64>,
    #[arg(long, global = true)]
    pub n_points: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    Auto,
    Evolve,
    Direct,
}

impl Common {
    /// Loads the config file, if any, and applies the flag overrides.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_path(path)?,
            None => RunConfig::default(),
        };
        let m = &mut c.model;
        set(&mut m.r, self.r);
        set(&mut m.theta, self.theta);
        set(&mut m.g2, self.g2);
        set(&mut m.kappa, self.kappa);
        set(&mut m.gamma, self.gamma);
        set(&mut m.n_th, self.n_th);
        m.include_mech_bath |= self.include_mech_bath;
        if self.jump_rate.is_some() {
            m.jump_rate_override = self.jump_rate;
        }
        let n = &mut c.numerics;
        if self.dim_cavity.is_some() {
            n.dim_cavity = self.dim_cavity;
        }
        if self.dim_mech.is_some() {
            n.dim_mech = self.dim_mech;
        }
        if let Some(method) = self.method {
            n.method = match method {
                MethodArg::Auto => Method::Auto,
                MethodArg::Evolve => Method::Evolve,
                MethodArg::Direct => Method::Direct,
            };
        }
        set(&mut n.stop_tol, self.stop_tol);
        if self.t_cap.is_some() {
            n.t_cap = self.t_cap;
        }
        if self.dt_max.is_some() {
            n.dt_max = self.dt_max;
        }
        if self.x_max.is_some() {
            c.wigner.x_max = self.x_max;
        }
        set(&mut c.wigner.n_points, self.n_points);
        if let Some(dir) = &self.out {
            c.output.directory = dir.clone();
        }
        set(&mut c.output.format, self.format);
        c.validate()?;
        Ok(c)
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

pub fn run(cli: &Cli) -> Result<Written> {
    let config = cli.common.resolve()?;
    match &cli.command {
        Command::Steady { model } => cmd_steady(&config, *model),
        Command::Oracle { r_grid } => {
            let grid = r_grid.clone().unwrap_or_else(figure_r_grid);
            cmd_oracle(&config, &grid)
        }
        Command::Wigner { source } => cmd_wigner(&config, *source),
        Command::Figures => cmd_figures(&config),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidDimension { .. } => "invalid_dimension",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::Domain(_) => "domain",
        Error::TruncationTail { .. } => "truncation_tail",
        Error::NonHermitian { .. } => "non_hermitian",
        Error::NegativeRate(_) => "negative_rate",
        Error::TraceDrift { .. } => "trace_drift",
        Error::NonFinite { .. } => "non_finite",
        Error::NotConverged { .. } => "not_converged",
        Error::SeriesNotConverged { .. } => "series_not_converged",
        Error::Singular(_) => "singular",
        Error::Undefined(_) => "undefined",
        Error::MissingModeStructure => "missing_mode_structure",
        Error::Config(_) => "config",
        Error::Internal(_) => "internal",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    }
}

/// The object printed on stderr when a command fails.
pub fn error_report(e: &Error) -> Value {
    let mut v = json!({
        "error": error_kind(e),
        "message": e.to_string(),
        "exit_code": e.exit_code(),
    });
    match e {
        Error::NotConverged { residual, time } => {
            v["residual"] = json!(residual);
            v["time"] = json!(time);
        }
        Error::TraceDrift { drift, .. } => v["drift"] = json!(drift),
        Error::NonFinite { time } => v["time"] = json!(time),
        _ => {}
    }
    v
}
