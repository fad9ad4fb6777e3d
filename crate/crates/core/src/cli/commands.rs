use std::f64::consts::PI;

use serde_json::{json, Value};

use super::config::{Method, RunConfig};
use super::output::{density_matrix_json, pretty, sha256_hex, Cell, Table, Written};
use crate::error::{Error, Result};
use crate::fock::{squeezed_vacuum_dim, DensityMatrix, Ket};
use crate::liouvillian::{steady_state, steady_state_direct, SteadyOptions, SteadyState};
use crate::model::{
    cavity_dark_ket, effective_generator, full_generator, jump_rate, regime_check, ModelParams,
    SqueezeCoeffs,
};
use crate::observables::{
    fidelity_ket, g2_from_state, mean_number, partial_trace, purity, variance, y_pair, Subsystem,
};
use crate::oracle::{self, KET_TAIL_TOL, MAX_R};
use crate::wigner::{
    default_extent, fourfold_defect, negativity, wigner_grid, WignerGrid, CONTOUR_LEVELS,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Which {
    /// Cavity and mechanics with the squeezed cavity bath.
    Full,
    /// Mechanics only, with the cavity adiabatically eliminated.
    Effective,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Source {
    /// The closed-form steady ket.
    Oracle,
    /// The effective model's numerical steady state.
    Numeric,
}

/// Trace drift allowed while integrating to the steady state.
const TRACE_TOL: f64 = 1e-8;

/// A solved steady state and the mechanical state derived from it.
#[derive(Clone, Debug)]
pub struct SteadyRun {
    pub which: Which,
    pub params: ModelParams,
    pub method: Method,
    pub solution: SteadyState,
    /// Equal to `solution.rho` for the effective model.
    pub mechanics: DensityMatrix,
    /// Present for the full model.
    pub cavity: Option<DensityMatrix>,
}

fn resolve_method(which: Which, requested: Method) -> Method {
    match (which, requested) {
        (Which::Effective, Method::Auto) => Method::Evolve,
        (Which::Full, Method::Auto) => Method::Direct,
        (_, m) => m,
    }
}

/// Solves for the steady state from the ground state.
pub fn solve_steady(config: &RunConfig, which: Which) -> Result<SteadyRun> {
    config.validate()?;
    let params = config.model_params()?;
    let (s, rho0) = match which {
        Which::Effective => (
            effective_generator(&params)?,
            DensityMatrix::ground(params.dim_mech)?,
        ),
        Which::Full => (
            full_generator(&params)?,
            DensityMatrix::product(
                &DensityMatrix::ground(params.dim_cavity)?,
                &DensityMatrix::ground(params.dim_mech)?,
            ),
        ),
    };
    let method = resolve_method(which, config.numerics.method);
    let solution = match method {
        Method::Direct => steady_state_direct(&s, &rho0)?,
        _ => {
            let opts = SteadyOptions {
                stop_tol: config.numerics.stop_tol,
                t_cap: config.numerics.t_cap,
                dt_max: config.numerics.dt_max,
                trace_tol: TRACE_TOL,
            };
            steady_state(&s, &rho0, &opts)?
        }
    };
    let (mechanics, cavity) = match which {
        Which::Effective => (solution.rho.clone(), None),
        Which::Full => (
            partial_trace(&solution.rho, Subsystem::Second)?,
            Some(partial_trace(&solution.rho, Subsystem::First)?),
        ),
    };
    Ok(SteadyRun {
        which,
        params,
        method,
        solution,
        mechanics,
        cavity,
    })
}

/// The closed-form steady ket at its tail-safe dimension.
pub fn oracle_reference(r: f64, theta: f64) -> Result<Ket> {
    oracle::steady_ket(oracle::ket_dim(r, KET_TAIL_TOL)?, r, theta)
}

/// Fidelity of a mechanical state with the closed-form steady ket, after
/// zero-padding both into the larger dimension.
pub fn fidelity_with_oracle(rho: &DensityMatrix, r: f64, theta: f64) -> Result<f64> {
    let ket = oracle_reference(r, theta)?;
    let d = ket.dim().max(rho.dim());
    fidelity_ket(&ket.padded(d)?, &rho.padded(d)?)
}

/// Fidelity of a cavity state with the squeezed vacuum it relaxes to
/// without coupling, taken at the vacuum's own tail-safe dimension.
pub fn cavity_fidelity(rho: &DensityMatrix, sq: &SqueezeCoeffs) -> Result<f64> {
    let d = squeezed_vacuum_dim(sq.r, sq.theta + PI)?.max(rho.dim());
    fidelity_ket(&cavity_dark_ket(d, sq)?, &rho.padded(d)?)
}

/// `ΔŶ₁, ΔŶ₂` of a state; `Undefined` cells when the truncation tail is too
/// heavy for the moments to be trusted.
fn y_deviations(rho: &DensityMatrix, theta: f64) -> Result<(Cell, Cell)> {
    let y = y_pair(rho.dim(), theta)?;
    let dev = |op| match variance(op, rho) {
        Ok(v) => Ok(Cell::Float(v.max(0.0).sqrt())),
        Err(Error::TruncationTail { .. }) => Ok(Cell::Undefined),
        Err(e) => Err(e),
    };
    Ok((dev(&y.y1)?, dev(&y.y2)?))
}

fn num_or_null(x: Option<f64>) -> Value {
    x.map_or(Value::Null, |v| json!(v))
}

/// Observables of a solved steady state, as written to `observables.json`.
pub fn steady_observables(run: &SteadyRun) -> Result<Value> {
    let sq = &run.params.squeeze;
    let mech = &run.mechanics;
    let (dy1, dy2) = y_deviations(mech, sq.theta)?;
    let mut obj = json!({
        "model": match run.which { Which::Full => "full", Which::Effective => "effective" },
        "method": match run.method { Method::Direct => "direct", _ => "evolve" },
        "r": sq.r,
        "theta": sq.theta,
        "dim_mech": run.params.dim_mech,
        "n_bar": mean_number(mech),
        "g2_zero": Cell::from_result(g2_from_state(mech))?.json(),
        "dY1": dy1.json(),
        "dY2": dy2.json(),
        "purity": purity(mech),
        "fidelity_vs_oracle": fidelity_with_oracle(mech, sq.r, sq.theta)?,
        "residual": run.solution.residual,
        "time": num_or_null(run.solution.time),
    });
    let extra = match run.which {
        Which::Effective => json!({
            "time_unit": "1/gamma",
            "jump_rate": jump_rate(&run.params)?,
        }),
        Which::Full => {
            let cav = run
                .cavity
                .as_ref()
                .ok_or_else(|| Error::Internal("full run without cavity state".into()))?;
            json!({
                "time_unit": "1/kappa",
                "dim_cavity": run.params.dim_cavity,
                "cavity_fidelity": cavity_fidelity(cav, sq)?,
                "cavity_n_bar": mean_number(cav),
            })
        }
    };
    if let (Value::Object(a), Value::Object(b)) = (&mut obj, extra) {
        a.extend(b);
    }
    Ok(obj)
}

fn populations_table(pops: &[f64]) -> Table {
    let mut t = Table::new(&["n", "P_n"]);
    for (n, &p) in pops.iter().enumerate() {
        t.push(vec![n.into(), p.into()]);
    }
    t
}

/// Writes `rho.json` (the mechanical state), `populations`, `observables.json`
/// and `regime.json`.
pub fn cmd_steady(config: &RunConfig, which: Which) -> Result<Written> {
    let run = solve_steady(config, which)?;
    let dir = &config.output.directory;
    let ext = config.output.format.extension();
    let mut out = Written::default();
    out.write(
        dir,
        "rho.json",
        &pretty(&density_matrix_json(&run.mechanics))?,
    )?;
    out.write(
        dir,
        &format!("populations.{ext}"),
        &populations_table(&run.mechanics.populations()).render(config.output.format)?,
    )?;
    out.write(
        dir,
        "observables.json",
        &pretty(&steady_observables(&run)?)?,
    )?;
    out.write(
        dir,
        "regime.json",
        &pretty(&serde_json::to_value(regime_check(&run.params))?)?,
    )?;
    Ok(out)
}

fn check_r(r: f64) -> Result<()> {
    if !(0.0..=MAX_R).contains(&r) {
        return Err(Error::Domain(format!(
            "r must lie in [0, {MAX_R}], got {r}"
        )));
    }
    Ok(())
}

/// One row `(r, n̄, g²(0), ΔY₁, ΔY₂, n̄+½)` of closed-form statistics.
pub fn oracle_row(r: f64) -> Result<Vec<Cell>> {
    check_r(r)?;
    let y = oracle::y_variances(r)?;
    Ok(vec![
        r.into(),
        oracle::mean_phonon(r)?.into(),
        Cell::from_result(oracle::g2_zero(r))?,
        y.dy1.into(),
        y.dy2.into(),
        y.bound.into(),
    ])
}

fn r_label(r: f64) -> String {
    format!("{r:.4}")
}

/// Writes `oracle` with one row per `r` and `populations_r<r>` per grid
/// point.
pub fn cmd_oracle(config: &RunConfig, r_grid: &[f64]) -> Result<Written> {
    config.validate()?;
    if r_grid.is_empty() {
        return Err(Error::Config("r grid is empty".into()));
    }
    for &r in r_grid {
        check_r(r)?;
    }
    let dir = &config.output.directory;
    let fmt = config.output.format;
    let ext = fmt.extension();
    let mut table = Table::new(&["r", "n_bar", "g2_zero", "dY1", "dY2", "bound"]);
    let mut out = Written::default();
    for &r in r_grid {
        table.push(oracle_row(r)?);
        let dist = oracle::phonon_distribution_auto(r, config.model.theta)?;
        out.write(
            dir,
            &format!("populations_r{}.{ext}", r_label(r)),
            &populations_table(dist.probabilities()).render(fmt)?,
        )?;
    }
    out.write(dir, &format!("oracle.{ext}"), &table.render(fmt)?)?;
    Ok(out)
}

fn wigner_table(w: &WignerGrid) -> Table {
    let mut t = Table::new(&["x", "p", "W"]);
    for (i, &x) in w.xs.iter().enumerate() {
        for (j, &p) in w.ps.iter().enumerate() {
            t.push(vec![x.into(), p.into(), w.values[[i, j]].into()]);
        }
    }
    t
}

fn wigner_metadata(w: &WignerGrid, x_max: f64) -> Result<Value> {
    let neg = negativity(w);
    Ok(json!({
        "x_max": x_max,
        "n_points": w.xs.len(),
        "cell_area": w.cell_area,
        "min_value": neg.min_value,
        "negative_volume": neg.negative_volume,
        "fourfold_defect": fourfold_defect(w)?,
        "normalization": w.normalization(),
        "contour_levels": CONTOUR_LEVELS,
    }))
}

/// State, grid and extent for a Wigner run at the config's `(r, θ)`.
fn wigner_for(config: &RunConfig, rho: &DensityMatrix) -> Result<(WignerGrid, f64)> {
    let x_max = config
        .wigner
        .x_max
        .unwrap_or_else(|| default_extent(mean_number(rho)));
    Ok((wigner_grid(rho, x_max, config.wigner.n_points)?, x_max))
}

/// Writes `wigner` (x, p, W) and the `wigner.json` sidecar.
pub fn cmd_wigner(config: &RunConfig, source: Source) -> Result<Written> {
    config.validate()?;
    let (r, theta) = (config.model.r, config.model.theta);
    let rho = match source {
        Source::Oracle => DensityMatrix::pure(&oracle_reference(r, theta)?),
        Source::Numeric => solve_steady(config, Which::Effective)?.mechanics,
    };
    let (grid, x_max) = wigner_for(config, &rho)?;
    let mut meta = wigner_metadata(&grid, x_max)?;
    meta["r"] = json!(r);
    meta["theta"] = json!(theta);
    meta["source"] = json!(match source {
        Source::Oracle => "oracle",
        Source::Numeric => "numeric",
    });
    let dir = &config.output.directory;
    let fmt = config.output.format;
    let mut out = Written::default();
    out.write(
        dir,
        &format!("wigner.{}", fmt.extension()),
        &wigner_table(&grid).render(fmt)?,
    )?;
    out.write(dir, "wigner.json", &pretty(&meta)?)?;
    Ok(out)
}

/// Squeeze strengths `0, 0.05, …, 2` used by the inset and variance
/// datasets.
pub fn figure_r_grid() -> Vec<f64> {
    (0..=40).map(|i| i as f64 / 20.0).collect()
}

/// `(r, θ)` of the four Wigner panels.
pub const WIGNER_PANELS: [(&str, f64, f64); 4] = [
    ("fig3a", 0.0, 0.0),
    ("fig3b", 0.5, 0.0),
    ("fig3c", 1.0, 0.0),
    ("fig3d", 1.0, PI),
];

/// Regenerates every figure dataset plus `manifest.json`. Model `r` and
/// `θ` from the config are ignored; the panels fix their own.
pub fn cmd_figures(config: &RunConfig) -> Result<Written> {
    config.validate()?;
    let dir = &config.output.directory;
    let fmt = config.output.format;
    let ext = fmt.extension();
    let mut datasets: Vec<(String, String, Value)> = Vec::new();

    let dist = oracle::phonon_distribution_auto(2.0, 0.0)?;
    datasets.push((
        format!("fig1_populations.{ext}"),
        populations_table(dist.probabilities()).render(fmt)?,
        json!({ "r": 2.0, "theta": 0.0 }),
    ));

    let mut inset = Table::new(&["r", "n_bar", "g2_zero"]);
    let mut variances = Table::new(&["r", "dY1", "dY2", "sqrt_bound", "bound"]);
    for r in figure_r_grid() {
        let y = oracle::y_variances(r)?;
        inset.push(vec![
            r.into(),
            oracle::mean_phonon(r)?.into(),
            Cell::from_result(oracle::g2_zero(r))?,
        ]);
        variances.push(vec![
            r.into(),
            y.dy1.into(),
            y.dy2.into(),
            y.bound.sqrt().into(),
            y.bound.into(),
        ]);
    }
    datasets.push((format!("fig1_inset.{ext}"), inset.render(fmt)?, json!({})));
    datasets.push((
        format!("fig2_variances.{ext}"),
        variances.render(fmt)?,
        json!({}),
    ));

    for (name, r, theta) in WIGNER_PANELS {
        let rho = DensityMatrix::pure(&oracle_reference(r, theta)?);
        let (grid, x_max) = wigner_for(config, &rho)?;
        let mut meta = wigner_metadata(&grid, x_max)?;
        meta["r"] = json!(r);
        meta["theta"] = json!(theta);
        datasets.push((
            format!("{name}_wigner.{ext}"),
            wigner_table(&grid).render(fmt)?,
            meta,
        ));
    }

    let mut out = Written::default();
    let mut entries = Vec::new();
    for (name, contents, meta) in &datasets {
        out.write(dir, name, contents)?;
        entries.push(json!({
            "name": name,
            "sha256": sha256_hex(contents.as_bytes()),
            "bytes": contents.len(),
            "metadata": meta,
        }));
    }
    let manifest = json!({
        "config_sha256": sha256_hex(config.canonical_json()?.as_bytes()),
        "contour_levels": CONTOUR_LEVELS,
        "files": entries,
    });
    out.write(dir, "manifest.json", &pretty(&manifest)?)?;
    Ok(out)
}
