//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always shown; the process fails when any
//! criterion outside `KNOWN_FAILURES` fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::*;
use quadsqueeze::cli::{fidelity_with_oracle, oracle_reference};
use quadsqueeze::fock::{
    annihilation, commutator, creation, squeezed_vacuum_dim, squeezed_vacuum_ket, DensityMatrix,
};
use quadsqueeze::liouvillian::{
    devectorize, dissipator, evolve, steady_state, steady_state_direct, vectorize, SteadyOptions,
};
use quadsqueeze::model::{
    bogoliubov_operator, effective_generator, full_generator, squeeze_coeffs, ModelParams,
};
use quadsqueeze::observables::{
    fidelity_ket, mean_number, partial_trace, variance, variance_ket, y_pair, Subsystem,
};
use quadsqueeze::oracle::{
    g2_zero, hyp2f1, ket_dim, klyshko, mean_phonon, phonon_distribution_auto, squeeze_z,
    steady_ket, y_variances, PhononDistribution,
};
use quadsqueeze::wigner::{
    default_extent, fourfold_defect, negativity, wigner_grid, WignerGrid, DEFAULT_POINTS,
};

/// Criteria expected to fail; see the project notes on the adiabatic
/// elimination check at the literal truncation.
const KNOWN_FAILURES: &[u32] = &[7];

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

type Check = quadsqueeze::Result<(bool, String)>;

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

fn off_family(rho: &DensityMatrix) -> f64 {
    rho.populations()
        .iter()
        .enumerate()
        .filter(|(n, _)| n % 4 != 0)
        .map(|(_, p)| p.abs())
        .sum()
}

fn r_grid() -> Vec<f64> {
    (1..=8).map(|i| i as f64 * 0.25).collect()
}

/// Effective-model state at `D ≡ 1 (mod 4)` whose last family level holds
/// less than `tail`, solved directly.
fn tail_safe_numeric(r: f64, tail: f64) -> quadsqueeze::Result<DensityMatrix> {
    let mut p = ModelParams::new(r, 0.0)?;
    p.dim_mech = ket_dim(r, tail)? - 2;
    let s = effective_generator(&p)?;
    Ok(steady_state_direct(&s, &DensityMatrix::ground(p.dim_mech)?)?.rho)
}

struct DarkStates {
    states: Vec<(f64, DensityMatrix)>,
}

fn criterion_1(shared: &mut DarkStates) -> Check {
    let mut pass = true;
    let mut parts = Vec::new();
    for r in [0.5, 1.0] {
        let p = ModelParams::new(r, 0.0)?;
        let s = effective_generator(&p)?;
        let start = Instant::now();
        let st = steady_state(
            &s,
            &DensityMatrix::ground(p.dim_mech)?,
            &SteadyOptions::default(),
        )?;
        let elapsed = start.elapsed();
        let f = fidelity_with_oracle(&st.rho, r, 0.0)?;
        pass &= f >= 0.999 && st.residual <= 1e-10 && elapsed <= Duration::from_secs(60);
        parts.push(format!(
            "r={r} D={} F={f:.8} residual={:.1e} {:.1}s",
            p.dim_mech,
            st.residual,
            elapsed.as_secs_f64()
        ));
        shared.states.push((r, st.rho));
    }
    Ok((pass, parts.join("; ")))
}

fn criterion_2(shared: &DarkStates) -> Check {
    let mut worst: f64 = 0.0;
    for (_, rho) in &shared.states {
        worst = worst.max(off_family(rho));
    }
    let mut exact_zeros = true;
    for r in [0.5, 1.0, 2.0, 3.0] {
        let d = phonon_distribution_auto(r, 0.3)?;
        exact_zeros &= d
            .probabilities()
            .iter()
            .enumerate()
            .all(|(n, &p)| n % 4 == 0 || p == 0.0);
    }
    Ok((
        worst <= 1e-8 && exact_zeros,
        format!("numerical off-family population {worst:.1e}; oracle exact zeros {exact_zeros}"),
    ))
}

fn criterion_3() -> Check {
    let (mut worst_oracle, mut worst_numeric): (f64, f64) = (0.0, 0.0);
    for r in r_grid() {
        let exact = y_variances(r)?;
        let dim = ket_dim(r, 1e-16)?;
        let ket = steady_ket(dim, r, 0.0)?;
        let y = y_pair(dim, 0.0)?;
        let dy1 = variance_ket(&y.y1, &ket)?.sqrt();
        let dy2 = variance_ket(&y.y2, &ket)?.sqrt();
        worst_oracle = worst_oracle
            .max(rel(dy1, exact.dy1))
            .max(rel(dy1 * dy2, exact.bound));

        let rho = tail_safe_numeric(r, 1e-10)?;
        let y = y_pair(rho.dim(), 0.0)?;
        let dy1 = variance(&y.y1, &rho)?.sqrt();
        let dy2 = variance(&y.y2, &rho)?.sqrt();
        worst_numeric = worst_numeric
            .max(rel(dy1, exact.dy1))
            .max(rel(dy1 * dy2, exact.bound));
    }
    Ok((
        worst_oracle <= 1e-8 && worst_numeric <= 1e-4,
        format!("worst relative error: oracle ket {worst_oracle:.1e}, numerical state {worst_numeric:.1e}"),
    ))
}

fn criterion_4() -> Check {
    let mut worst: f64 = 0.0;
    let mut increasing = true;
    let mut bunched = true;
    let mut prev = -1.0;
    for i in 0..=40 {
        let r = i as f64 / 20.0;
        let closed = mean_phonon(r)?;
        worst = worst.max(rel(phonon_distribution_auto(r, 0.0)?.mean(), closed));
        increasing &= closed > prev;
        prev = closed;
        if r > 0.0 {
            bunched &= g2_zero(r)? > 1.0;
        }
    }
    Ok((
        worst <= 1e-8 && increasing && bunched,
        format!(
            "Σ nP_n vs closed form {worst:.1e}; n̄ increasing {increasing}; g²(0) > 1 {bunched}"
        ),
    ))
}

fn criterion_5() -> Check {
    let dist = phonon_distribution_auto(1.0, 0.0)?;
    let (k4, k8) = (klyshko(&dist, 4)?, klyshko(&dist, 8)?);
    let lambda: f64 = 2.0;
    let mut pois = vec![(-lambda).exp()];
    for n in 1..80 {
        let last = pois[n - 1];
        pois.push(last * lambda / n as f64);
    }
    let pois = PhononDistribution::from_probabilities(pois)?;
    let mut worst: f64 = 0.0;
    for n in 1..30 {
        worst = worst.max((klyshko(&pois, n)? - 1.0).abs());
    }
    Ok((
        k4 == 0.0 && k8 == 0.0 && worst <= 1e-10,
        format!("K_4={k4} K_8={k8}; Poisson |K_n − 1| ≤ {worst:.1e}"),
    ))
}

fn timed_grid(
    rho: &DensityMatrix,
    x_max: f64,
    slowest: &mut Duration,
) -> quadsqueeze::Result<WignerGrid> {
    let start = Instant::now();
    let w = wigner_grid(rho, x_max, DEFAULT_POINTS)?;
    *slowest = (*slowest).max(start.elapsed());
    Ok(w)
}

fn criterion_6() -> Check {
    let mut slowest = Duration::ZERO;
    let oracle = DensityMatrix::pure(&oracle_reference(1.0, 0.0)?);
    let w = timed_grid(&oracle, default_extent(mean_number(&oracle)), &mut slowest)?;
    let neg = negativity(&w);
    let defect_oracle = fourfold_defect(&w)?;
    let norm_err = (w.normalization() - 1.0).abs();

    let numeric = tail_safe_numeric(1.0, 1e-8)?;
    let wn = timed_grid(
        &numeric,
        default_extent(mean_number(&numeric)),
        &mut slowest,
    )?;
    let defect_numeric = fourfold_defect(&wn)?;

    let small = tail_safe_numeric(0.5, 1e-8)?;
    timed_grid(&small, default_extent(mean_number(&small)), &mut slowest)?;

    let vac = timed_grid(
        &DensityMatrix::ground(4)?,
        default_extent(0.0),
        &mut slowest,
    )?;
    let mut vac_err: f64 = 0.0;
    for (i, &x) in vac.xs.iter().enumerate() {
        for (j, &p) in vac.ps.iter().enumerate() {
            vac_err = vac_err.max((vac.values[[i, j]] - (-x * x - p * p).exp() / PI).abs());
        }
    }
    let pass = neg.min_value < -1e-3
        && defect_oracle <= 1e-9
        && defect_numeric <= 1e-5
        && vac_err <= 1e-10
        && norm_err <= 5e-3
        && slowest <= Duration::from_secs(120);
    Ok((
        pass,
        format!(
            "min W={:.4e}; fourfold oracle {defect_oracle:.1e} (D={}), numerical {defect_numeric:.1e} (D={}); \
             vacuum {vac_err:.1e}; |norm−1|={norm_err:.1e}; slowest grid {:.1}s",
            neg.min_value,
            oracle.dim(),
            numeric.dim(),
            slowest.as_secs_f64()
        ),
    ))
}

fn full_fidelity(dims: (usize, usize), g2: f64) -> quadsqueeze::Result<f64> {
    let mut p = ModelParams::new(0.8, 0.0)?;
    p.kappa = 1.0;
    p.g2 = g2;
    p.dim_cavity = dims.0;
    p.dim_mech = dims.1;
    let s = full_generator(&p)?;
    let rho0 = DensityMatrix::product(
        &DensityMatrix::ground(dims.0)?,
        &DensityMatrix::ground(dims.1)?,
    );
    let st = steady_state_direct(&s, &rho0)?;
    fidelity_with_oracle(&partial_trace(&st.rho, Subsystem::Second)?, 0.8, 0.0)
}

fn criterion_7() -> Check {
    let couplings = [0.1, 0.05, 0.025];
    let start = Instant::now();
    let mut fids = Vec::new();
    for g2 in couplings {
        fids.push(full_fidelity((12, 40), g2)?);
    }
    let elapsed = start.elapsed();
    let monotone = fids.windows(2).all(|w| w[1] > w[0]);
    let pass = fids[1] >= 0.98 && monotone && elapsed <= Duration::from_secs(600);
    let mut diag = Vec::new();
    for g2 in couplings {
        diag.push(full_fidelity((13, 41), g2)?);
    }
    Ok((
        pass,
        format!(
            "dims (12,40), κ/g₂ = 10, 20, 40: F = {:.5}, {:.5}, {:.5} ({:.0}s); \
             at dims (13,41): F = {:.7}, {:.7}, {:.7}",
            fids[0],
            fids[1],
            fids[2],
            elapsed.as_secs_f64(),
            diag[0],
            diag[1],
            diag[2]
        ),
    ))
}

fn criterion_8() -> Check {
    let mut pass = true;
    let mut parts = Vec::new();
    for r in [0.4, 0.8, 1.2] {
        let dim = squeezed_vacuum_dim(r, 0.0)?;
        let s = dissipator(&bogoliubov_operator(dim, &squeeze_coeffs(r, 0.0)?)?, 1.0)?;
        let rho = steady_state_direct(&s, &DensityMatrix::ground(dim)?)?.rho;
        let f = fidelity_ket(&squeezed_vacuum_ket(dim, r, 0.0)?, &rho)?;
        let w = wigner_grid(&rho, default_extent(mean_number(&rho)), DEFAULT_POINTS)?;
        let defect = fourfold_defect(&w)?;
        pass &= f >= 1.0 - 1e-6 && defect > 1e-3;
        parts.push(format!(
            "r={r} D={dim} 1−F={:.1e} fourfold={defect:.3}",
            1.0 - f
        ));
    }
    Ok((pass, parts.join("; ")))
}

fn criterion_9() -> Check {
    let mut trace_herm: f64 = 0.0;
    let mut rk_err: f64 = 0.0;
    for d in 2..=4 {
        for seed in 0..4u64 {
            let s = random_generator(d, 1000 * d as u64 + seed);
            let rho = random_state(d, 77 + seed);
            let out = s.apply(&rho)?;
            trace_herm = trace_herm
                .max(out.trace().norm())
                .max(out.hermiticity_deviation())
                .max(s.trace_defect());
            let t = 0.9;
            let exact = expm(&(s.to_dense() * C::new(t, 0.0))).dot(&vectorize(&rho));
            let exact = devectorize(&exact, d)?;
            rk_err = rk_err.max(max_diff(&evolve(&s, &rho, t, 0.01, 1e-9)?, &exact));
        }
    }
    let mut f_err: f64 = 0.0;
    for (a, b, c) in [
        (0.5, 0.25, 0.75),
        (1.5, 1.25, 1.75),
        (2.5, 2.25, 2.75),
        (0.3, 0.7, 1.9),
    ] {
        for r in [0.2, 0.7, 1.3, 2.0] {
            let z = squeeze_z(r);
            f_err = f_err.max(rel(hyp2f1(a, b, c, z)?, hyp2f1_dd(a, b, c, z)));
        }
    }
    let mut edge_ok = true;
    for d in [2, 5, 17, 40] {
        let c = commutator(&annihilation(d)?, &creation(d)?)?;
        for n in 0..d {
            let expect = if n + 1 == d { -((d - 1) as f64) } else { 1.0 };
            edge_ok &= (c.get(n, n).re - expect).abs() <= 1e-12 * d as f64;
        }
    }
    Ok((
        trace_herm <= 1e-12 && rk_err <= 1e-7 && f_err <= 1e-12 && edge_ok,
        format!(
            "trace/Hermiticity {trace_herm:.1e}; RK4 vs expm {rk_err:.1e}; ₂F₁ vs double-double {f_err:.1e}; \
             commutator edge {edge_ok}"
        ),
    ))
}

fn record(out: &mut Vec<Outcome>, id: u32, name: &'static str, check: Check) {
    let (pass, detail) = match check {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    let tag = match (pass, KNOWN_FAILURES.contains(&id)) {
        (true, _) => "PASS",
        (false, true) => "FAIL (known)",
        (false, false) => "FAIL",
    };
    println!("{tag} criterion {id} [{name}]: {detail}");
    out.push(Outcome {
        id,
        name,
        pass,
        detail,
    });
}

fn main() {
    let start = Instant::now();
    let mut out = Vec::new();
    let mut shared = DarkStates { states: Vec::new() };
    record(
        &mut out,
        1,
        "dark-state reproduction",
        criterion_1(&mut shared),
    );
    record(&mut out, 2, "family support", criterion_2(&shared));
    record(&mut out, 3, "amplitude-squared squeezing", criterion_3());
    record(
        &mut out,
        4,
        "mean phonon number and statistics",
        criterion_4(),
    );
    record(&mut out, 5, "Klyshko figures of merit", criterion_5());
    record(&mut out, 6, "Wigner negativity and symmetry", criterion_6());
    record(&mut out, 7, "adiabatic elimination", criterion_7());
    record(&mut out, 8, "Bogoliubov cross-check", criterion_8());
    record(&mut out, 9, "property suites", criterion_9());

    let passed = out.iter().filter(|o| o.pass).count();
    let unexpected: Vec<&Outcome> = out
        .iter()
        .filter(|o| !o.pass && !KNOWN_FAILURES.contains(&o.id))
        .collect();
    println!(
        "acceptance: {passed}/{} criteria pass ({:.0}s)",
        out.len(),
        start.elapsed().as_secs_f64()
    );
    if !unexpected.is_empty() {
        for o in unexpected {
            eprintln!(
                "unexpected failure: criterion {} [{}]: {}",
                o.id, o.name, o.detail
            );
        }
        std::process::exit(1);
    }
}
