use ndarray::Array1;
use num_complex::Complex64;

use super::{devectorize, vectorize, Csr, Superoperator};
use crate::error::{Error, Result};
use crate::fock::DensityMatrix;

/// Step bound: `h·‖S‖ ≤ STEP_SAFETY`.
const STEP_SAFETY: f64 = 0.1;
const POWER_ITERATIONS: usize = 40;
const FINITE_CHECK_EVERY: usize = 256;

/// The generator restricted to the indices reachable from the initial
/// state's support. Dynamics never leave this invariant subspace, so the
/// restriction is exact.
pub(crate) struct Sector {
    pub indices: Vec<usize>,
    pub op: Csr,
}

impl Sector {
    pub fn new(s: &Superoperator, x0: &Array1<Complex64>) -> Self {
        let seeds: Vec<usize> = x0
            .iter()
            .enumerate()
            .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
            .map(|(i, _)| i)
            .collect();
        let indices = s.action().reachable_from(&seeds);
        let op = s.action().restrict(&indices);
        Self { indices, op }
    }

    pub fn gather(&self, x: &Array1<Complex64>) -> Vec<Complex64> {
        self.indices.iter().map(|&i| x[i]).collect()
    }

    pub fn scatter(&self, y: &[Complex64], n: usize) -> Array1<Complex64> {
        let mut out = Array1::zeros(n);
        for (&i, &v) in self.indices.iter().zip(y) {
            out[i] = v;
        }
        out
    }

    /// Local positions of the diagonal entries `ρ_ii`.
    pub fn diagonal_positions(&self, dim: usize) -> Vec<usize> {
        self.indices
            .iter()
            .enumerate()
            .filter(|(_, &g)| g % dim == g / dim)
            .map(|(k, _)| k)
            .collect()
    }
}

fn power_norm(op: &Csr) -> f64 {
    let n = op.n();
    if n == 0 || op.nnz() == 0 {
        return 0.0;
    }
    let adj = op.adjoint();
    let mut v: Vec<Complex64> = (0..n)
        .map(|k| Complex64::new(1.0 + (k % 7) as f64 / 7.0, (k % 3) as f64 / 5.0))
        .collect();
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut lambda = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        v.iter_mut().for_each(|c| *c /= norm);
        op.matvec(&v, &mut w);
        adj.matvec(&w, &mut v);
        lambda = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    }
    lambda.sqrt()
}

/// Spectral-norm estimate of the generator restricted to the sector reached
/// from `rho0`, by power iteration on `S†S`.
pub fn spectral_norm_estimate(s: &Superoperator, rho0: &DensityMatrix) -> Result<f64> {
    check_state(s, rho0)?;
    Ok(power_norm(&Sector::new(s, &vectorize(rho0)).op))
}

fn check_state(s: &Superoperator, rho0: &DensityMatrix) -> Result<()> {
    if rho0.dim() != s.hilbert_dim() {
        return Err(Error::DimensionMismatch {
            expected: s.hilbert_dim(),
            found: rho0.dim(),
        });
    }
    rho0.validate()
}

struct Rk4 {
    op: Csr,
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl Rk4 {
    fn new(op: Csr) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); op.n()];
        Self {
            op,
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            tmp: z,
        }
    }

    fn derivative(&mut self, x: &[Complex64]) {
        self.op.matvec(x, &mut self.k1);
    }

    /// Completes a step from `x` given `k1 = S x` already computed.
    fn finish_step(&mut self, x: &mut [Complex64], h: f64) {
        let half = 0.5 * h;
        for ((t, xi), k) in self.tmp.iter_mut().zip(x.iter()).zip(&self.k1) {
            *t = xi + k * half;
        }
        self.op.matvec(&self.tmp, &mut self.k2);
        for ((t, xi), k) in self.tmp.iter_mut().zip(x.iter()).zip(&self.k2) {
            *t = xi + k * half;
        }
        self.op.matvec(&self.tmp, &mut self.k3);
        for ((t, xi), k) in self.tmp.iter_mut().zip(x.iter()).zip(&self.k3) {
            *t = xi + k * h;
        }
        self.op.matvec(&self.tmp, &mut self.k4);
        let sixth = h / 6.0;
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += (self.k1[i] + (self.k2[i] + self.k3[i]) * 2.0 + self.k4[i]) * sixth;
        }
    }
}

fn trace_of(sector: &Sector, dim: usize, x: &[Complex64]) -> Complex64 {
    sector
        .diagonal_positions(dim)
        .into_iter()
        .map(|k| x[k])
        .sum()
}

fn all_finite(x: &[Complex64]) -> bool {
    x.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

fn rebuild(
    s: &Superoperator,
    rho0: &DensityMatrix,
    sector: &Sector,
    x: &[Complex64],
) -> Result<DensityMatrix> {
    let d = s.hilbert_dim();
    let out = devectorize(&sector.scatter(x, d * d), d)?;
    match rho0.mode_dims() {
        Some(m) => out.with_mode_dims(m),
        None => Ok(out),
    }
}

/// `ρ(t_final)` by classic fixed-step RK4 on the reachable sector, with the
/// step `h ≤ dt_max` and `h·‖S‖ ≤ 0.1`. The trace may drift by at most `tol`
/// over the run.
pub fn evolve(
    s: &Superoperator,
    rho0: &DensityMatrix,
    t_final: f64,
    dt_max: f64,
    tol: f64,
) -> Result<DensityMatrix> {
    check_state(s, rho0)?;
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::Domain(format!(
            "t_final must be finite and ≥ 0, got {t_final}"
        )));
    }
    if !(dt_max > 0.0) {
        return Err(Error::Domain(format!(
            "dt_max must be positive, got {dt_max}"
        )));
    }
    if t_final == 0.0 {
        return Ok(rho0.clone());
    }
    let v0 = vectorize(rho0);
    let sector = Sector::new(s, &v0);
    let norm = power_norm(&sector.op);
    let h_max = if norm > 0.0 {
        dt_max.min(STEP_SAFETY / norm)
    } else {
        dt_max
    };
    let steps = (t_final / h_max).ceil().max(1.0) as usize;
    let h = t_final / steps as f64;

    let mut x = sector.gather(&v0);
    let tr0 = trace_of(&sector, s.hilbert_dim(), &x);
    let mut rk = Rk4::new(sector.op.clone());
    for step in 0..steps {
        rk.derivative(&x);
        rk.finish_step(&mut x, h);
        if (step + 1) % FINITE_CHECK_EVERY == 0 && !all_finite(&x) {
            return Err(Error::NonFinite {
                time: (step + 1) as f64 * h,
            });
        }
    }
    if !all_finite(&x) {
        return Err(Error::NonFinite { time: t_final });
    }
    let drift = (trace_of(&sector, s.hilbert_dim(), &x) - tr0).norm();
    if drift > tol {
        return Err(Error::TraceDrift {
            drift,
            tolerance: tol,
        });
    }
    rebuild(s, rho0, &sector, &x)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SteadyOptions {
    /// Stop once max-abs of the vectorized derivative, in units of the
    /// generator's fastest dissipator rate, is at most this.
    pub stop_tol: f64,
    /// Defaults to 50 over the slowest dissipator rate.
    pub t_cap: Option<f64>,
    /// Upper bound on the step in addition to the norm-based bound.
    pub dt_max: Option<f64>,
    /// Allowed trace drift over the run.
    pub trace_tol: f64,
}

impl Default for SteadyOptions {
    fn default() -> Self {
        Self {
            stop_tol: 1e-10,
            t_cap: None,
            dt_max: None,
            trace_tol: 1e-8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SteadyState {
    pub rho: DensityMatrix,
    /// max-abs of the vectorized derivative at `rho`, divided by
    /// [`Superoperator::rate_scale`].
    pub residual: f64,
    /// Evolution time reached; `None` for the direct solver.
    pub time: Option<f64>,
}

/// Evolves from `rho0` with RK4 until the residual `‖Sρ‖_max / rate_scale`
/// drops to `stop_tol`, returning the first state that meets it. The stationary state
/// reached depends on `rho0` when the generator has several.
pub fn steady_state(
    s: &Superoperator,
    rho0: &DensityMatrix,
    opts: &SteadyOptions,
) -> Result<SteadyState> {
    check_state(s, rho0)?;
    let v0 = vectorize(rho0);
    let sector = Sector::new(s, &v0);
    let mut x = sector.gather(&v0);
    let tr0 = trace_of(&sector, s.hilbert_dim(), &x);
    let mut rk = Rk4::new(sector.op.clone());

    let scale = s.rate_scale();
    rk.derivative(&x);
    let mut residual = max_abs(&rk.k1) / scale;
    if residual <= opts.stop_tol {
        return Ok(SteadyState {
            rho: rebuild(s, rho0, &sector, &x)?,
            residual,
            time: Some(0.0),
        });
    }
    let t_cap = match opts.t_cap {
        Some(t) => t,
        None => match s.slowest_rate() {
            Some(rate) => 50.0 / rate,
            None => {
                return Err(Error::Domain(
                    "no dissipator rate to set a default t_cap".into(),
                ))
            }
        },
    };
    let norm = power_norm(&sector.op);
    let mut h = STEP_SAFETY / norm;
    if let Some(dt) = opts.dt_max {
        h = h.min(dt);
    }
    let mut t = 0.0;
    let mut step = 0usize;
    loop {
        if !residual.is_finite() {
            return Err(Error::NonFinite { time: t });
        }
        if residual <= opts.stop_tol {
            break;
        }
        if t >= t_cap {
            return Err(Error::NotConverged { residual, time: t });
        }
        rk.finish_step(&mut x, h);
        step += 1;
        t = step as f64 * h;
        rk.derivative(&x);
        residual = max_abs(&rk.k1) / scale;
    }
    let drift = (trace_of(&sector, s.hilbert_dim(), &x) - tr0).norm();
    if drift > opts.trace_tol {
        return Err(Error::TraceDrift {
            drift,
            tolerance: opts.trace_tol,
        });
    }
    Ok(SteadyState {
        rho: rebuild(s, rho0, &sector, &x)?,
        residual,
        time: Some(t),
    })
}

pub(crate) fn max_abs(x: &[Complex64]) -> f64 {
    x.iter()
        .map(|c| c.norm())
        .fold(0.0, |a, b| if b > a || b.is_nan() { b } else { a })
}
