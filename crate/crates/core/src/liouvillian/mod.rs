//! Lindblad generators as sparse superoperators on column-stacked density
//! matrices, plus time integration and steady-state solvers.
//!
//! With column stacking, `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)` and the entry `ρ_ij`
//! sits at index `i + j·D`.

mod csr;
mod direct;
mod integrate;

use ndarray::Array1;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, Operator, HERMITIAN_TOL};

pub(crate) use csr::Csr;
pub use direct::steady_state_direct;
pub use integrate::{evolve, spectral_norm_estimate, steady_state, SteadyOptions, SteadyState};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermKind {
    Hamiltonian,
    Dissipator,
}

/// One constituent of an assembled generator. For a Hamiltonian term `rate`
/// is the largest entry magnitude of `H`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub kind: TermKind,
    pub rate: f64,
    pub label: String,
}

/// Sparse `D²×D²` generator acting on vectorized density matrices.
#[derive(Clone, Debug)]
pub struct Superoperator {
    hilbert_dim: usize,
    mode_dims: Option<(usize, usize)>,
    action: Csr,
    term_log: Vec<Term>,
}

impl Superoperator {
    /// The zero map, with an empty term log.
    pub fn zero(hilbert_dim: usize) -> Self {
        Self {
            hilbert_dim,
            mode_dims: None,
            action: Csr::zeros(hilbert_dim * hilbert_dim),
            term_log: Vec::new(),
        }
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn mode_dims(&self) -> Option<(usize, usize)> {
        self.mode_dims
    }

    pub fn term_log(&self) -> &[Term] {
        &self.term_log
    }

    pub fn nnz(&self) -> usize {
        self.action.nnz()
    }

    /// Entry of the action matrix.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.action.get(row, col)
    }

    /// Relabels every term in the log.
    pub fn labelled(mut self, label: &str) -> Self {
        for t in &mut self.term_log {
            t.label = label.to_string();
        }
        self
    }

    /// Smallest positive dissipator rate in the term log.
    pub fn slowest_rate(&self) -> Option<f64> {
        self.term_log
            .iter()
            .filter(|t| t.kind == TermKind::Dissipator && t.rate > 0.0)
            .map(|t| t.rate)
            .reduce(f64::min)
    }

    /// Largest dissipator rate, or 1 when there is none. Steady-state
    /// residuals are reported in these units so that stopping tolerances do
    /// not depend on the choice of time unit.
    pub fn rate_scale(&self) -> f64 {
        self.term_log
            .iter()
            .filter(|t| t.kind == TermKind::Dissipator && t.rate > 0.0)
            .map(|t| t.rate)
            .reduce(f64::max)
            .unwrap_or(1.0)
    }

    pub(crate) fn action(&self) -> &Csr {
        &self.action
    }

    pub fn apply_vec(&self, v: &Array1<Complex64>) -> Result<Array1<Complex64>> {
        let n = self.hilbert_dim * self.hilbert_dim;
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let x = v.to_vec();
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        self.action.matvec(&x, &mut y);
        Ok(Array1::from(y))
    }

    /// `dρ/dt` for the given state. The result is not a density matrix but
    /// shares the container.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = devectorize(&self.apply_vec(&vectorize(rho))?, self.hilbert_dim)?;
        Ok(match rho.mode_dims() {
            Some(d) => out.with_mode_dims(d)?,
            None => out,
        })
    }

    /// Dense copy of the action, for small test oracles.
    pub fn to_dense(&self) -> ndarray::Array2<Complex64> {
        let n = self.action.n();
        let mut out = ndarray::Array2::zeros((n, n));
        for (r, c, v) in self.action.triplets() {
            out[[r, c]] = v;
        }
        out
    }

    /// max over columns of |Σ_i S[(i,i), col]|, which vanishes for a
    /// trace-preserving generator.
    pub fn trace_defect(&self) -> f64 {
        let d = self.hilbert_dim;
        let mut sums = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for (c, v) in self.action.row(i + i * d) {
                sums[c] += v;
            }
        }
        sums.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }
}

fn l_dagger_l(l: &Operator) -> Vec<(usize, usize, Complex64)> {
    // (L†L)_ik = Σ_j conj(L_ji) L_jk, accumulated row by row of L
    let d = l.dim();
    let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); d];
    for (j, k, v) in l.nonzeros() {
        rows[j].push((k, v));
    }
    let mut acc = ndarray::Array2::<Complex64>::zeros((d, d));
    for row in &rows {
        for &(i, vi) in row {
            for &(k, vk) in row {
                acc[[i, k]] += vi.conj() * vk;
            }
        }
    }
    acc.indexed_iter()
        .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
        .map(|((i, k), v)| (i, k, *v))
        .collect()
}

/// Generator of `ρ ↦ −i[H, ρ]`, i.e. `−i(I⊗H − Hᵀ⊗I)`.
pub fn hamiltonian_term(h: &Operator) -> Result<Superoperator> {
    let dev = h.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NonHermitian { deviation: dev });
    }
    let d = h.dim();
    let minus_i = Complex64::new(0.0, -1.0);
    let nz = h.nonzeros();
    let mut trips = Vec::with_capacity(2 * nz.len() * d);
    for &(a, b, v) in &nz {
        for j in 0..d {
            // −i H ρ: (i=a, j) ← (k=b, j)
            trips.push((a + j * d, b + j * d, minus_i * v));
            // +i ρ H: (i, j=b) ← (i, l=a)
            trips.push((j + b * d, j + a * d, -minus_i * v));
        }
    }
    let scale = nz.iter().map(|t| t.2.norm()).fold(0.0, f64::max);
    Ok(Superoperator {
        hilbert_dim: d,
        mode_dims: h.mode_dims(),
        action: Csr::from_triplets(d * d, trips),
        term_log: vec![Term {
            kind: TermKind::Hamiltonian,
            rate: scale,
            label: "hamiltonian".into(),
        }],
    })
}

/// Generator of `ρ ↦ rate·(LρL† − ½L†Lρ − ½ρL†L)`.
pub fn dissipator(l: &Operator, rate: f64) -> Result<Superoperator> {
    if !(rate >= 0.0) || !rate.is_finite() {
        return Err(Error::NegativeRate(rate));
    }
    let d = l.dim();
    let log = vec![Term {
        kind: TermKind::Dissipator,
        rate,
        label: "dissipator".into(),
    }];
    if rate == 0.0 {
        return Ok(Superoperator {
            hilbert_dim: d,
            mode_dims: l.mode_dims(),
            action: Csr::zeros(d * d),
            term_log: log,
        });
    }
    let nz = l.nonzeros();
    let ldl = l_dagger_l(l);
    let mut trips = Vec::with_capacity(nz.len() * nz.len() + 2 * ldl.len() * d);
    // L ρ L†: (i, j) ← (k, l) with L_ik conj(L_jl)
    for &(i, k, lik) in &nz {
        for &(j, l_, ljl) in &nz {
            trips.push((i + j * d, k + l_ * d, rate * lik * ljl.conj()));
        }
    }
    let half = -0.5 * rate;
    for &(a, b, m) in &ldl {
        for j in 0..d {
            // −½ L†L ρ
            trips.push((a + j * d, b + j * d, half * m));
            // −½ ρ L†L: (i, j=b) ← (i, l=a) with M_ab
            trips.push((j + b * d, j + a * d, half * m));
        }
    }
    Ok(Superoperator {
        hilbert_dim: d,
        mode_dims: l.mode_dims(),
        action: Csr::from_triplets(d * d, trips),
        term_log: log,
    })
}

/// Sum of two generators; term logs are concatenated.
pub fn add(s1: &Superoperator, s2: &Superoperator) -> Result<Superoperator> {
    if s1.hilbert_dim != s2.hilbert_dim {
        return Err(Error::DimensionMismatch {
            expected: s1.hilbert_dim,
            found: s2.hilbert_dim,
        });
    }
    let mut log = s1.term_log.clone();
    log.extend(s2.term_log.iter().cloned());
    Ok(Superoperator {
        hilbert_dim: s1.hilbert_dim,
        mode_dims: s1.mode_dims.or(s2.mode_dims),
        action: s1.action.add(&s2.action),
        term_log: log,
    })
}

/// Scales every rate by `factor ≥ 0`, e.g. to change time units.
pub fn scale(s: &Superoperator, factor: f64) -> Result<Superoperator> {
    if !(factor >= 0.0) || !factor.is_finite() {
        return Err(Error::NegativeRate(factor));
    }
    Ok(Superoperator {
        hilbert_dim: s.hilbert_dim,
        mode_dims: s.mode_dims,
        action: s.action.scaled(factor),
        term_log: s
            .term_log
            .iter()
            .map(|t| Term {
                rate: t.rate * factor,
                ..t.clone()
            })
            .collect(),
    })
}

/// Column-stacked vector of `ρ`.
pub fn vectorize(rho: &DensityMatrix) -> Array1<Complex64> {
    let m = rho.matrix();
    Array1::from_iter(m.t().iter().copied())
}

/// Inverse of [`vectorize`]; the result is not validated.
pub fn devectorize(v: &Array1<Complex64>, dim: usize) -> Result<DensityMatrix> {
    if v.len() != dim * dim {
        return Err(Error::DimensionMismatch {
            expected: dim * dim,
            found: v.len(),
        });
    }
    let m = ndarray::Array2::from_shape_fn((dim, dim), |(i, j)| v[i + j * dim]);
    DensityMatrix::from_raw(m)
}
