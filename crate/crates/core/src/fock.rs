//! Operators and states on truncated single-mode and two-mode Fock spaces.
//!
//! A mode truncated at dimension `D` keeps the number states `|0⟩ … |D−1⟩`.
//! Ladder operators are the exact matrix elements restricted to that block,
//! so `[b, b†]` equals the identity everywhere except the bottom-right entry,
//! which is `−(D−1)`. Every factory that builds a physical state checks the
//! amplitude left on the top levels and refuses to return a state whose
//! truncation is visible at the stated tolerance.

use std::ops::{Add, Mul, Sub};

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Amplitude magnitude allowed on each of the top two retained levels of a
/// factory-built state.
pub const FACTORY_TAIL_TOL: f64 = 1e-8;

/// Hermiticity tolerance for density matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Dense operator on a truncated Fock space, optionally carrying the
/// `(D_a, D_b)` factor dimensions of a two-mode tensor product.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    data: Array2<Complex64>,
    mode_dims: Option<(usize, usize)>,
}

impl Operator {
    pub fn from_matrix(data: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = data.dim();
        if rows != cols {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: cols,
            });
        }
        if rows == 0 {
            return Err(Error::InvalidDimension {
                what: "operator",
                dim: 0,
                min: 1,
            });
        }
        Ok(Self {
            data,
            mode_dims: None,
        })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: Array2::zeros((dim, dim)),
            mode_dims: None,
        }
    }

    /// Attach two-mode structure. Fails unless `dims.0 * dims.1 == self.dim()`.
    pub fn with_mode_dims(mut self, dims: (usize, usize)) -> Result<Self> {
        if dims.0 * dims.1 != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dims.0 * dims.1,
            });
        }
        self.mode_dims = Some(dims);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn mode_dims(&self) -> Option<(usize, usize)> {
        self.mode_dims
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn into_matrix(self) -> Array2<Complex64> {
        self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[[row, col]]
    }

    pub fn trace(&self) -> Complex64 {
        self.data.diag().sum()
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        Operator {
            data: &self.data * factor,
            mode_dims: self.mode_dims,
        }
    }

    /// max |A − A†| over all entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        max_hermiticity_deviation(&self.data)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Coordinate-list view of the exactly nonzero entries, row-major.
    pub fn nonzeros(&self) -> Vec<(usize, usize, Complex64)> {
        self.data
            .indexed_iter()
            .filter(|(_, v)| **v != ZERO)
            .map(|((i, j), v)| (i, j, *v))
            .collect()
    }

    /// Largest absolute entry difference, for tests and diagnostics.
    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

impl Add for &Operator {
    type Output = Operator;

    /// Panics if the dimensions differ.
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator {
            data: &self.data + &rhs.data,
            mode_dims: self.mode_dims.or(rhs.mode_dims),
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;

    /// Panics if the dimensions differ.
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator {
            data: &self.data - &rhs.data,
            mode_dims: self.mode_dims.or(rhs.mode_dims),
        }
    }
}

impl Mul<Complex64> for &Operator {
    type Output = Operator;

    fn mul(self, rhs: Complex64) -> Operator {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;

    fn mul(self, rhs: f64) -> Operator {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

/// State vector on a truncated Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    amps: Array1<Complex64>,
}

impl Ket {
    /// Wraps raw amplitudes without normalizing.
    pub fn from_amplitudes(amps: Array1<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidDimension {
                what: "ket",
                dim: 0,
                min: 1,
            });
        }
        Ok(Self { amps })
    }

    /// Number state `|n⟩` in a space of dimension `dim`.
    pub fn basis(dim: usize, n: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::InvalidDimension {
                what: "basis ket",
                dim,
                min: n + 1,
            });
        }
        let mut amps = Array1::zeros(dim);
        amps[n] = ONE;
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn normalized(&self) -> Result<Ket> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Domain(
                "cannot normalize a zero or non-finite ket".into(),
            ));
        }
        Ok(Ket {
            amps: self.amps.mapv(|c| c / n),
        })
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amps.iter().map(|c| c.norm_sqr()).collect()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Ket) -> Result<Complex64> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Zero-extends the ket into a larger truncation.
    pub fn padded(&self, dim: usize) -> Result<Ket> {
        if dim < self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dim,
            });
        }
        let mut amps = Array1::zeros(dim);
        amps.slice_mut(ndarray::s![..self.dim()]).assign(&self.amps);
        Ok(Ket { amps })
    }
}

/// Density matrix, optionally with the `(D_a, D_b)` structure of a two-mode
/// state.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    data: Array2<Complex64>,
    mode_dims: Option<(usize, usize)>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and nonnegative diagonal.
    pub fn new(data: Array2<Complex64>) -> Result<Self> {
        let rho = Self::from_raw(data)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps a square matrix without the physical checks. Integrator outputs
    /// go through here; their invariants are asserted by the callers' tests.
    pub fn from_raw(data: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = data.dim();
        if rows != cols {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: cols,
            });
        }
        if rows == 0 {
            return Err(Error::InvalidDimension {
                what: "density matrix",
                dim: 0,
                min: 1,
            });
        }
        Ok(Self {
            data,
            mode_dims: None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let dev = max_hermiticity_deviation(&self.data);
        if dev > HERMITIAN_TOL {
            return Err(Error::NonHermitian { deviation: dev });
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Domain(format!(
                "density matrix trace {tr} differs from 1"
            )));
        }
        if let Some(d) = self.data.diag().iter().find(|d| d.re < -HERMITIAN_TOL) {
            return Err(Error::Domain(format!(
                "density matrix has negative population {}",
                d.re
            )));
        }
        Ok(())
    }

    pub fn pure(ket: &Ket) -> Self {
        let a = &ket.amps;
        let data = Array2::from_shape_fn((a.len(), a.len()), |(i, j)| a[i] * a[j].conj());
        Self {
            data,
            mode_dims: None,
        }
    }

    pub fn fock(dim: usize, n: usize) -> Result<Self> {
        Ok(Self::pure(&Ket::basis(dim, n)?))
    }

    pub fn ground(dim: usize) -> Result<Self> {
        Self::fock(dim, 0)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension {
                what: "density matrix",
                dim,
                min: 1,
            });
        }
        let data = Array2::from_diag_elem(dim, Complex64::new(1.0 / dim as f64, 0.0));
        Ok(Self {
            data,
            mode_dims: None,
        })
    }

    /// ρ_a ⊗ ρ_b with the mode structure recorded.
    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Self {
        Self {
            data: kron_arrays(&a.data, &b.data),
            mode_dims: Some((a.dim(), b.dim())),
        }
    }

    pub fn with_mode_dims(mut self, dims: (usize, usize)) -> Result<Self> {
        if dims.0 * dims.1 != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dims.0 * dims.1,
            });
        }
        self.mode_dims = Some(dims);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn mode_dims(&self) -> Option<(usize, usize)> {
        self.mode_dims
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn into_matrix(self) -> Array2<Complex64> {
        self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[[row, col]]
    }

    pub fn trace(&self) -> Complex64 {
        self.data.diag().sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        max_hermiticity_deviation(&self.data)
    }

    /// Real parts of the diagonal.
    pub fn populations(&self) -> Vec<f64> {
        self.data.diag().iter().map(|c| c.re).collect()
    }

    /// Population on the top two retained levels of a single-mode state.
    pub fn top_levels_population(&self) -> f64 {
        let d = self.dim();
        self.data
            .diag()
            .iter()
            .skip(d.saturating_sub(2))
            .map(|c| c.re.abs())
            .sum()
    }

    /// Zero-extends a single-mode state into a larger truncation.
    pub fn padded(&self, dim: usize) -> Result<DensityMatrix> {
        if dim < self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dim,
            });
        }
        let d = self.dim();
        let mut data = Array2::zeros((dim, dim));
        data.slice_mut(ndarray::s![..d, ..d]).assign(&self.data);
        Ok(DensityMatrix {
            data,
            mode_dims: None,
        })
    }
}

pub(crate) fn max_hermiticity_deviation(m: &Array2<Complex64>) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    dev
}

fn check_min_dim(what: &'static str, dim: usize, min: usize) -> Result<()> {
    if dim < min {
        Err(Error::InvalidDimension { what, dim, min })
    } else {
        Ok(())
    }
}

fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(Error::DimensionMismatch { expected, found })
    } else {
        Ok(())
    }
}

/// `b` with `b|n⟩ = √n |n−1⟩`.
pub fn annihilation(dim: usize) -> Result<Operator> {
    annihilation_power(dim, 1)
}

/// `b^k` built from its exact matrix elements `⟨n−k|b^k|n⟩ = √(n!/(n−k)!)`.
/// On a truncated space this coincides with the k-fold matrix product of
/// `annihilation(dim)`.
pub fn annihilation_power(dim: usize, k: usize) -> Result<Operator> {
    check_min_dim("annihilation operator", dim, 2)?;
    let mut data = Array2::zeros((dim, dim));
    for n in k..dim {
        let elem: f64 = (n + 1 - k..=n).map(|j| j as f64).product::<f64>().sqrt();
        data[[n - k, n]] = Complex64::new(elem, 0.0);
    }
    Ok(Operator {
        data,
        mode_dims: None,
    })
}

pub fn creation(dim: usize) -> Result<Operator> {
    Ok(dagger(&annihilation(dim)?))
}

/// `(b†)^k`.
pub fn creation_power(dim: usize, k: usize) -> Result<Operator> {
    Ok(dagger(&annihilation_power(dim, k)?))
}

pub fn number_operator(dim: usize) -> Result<Operator> {
    check_min_dim("number operator", dim, 2)?;
    let data = Array2::from_diag(&Array1::from_iter(
        (0..dim).map(|n| Complex64::new(n as f64, 0.0)),
    ));
    Ok(Operator {
        data,
        mode_dims: None,
    })
}

pub fn identity(dim: usize) -> Result<Operator> {
    check_min_dim("identity", dim, 2)?;
    Ok(Operator {
        data: Array2::from_diag_elem(dim, ONE),
        mode_dims: None,
    })
}

fn kron_arrays(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let (da, db) = (a.nrows(), b.nrows());
    let mut out = Array2::zeros((da * db, da * db));
    for ((i, j), &av) in a.indexed_iter() {
        if av == ZERO {
            continue;
        }
        for ((k, l), &bv) in b.indexed_iter() {
            out[[i * db + k, j * db + l]] = av * bv;
        }
    }
    out
}

/// Kronecker product `A ⊗ B`; the first factor is the slow index.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    Operator {
        data: kron_arrays(&a.data, &b.data),
        mode_dims: Some((a.dim(), b.dim())),
    }
}

pub fn dagger(a: &Operator) -> Operator {
    Operator {
        data: a.data.t().mapv(|z| z.conj()),
        mode_dims: a.mode_dims,
    }
}

pub fn matmul(a: &Operator, b: &Operator) -> Result<Operator> {
    check_same_dim(a.dim(), b.dim())?;
    Ok(Operator {
        data: a.data.dot(&b.data),
        mode_dims: a.mode_dims.or(b.mode_dims),
    })
}

/// `AB − BA`.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    check_same_dim(a.dim(), b.dim())?;
    Ok(Operator {
        data: a.data.dot(&b.data) - b.data.dot(&a.data),
        mode_dims: a.mode_dims.or(b.mode_dims),
    })
}

/// `A|ψ⟩`. The result is generally not normalized; check with
/// [`Ket::is_normalized`] before treating it as a state.
pub fn apply(a: &Operator, psi: &Ket) -> Result<Ket> {
    check_same_dim(a.dim(), psi.dim())?;
    Ok(Ket {
        amps: a.data.dot(&psi.amps),
    })
}

fn check_tail(what: &'static str, amps: &Array1<Complex64>) -> Result<()> {
    let d = amps.len();
    let worst = amps
        .iter()
        .skip(d.saturating_sub(2))
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if worst >= FACTORY_TAIL_TOL {
        return Err(Error::TruncationTail {
            what,
            population: worst,
            tolerance: FACTORY_TAIL_TOL,
        });
    }
    Ok(())
}

fn squeeze_ratio(r: f64, theta: f64) -> Result<Complex64> {
    if !(r >= 0.0) || !r.is_finite() || !theta.is_finite() {
        return Err(Error::Domain(format!(
            "squeeze parameters must be finite with r ≥ 0, got r={r}, θ={theta}"
        )));
    }
    // ν/μ = e^{iθ} tanh r
    Ok(Complex64::from_polar(r.tanh(), theta))
}

/// Vacuum of `μb + νb†` with `μ = cosh r`, `ν = e^{iθ} sinh r`, built from
/// `c_{n+2} = −(ν/μ)√((n+1)/(n+2)) c_n`, `c_1 = 0`, and normalized.
///
/// Fails with a truncation error unless both top amplitudes are below
/// [`FACTORY_TAIL_TOL`]; [`squeezed_vacuum_dim`] gives the smallest
/// admissible odd dimension.
pub fn squeezed_vacuum_ket(dim: usize, r: f64, theta: f64) -> Result<Ket> {
    check_min_dim("squeezed vacuum", dim, 2)?;
    let ratio = squeeze_ratio(r, theta)?;
    let mut amps = Array1::zeros(dim);
    amps[0] = ONE;
    let mut n = 0;
    while n + 2 < dim {
        let f = ((n + 1) as f64 / (n + 2) as f64).sqrt();
        amps[n + 2] = -ratio * f * amps[n];
        n += 2;
    }
    let ket = Ket { amps }.normalized()?;
    check_tail("squeezed vacuum", &ket.amps)?;
    Ok(ket)
}

/// Smallest odd dimension at which [`squeezed_vacuum_ket`] passes its tail
/// check.
pub fn squeezed_vacuum_dim(r: f64, theta: f64) -> Result<usize> {
    let t = squeeze_ratio(r, theta)?.norm();
    // Unnormalized |c_{2k}| = t^k √((2k−1)!!/(2k)!!); the normalization is
    // 1/√cosh r.
    let norm0 = 1.0 / r.cosh().sqrt();
    let mut mag = norm0;
    let mut k = 0usize;
    while mag >= FACTORY_TAIL_TOL {
        k += 1;
        mag *= t * ((2 * k - 1) as f64 / (2 * k) as f64).sqrt();
        if k > 1_000_000 {
            return Err(Error::Domain(format!("squeeze r={r} too large")));
        }
    }
    // Level 2k is the first one below tolerance; levels 2k and 2k−1 are then
    // the top two of a space of dimension 2k+1.
    Ok((2 * k + 1).max(3))
}

/// Coherent state `|α⟩`, normalized over the retained levels, with the same
/// tail check as the other factories.
pub fn coherent_ket(dim: usize, alpha: Complex64) -> Result<Ket> {
    check_min_dim("coherent state", dim, 2)?;
    let mut amps = Array1::zeros(dim);
    amps[0] = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 1..dim {
        amps[n] = amps[n - 1] * alpha / (n as f64).sqrt();
    }
    let ket = Ket { amps }.normalized()?;
    check_tail("coherent state", &ket.amps)?;
    Ok(ket)
}
