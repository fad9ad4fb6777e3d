//! Expectation values, variances, fidelities and reduced states, plus the
//! amplitude-squared quadratures `Ŷ₁`, `Ŷ₂`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{
    annihilation_power, apply, creation_power, matmul, DensityMatrix, Ket, Operator, HERMITIAN_TOL,
};

/// Population allowed on the top two levels before a variance is trusted.
pub const VARIANCE_TAIL_TOL: f64 = 1e-8;

/// Imaginary residue tolerated in a fidelity.
pub const FIDELITY_IMAG_TOL: f64 = 1e-10;

/// `Ŷ₁ = ½(b²e^{−iθ/2} + b†²e^{iθ/2})`, `Ŷ₂ = (1/2i)(b²e^{−iθ/2} − b†²e^{iθ/2})`.
///
/// With quadratures `x̂ = (b+b†)/2`, `p̂ = (b−b†)/(2i)` this gives
/// `Ŷ₁ = x̂² − p̂²` at `θ = 0` and `Ŷ₁ = x̂p̂ + p̂x̂` at `θ = π`.
#[derive(Clone, Debug, PartialEq)]
pub struct YPair {
    pub y1: Operator,
    pub y2: Operator,
    pub theta: f64,
}

pub fn y_pair(dim: usize, theta: f64) -> Result<YPair> {
    if dim < 6 {
        return Err(Error::InvalidDimension {
            what: "Y operators",
            dim,
            min: 6,
        });
    }
    let b2 = &annihilation_power(dim, 2)? * Complex64::from_polar(1.0, -theta / 2.0);
    let bd2 = &creation_power(dim, 2)? * Complex64::from_polar(1.0, theta / 2.0);
    Ok(YPair {
        y1: &(&b2 + &bd2) * 0.5,
        y2: &(&b2 - &bd2) * Complex64::new(0.0, -0.5),
        theta,
    })
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn check_hermitian(a: &Operator) -> Result<()> {
    let dev = a.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NonHermitian { deviation: dev });
    }
    Ok(())
}

fn check_top_levels(pops: &[f64]) -> Result<()> {
    let top: f64 = pops.iter().rev().take(2).map(|p| p.abs()).sum();
    if top >= VARIANCE_TAIL_TOL {
        return Err(Error::TruncationTail {
            what: "variance",
            population: top,
            tolerance: VARIANCE_TAIL_TOL,
        });
    }
    Ok(())
}

/// `tr(Aρ)`.
pub fn expect(a: &Operator, rho: &DensityMatrix) -> Result<Complex64> {
    check_dim(a.dim(), rho.dim())?;
    let (am, rm) = (a.matrix(), rho.matrix());
    let mut acc = Complex64::new(0.0, 0.0);
    for ((i, j), v) in am.indexed_iter() {
        acc += v * rm[[j, i]];
    }
    Ok(acc)
}

/// `⟨A²⟩ − ⟨A⟩²` for Hermitian `A`. The state's top two levels must hold
/// less than [`VARIANCE_TAIL_TOL`].
pub fn variance(a: &Operator, rho: &DensityMatrix) -> Result<f64> {
    check_dim(a.dim(), rho.dim())?;
    check_hermitian(a)?;
    check_top_levels(&rho.populations())?;
    let mean = expect(a, rho)?.re;
    let sq = expect(&matmul(a, a)?, rho)?.re;
    Ok(sq - mean * mean)
}

/// `⟨ψ|A|ψ⟩`.
pub fn expect_ket(a: &Operator, psi: &Ket) -> Result<Complex64> {
    psi.inner(&apply(a, psi)?)
}

/// `‖Aψ‖² − ⟨A⟩²` for Hermitian `A`, with the same tail requirement as
/// [`variance`].
pub fn variance_ket(a: &Operator, psi: &Ket) -> Result<f64> {
    check_dim(a.dim(), psi.dim())?;
    check_hermitian(a)?;
    check_top_levels(&psi.populations())?;
    let a_psi = apply(a, psi)?;
    let mean = psi.inner(&a_psi)?.re;
    Ok(a_psi.norm().powi(2) - mean * mean)
}

/// `⟨ψ|AB + BA|ψ⟩ = 2 Re⟨Aψ|Bψ⟩` for Hermitian `A`, `B`.
pub fn anticommutator_ket(a: &Operator, b: &Operator, psi: &Ket) -> Result<f64> {
    check_hermitian(a)?;
    check_hermitian(b)?;
    Ok(2.0 * apply(a, psi)?.inner(&apply(b, psi)?)?.re)
}

/// `⟨ψ|ρ|ψ⟩`, clipped to `[0, 1]`.
pub fn fidelity_ket(psi: &Ket, rho: &DensityMatrix) -> Result<f64> {
    check_dim(psi.dim(), rho.dim())?;
    let a = psi.amplitudes();
    let m = rho.matrix();
    let mut acc = Complex64::new(0.0, 0.0);
    for ((i, j), v) in m.indexed_iter() {
        if v.re != 0.0 || v.im != 0.0 {
            acc += a[i].conj() * v * a[j];
        }
    }
    if acc.im.abs() > FIDELITY_IMAG_TOL {
        return Err(Error::NonHermitian {
            deviation: acc.im.abs(),
        });
    }
    Ok(acc.re.clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    /// The first tensor factor (the cavity in the two-mode model).
    First,
    /// The second tensor factor (the mechanics).
    Second,
}

/// Reduced state of the kept subsystem.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    let (da, db) = rho.mode_dims().ok_or(Error::MissingModeStructure)?;
    let m = rho.matrix();
    let out = match keep {
        Subsystem::First => ndarray::Array2::from_shape_fn((da, da), |(i, j)| {
            (0..db).map(|k| m[[i * db + k, j * db + k]]).sum()
        }),
        Subsystem::Second => ndarray::Array2::from_shape_fn((db, db), |(i, j)| {
            (0..da).map(|k| m[[k * db + i, k * db + j]]).sum()
        }),
    };
    DensityMatrix::from_raw(out)
}

pub fn populations(rho: &DensityMatrix) -> Vec<f64> {
    rho.populations()
}

/// `tr(ρ²)`, evaluated as `Σ|ρ_ij|²` for Hermitian `ρ`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().iter().map(|c| c.norm_sqr()).sum()
}

/// `⟨b†b⟩ = Σ n ρ_nn`.
pub fn mean_number(rho: &DensityMatrix) -> f64 {
    rho.populations()
        .iter()
        .enumerate()
        .map(|(n, p)| n as f64 * p)
        .sum()
}

/// `⟨b†²b²⟩/⟨b†b⟩²` from the populations.
pub fn g2_from_state(rho: &DensityMatrix) -> Result<f64> {
    let pops = rho.populations();
    let mean = mean_number(rho);
    if mean <= 1e-12 {
        return Err(Error::Undefined(format!("g²(0) with ⟨n⟩ = {mean:e}")));
    }
    let fm2: f64 = pops
        .iter()
        .enumerate()
        .map(|(n, p)| n as f64 * (n as f64 - 1.0) * p)
        .sum();
    Ok(fm2 / (mean * mean))
}
