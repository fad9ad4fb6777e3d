//! Wigner function of single-mode states on phase-space grids.
//!
//! Coordinates are the dimensionless `x̂ = (b+b†)/√2`, `p̂ = (b−b†)/(i√2)`,
//! so the vacuum is `W = e^{−x²−p²}/π`. Each Fock-basis element `|m⟩⟨n|`,
//! `m ≥ n`, contributes
//! `W_mn(α) = (1/π)(−1)ⁿ √(n!/m!) (2ᾱ)^{m−n} e^{−2|α|²} L_n^{m−n}(4|α|²)`
//! with `α = (x+ip)/√2`, and `W_nm = conj(W_mn)`.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::DensityMatrix;
use crate::special::{laguerre_sequence, ln_factorial_table};

/// Population allowed on the top two levels of a state.
pub const WIGNER_TAIL_TOL: f64 = 1e-8;

/// Largest imaginary residue accepted before it is discarded.
pub const IMAG_RESIDUE_TOL: f64 = 1e-12;

pub const DEFAULT_POINTS: usize = 161;

/// Equidensity levels for figure contours.
pub const CONTOUR_LEVELS: [f64; 3] = [0.25, 0.15, 0.05];

/// `⌈3√(2n̄+1)⌉`.
pub fn default_extent(n_bar: f64) -> f64 {
    (3.0 * (2.0 * n_bar + 1.0).sqrt()).ceil()
}

/// Nonzero `(n, ρ_{n+k,n}, ρ_{n,n+k})` triples of one diagonal `k`.
struct Diagonal {
    k: usize,
    entries: Vec<(usize, Complex64, Complex64)>,
    n_max: usize,
}

struct Kernel {
    diagonals: Vec<Diagonal>,
    ln_fact: Vec<f64>,
}

impl Kernel {
    fn new(rho: &DensityMatrix) -> Result<Self> {
        let pops = rho.populations();
        let top: f64 = pops.iter().rev().take(2).map(|p| p.abs()).sum();
        if top >= WIGNER_TAIL_TOL {
            return Err(Error::TruncationTail {
                what: "Wigner function",
                population: top,
                tolerance: WIGNER_TAIL_TOL,
            });
        }
        let d = rho.dim();
        let m = rho.matrix();
        let mut diagonals = Vec::new();
        for k in 0..d {
            let entries: Vec<_> = (0..d - k)
                .map(|n| (n, m[[n + k, n]], m[[n, n + k]]))
                .filter(|(_, a, b)| a.norm() != 0.0 || b.norm() != 0.0)
                .collect();
            if let Some(n_max) = entries.iter().map(|e| e.0).max() {
                diagonals.push(Diagonal { k, entries, n_max });
            }
        }
        Ok(Self {
            diagonals,
            ln_fact: ln_factorial_table(d),
        })
    }

    /// Complex sum before the imaginary residue is discarded.
    fn eval(&self, x: f64, p: f64) -> Complex64 {
        let alpha = Complex64::new(x, p) / std::f64::consts::SQRT_2;
        let a2 = alpha.norm_sqr();
        let u = 4.0 * a2;
        let ln_two_alpha = (2.0 * alpha.norm()).ln();
        let phase = -alpha.arg();
        let mut total = Complex64::new(0.0, 0.0);
        for diag in &self.diagonals {
            let k = diag.k;
            if k > 0 && a2 == 0.0 {
                continue;
            }
            let lag = laguerre_sequence(diag.n_max, k, u);
            let rot = Complex64::from_polar(1.0, phase * k as f64);
            for &(n, lower, upper) in &diag.entries {
                let mut ln_mag = 0.5 * (self.ln_fact[n] - self.ln_fact[n + k]) - 2.0 * a2;
                if k > 0 {
                    ln_mag += k as f64 * ln_two_alpha;
                }
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let w = rot * (sign * ln_mag.exp() * lag[n] / std::f64::consts::PI);
                if k == 0 {
                    total += lower * w;
                } else {
                    total += lower * w + upper * w.conj();
                }
            }
        }
        total
    }
}

fn check_residue(w: Complex64, x: f64, p: f64) -> Result<f64> {
    if w.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::NonHermitian {
            deviation: w.im.abs(),
        });
    }
    if !w.re.is_finite() {
        return Err(Error::Internal(format!(
            "non-finite Wigner value at ({x}, {p})"
        )));
    }
    Ok(w.re)
}

/// `W(x, p)`. The state's top two levels must hold less than
/// [`WIGNER_TAIL_TOL`].
pub fn wigner_point(rho: &DensityMatrix, x: f64, p: f64) -> Result<f64> {
    let kernel = Kernel::new(rho)?;
    check_residue(kernel.eval(x, p), x, p)
}

/// Square grid `xs == ps` symmetric about the origin; `values[[i, j]]` is
/// `W(xs[i], ps[j])`.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerGrid {
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
    pub values: Array2<f64>,
    pub cell_area: f64,
}

impl WignerGrid {
    /// Riemann sum `Σ W·cell_area`.
    pub fn normalization(&self) -> f64 {
        self.values.sum() * self.cell_area
    }

    pub fn spacing(&self) -> f64 {
        self.xs[1] - self.xs[0]
    }
}

/// Odd number of points from `−x_max` to `x_max` inclusive. The point
/// `i` and `n−1−i` are exact negatives of each other.
fn symmetric_axis(x_max: f64, n_points: usize) -> Vec<f64> {
    let half = n_points / 2;
    let step = x_max / half as f64;
    let mut xs = vec![0.0; n_points];
    for i in 0..half {
        let v = (half - i) as f64 * step;
        xs[i] = -v;
        xs[n_points - 1 - i] = v;
    }
    xs
}

/// Samples `W` on an `n_points × n_points` grid over `[−x_max, x_max]²`.
/// `n_points` must be odd so the grid contains the origin and maps onto
/// itself under quarter turns. Rows are evaluated in parallel; every value
/// depends only on its own coordinates.
pub fn wigner_grid(rho: &DensityMatrix, x_max: f64, n_points: usize) -> Result<WignerGrid> {
    if n_points % 2 == 0 || n_points < 3 {
        return Err(Error::Domain(format!(
            "grid needs an odd number of points ≥ 3, got {n_points}"
        )));
    }
    if !(x_max > 0.0) || !x_max.is_finite() {
        return Err(Error::Domain(format!(
            "x_max must be positive, got {x_max}"
        )));
    }
    let kernel = Kernel::new(rho)?;
    let xs = symmetric_axis(x_max, n_points);
    let rows: Vec<Result<Vec<f64>>> = xs
        .par_iter()
        .map(|&x| {
            xs.iter()
                .map(|&p| check_residue(kernel.eval(x, p), x, p))
                .collect()
        })
        .collect();
    let mut values = Array2::zeros((n_points, n_points));
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row?.into_iter().enumerate() {
            values[[i, j]] = v;
        }
    }
    let h = xs[1] - xs[0];
    Ok(WignerGrid {
        ps: xs.clone(),
        xs,
        values,
        cell_area: h * h,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Negativity {
    pub min_value: f64,
    /// `Σ max(−W, 0)·cell_area`.
    pub negative_volume: f64,
}

pub fn negativity(w: &WignerGrid) -> Negativity {
    let min_value = w.values.iter().copied().fold(f64::INFINITY, f64::min);
    let negative_volume = w.values.iter().map(|v| (-v).max(0.0)).sum::<f64>() * w.cell_area;
    Negativity {
        min_value,
        negative_volume,
    }
}

fn check_symmetric(w: &WignerGrid) -> Result<usize> {
    let n = w.xs.len();
    let (rows, cols) = w.values.dim();
    let square = w.xs == w.ps && rows == n && cols == n;
    let mirrored = (0..n).all(|i| w.xs[i] == -w.xs[n - 1 - i]);
    if !square || !mirrored {
        return Err(Error::Domain(
            "symmetry checks need a square grid symmetric about the origin".into(),
        ));
    }
    Ok(n)
}

/// `max |W(x, p) − W(−p, x)|` over the grid: the deviation from invariance
/// under a quarter turn.
pub fn fourfold_defect(w: &WignerGrid) -> Result<f64> {
    let n = check_symmetric(w)?;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((w.values[[i, j]] - w.values[[n - 1 - j, i]]).abs());
        }
    }
    Ok(worst)
}

/// `max |W(x, p) − W(−x, −p)|`: the deviation from invariance under a half
/// turn.
pub fn twofold_defect(w: &WignerGrid) -> Result<f64> {
    let n = check_symmetric(w)?;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((w.values[[i, j]] - w.values[[n - 1 - i, n - 1 - j]]).abs());
        }
    }
    Ok(worst)
}
