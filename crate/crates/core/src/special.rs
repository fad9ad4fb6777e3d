//! Series special functions: Pochhammer symbols, the Gauss hypergeometric
//! series, log-factorials and associated Laguerre polynomials.

use crate::error::{Error, Result};

/// Term cap for [`hyp2f1`].
pub const HYP2F1_MAX_TERMS: usize = 1_000_000;

/// Relative term size at which [`hyp2f1`] stops.
pub const HYP2F1_REL_TOL: f64 = 1e-16;

/// Rising factorial `(a)_m = a(a+1)…(a+m−1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, m: u32) -> f64 {
    (0..m).map(|k| a + k as f64).product()
}

/// `ln (a)_m` for `a > 0`.
pub fn ln_pochhammer(a: f64, m: u32) -> f64 {
    debug_assert!(a > 0.0);
    (0..m).map(|k| (a + k as f64).ln()).sum()
}

/// Gauss series `₂F₁(a, b; c; z) = Σ (a)_m (b)_m / ((c)_m m!) z^m` for
/// `0 ≤ z < 1`, summed with compensation until a term falls below
/// [`HYP2F1_REL_TOL`] relative to the partial sum.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::Domain(format!("hyp2f1 needs 0 ≤ z < 1, got {z}")));
    }
    if c <= 0.0 && c.fract() == 0.0 {
        return Err(Error::Domain(format!(
            "hyp2f1 undefined for nonpositive integer c = {c}"
        )));
    }
    let mut sum = 1.0;
    let mut comp = 0.0;
    let mut term = 1.0;
    for m in 0..HYP2F1_MAX_TERMS {
        let mf = m as f64;
        term *= (a + mf) * (b + mf) / ((c + mf) * (mf + 1.0)) * z;
        if term == 0.0 {
            return Ok(sum + comp);
        }
        // Neumaier summation
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        if (term / (sum + comp)).abs() < HYP2F1_REL_TOL {
            return Ok(sum + comp);
        }
    }
    Err(Error::SeriesNotConverged {
        terms: HYP2F1_MAX_TERMS,
        partial_sum: sum + comp,
    })
}

/// `ln k!` for `k = 0..=n`.
pub fn ln_factorial_table(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// `L_0^k(x) … L_{n_max}^k(x)` by the upward three-term recurrence
/// `(j+1) L_{j+1} = (2j+1+k−x) L_j − (j+k) L_{j−1}`.
pub fn laguerre_sequence(n_max: usize, k: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    let kf = k as f64;
    out.push(1.0 + kf - x);
    for j in 1..n_max {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + kf - x) * out[j] - (jf + kf) * out[j - 1]) / (jf + 1.0);
        out.push(next);
    }
    out
}
