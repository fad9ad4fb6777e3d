//! Closed-form steady state of the four-phonon jump dynamics and its
//! statistics.
//!
//! The dark state of `Ĵ = μb² + νb†²` reached from the ground state lives on
//! `|4m⟩` with weights `w_m = (½)_m(¼)_m/((¾)_m m!) z^m`, `z = tanh²r`,
//! normalized by `₂F₁(½, ¼; ¾; z)`. Successive weights shrink by a factor
//! below `z`, so the omitted tail after `w_M` is at most `w_{M+1}/(1−z)`.

use ndarray::Array1;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::Ket;
use crate::special::{ln_pochhammer, HYP2F1_MAX_TERMS};

pub use crate::special::{hyp2f1, pochhammer};

/// Largest squeeze strength accepted by the series evaluations. Beyond
/// `r = 2` convergence slows noticeably as `z → 1`.
pub const MAX_R: f64 = 3.0;

/// Tail tolerance on the last retained population of [`steady_ket`].
pub const KET_TAIL_TOL: f64 = 1e-10;

/// Tolerance on the omitted probability of [`phonon_distribution`].
pub const DISTRIBUTION_TAIL_TOL: f64 = 1e-10;

/// Agreement required between the two generation paths of [`steady_ket`].
pub const PATH_AGREEMENT_TOL: f64 = 1e-12;

fn check_r(r: f64) -> Result<()> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("r must be finite and ≥ 0, got {r}")));
    }
    if r > MAX_R {
        return Err(Error::Domain(format!(
            "r = {r} exceeds the series domain r ≤ {MAX_R}"
        )));
    }
    Ok(())
}

/// `z = |ν|²/μ² = tanh²r`.
pub fn squeeze_z(r: f64) -> f64 {
    r.tanh().powi(2)
}

/// `₂F₁(½, ¼; ¾; z)`, the squared normalization of the steady ket.
pub fn normalization(r: f64) -> Result<f64> {
    check_r(r)?;
    hyp2f1(0.5, 0.25, 0.75, squeeze_z(r))
}

/// Unnormalized weight ratio `w_{m+1}/w_m`.
fn weight_ratio(m: usize, z: f64) -> f64 {
    let m = m as f64;
    (m + 0.5) * (m + 0.25) / ((m + 0.75) * (m + 1.0)) * z
}

/// Normalized family populations `P_{4m}` for `m = 0..`, stopping at the
/// first `m` accepted by `done(m, p_m, z)`. Iteration is capped.
fn family_populations(r: f64, mut done: impl FnMut(usize, f64, f64) -> bool) -> Result<Vec<f64>> {
    let z = squeeze_z(r);
    let f = normalization(r)?;
    let mut p = 1.0 / f;
    let mut out = Vec::new();
    for m in 0..HYP2F1_MAX_TERMS {
        out.push(p);
        if done(m, p, z) {
            return Ok(out);
        }
        p *= weight_ratio(m, z);
    }
    Err(Error::SeriesNotConverged {
        terms: HYP2F1_MAX_TERMS,
        partial_sum: out.iter().sum(),
    })
}

/// Smallest dimension `4M + 3` such that `P_{4M} < tail_tol`. The two extra
/// levels let `b†²` act exactly on every retained family member, so `Ŷ₁`,
/// `Ŷ₂` moments of the truncated ket carry no edge error.
pub fn ket_dim(r: f64, tail_tol: f64) -> Result<usize> {
    let pops = family_populations(r, |m, p, _| m > 0 && p < tail_tol)?;
    Ok(4 * (pops.len() - 1) + 3)
}

fn closed_form_amplitudes(dim: usize, r: f64, theta: f64) -> Result<Array1<Complex64>> {
    let n_norm = normalization(r)?.sqrt();
    let z = squeeze_z(r);
    let mut amps = Array1::zeros(dim);
    amps[0] = Complex64::new(1.0 / n_norm, 0.0);
    if z == 0.0 {
        return Ok(amps);
    }
    let ln_z = z.ln();
    let mut ln_fact = 0.0;
    for m in 1..=(dim - 1) / 4 {
        ln_fact += (m as f64).ln();
        let mu32 = m as u32;
        let ln_w = ln_pochhammer(0.5, mu32) + ln_pochhammer(0.25, mu32)
            - ln_pochhammer(0.75, mu32)
            - ln_fact
            + m as f64 * ln_z;
        let mag = (0.5 * ln_w).exp() / n_norm;
        // (−ν/μ)^m / |ν/μ|^m = (−e^{iθ})^m
        amps[4 * m] = Complex64::from_polar(mag, m as f64 * (theta + std::f64::consts::PI));
    }
    Ok(amps)
}

/// Steady ket generated by `c_n = −√((n−2)(n−3)/(n(n−1)))·(ν/μ)·c_{n−4}`
/// from `c_0 = 1/𝒩`, without tail or cross-path checks.
pub fn steady_ket_recursion(dim: usize, r: f64, theta: f64) -> Result<Ket> {
    if dim == 0 {
        return Err(Error::InvalidDimension {
            what: "steady ket",
            dim,
            min: 1,
        });
    }
    let n_norm = normalization(r)?.sqrt();
    let ratio = Complex64::from_polar(r.tanh(), theta);
    let mut amps = Array1::zeros(dim);
    amps[0] = Complex64::new(1.0 / n_norm, 0.0);
    let mut n = 4;
    while n < dim {
        let nf = n as f64;
        let f = ((nf - 2.0) * (nf - 3.0) / (nf * (nf - 1.0))).sqrt();
        amps[n] = -ratio * f * amps[n - 4];
        n += 4;
    }
    Ket::from_amplitudes(amps)
}

/// The ground-state-reached dark state of `Ĵ`, from the closed form
/// normalized by `𝒩 = √₂F₁(½, ¼; ¾; z)`, cross-checked amplitude by
/// amplitude against [`steady_ket_recursion`].
///
/// The population of the last retained family member must be below
/// [`KET_TAIL_TOL`]; [`ket_dim`] returns an admissible size.
pub fn steady_ket(dim: usize, r: f64, theta: f64) -> Result<Ket> {
    if dim == 0 {
        return Err(Error::InvalidDimension {
            what: "steady ket",
            dim,
            min: 1,
        });
    }
    check_r(r)?;
    if !theta.is_finite() {
        return Err(Error::Domain(format!("θ must be finite, got {theta}")));
    }
    let closed = closed_form_amplitudes(dim, r, theta)?;
    let last = 4 * ((dim - 1) / 4);
    let tail = closed[last].norm_sqr();
    if last > 0 && tail >= KET_TAIL_TOL || last == 0 && r > 0.0 {
        return Err(Error::TruncationTail {
            what: "steady ket",
            population: tail,
            tolerance: KET_TAIL_TOL,
        });
    }
    let rec = steady_ket_recursion(dim, r, theta)?;
    let worst = closed
        .iter()
        .zip(rec.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if worst > PATH_AGREEMENT_TOL {
        return Err(Error::Internal(format!(
            "closed form and recursion disagree by {worst:e}"
        )));
    }
    Ket::from_amplitudes(closed)
}

/// Phonon-number probabilities indexed by `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhononDistribution {
    probabilities: Vec<f64>,
    pub r: Option<f64>,
    pub theta: Option<f64>,
}

impl PhononDistribution {
    /// Arbitrary reference distribution; entries must be finite and
    /// nonnegative.
    pub fn from_probabilities(probabilities: Vec<f64>) -> Result<Self> {
        if let Some(p) = probabilities
            .iter()
            .find(|p| !(**p >= 0.0) || !p.is_finite())
        {
            return Err(Error::Domain(format!("invalid probability {p}")));
        }
        Ok(Self {
            probabilities,
            r: None,
            theta: None,
        })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `P_n`, zero beyond the stored range.
    pub fn get(&self, n: usize) -> f64 {
        self.probabilities.get(n).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// `Σ n P_n`.
    pub fn mean(&self) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    /// `Σ n(n−1) P_n = ⟨b†²b²⟩`.
    pub fn factorial_moment2(&self) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * (n as f64 - 1.0) * p)
            .sum()
    }
}

fn spread_family(pops: &[f64], r: f64, theta: f64) -> PhononDistribution {
    let mut probabilities = vec![0.0; 4 * (pops.len() - 1) + 1];
    for (m, p) in pops.iter().enumerate() {
        probabilities[4 * m] = *p;
    }
    PhononDistribution {
        probabilities,
        r: Some(r),
        theta: Some(theta),
    }
}

/// `P_{4m}` for `m ≤ max_m`, zeros elsewhere. Fails when the omitted
/// probability bound exceeds [`DISTRIBUTION_TAIL_TOL`].
pub fn phonon_distribution(r: f64, theta: f64, max_m: usize) -> Result<PhononDistribution> {
    check_r(r)?;
    let pops = family_populations(r, |m, _, _| m == max_m)?;
    let z = squeeze_z(r);
    let tail = pops[max_m] * weight_ratio(max_m, z) / (1.0 - z);
    if tail >= DISTRIBUTION_TAIL_TOL {
        return Err(Error::TruncationTail {
            what: "phonon distribution",
            population: tail,
            tolerance: DISTRIBUTION_TAIL_TOL,
        });
    }
    Ok(spread_family(&pops, r, theta))
}

/// [`phonon_distribution`] truncated where the omitted parts of `Σ P_n`,
/// `Σ n P_n` and `Σ n² P_n` are all bounded below `1e−16` of their sums.
pub fn phonon_distribution_auto(r: f64, theta: f64) -> Result<PhononDistribution> {
    check_r(r)?;
    let mut s2 = 0.0;
    let pops = family_populations(r, |m, p, z| {
        let n = 4.0 * m as f64;
        s2 += n * n * p;
        let next_n = n + 4.0;
        let next = next_n * next_n * p * weight_ratio(m, z);
        // later n²-weighted terms shrink by at most q each step
        let q = z * ((m as f64 + 2.0) / (m as f64 + 1.0)).powi(2);
        let p_next = p * weight_ratio(m, z);
        m >= 1 && q < 1.0 && next / (1.0 - q) <= 1e-16 * s2.max(1.0) && p_next < 1e-17
    })?;
    Ok(spread_family(&pops, r, theta))
}

/// `n̄ = (2z/3)·₂F₁(3/2, 5/4; 7/4; z)/₂F₁(½, ¼; ¾; z)`.
pub fn mean_phonon(r: f64) -> Result<f64> {
    check_r(r)?;
    let z = squeeze_z(r);
    if z == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * z / 3.0 * hyp2f1(1.5, 1.25, 1.75, z)? / hyp2f1(0.5, 0.25, 0.75, z)?)
}

/// `g²(0) = Σ n(n−1)P_n / (Σ n P_n)²`; undefined at `r = 0`.
pub fn g2_zero(r: f64) -> Result<f64> {
    check_r(r)?;
    if r == 0.0 {
        return Err(Error::Undefined("g²(0) at r = 0, where n̄ = 0".into()));
    }
    let p = phonon_distribution_auto(r, 0.0)?;
    let mean = p.mean();
    Ok(p.factorial_moment2() / (mean * mean))
}

/// Klyshko figure of merit `K_n = (n+1)P_{n−1}P_{n+1}/(n P_n²)`.
pub fn klyshko(p: &PhononDistribution, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("Klyshko index starts at n = 1".into()));
    }
    let pn = p.get(n);
    if pn == 0.0 {
        return Err(Error::Undefined(format!("K_{n} with P_{n} = 0")));
    }
    let nf = n as f64;
    Ok((nf + 1.0) * p.get(n - 1) * p.get(n + 1) / (nf * pn * pn))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct YVariances {
    /// `ΔŶ₁ = e^{−r}√(n̄+½)`.
    pub dy1: f64,
    /// `ΔŶ₂ = e^{r}√(n̄+½)`.
    pub dy2: f64,
    /// Uncertainty bound `n̄ + ½`.
    pub bound: f64,
}

pub fn y_variances(r: f64) -> Result<YVariances> {
    let bound = mean_phonon(r)? + 0.5;
    Ok(YVariances {
        dy1: (-r).exp() * bound.sqrt(),
        dy2: r.exp() * bound.sqrt(),
        bound,
    })
}
