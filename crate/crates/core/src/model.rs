//! The physical model: squeeze coefficients, the two-mode cavity–mechanics
//! generator, the effective single-mode generator obtained by eliminating the
//! cavity, and advisory regime checks.
//!
//! The full model measures rates in units of `κ`. The effective model runs in
//! the scaled time `τ = γt`, where the jump term carries the cooperativity
//! `C₂ = 4g₂²/(κγ)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{
    annihilation, annihilation_power, creation, creation_power, identity, kron,
    squeezed_vacuum_ket, Ket, Operator,
};
use crate::liouvillian::{add, dissipator, hamiltonian_term, Superoperator};
use crate::oracle;

/// Largest two-mode Hilbert dimension accepted by [`full_generator`].
pub const MAX_JOINT_DIM: usize = 4096;

/// `μ = cosh r`, `ν = e^{iθ} sinh r` of an ideal squeezed reservoir.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SqueezeCoeffs {
    pub r: f64,
    pub theta: f64,
    pub mu: f64,
    #[serde(skip)]
    pub nu: Complex64,
}

pub fn squeeze_coeffs(r: f64, theta: f64) -> Result<SqueezeCoeffs> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "squeeze strength r must be ≥ 0, got {r}"
        )));
    }
    if !theta.is_finite() {
        return Err(Error::Domain(format!(
            "squeeze angle must be finite, got {theta}"
        )));
    }
    Ok(SqueezeCoeffs {
        r,
        theta,
        mu: r.cosh(),
        nu: Complex64::from_polar(r.sinh(), theta),
    })
}

/// Parameters after linearizing the quadratic coupling about a strong
/// intracavity field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearizedParams {
    pub g2: f64,
    pub omega_m_prime: f64,
    pub delta_c: f64,
}

/// `g₂ = g₀√n_c`, `ω_m′ = ω_m + 2g₀n_c`, `Δ_c = −2ω_m′`.
pub fn linearize(g0_quadratic: f64, n_c: f64, omega_m: f64) -> Result<LinearizedParams> {
    if !(n_c >= 1.0) {
        return Err(Error::Domain(format!(
            "linearization needs n_c ≥ 1 intracavity photons, got {n_c}"
        )));
    }
    let omega_m_prime = omega_m + 2.0 * g0_quadratic * n_c;
    Ok(LinearizedParams {
        g2: g0_quadratic * n_c.sqrt(),
        omega_m_prime,
        delta_c: -2.0 * omega_m_prime,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub squeeze: SqueezeCoeffs,
    /// Linearized quadratic coupling, in units of κ for the full model.
    pub g2: f64,
    /// Cavity decay rate.
    pub kappa: f64,
    /// Intrinsic mechanical damping rate.
    pub gamma: f64,
    /// Thermal phonon occupation of the mechanical bath.
    pub n_th: f64,
    pub dim_cavity: usize,
    pub dim_mech: usize,
    pub include_mech_bath: bool,
    /// Rate for the `D[Ĵ]` term of the effective model in place of `C₂`.
    /// Mandatory when `gamma == 0`.
    pub jump_rate_override: Option<f64>,
}

impl ModelParams {
    /// Defaults: `g₂ = 0.05`, `κ = 1`, `γ = 1e−5` (so `C₂ = 1000`),
    /// `n_th = 0`, no mechanical bath, truncations from
    /// [`default_dim_cavity`] and [`default_dim_mech`].
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        Ok(Self {
            squeeze: squeeze_coeffs(r, theta)?,
            g2: 0.05,
            kappa: 1.0,
            gamma: 1e-5,
            n_th: 0.0,
            dim_cavity: default_dim_cavity(r),
            dim_mech: default_dim_mech(r)?,
            include_mech_bath: false,
            jump_rate_override: None,
        })
    }

    /// `C₂ = 4g₂²/(κγ)`, undefined for `γ = 0`.
    pub fn cooperativity(&self) -> Option<f64> {
        (self.gamma > 0.0).then(|| 4.0 * self.g2 * self.g2 / (self.kappa * self.gamma))
    }

    fn check_rates(&self) -> Result<()> {
        for (name, v) in [("g2", self.g2), ("gamma", self.gamma), ("n_th", self.n_th)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "{name} must be finite and ≥ 0, got {v}"
                )));
            }
        }
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(Error::Domain(format!(
                "kappa must be positive, got {}",
                self.kappa
            )));
        }
        Ok(())
    }
}

/// `4 + ⌈8 sinh²r⌉`, rounded up to an odd number. An odd cavity truncation
/// keeps the cavity's squeezed dark state exact on the truncated space.
pub fn default_dim_cavity(r: f64) -> usize {
    let d = 4 + (8.0 * r.sinh().powi(2)).ceil() as usize;
    d | 1
}

/// `32 + ⌈12 n̄(r)⌉`, rounded up to `≡ 1 (mod 4)`. With that residue the top
/// retained level belongs to the populated family `|4m⟩`, which keeps the
/// truncated jump operator's dark state exact.
pub fn default_dim_mech(r: f64) -> Result<usize> {
    let d = 32 + (12.0 * oracle::mean_phonon(r)?).ceil() as usize;
    Ok(d + (5 - d % 4) % 4)
}

/// `Ĵ = μb² + νb†²`.
pub fn jump_operator(dim: usize, sq: &SqueezeCoeffs) -> Result<Operator> {
    if dim < 5 {
        return Err(Error::InvalidDimension {
            what: "jump operator",
            dim,
            min: 5,
        });
    }
    let b2 = annihilation_power(dim, 2)?;
    let bd2 = creation_power(dim, 2)?;
    Ok(&(&b2 * Complex64::new(sq.mu, 0.0)) + &(&bd2 * sq.nu))
}

/// `β̂ = μb + νb†`.
pub fn bogoliubov_operator(dim: usize, sq: &SqueezeCoeffs) -> Result<Operator> {
    if dim < 3 {
        return Err(Error::InvalidDimension {
            what: "Bogoliubov operator",
            dim,
            min: 3,
        });
    }
    Ok(&(&annihilation(dim)? * Complex64::new(sq.mu, 0.0)) + &(&creation(dim)? * sq.nu))
}

/// Dark state of the cavity dissipator `D[iμa − iνa†]`: the vacuum of
/// `μa − νa†`, i.e. a squeezed vacuum at angle `θ + π`.
pub fn cavity_dark_ket(dim: usize, sq: &SqueezeCoeffs) -> Result<Ket> {
    squeezed_vacuum_ket(dim, sq.r, sq.theta + std::f64::consts::PI)
}

/// Two-mode generator on `H_cavity ⊗ H_mech`:
/// `−ig₂[a†b² + b†²a, ρ] + κD[iμa − iνa†]ρ`, plus
/// `γ(n_th+1)D[b] + γn_th D[b†]` when the mechanical bath is included.
pub fn full_generator(p: &ModelParams) -> Result<Superoperator> {
    p.check_rates()?;
    let (dc, dm) = (p.dim_cavity, p.dim_mech);
    if dc < 8 {
        return Err(Error::InvalidDimension {
            what: "cavity truncation",
            dim: dc,
            min: 8,
        });
    }
    if dm < 12 {
        return Err(Error::InvalidDimension {
            what: "mechanical truncation",
            dim: dm,
            min: 12,
        });
    }
    if dc * dm > MAX_JOINT_DIM {
        return Err(Error::Domain(format!(
            "joint dimension {dc}×{dm} = {} exceeds {MAX_JOINT_DIM}",
            dc * dm
        )));
    }
    let sq = &p.squeeze;
    let a = annihilation(dc)?;
    let ad = creation(dc)?;
    let ic = identity(dc)?;
    let im = identity(dm)?;

    let coupling = &kron(&ad, &annihilation_power(dm, 2)?) + &kron(&a, &creation_power(dm, 2)?);
    let h = &coupling * p.g2;
    let i = Complex64::new(0.0, 1.0);
    let lc = &(&a * (i * sq.mu)) - &(&ad * (i * sq.nu));
    let mut s = add(
        &hamiltonian_term(&h)?.labelled("optomechanical"),
        &dissipator(&kron(&lc, &im), p.kappa)?.labelled("squeezed cavity damping"),
    )?;
    if p.include_mech_bath {
        let b = kron(&ic, &annihilation(dm)?);
        let bd = kron(&ic, &creation(dm)?);
        s = add(
            &s,
            &dissipator(&b, p.gamma * (p.n_th + 1.0))?.labelled("mechanical damping"),
        )?;
        s = add(
            &s,
            &dissipator(&bd, p.gamma * p.n_th)?.labelled("mechanical heating"),
        )?;
    }
    Ok(s)
}

/// Rate of the `D[Ĵ]` term: the override if set, otherwise `C₂`.
pub fn jump_rate(p: &ModelParams) -> Result<f64> {
    match (p.jump_rate_override, p.cooperativity()) {
        (Some(rate), _) => Ok(rate),
        (None, Some(c2)) => Ok(c2),
        (None, None) => Err(Error::Domain(
            "gamma = 0 leaves C₂ undefined; set jump_rate_override".into(),
        )),
    }
}

/// Single-mode generator in scaled time `τ = γt`:
/// `C₂D[Ĵ] + (n_th+1)D[b] + n_th D[b†]`, the bath terms only when included.
/// With `γ = 0` the jump rate must come from `jump_rate_override` and the
/// bath is rejected.
pub fn effective_generator(p: &ModelParams) -> Result<Superoperator> {
    p.check_rates()?;
    let dm = p.dim_mech;
    if dm < 12 {
        return Err(Error::InvalidDimension {
            what: "mechanical truncation",
            dim: dm,
            min: 12,
        });
    }
    if p.gamma == 0.0 && p.include_mech_bath {
        return Err(Error::Domain(
            "mechanical bath terms need gamma > 0 in scaled time".into(),
        ));
    }
    let rate = jump_rate(p)?;
    let mut s = dissipator(&jump_operator(dm, &p.squeeze)?, rate)?.labelled("four-phonon jump");
    if p.include_mech_bath {
        s = add(
            &s,
            &dissipator(&annihilation(dm)?, p.n_th + 1.0)?.labelled("mechanical damping"),
        )?;
        s = add(
            &s,
            &dissipator(&creation(dm)?, p.n_th)?.labelled("mechanical heating"),
        )?;
    }
    Ok(s)
}

/// Advisory regime ratios. `None` means unbounded, which counts as
/// satisfied.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegimeReport {
    pub cooperativity: Option<f64>,
    /// `C₂|ν|²/n_th`, flagged below 10.
    pub decoherence_ratio: Option<f64>,
    pub decoherence_ok: bool,
    /// `κ/g₂`, flagged below 10.
    pub weak_coupling_ratio: Option<f64>,
    pub weak_coupling_ok: bool,
    /// `κ/γ`, flagged below 100.
    pub damping_ratio: Option<f64>,
    pub damping_ok: bool,
}

fn ratio(num: Option<f64>, den: f64) -> Option<f64> {
    match num {
        Some(n) if den > 0.0 => Some(n / den),
        _ => None,
    }
}

pub fn regime_check(p: &ModelParams) -> RegimeReport {
    let c2 = p.cooperativity();
    let decoherence_ratio = ratio(c2.map(|c| c * p.squeeze.nu.norm_sqr()), p.n_th);
    let weak_coupling_ratio = ratio(Some(p.kappa), p.g2);
    let damping_ratio = ratio(Some(p.kappa), p.gamma);
    RegimeReport {
        cooperativity: c2,
        decoherence_ratio,
        decoherence_ok: decoherence_ratio.map_or(true, |x| x >= 10.0),
        weak_coupling_ratio,
        weak_coupling_ok: weak_coupling_ratio.map_or(true, |x| x >= 10.0),
        damping_ratio,
        damping_ok: damping_ratio.map_or(true, |x| x >= 100.0),
    }
}
