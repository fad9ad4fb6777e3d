//! Relaxes the effective mechanical model from the ground state and compares
//! the result with the closed-form dark state.

use std::time::Instant;

use quadsqueeze::cli::fidelity_with_oracle;
use quadsqueeze::fock::DensityMatrix;
use quadsqueeze::liouvillian::{steady_state, SteadyOptions};
use quadsqueeze::model::{effective_generator, jump_rate, ModelParams};

fn main() -> quadsqueeze::Result<()> {
    let r = std::env::args()
        .nth(1)
        .map_or(0.5, |s| s.parse().expect("r must be a number"));
    let p = ModelParams::new(r, 0.0)?;
    let s = effective_generator(&p)?;
    println!(
        "r = {r}, D = {}, jump rate C₂ = {}",
        p.dim_mech,
        jump_rate(&p)?
    );

    let start = Instant::now();
    let st = steady_state(
        &s,
        &DensityMatrix::ground(p.dim_mech)?,
        &SteadyOptions::default(),
    )?;
    println!(
        "residual {:.2e} at τ = {:.3e} after {:.1?}",
        st.residual,
        st.time.unwrap_or(0.0),
        start.elapsed()
    );
    let off_family: f64 = st
        .rho
        .populations()
        .iter()
        .enumerate()
        .filter(|(n, _)| n % 4 != 0)
        .map(|(_, p)| p.abs())
        .sum();
    println!(
        "fidelity with dark state {:.10}",
        fidelity_with_oracle(&st.rho, r, 0.0)?
    );
    println!("population outside n ≡ 0 (mod 4): {off_family:.2e}");
    Ok(())
}
