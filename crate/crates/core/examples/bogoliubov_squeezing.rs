//! Damping through `β = μb + νb†` prepares an ordinary squeezed vacuum,
//! whose Wigner function has only twofold symmetry.

use quadsqueeze::fock::{squeezed_vacuum_dim, squeezed_vacuum_ket, DensityMatrix};
use quadsqueeze::liouvillian::{steady_state, steady_state_direct, SteadyOptions};
use quadsqueeze::model::{bogoliubov_operator, squeeze_coeffs};
use quadsqueeze::observables::{fidelity_ket, mean_number};
use quadsqueeze::wigner::{default_extent, fourfold_defect, twofold_defect, wigner_grid};

fn main() -> quadsqueeze::Result<()> {
    let r = 1.0;
    let dim = squeezed_vacuum_dim(r, 0.0)?;
    println!("r = {r}, D = {dim}");
    let sq = squeeze_coeffs(r, 0.0)?;
    let s = quadsqueeze::liouvillian::dissipator(&bogoliubov_operator(dim, &sq)?, 1.0)?;
    let rho0 = DensityMatrix::ground(dim)?;
    let rho = match steady_state_direct(&s, &rho0) {
        Ok(st) => st.rho,
        Err(_) => steady_state(&s, &rho0, &SteadyOptions::default())?.rho,
    };
    let target = squeezed_vacuum_ket(dim, r, 0.0)?;
    println!(
        "fidelity with squeezed vacuum {:.12}",
        fidelity_ket(&target, &rho)?
    );
    let w = wigner_grid(&rho, default_extent(mean_number(&rho)), 81)?;
    println!("twofold defect {:.2e}", twofold_defect(&w)?);
    println!("fourfold defect {:.3e}", fourfold_defect(&w)?);
    Ok(())
}
