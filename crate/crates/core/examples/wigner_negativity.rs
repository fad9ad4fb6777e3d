//! Wigner function of the dark state at r = 1: negativity and the fourfold
//! rotation symmetry.

use quadsqueeze::cli::oracle_reference;
use quadsqueeze::fock::DensityMatrix;
use quadsqueeze::observables::mean_number;
use quadsqueeze::wigner::{
    default_extent, fourfold_defect, negativity, twofold_defect, wigner_grid, DEFAULT_POINTS,
};

fn main() -> quadsqueeze::Result<()> {
    for theta in [0.0, std::f64::consts::PI] {
        let rho = DensityMatrix::pure(&oracle_reference(1.0, theta)?);
        let x_max = default_extent(mean_number(&rho));
        let w = wigner_grid(&rho, x_max, DEFAULT_POINTS)?;
        let neg = negativity(&w);
        println!("θ = {theta:.4}: D = {}, grid ±{x_max}", rho.dim());
        println!("  min W           {:.6e}", neg.min_value);
        println!("  negative volume {:.6e}", neg.negative_volume);
        println!("  normalization   {:.6}", w.normalization());
        println!("  fourfold defect {:.2e}", fourfold_defect(&w)?);
        println!("  twofold defect  {:.2e}", twofold_defect(&w)?);
    }
    Ok(())
}
