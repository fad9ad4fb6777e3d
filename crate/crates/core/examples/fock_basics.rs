//! Truncated ladder operators, the commutator edge, and a squeezed vacuum.

use quadsqueeze::fock::{
    annihilation, commutator, creation, squeezed_vacuum_dim, squeezed_vacuum_ket,
};

fn main() -> quadsqueeze::Result<()> {
    let d = 6;
    let c = commutator(&annihilation(d)?, &creation(d)?)?;
    let diag: Vec<f64> = (0..d).map(|n| c.get(n, n).re).collect();
    println!("diag [b, b†] at D = {d}: {diag:?}");

    let (r, theta) = (0.8, 0.0);
    let dim = squeezed_vacuum_dim(r, theta)?;
    let ket = squeezed_vacuum_ket(dim, r, theta)?;
    let pops = ket.populations();
    println!(
        "squeezed vacuum r = {r}: D = {dim}, P_0 = {:.6}, P_1 = {}, P_2 = {:.6}",
        pops[0], pops[1], pops[2]
    );
    println!(
        "mean number {:.6} (sinh² r = {:.6})",
        pops.iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum::<f64>(),
        r.sinh().powi(2)
    );
    Ok(())
}
