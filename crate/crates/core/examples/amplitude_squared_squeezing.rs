//! Amplitude-squared quadrature fluctuations of the dark state against the
//! closed forms `ΔY₁ = e^{−r}√(n̄+½)` and `ΔY₁ΔY₂ = n̄+½`.

use quadsqueeze::observables::{variance_ket, y_pair};
use quadsqueeze::oracle::{ket_dim, steady_ket, y_variances};

fn main() -> quadsqueeze::Result<()> {
    println!(
        "{:>5} {:>5} {:>14} {:>14} {:>14} {:>14}",
        "r", "D", "ΔY₁", "closed", "ΔY₁ΔY₂", "n̄+½"
    );
    for i in 1..=8 {
        let r = i as f64 * 0.25;
        let dim = ket_dim(r, 1e-16)?;
        let ket = steady_ket(dim, r, 0.0)?;
        let y = y_pair(dim, 0.0)?;
        let dy1 = variance_ket(&y.y1, &ket)?.sqrt();
        let dy2 = variance_ket(&y.y2, &ket)?.sqrt();
        let exact = y_variances(r)?;
        println!(
            "{r:>5.2} {dim:>5} {dy1:>14.10} {:>14.10} {:>14.10} {:>14.10}",
            exact.dy1,
            dy1 * dy2,
            exact.bound
        );
    }
    Ok(())
}
