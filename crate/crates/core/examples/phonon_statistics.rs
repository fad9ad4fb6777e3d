//! Phonon number distribution, mean, g²(0) and Klyshko figures of the
//! steady state.

use quadsqueeze::oracle::{g2_zero, klyshko, mean_phonon, phonon_distribution_auto};

fn main() -> quadsqueeze::Result<()> {
    let r = 2.0;
    let dist = phonon_distribution_auto(r, 0.0)?;
    println!("r = {r}: {} levels, total {:.12}", dist.len(), dist.total());
    for n in (0..=24).step_by(4) {
        println!("  P_{n:<2} = {:.6e}", dist.get(n));
    }
    println!("  P_5  = {}", dist.get(5));
    println!(
        "n̄ series {:.12}, closed form {:.12}",
        dist.mean(),
        mean_phonon(r)?
    );
    for n in [1, 4, 8] {
        match klyshko(&dist, n) {
            Ok(k) => println!("K_{n} = {k}"),
            Err(e) => println!("K_{n}: {e}"),
        }
    }
    println!("\n{:>5} {:>12} {:>12}", "r", "n̄", "g²(0)");
    for i in 0..=8 {
        let r = i as f64 * 0.25;
        let g2 = g2_zero(r).map_or("undefined".to_string(), |g| format!("{g:.6}"));
        println!("{r:>5.2} {:>12.6} {g2:>12}", mean_phonon(r)?);
    }
    Ok(())
}
