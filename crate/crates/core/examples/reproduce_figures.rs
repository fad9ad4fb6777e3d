//! Writes every figure dataset and the checksum manifest into a directory
//! (default `figures`).

use quadsqueeze::cli::{cmd_figures, RunConfig};

fn main() -> quadsqueeze::Result<()> {
    let mut config = RunConfig::default();
    config.output.directory = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "figures".into())
        .into();
    for path in cmd_figures(&config)?.files {
        println!("{}", path.display());
    }
    Ok(())
}
