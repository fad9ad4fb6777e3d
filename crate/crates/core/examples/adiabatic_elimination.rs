//! Solves the two-mode model and compares the mechanical marginal with the
//! dark state of the effective model.

use std::time::Instant;

use quadsqueeze::cli::{cavity_fidelity, fidelity_with_oracle};
use quadsqueeze::fock::DensityMatrix;
use quadsqueeze::liouvillian::steady_state_direct;
use quadsqueeze::model::{full_generator, regime_check, ModelParams};
use quadsqueeze::observables::{partial_trace, Subsystem};

fn main() -> quadsqueeze::Result<()> {
    let r = 0.8;
    for (dc, dm) in [(13, 41)] {
        let mut p = ModelParams::new(r, 0.0)?;
        p.dim_cavity = dc;
        p.dim_mech = dm;
        println!("{:?}", regime_check(&p));
        let s = full_generator(&p)?;
        let rho0 = DensityMatrix::product(&DensityMatrix::ground(dc)?, &DensityMatrix::ground(dm)?);
        let start = Instant::now();
        let st = steady_state_direct(&s, &rho0)?;
        let mech = partial_trace(&st.rho, Subsystem::Second)?;
        let cav = partial_trace(&st.rho, Subsystem::First)?;
        println!(
            "dims ({dc}, {dm}), solved in {:.1?}, residual {:.2e}",
            start.elapsed(),
            st.residual
        );
        println!(
            "  mechanical fidelity with dark state {:.8}",
            fidelity_with_oracle(&mech, r, 0.0)?
        );
        println!(
            "  cavity fidelity with squeezed vacuum {:.8}",
            cavity_fidelity(&cav, &p.squeeze)?
        );
    }
    Ok(())
}
