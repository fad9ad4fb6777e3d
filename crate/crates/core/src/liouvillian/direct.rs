use faer::prelude::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;
use num_complex::Complex64;

use super::integrate::{max_abs, Sector, SteadyState};
use super::{devectorize, vectorize, Superoperator};
use crate::error::{Error, Result};
use crate::fock::DensityMatrix;

/// Relative residual above which a direct solution is rejected.
const RESIDUAL_REL_TOL: f64 = 1e-9;

/// Stationary state in the sector reachable from `rho0`, by sparse LU of the
/// restricted generator with one population row replaced by the trace
/// condition.
///
/// Within that sector the answer is the unique stationary state, so it
/// coincides with the long-time limit of [`super::steady_state`]. Fails with
/// [`Error::Singular`] when the sector holds more than one.
pub fn steady_state_direct(s: &Superoperator, rho0: &DensityMatrix) -> Result<SteadyState> {
    let d = s.hilbert_dim();
    if rho0.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho0.dim(),
        });
    }
    rho0.validate()?;
    let sector = Sector::new(s, &vectorize(rho0));
    let n = sector.indices.len();
    let diag = sector.diagonal_positions(d);
    let pivot_row = *diag
        .first()
        .ok_or_else(|| Error::Internal("sector contains no populations".into()))?;

    let mut trips: Vec<Triplet<usize, usize, Complex64>> = sector
        .op
        .triplets()
        .filter(|&(r, _, _)| r != pivot_row)
        .map(|(r, c, v)| Triplet::new(r, c, v))
        .collect();
    trips.extend(
        diag.iter()
            .map(|&k| Triplet::new(pivot_row, k, Complex64::new(1.0, 0.0))),
    );
    let a = SparseColMat::<usize, Complex64>::try_new_from_triplets(n, n, &trips)
        .map_err(|e| Error::Internal(format!("sparse assembly failed: {e:?}")))?;
    let lu = a
        .sp_lu()
        .map_err(|e| Error::Singular(format!("sparse LU failed: {e:?}")))?;
    let mut rhs = Mat::<Complex64>::zeros(n, 1);
    rhs[(pivot_row, 0)] = Complex64::new(1.0, 0.0);
    let sol = lu.solve(&rhs);
    let x: Vec<Complex64> = (0..n).map(|i| sol[(i, 0)]).collect();

    let mut sx = vec![Complex64::new(0.0, 0.0); n];
    sector.op.matvec(&x, &mut sx);
    let residual = max_abs(&sx);
    let scale = sector
        .op
        .triplets()
        .map(|t| t.2.norm())
        .fold(0.0, f64::max)
        .max(1.0);
    if !residual.is_finite() || residual > RESIDUAL_REL_TOL * scale {
        return Err(Error::Singular(format!(
            "residual {residual:e} after solve; stationary state not unique or ill-conditioned"
        )));
    }
    let out = devectorize(&sector.scatter(&x, d * d), d)?;
    let rho = match rho0.mode_dims() {
        Some(m) => out.with_mode_dims(m)?,
        None => out,
    };
    Ok(SteadyState {
        rho,
        residual: residual / s.rate_scale(),
        time: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{annihilation, creation};
    use crate::liouvillian::{add, dissipator};
    use approx::assert_abs_diff_eq;

    #[test]
    fn thermal_state() {
        let d = 30;
        let nth = 0.5;
        let s = add(
            &dissipator(&annihilation(d).unwrap(), nth + 1.0).unwrap(),
            &dissipator(&creation(d).unwrap(), nth).unwrap(),
        )
        .unwrap();
        let ss = steady_state_direct(&s, &DensityMatrix::ground(d).unwrap()).unwrap();
        let x = nth / (nth + 1.0);
        for n in 0..8 {
            assert_abs_diff_eq!(
                ss.rho.get(n, n).re,
                (1.0 - x) * x.powi(n as i32),
                epsilon = 1e-8
            );
        }
    }

    #[test]
    fn degenerate_sector_is_singular() {
        // no dynamics at all: every state is stationary
        let s = dissipator(&annihilation(3).unwrap(), 0.0).unwrap();
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(matches!(
            steady_state_direct(&s, &rho),
            Err(Error::Singular(_))
        ));
    }
}
