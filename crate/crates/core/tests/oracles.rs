//! Independent references: dense matrix exponential, dense LU, a
//! double-double hypergeometric series, Wigner marginals and partial
//! traces.

mod common;

use common::*;
use quadsqueeze::fock::{identity, kron, DensityMatrix};
use quadsqueeze::liouvillian::{
    devectorize, evolve, steady_state, steady_state_direct, vectorize, SteadyOptions,
};
use quadsqueeze::model::{effective_generator, ModelParams};
use quadsqueeze::observables::{expect, partial_trace, Subsystem};
use quadsqueeze::oracle::{hyp2f1, squeeze_z};
use quadsqueeze::wigner::wigner_grid;

#[test]
fn rk4_matches_matrix_exponential() {
    for d in 2..=4 {
        let s = random_generator(d, 10 * d as u64);
        let rho0 = random_state(d, 7 + d as u64);
        let t = 1.3;
        let exact = expm(&(s.to_dense() * C::new(t, 0.0))).dot(&vectorize(&rho0));
        let exact = devectorize(&exact, d).unwrap();
        let got = evolve(&s, &rho0, t, 0.01, 1e-9).unwrap();
        assert!(
            max_diff(&got, &exact) < 1e-7,
            "D = {d}: {}",
            max_diff(&got, &exact)
        );
    }
}

#[test]
fn sparse_and_integrated_steady_states_match_dense_lu() {
    for d in [3, 4, 6] {
        let s = random_generator(d, 100 + d as u64);
        let dense = dense_steady(&s);
        let rho0 = DensityMatrix::maximally_mixed(d).unwrap();
        let direct = steady_state_direct(&s, &rho0).unwrap();
        assert!(max_diff(&direct.rho, &dense) < 1e-10);
        let rk = steady_state(&s, &rho0, &SteadyOptions::default()).unwrap();
        assert!(max_diff(&rk.rho, &dense) < 1e-8);
    }
}

#[test]
fn effective_model_with_bath_matches_dense_lu() {
    let mut p = ModelParams::new(0.5, 0.3).unwrap();
    p.dim_mech = 17;
    p.include_mech_bath = true;
    p.n_th = 0.2;
    p.jump_rate_override = Some(5.0);
    let s = effective_generator(&p).unwrap();
    let dense = dense_steady(&s);
    let direct = steady_state_direct(&s, &DensityMatrix::maximally_mixed(17).unwrap()).unwrap();
    assert!(max_diff(&direct.rho, &dense) < 1e-10);
}

#[test]
fn hyp2f1_matches_double_double_series() {
    let mut cases = vec![
        (0.5, 0.25, 0.75),
        (1.5, 1.25, 1.75),
        (2.5, 2.25, 2.75),
        (-0.5, 1.5, 2.0),
    ];
    cases.push((0.3, 0.7, 1.9));
    for &(a, b, c) in &cases {
        for r in [0.1, 0.5, 1.0, 1.5, 2.0] {
            let z = squeeze_z(r);
            let got = hyp2f1(a, b, c, z).unwrap();
            let want = hyp2f1_dd(a, b, c, z);
            assert!(
                ((got - want) / want).abs() < 1e-12,
                "({a}, {b}, {c}; r = {r}): {got} vs {want}"
            );
        }
    }
}

#[test]
fn wigner_p_integral_is_position_density() {
    for (d, seed) in [(4, 1), (7, 2), (10, 3)] {
        // two empty levels satisfy the truncation guard without changing W
        let rho = random_state(d, seed).padded(d + 2).unwrap();
        let half = 10.0;
        let w = wigner_grid(&rho, half, 401).unwrap();
        let h = w.spacing();
        let m = rho.matrix();
        for (i, &x) in w.xs.iter().enumerate().step_by(37) {
            let marginal: f64 = w.values.row(i).sum() * h;
            let psi = hermite_functions(d, x);
            let mut exact = 0.0;
            for a in 0..d {
                for b in 0..d {
                    exact += (m[[a, b]] * psi[a] * psi[b]).re;
                }
            }
            assert!(
                (marginal - exact).abs() < 1e-10,
                "D = {d}, x = {x}: {marginal} vs {exact}"
            );
        }
    }
}

#[test]
fn reduced_states_reproduce_local_expectations() {
    for (da, db, seed) in [(2, 3, 5), (4, 5, 6), (3, 6, 7)] {
        let joint = random_state(da * db, seed)
            .with_mode_dims((da, db))
            .unwrap();
        let oa = random_hermitian(da, seed + 10);
        let ob = random_hermitian(db, seed + 20);
        let lifted_a = kron(&oa, &identity(db).unwrap())
            .with_mode_dims((da, db))
            .unwrap();
        let lifted_b = kron(&identity(da).unwrap(), &ob)
            .with_mode_dims((da, db))
            .unwrap();
        let ra = partial_trace(&joint, Subsystem::First).unwrap();
        let rb = partial_trace(&joint, Subsystem::Second).unwrap();
        let ea = expect(&lifted_a, &joint).unwrap() - expect(&oa, &ra).unwrap();
        let eb = expect(&lifted_b, &joint).unwrap() - expect(&ob, &rb).unwrap();
        assert!(ea.norm() < 1e-12 && eb.norm() < 1e-12);
        assert!((ra.trace().re - 1.0).abs() < 1e-12);
    }
}
