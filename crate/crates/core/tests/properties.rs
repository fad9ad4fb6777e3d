use ndarray::Array2;
use num_complex::Complex64;
use proptest::prelude::*;

use quadsqueeze::fock::{annihilation, commutator, creation, DensityMatrix, Ket, Operator};
use quadsqueeze::liouvillian::{add, dissipator, evolve, hamiltonian_term, Superoperator};
use quadsqueeze::model::{jump_operator, squeeze_coeffs};
use quadsqueeze::observables::{fidelity_ket, partial_trace, Subsystem};
use quadsqueeze::oracle::{hyp2f1, ket_dim, mean_phonon, phonon_distribution, steady_ket};
use quadsqueeze::wigner::{fourfold_defect, twofold_defect, wigner_grid, wigner_point};

fn complex_matrix(d: usize) -> impl Strategy<Value = Array2<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d * d).prop_map(move |v| {
        Array2::from_shape_vec(
            (d, d),
            v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(),
        )
        .unwrap()
    })
}

fn hermitian(m: &Array2<Complex64>) -> Operator {
    Operator::from_matrix(m + &m.t().mapv(|z| z.conj())).unwrap()
}

/// `AA†` normalized to unit trace.
fn state(m: &Array2<Complex64>) -> DensityMatrix {
    let p = m.dot(&m.t().mapv(|z| z.conj()));
    let tr = p.diag().iter().map(|z| z.re).sum::<f64>();
    DensityMatrix::new(p / tr).unwrap()
}

fn generator(h: &Array2<Complex64>, l: &Array2<Complex64>, rate: f64) -> Superoperator {
    let lop = Operator::from_matrix(l.clone()).unwrap();
    add(
        &hamiltonian_term(&hermitian(h)).unwrap(),
        &dissipator(&lop, rate).unwrap(),
    )
    .unwrap()
}

fn system(
    d: usize,
) -> impl Strategy<Value = (Array2<Complex64>, Array2<Complex64>, Array2<Complex64>, f64)> {
    (
        complex_matrix(d),
        complex_matrix(d),
        complex_matrix(d),
        0.0f64..2.0,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generator_output_is_traceless_and_hermitian((h, l, a, rate) in (2usize..6).prop_flat_map(system)) {
        let s = generator(&h, &l, rate);
        let out = s.apply(&state(&a)).unwrap();
        prop_assert!(out.trace().norm() < 1e-12);
        prop_assert!(out.hermiticity_deviation() < 1e-12);
        prop_assert!(s.trace_defect() < 1e-12);
    }

    #[test]
    fn evolution_keeps_a_density_matrix((h, l, a, rate) in (2usize..5).prop_flat_map(system)) {
        let s = generator(&h, &l, rate);
        let rho = evolve(&s, &state(&a), 0.7, 0.05, 1e-9).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-10);
        prop_assert!(rho.hermiticity_deviation() < 1e-12);
        prop_assert!(rho.populations().iter().all(|&p| p > -1e-10));
    }

    #[test]
    fn truncated_commutator_edge(d in 2usize..40) {
        let c = commutator(&annihilation(d).unwrap(), &creation(d).unwrap()).unwrap();
        for n in 0..d {
            let expect = if n + 1 == d { -((d - 1) as f64) } else { 1.0 };
            prop_assert!((c.get(n, n).re - expect).abs() < 1e-12 * d as f64);
        }
        let off = c.nonzeros().into_iter().filter(|&(i, j, _)| i != j).count();
        prop_assert_eq!(off, 0);
    }

    #[test]
    fn hyp2f1_is_symmetric_in_a_b(a in -2.0f64..3.0, b in -2.0f64..3.0, c in 0.3f64..4.0, z in 0.0f64..0.9) {
        let x = hyp2f1(a, b, c, z).unwrap();
        let y = hyp2f1(b, a, c, z).unwrap();
        prop_assert!((x - y).abs() <= 1e-13 * x.abs().max(1.0));
        prop_assert_eq!(hyp2f1(a, b, c, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn distribution_lives_on_every_fourth_level(r in 0.0f64..2.0, theta in -3.0f64..3.0) {
        let dist = phonon_distribution(r, theta, 400).unwrap();
        for (n, &p) in dist.probabilities().iter().enumerate() {
            if n % 4 != 0 {
                prop_assert_eq!(p, 0.0);
            } else {
                prop_assert!(p >= 0.0);
            }
        }
        prop_assert!((dist.total() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn mean_phonon_increases(r in 0.0f64..2.9, dr in 1e-3f64..0.1) {
        prop_assert!(mean_phonon(r + dr).unwrap() > mean_phonon(r).unwrap());
    }

    #[test]
    fn steady_ket_is_dark_on_the_interior(r in 0.0f64..1.5, theta in -3.0f64..3.0) {
        let dim = ket_dim(r, 1e-12).unwrap();
        let ket = steady_ket(dim, r, theta).unwrap();
        let j = jump_operator(dim, &squeeze_coeffs(r, theta).unwrap()).unwrap();
        let out = quadsqueeze::fock::apply(&j, &ket).unwrap();
        // b†² lifts the last family member onto level dim − 1
        for n in 0..dim - 1 {
            prop_assert!(out.amplitudes()[n].norm() < 1e-12);
        }
    }

    #[test]
    fn family_states_have_fourfold_symmetry(r in 0.05f64..1.0, theta in -3.0f64..3.0) {
        let rho = DensityMatrix::pure(&steady_ket(ket_dim(r, 1e-10).unwrap(), r, theta).unwrap());
        let w = wigner_grid(&rho, 3.0, 21).unwrap();
        prop_assert!(fourfold_defect(&w).unwrap() < 1e-12);
        prop_assert!(twofold_defect(&w).unwrap() < 1e-12);
    }

    #[test]
    fn fock_wigner_at_origin(n in 0usize..20) {
        let rho = DensityMatrix::fock(n + 3, n).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let w = wigner_point(&rho, 0.0, 0.0).unwrap();
        prop_assert!((w - sign / std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn fidelity_is_bounded(a in complex_matrix(4), v in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4)) {
        let amps = ndarray::Array1::from_iter(v.into_iter().map(|(x, y)| Complex64::new(x, y)));
        prop_assume!(amps.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3);
        let ket = Ket::from_amplitudes(amps).unwrap().normalized().unwrap();
        let f = fidelity_ket(&ket, &state(&a)).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        let own = fidelity_ket(&ket, &DensityMatrix::pure(&ket)).unwrap();
        prop_assert!((own - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product((a, b) in (complex_matrix(3), complex_matrix(4))) {
        let (ra, rb) = (state(&a), state(&b));
        let joint = DensityMatrix::product(&ra, &rb);
        let back_a = partial_trace(&joint, Subsystem::First).unwrap();
        let back_b = partial_trace(&joint, Subsystem::Second).unwrap();
        for (x, y) in back_a.matrix().iter().zip(ra.matrix()) {
            prop_assert!((x - y).norm() < 1e-13);
        }
        for (x, y) in back_b.matrix().iter().zip(rb.matrix()) {
            prop_assert!((x - y).norm() < 1e-13);
        }
    }
}
