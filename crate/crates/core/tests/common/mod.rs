//! Reference implementations shared by the oracle and acceptance targets.

#![allow(dead_code)]

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use quadsqueeze::fock::{DensityMatrix, Operator};
use quadsqueeze::liouvillian::{add, devectorize, dissipator, hamiltonian_term, Superoperator};

pub type C = Complex64;

pub fn lcg(seed: u64) -> impl FnMut() -> f64 {
    let mut s = seed;
    move || {
        s = s
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    }
}

pub fn random_matrix(d1: usize, d2: usize, seed: u64) -> Array2<C> {
    let mut next = lcg(seed);
    Array2::from_shape_fn((d1, d2), |_| C::new(next(), next()))
}

pub fn random_state(d: usize, seed: u64) -> DensityMatrix {
    let a = random_matrix(d, d, seed);
    let p = a.dot(&a.t().mapv(|z| z.conj()));
    let tr: f64 = p.diag().iter().map(|z| z.re).sum();
    DensityMatrix::new(p / tr).unwrap()
}

pub fn random_hermitian(d: usize, seed: u64) -> Operator {
    let a = random_matrix(d, d, seed);
    Operator::from_matrix(&a + &a.t().mapv(|z| z.conj())).unwrap()
}

pub fn max_diff(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    a.matrix()
        .iter()
        .zip(b.matrix())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Scaling and squaring with a 30-term Taylor series.
pub fn expm(a: &Array2<C>) -> Array2<C> {
    let n = a.nrows();
    let norm = a
        .columns()
        .into_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = (norm / 0.25).log2().ceil().max(0.0) as i32;
    let scaled = a / C::new(2f64.powi(s), 0.0);
    let mut term = Array2::<C>::eye(n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = term.dot(&scaled) / C::new(k as f64, 0.0);
        sum = sum + &term;
    }
    for _ in 0..s {
        sum = sum.dot(&sum);
    }
    sum
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn dense_solve(mut a: Array2<C>, mut b: Array1<C>) -> Array1<C> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[[i, col]].norm().total_cmp(&a[[j, col]].norm()))
            .unwrap();
        if piv != col {
            for k in 0..n {
                a.swap([col, k], [piv, k]);
            }
            b.swap(col, piv);
        }
        let p = a[[col, col]];
        assert!(p.norm() > 1e-14, "singular system");
        for row in col + 1..n {
            let f = a[[row, col]] / p;
            if f.norm() == 0.0 {
                continue;
            }
            for k in col..n {
                let v = a[[col, k]];
                a[[row, k]] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = Array1::zeros(n);
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[[row, k]] * x[k];
        }
        x[row] = acc / a[[row, row]];
    }
    x
}

/// Steady state from the dense generator with the first population
/// equation replaced by the trace condition.
pub fn dense_steady(s: &Superoperator) -> DensityMatrix {
    let d = s.hilbert_dim();
    let mut a = s.to_dense();
    for k in 0..d * d {
        a[[0, k]] = C::new(0.0, 0.0);
    }
    for i in 0..d {
        a[[0, i + i * d]] = C::new(1.0, 0.0);
    }
    let mut b = Array1::zeros(d * d);
    b[0] = C::new(1.0, 0.0);
    devectorize(&dense_solve(a, b), d).unwrap()
}

pub fn random_generator(d: usize, seed: u64) -> Superoperator {
    let h = random_hermitian(d, seed);
    let l = Operator::from_matrix(random_matrix(d, d, seed + 1)).unwrap();
    let l2 = Operator::from_matrix(random_matrix(d, d, seed + 2)).unwrap();
    let s = add(
        &hamiltonian_term(&h).unwrap(),
        &dissipator(&l, 0.8).unwrap(),
    )
    .unwrap();
    add(&s, &dissipator(&l2, 0.3).unwrap()).unwrap()
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd {
            hi: s,
            lo: (a - (s - bb)) + (b - bb),
        }
    }

    pub fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let t = Dd::two_sum(self.lo, o.lo);
        let mut r = Dd::two_sum(s.hi, s.lo + t.hi);
        r = Dd::two_sum(r.hi, r.lo + t.lo);
        r
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Dd::two_sum(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::new(-q1)));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Dd::new(-q2)));
        let q3 = r.hi / o.hi;
        Dd::two_sum(q1, q2).add(Dd::new(q3))
    }
}

pub fn hyp2f1_dd(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut term = Dd::new(1.0);
    let mut sum = Dd::new(1.0);
    for k in 0..200_000 {
        let k = k as f64;
        let num = Dd::two_sum(a, k).mul(Dd::two_sum(b, k)).mul(Dd::new(z));
        let den = Dd::two_sum(c, k).mul(Dd::new(k + 1.0));
        term = term.mul(num).div(den);
        sum = sum.add(term);
        if term.hi.abs() < 1e-34 * sum.hi.abs() {
            break;
        }
    }
    sum.hi + sum.lo
}

/// Hermite functions `⟨x|n⟩` for `n < d` in the convention where the
/// vacuum Wigner function is `e^{−x²−p²}/π`.
pub fn hermite_functions(d: usize, x: f64) -> Vec<f64> {
    let mut psi = vec![0.0; d];
    psi[0] = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
    if d > 1 {
        psi[1] = 2f64.sqrt() * x * psi[0];
    }
    for n in 1..d - 1 {
        let nf = n as f64;
        psi[n + 1] = (2.0 / (nf + 1.0)).sqrt() * x * psi[n] - (nf / (nf + 1.0)).sqrt() * psi[n - 1];
    }
    psi
}
