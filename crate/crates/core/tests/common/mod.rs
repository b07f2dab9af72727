//! Independent dense oracles and random generators shared by the
//! integration tests.
#![allow(dead_code)]

use ndarray::{s, Array2};
use num_complex::Complex64;
use rand::Rng;
use sigma_lcu::matrix::DenseMatrix;
use sigma_lcu::{FactorString, SigmaFactor, SigmaTerm, SparseMatrix, StateOracle};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn eye(dim: usize) -> DenseMatrix {
    Array2::from_diag_elem(dim, c(1.0, 0.0))
}

pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    Array2::from_shape_fn((ar * br, ac * bc), |(i, j)| {
        a[[i / br, j / bc]] * b[[i % br, j % bc]]
    })
}

pub fn adjoint(a: &DenseMatrix) -> DenseMatrix {
    a.t().mapv(|z| z.conj())
}

/// The 2x2 matrix of a factor written out by hand.
pub fn factor_dense(f: SigmaFactor) -> DenseMatrix {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    match f {
        SigmaFactor::Ident => ndarray::array![[o, z], [z, o]],
        SigmaFactor::SPlus => ndarray::array![[z, o], [z, z]],
        SigmaFactor::SMinus => ndarray::array![[z, z], [o, z]],
        SigmaFactor::SPlusSMinus => ndarray::array![[o, z], [z, z]],
        SigmaFactor::SMinusSPlus => ndarray::array![[z, z], [z, o]],
    }
}

/// Kronecker product of the factors, coefficient excluded.
pub fn term_dense(t: &SigmaTerm) -> DenseMatrix {
    t.factors
        .iter()
        .fold(eye(1), |acc, f| kron(&acc, &factor_dense(f)))
}

pub fn completion_dense(t: &SigmaTerm) -> DenseMatrix {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    let x = ndarray::array![[z, o], [o, z]];
    t.factors.iter().fold(eye(1), |acc, f| match f {
        SigmaFactor::SPlus | SigmaFactor::SMinus => kron(&acc, &x),
        _ => kron(&acc, &eye(2)),
    })
}

/// `[[A, B], [C, D]]`.
pub fn blocks(a: &DenseMatrix, b: &DenseMatrix, cc: &DenseMatrix, d: &DenseMatrix) -> DenseMatrix {
    let n = a.nrows();
    let mut out = Array2::zeros((2 * n, 2 * n));
    out.slice_mut(s![..n, ..n]).assign(a);
    out.slice_mut(s![..n, n..]).assign(b);
    out.slice_mut(s![n.., ..n]).assign(cc);
    out.slice_mut(s![n.., n..]).assign(d);
    out
}

pub fn frob(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn unitarity(a: &DenseMatrix) -> f64 {
    frob(&adjoint(a).dot(a), &eye(a.nrows()))
}

/// `<0|U^† A V|0>` by direct linear algebra.
pub fn overlap(u: &DenseMatrix, a: &DenseMatrix, v: &DenseMatrix) -> Complex64 {
    let psi1 = u.column(0);
    let psi2 = a.dot(&v.column(0));
    psi1.iter()
        .zip(psi2.iter())
        .map(|(x, y)| x.conj() * y)
        .sum()
}

pub fn random_factor<R: Rng>(rng: &mut R) -> SigmaFactor {
    [
        SigmaFactor::Ident,
        SigmaFactor::SPlus,
        SigmaFactor::SMinus,
        SigmaFactor::SPlusSMinus,
        SigmaFactor::SMinusSPlus,
    ][rng.gen_range(0..5)]
}

pub fn random_term<R: Rng>(rng: &mut R, n: usize) -> SigmaTerm {
    let factors = (0..n).map(|_| random_factor(rng)).collect();
    SigmaTerm::new(
        c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
        FactorString(factors),
    )
}

/// Unitary from Gram-Schmidt on a random complex matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n_qubits: usize) -> DenseMatrix {
    let dim = 1usize << n_qubits;
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        for _ in 0..2 {
            for q in &cols {
                let p: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, qa) in v.iter_mut().zip(q) {
                    *x -= p * qa;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    Array2::from_shape_fn((dim, dim), |(i, j)| cols[j][i])
}

pub fn random_oracle<R: Rng>(rng: &mut R, n_qubits: usize, label: &str) -> StateOracle {
    StateOracle::new(random_unitary(rng, n_qubits), label).expect("unitary by construction")
}

/// Random sparse matrix; `integer` picks small integer entries.
pub fn random_sparse<R: Rng>(
    rng: &mut R,
    n_qubits: usize,
    density: f64,
    integer: bool,
) -> SparseMatrix {
    let dim = 1usize << n_qubits;
    let mut trips = Vec::new();
    for r in 0..dim {
        for col in 0..dim {
            if rng.gen_bool(density) {
                let v = if integer {
                    c(rng.gen_range(-5..=5) as f64, rng.gen_range(-2..=2) as f64)
                } else {
                    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                };
                trips.push((r, col, v));
            }
        }
    }
    SparseMatrix::from_triplets(n_qubits, trips).expect("valid width")
}

/// Output basis index for each input `0..8` of a 3-qubit MCX, read off the
/// CCNOT tables with the repeated `110` rows taken as the `111` row.
pub const CCNOT_TABLES: [(&str, [usize; 8]); 8] = [
    ("q0 c, q1 c -> q2", [0, 1, 2, 3, 4, 5, 7, 6]),
    ("q0 o, q1 o -> q2", [1, 0, 2, 3, 4, 5, 6, 7]),
    ("q0 c, q1 o -> q2", [0, 1, 2, 3, 5, 4, 6, 7]),
    ("q0 o, q1 c -> q2", [0, 1, 3, 2, 4, 5, 6, 7]),
    ("q1 c, q2 c -> q0", [0, 1, 2, 7, 4, 5, 6, 3]),
    ("q1 o, q2 o -> q0", [4, 1, 2, 3, 0, 5, 6, 7]),
    ("q1 c, q2 o -> q0", [0, 1, 6, 3, 4, 5, 2, 7]),
    ("q1 o, q2 c -> q0", [0, 5, 2, 3, 4, 1, 6, 7]),
];

pub fn ccnot(layout: &str) -> sigma_lcu::Gate {
    let (ctl, target) = layout.split_once(" -> ").unwrap();
    let controls = ctl
        .split(", ")
        .map(|p| {
            let (q, pol) = p.split_once(' ').unwrap();
            let q: usize = q[1..].parse().unwrap();
            if pol == "c" {
                sigma_lcu::Control::closed(q)
            } else {
                sigma_lcu::Control::open(q)
            }
        })
        .collect();
    sigma_lcu::Gate::mcx(controls, target[1..].parse().unwrap())
}
