//! Dense statevector simulation.

use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64;

use crate::circuit::{Circuit, Control, Gate, Polarity, SingleKind};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Largest register `circuit_to_matrix` will expand.
pub const MAX_UNITARY_QUBITS: usize = 12;
/// Largest register a statevector may hold.
pub const MAX_STATE_QUBITS: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits > MAX_STATE_QUBITS {
            return Err(Error::TooManyQubits {
                what: "statevector",
                max: MAX_STATE_QUBITS,
                got: n_qubits,
            });
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} outside {n_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Wraps amplitudes without normalizing them.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = crate::matrix::log2_exact(amplitudes.len())?;
        if n_qubits > MAX_STATE_QUBITS {
            return Err(Error::TooManyQubits {
                what: "statevector",
                max: MAX_STATE_QUBITS,
                got: n_qubits,
            });
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn mask(&self, q: usize) -> usize {
        1usize << (self.n_qubits - 1 - q)
    }
}

fn control_pattern(s: &StateVector, controls: &[Control]) -> (usize, usize) {
    controls.iter().fold((0, 0), |(m, v), c| {
        let b = s.mask(c.qubit);
        (
            m | b,
            if c.polarity == Polarity::Closed {
                v | b
            } else {
                v
            },
        )
    })
}

fn check_range(s: &StateVector, g: &Gate) -> Result<()> {
    for q in g.qubits() {
        if q >= s.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                n_qubits: s.n_qubits,
            });
        }
    }
    Ok(())
}

fn apply_dense(s: &mut StateVector, controls: &[Control], targets: &[usize], m: &DenseMatrix) {
    let (cmask, cval) = control_pattern(s, controls);
    let tmasks: Vec<usize> = targets.iter().map(|&t| s.mask(t)).collect();
    let tmask: usize = tmasks.iter().fold(0, |a, b| a | b);
    let k = targets.len();
    let offsets: Vec<usize> = (0..1usize << k)
        .map(|j| {
            (0..k)
                .filter(|&i| (j >> (k - 1 - i)) & 1 == 1)
                .map(|i| tmasks[i])
                .sum()
        })
        .collect();
    let mut buf = vec![Complex64::new(0.0, 0.0); offsets.len()];
    for base in 0..s.amplitudes.len() {
        if base & tmask != 0 || base & cmask != cval {
            continue;
        }
        for (b, &o) in buf.iter_mut().zip(&offsets) {
            *b = s.amplitudes[base | o];
        }
        for (r, &o) in offsets.iter().enumerate() {
            s.amplitudes[base | o] = (0..buf.len()).map(|c| m[[r, c]] * buf[c]).sum();
        }
    }
}

fn apply_in_place(s: &mut StateVector, g: &Gate) {
    match g {
        Gate::Single {
            target,
            kind: SingleKind::X,
        } => apply_mcx(s, &[], *target),
        Gate::Single { target, kind } => apply_dense(s, &[], &[*target], &kind.matrix()),
        Gate::Mcx { controls, target } => apply_mcx(s, controls, *target),
        Gate::Dense {
            targets, matrix, ..
        } => apply_dense(s, &[], targets, matrix),
        Gate::ControlledDense {
            controls,
            targets,
            matrix,
            ..
        } => apply_dense(s, controls, targets, matrix),
    }
}

fn apply_mcx(s: &mut StateVector, controls: &[Control], target: usize) {
    let (cmask, cval) = control_pattern(s, controls);
    let t = s.mask(target);
    for i in 0..s.amplitudes.len() {
        if i & t == 0 && i & cmask == cval {
            s.amplitudes.swap(i, i | t);
        }
    }
}

pub fn apply_gate(s: &StateVector, g: &Gate) -> Result<StateVector> {
    check_range(s, g)?;
    let mut out = s.clone();
    apply_in_place(&mut out, g);
    Ok(out)
}

pub fn run(c: &Circuit, initial: &StateVector) -> Result<StateVector> {
    if c.n_qubits() != initial.n_qubits {
        return Err(Error::WidthMismatch {
            expected: c.n_qubits(),
            got: initial.n_qubits,
        });
    }
    let mut s = initial.clone();
    for g in c.gates() {
        apply_in_place(&mut s, g);
    }
    Ok(s)
}

/// Full unitary of `c`, one column per computational basis input.
pub fn circuit_to_matrix(c: &Circuit) -> Result<DenseMatrix> {
    let n = c.n_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(Error::TooManyQubits {
            what: "circuit unitary",
            max: MAX_UNITARY_QUBITS,
            got: n,
        });
    }
    let dim = 1usize << n;
    let mut out = Array2::zeros((dim, dim));
    for j in 0..dim {
        let col = run(c, &StateVector::basis(n, j)?)?;
        for (i, a) in col.amplitudes.into_iter().enumerate() {
            out[[i, j]] = a;
        }
    }
    Ok(out)
}

/// Marginal distribution over `ancillas`. Keys list the ancilla bits in
/// the given order; every outcome is present, including zero ones.
pub fn ancilla_probs(s: &StateVector, ancillas: &[usize]) -> Result<BTreeMap<String, f64>> {
    for (i, &q) in ancillas.iter().enumerate() {
        if q >= s.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                n_qubits: s.n_qubits,
            });
        }
        if ancillas[..i].contains(&q) {
            return Err(Error::QubitCollision(q));
        }
    }
    let k = ancillas.len();
    let mut probs = vec![0.0; 1 << k];
    for (idx, a) in s.amplitudes.iter().enumerate() {
        let key = ancillas.iter().fold(0usize, |acc, &q| {
            (acc << 1) | usize::from(idx & s.mask(q) != 0)
        });
        probs[key] += a.norm_sqr();
    }
    Ok(probs
        .into_iter()
        .enumerate()
        .map(|(key, p)| {
            (
                if k == 0 {
                    String::new()
                } else {
                    format!("{key:0k$b}")
                },
                p,
            )
        })
        .collect())
}
