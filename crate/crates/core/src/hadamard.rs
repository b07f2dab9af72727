//! Hadamard-test circuits for overlaps `<0|U^† A_l V|0>` and sandwiches
//! `<0|U^† A_i^† M A_j V|0>`, plus finite-shot emulation.
//!
//! Register layout: ancillas `a0 = 0`, `a1 = 1`, system qubits from 2.
//! The real part is `P00 - P10` over `(a0, a1)`; the imaginary part comes
//! from the same circuit with SDG on `a0` after the first Hadamard.

use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{
    build_ul_circuit, controlled, unflatten, Circuit, Control, Gate, Polarity, SingleKind,
    UNITARY_TOL,
};
use crate::error::{Error, Result};
use crate::matrix::{log2_exact, unitarity_error, DenseMatrix};
use crate::sigma::{Decomposition, SigmaTerm};
use crate::simulator::{ancilla_probs, run, StateVector};

/// A unitary treated as a black box, e.g. a state preparation.
#[derive(Debug, Clone, PartialEq)]
pub struct StateOracle {
    matrix: DenseMatrix,
    label: String,
    n_qubits: usize,
}

#[derive(Serialize, Deserialize)]
struct OracleFile {
    label: String,
    matrix: Vec<[f64; 2]>,
}

impl StateOracle {
    pub fn new(matrix: DenseMatrix, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let (r, c) = matrix.dim();
        if r != c {
            return Err(Error::NotSquare { rows: r, cols: c });
        }
        let n_qubits = log2_exact(r)?;
        let deviation = unitarity_error(&matrix);
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { label, deviation });
        }
        Ok(Self {
            matrix,
            label,
            n_qubits,
        })
    }

    pub fn identity(n_qubits: usize) -> Self {
        let m = Array2::from_diag_elem(1 << n_qubits, Complex64::new(1.0, 0.0));
        Self {
            matrix: m,
            label: "I".into(),
            n_qubits,
        }
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// `U|0>`.
    pub fn state(&self) -> Vec<Complex64> {
        self.matrix.column(0).to_vec()
    }

    /// Parses `{"label": str, "matrix": [[re, im], ...]}` (row-major).
    pub fn from_json(text: &str) -> Result<Self> {
        let f: OracleFile = serde_json::from_str(text)?;
        Self::new(unflatten(&f.matrix)?, f.label)
    }

    pub fn to_json(&self) -> Result<String> {
        let matrix = self.matrix.iter().map(|z| [z.re, z.im]).collect();
        Ok(serde_json::to_string(&OracleFile {
            label: self.label.clone(),
            matrix,
        })?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn check_width(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::WidthMismatch { expected, got });
    }
    Ok(())
}

fn oracle_gate(o: &StateOracle, control: Control) -> Gate {
    let targets = (2..o.n_qubits + 2).collect();
    Gate::ControlledDense {
        controls: vec![control],
        targets,
        matrix: o.matrix.clone(),
        label: o.label.clone(),
    }
}

/// `U_l` moved onto `(a1, system)` and controlled on `a0` with `polarity`.
fn controlled_ul(t: &SigmaTerm, polarity: Polarity) -> Result<Circuit> {
    let n = t.n_qubits();
    let ul = build_ul_circuit(t)?.shifted(1, n + 2)?;
    controlled(&ul, 0, polarity)
}

fn prologue(n: usize, imaginary: bool, u: &StateOracle, v: &StateOracle) -> Result<Circuit> {
    let mut c = Circuit::new(n + 2);
    c.mark_ancilla(0)?;
    c.mark_ancilla(1)?;
    c.push(Gate::h(0))?;
    if imaginary {
        c.push(Gate::Single {
            target: 0,
            kind: SingleKind::Sdg,
        })?;
    }
    c.push(oracle_gate(v, Control::closed(0)))?;
    c.push(oracle_gate(u, Control::open(0)))?;
    Ok(c)
}

/// Overlap circuit for one term; `imaginary` selects the SDG variant.
pub fn expval_term_circuit(
    u: &StateOracle,
    v: &StateOracle,
    t: &SigmaTerm,
    imaginary: bool,
) -> Result<Circuit> {
    let n = t.n_qubits();
    check_width(n, u.n_qubits)?;
    check_width(n, v.n_qubits)?;
    let mut c = prologue(n, imaginary, u, v)?;
    c.extend(&controlled_ul(t, Polarity::Closed)?)?;
    c.push(Gate::h(0))?;
    Ok(c)
}

/// Sandwich circuit: `U_j` under closed `a0`, `M` under closed `a0` and
/// open `a1`, `U_i` under open `a0`.
pub fn expval_sandwich_circuit(
    u: &StateOracle,
    v: &StateOracle,
    m: &StateOracle,
    ti: &SigmaTerm,
    tj: &SigmaTerm,
    imaginary: bool,
) -> Result<Circuit> {
    let n = ti.n_qubits();
    for w in [u.n_qubits, v.n_qubits, m.n_qubits, tj.n_qubits()] {
        check_width(n, w)?;
    }
    let mut c = prologue(n, imaginary, u, v)?;
    c.extend(&controlled_ul(tj, Polarity::Closed)?)?;
    let mut gm = oracle_gate(m, Control::closed(0));
    if let Gate::ControlledDense { controls, .. } = &mut gm {
        controls.push(Control::open(1));
    }
    c.push(gm)?;
    c.extend(&controlled_ul(ti, Polarity::Open)?)?;
    c.push(Gate::h(0))?;
    Ok(c)
}

fn hadamard_probs(c: &Circuit) -> Result<[f64; 4]> {
    let out = run(c, &StateVector::zero(c.n_qubits())?)?;
    let p = ancilla_probs(&out, &[0, 1])?;
    Ok([p["00"], p["01"], p["10"], p["11"]])
}

fn exact_part(c: &Circuit) -> Result<f64> {
    let p = hadamard_probs(c)?;
    Ok(p[0] - p[2])
}

/// `<0|U^† A_l V|0>` with the term's coefficient left out.
pub fn expval_term(u: &StateOracle, v: &StateOracle, t: &SigmaTerm) -> Result<Complex64> {
    let re = exact_part(&expval_term_circuit(u, v, t, false)?)?;
    let im = exact_part(&expval_term_circuit(u, v, t, true)?)?;
    Ok(Complex64::new(re, im))
}

/// `<0|U^† A_i^† M A_j V|0>` with coefficients left out.
pub fn expval_sandwich(
    u: &StateOracle,
    v: &StateOracle,
    m: &StateOracle,
    ti: &SigmaTerm,
    tj: &SigmaTerm,
) -> Result<Complex64> {
    let re = exact_part(&expval_sandwich_circuit(u, v, m, ti, tj, false)?)?;
    let im = exact_part(&expval_sandwich_circuit(u, v, m, ti, tj, true)?)?;
    Ok(Complex64::new(re, im))
}

/// Per-term overlaps (bare) and their coefficient-weighted sum.
pub fn expval_terms(
    u: &StateOracle,
    v: &StateOracle,
    d: &Decomposition,
) -> Result<(Complex64, Vec<Complex64>)> {
    check_width(d.n_qubits(), u.n_qubits)?;
    check_width(d.n_qubits(), v.n_qubits)?;
    let per_term = d
        .terms()
        .iter()
        .map(|t| expval_term(u, v, t))
        .collect::<Result<Vec<_>>>()?;
    let total = d
        .terms()
        .iter()
        .zip(&per_term)
        .map(|(t, e)| t.coeff * e)
        .sum();
    Ok((total, per_term))
}

/// `<0|U^† A V|0>` for `A = sum_l alpha_l A_l`.
pub fn expval_full(u: &StateOracle, v: &StateOracle, d: &Decomposition) -> Result<Complex64> {
    Ok(expval_terms(u, v, d)?.0)
}

fn sample_part(c: &Circuit, shots: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let p = hadamard_probs(c)?;
    let dist = WeightedIndex::new(p).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut counts = [0usize; 4];
    for _ in 0..shots {
        counts[dist.sample(rng)] += 1;
    }
    Ok((counts[0] as f64 - counts[2] as f64) / shots as f64)
}

/// Finite-shot estimate of `expval_term`: `shots` draws for the real
/// circuit, then `shots` for the imaginary one, from one seeded stream.
pub fn sample_expval(
    u: &StateOracle,
    v: &StateOracle,
    t: &SigmaTerm,
    shots: usize,
    seed: u64,
) -> Result<Complex64> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let re = sample_part(&expval_term_circuit(u, v, t, false)?, shots, &mut rng)?;
    let im = sample_part(&expval_term_circuit(u, v, t, true)?, shots, &mut rng)?;
    Ok(Complex64::new(re, im))
}

/// Finite-shot estimate of `expval_sandwich`, sampled like [`sample_expval`].
pub fn sample_sandwich(
    u: &StateOracle,
    v: &StateOracle,
    m: &StateOracle,
    ti: &SigmaTerm,
    tj: &SigmaTerm,
    shots: usize,
    seed: u64,
) -> Result<Complex64> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let re = sample_part(
        &expval_sandwich_circuit(u, v, m, ti, tj, false)?,
        shots,
        &mut rng,
    )?;
    let im = sample_part(
        &expval_sandwich_circuit(u, v, m, ti, tj, true)?,
        shots,
        &mut rng,
    )?;
    Ok(Complex64::new(re, im))
}

/// Exact outcome probabilities `[P00, P01, P10, P11]` of a test circuit.
pub fn outcome_probs(c: &Circuit) -> Result<[f64; 4]> {
    hadamard_probs(c)
}
