//! PREP/SELECT block encoding of a whole decomposition.
//!
//! Register layout: selector qubits `0..w`, the completion ancilla `w`,
//! system qubits `w + 1..`. The selector prepares `sum_l sqrt(|a_l|/lambda) |l>`
//! with `lambda = sum_l |a_l|`; the phase of `a_l` rides on branch `l` of
//! SELECT. With every ancilla in `|0>`, `W = PREP^† SELECT PREP` encodes
//! `A / lambda`.

use ndarray::{s, Array2};
use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{build_ul_circuit, controlled, gate_count, Circuit, Gate, Polarity};
use crate::error::{Error, Result};
use crate::matrix::{frobenius_distance, unitarity_error, DenseMatrix};
use crate::sigma::{reconstruct, Decomposition};
use crate::simulator::{circuit_to_matrix, MAX_UNITARY_QUBITS};

/// `ceil(log2(len))`, zero for a single item.
pub fn selector_width(len: usize) -> usize {
    len.next_power_of_two().trailing_zeros() as usize
}

/// Real Householder reflection mapping `e_0` to the unit vector `a`.
fn householder(a: &[f64]) -> DenseMatrix {
    let dim = a.len();
    let mut v: Vec<f64> = a.iter().map(|x| -x).collect();
    v[0] += 1.0;
    let vv: f64 = v.iter().map(|x| x * x).sum();
    Array2::from_shape_fn((dim, dim), |(i, j)| {
        let id = if i == j { 1.0 } else { 0.0 };
        let refl = if vv > 0.0 {
            2.0 * v[i] * v[j] / vv
        } else {
            0.0
        };
        Complex64::new(id - refl, 0.0)
    })
}

fn prep_amplitudes(coeffs: &[Complex64]) -> Result<Vec<f64>> {
    let lambda: f64 = coeffs.iter().map(|c| c.norm()).sum();
    if lambda == 0.0 {
        return Err(Error::Empty("all coefficients are zero"));
    }
    let mut amps: Vec<f64> = coeffs.iter().map(|c| (c.norm() / lambda).sqrt()).collect();
    amps.resize(coeffs.len().next_power_of_two().max(2), 0.0);
    Ok(amps)
}

/// State preparation on `max(1, ceil(log2 L))` selector qubits. A single
/// coefficient yields an empty width-1 circuit.
pub fn prep_circuit(coeffs: &[Complex64]) -> Result<Circuit> {
    let amps = prep_amplitudes(coeffs)?;
    let width = selector_width(amps.len());
    let mut c = Circuit::new(width);
    for q in 0..width {
        c.mark_ancilla(q)?;
    }
    if amps[0] != 1.0 {
        c.push(Gate::dense(
            (0..width).collect(),
            householder(&amps),
            "prep",
        ))?;
    }
    Ok(c)
}

/// `sum_l |l><l| (x) e^{i arg a_l} U_l` on `w + 1 + n` qubits; padded
/// selector values act as identity.
pub fn select_circuit(d: &Decomposition) -> Result<Circuit> {
    if d.is_empty() {
        return Err(Error::Empty("decomposition has no terms"));
    }
    let w = selector_width(d.len());
    let n = d.n_qubits();
    let total = w + 1 + n;
    let mut out = Circuit::new(total);
    for q in 0..=w {
        out.mark_ancilla(q)?;
    }
    for (l, t) in d.terms().iter().enumerate() {
        let mut branch = build_ul_circuit(t)?.shifted(w, total)?;
        let phase = t.coeff.arg();
        if phase != 0.0 {
            let e = Complex64::from_polar(1.0, phase);
            let z = Complex64::new(0.0, 0.0);
            branch.push(Gate::dense(
                vec![w],
                ndarray::array![[e, z], [z, e]],
                "phase",
            ))?;
        }
        for q in (0..w).rev() {
            let bit = (l >> (w - 1 - q)) & 1;
            branch = controlled(&branch, q, Polarity::from_bit(bit))?;
        }
        out.extend(&branch)?;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct BlockEncoding {
    pub selector_qubits: usize,
    pub system_qubits: usize,
    pub lambda: f64,
    pub overall: Circuit,
    target: DenseMatrix,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockReport {
    pub lambda: f64,
    pub frobenius_error: f64,
    pub unitarity_error: f64,
    pub qubits: usize,
}

impl BlockEncoding {
    pub fn total_qubits(&self) -> usize {
        self.overall.n_qubits()
    }

    /// Simulates `W` and compares its all-ancilla-zero block with `A / lambda`.
    pub fn verify(&self) -> Result<BlockReport> {
        let w = circuit_to_matrix(&self.overall)?;
        let dim = 1usize << self.system_qubits;
        let block = w.slice(s![..dim, ..dim]).to_owned();
        Ok(BlockReport {
            lambda: self.lambda,
            frobenius_error: frobenius_distance(&block, &self.target)?,
            unitarity_error: unitarity_error(&w),
            qubits: self.total_qubits(),
        })
    }
}

/// Builds `W`: PREP, SELECT, then PREP^† in time order.
pub fn assemble(d: &Decomposition) -> Result<BlockEncoding> {
    if d.is_empty() {
        return Err(Error::Empty("decomposition has no terms"));
    }
    let w = selector_width(d.len());
    let n = d.n_qubits();
    let total = w + 1 + n;
    if total > MAX_UNITARY_QUBITS {
        return Err(Error::TooManyQubits {
            what: "block encoding",
            max: MAX_UNITARY_QUBITS,
            got: total,
        });
    }
    let coeffs = d.coefficients();
    let lambda = d.l1_norm();
    let select = select_circuit(d)?;
    let mut overall = Circuit::new(total);
    for q in select.ancillas() {
        overall.mark_ancilla(q)?;
    }
    if w > 0 {
        let prep = prep_circuit(&coeffs)?;
        for g in prep.gates() {
            overall.push(g.clone())?;
        }
        overall.extend(&select)?;
        for g in prep.gates().iter().rev() {
            if let Gate::Dense {
                targets, matrix, ..
            } = g
            {
                let adj = matrix.t().mapv(|z| z.conj());
                overall.push(Gate::dense(targets.clone(), adj, "prep_dag"))?;
            }
        }
    } else {
        overall.extend(&select)?;
    }
    let target = reconstruct(d).to_dense()?.mapv(|z| z / lambda);
    Ok(BlockEncoding {
        selector_qubits: w,
        system_qubits: n,
        lambda,
        overall,
        target,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FormulaRow {
    pub protocol: &'static str,
    pub n_anc: String,
    pub count: String,
    pub depth: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResourceReport {
    pub terms: usize,
    pub n_qubits: usize,
    pub dimension: usize,
    pub lambda: f64,
    pub epsilon: f64,
    pub selector_qubits: usize,
    pub completion_ancillas: usize,
    /// Control arity of the single MCX in each term circuit.
    pub mcx_arities: Vec<usize>,
    pub single_qubit_gates: Vec<usize>,
    pub table: Vec<FormulaRow>,
    pub controlled_term: String,
}

/// Asymptotic Clifford+T formulas for near-optimal PREP/SELECT, with this
/// decomposition's `L`, `N` and `epsilon` substituted. Nothing is measured.
pub fn resource_report(d: &Decomposition, epsilon: f64) -> Result<ResourceReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let l = d.len();
    let n = d.n_qubits();
    let big_n = 1usize << n;
    let mut mcx_arities = Vec::with_capacity(l);
    let mut single_qubit_gates = Vec::with_capacity(l);
    for t in d.terms() {
        let g = gate_count(&build_ul_circuit(t)?);
        mcx_arities.push(g.mcx.first().copied().unwrap_or(0));
        single_qubit_gates.push(g.single_qubit);
    }
    let table = vec![
        FormulaRow {
            protocol: "PREP",
            n_anc: format!("Omega(log {l}) <= n_anc <= O({l})"),
            count: format!("O({l} log(1/{epsilon}))"),
            depth: format!("O~({l} log(1/{epsilon}) log(n_anc)/n_anc)"),
        },
        FormulaRow {
            protocol: "SELECT",
            n_anc: format!("Omega(log {l} + log {big_n}) <= n_anc <= O({l} log {big_n})"),
            count: format!("O({l} log {big_n})"),
            depth: format!("O({l} log {big_n} log(n_anc)/n_anc)"),
        },
    ];
    Ok(ResourceReport {
        terms: l,
        n_qubits: n,
        dimension: big_n,
        lambda: d.l1_norm(),
        epsilon,
        selector_qubits: selector_width(l.max(1)),
        completion_ancillas: 1,
        mcx_arities,
        single_qubit_gates,
        table,
        controlled_term: format!("count O({n}), depth O(log {n}) with {} ancillas", n + 2),
    })
}
