//! Per-term checks of completion and dilation circuits by full unitary
//! extraction.

use ndarray::{s, Array2};
use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{build_dilation_circuit, gate_count, Circuit};
use crate::error::{Error, Result};
use crate::matrix::{unitarity_error, DenseMatrix};
use crate::sigma::SigmaTerm;
use crate::simulator::circuit_to_matrix;

#[derive(Debug, Clone, Serialize)]
pub struct TermCheck {
    pub factors: String,
    /// Extracted unitary equals `[[A, A^c], [A^c, A]]` exactly.
    pub structure: bool,
    pub unitary: bool,
    /// At most `n + 1` single-qubit gates and one MCX of arity `n - k`.
    pub budget: bool,
    pub dilation: Option<bool>,
    pub single_qubit: usize,
    pub mcx: Vec<usize>,
    pub note: Option<String>,
}

impl TermCheck {
    pub fn passed(&self) -> bool {
        self.structure && self.unitary && self.budget && self.dilation.unwrap_or(true)
    }
}

fn unit(t: &SigmaTerm) -> SigmaTerm {
    SigmaTerm::new(Complex64::new(1.0, 0.0), t.factors.clone())
}

/// `[[A, Abar - A], [Abar - A, A]]` for the unit-coefficient term.
pub fn expected_ul_matrix(t: &SigmaTerm) -> Result<DenseMatrix> {
    let a = unit(t).matrix().to_dense()?;
    let comp = &t.completion_matrix().to_dense()? - &a;
    let dim = a.nrows();
    let mut out = Array2::zeros((2 * dim, 2 * dim));
    out.slice_mut(s![..dim, ..dim]).assign(&a);
    out.slice_mut(s![dim.., dim..]).assign(&a);
    out.slice_mut(s![..dim, dim..]).assign(&comp);
    out.slice_mut(s![dim.., ..dim]).assign(&comp);
    Ok(out)
}

/// Checks `circuit` as the completion circuit of `t`; with `dilation` also
/// checks the dilation circuit's gate count and top-left block.
pub fn check_term(t: &SigmaTerm, circuit: &Circuit, dilation: bool) -> Result<TermCheck> {
    let n = t.n_qubits();
    if circuit.n_qubits() != n + 1 {
        return Err(Error::WidthMismatch {
            expected: n + 1,
            got: circuit.n_qubits(),
        });
    }
    let u = circuit_to_matrix(circuit)?;
    let expected = expected_ul_matrix(t)?;
    let counts = gate_count(circuit);
    let arity = n - t.ident_count();
    let (budget, note) = if arity == 0 {
        let ok = counts.mcx.is_empty() && counts.single_qubit == 2 && counts.dense == 0;
        (ok, Some("identity term: ancilla X twice".to_string()))
    } else {
        (
            counts.mcx == [arity] && counts.single_qubit <= n + 1 && counts.dense == 0,
            None,
        )
    };
    let dilation = if dilation {
        let d = build_dilation_circuit(t)?;
        let dm = circuit_to_matrix(&d)?;
        let dim = 1usize << n;
        let flips = t.flip_count();
        let dc = gate_count(&d);
        // A control-free flip is stored as a plain X.
        let count_ok = if arity == 0 {
            dc.mcx.is_empty() && dc.single_qubit == 2
        } else {
            dc.mcx.len() == 2 * flips + 1
        };
        let mut ok = count_ok && dm.slice(s![..dim, ..dim]) == expected.slice(s![..dim, ..dim]);
        if flips == 0 {
            ok &= dm == u;
        }
        Some(ok)
    } else {
        None
    };
    Ok(TermCheck {
        factors: t.factors.to_string(),
        structure: u == expected,
        unitary: unitarity_error(&u) <= 1e-12,
        budget,
        dilation,
        single_qubit: counts.single_qubit,
        mcx: counts.mcx,
        note,
    })
}
