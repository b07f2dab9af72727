//! Linear combinations of non-unitary Sigma-basis terms: decomposition,
//! unitary-completion circuits, exact simulation and block encodings.

pub mod block_encoding;
pub mod circuit;
pub mod error;
pub mod hadamard;
pub mod matrix;
pub mod pauli;
pub mod pde;
pub mod sigma;
pub mod simulator;
pub mod verify;

pub use block_encoding::{
    assemble, prep_circuit, resource_report, select_circuit, BlockEncoding, BlockReport,
    ResourceReport,
};
pub use circuit::{
    build_dilation_circuit, build_ul_circuit, controlled, gate_count, transposition_gates, Circuit,
    Control, Gate, GateCount, Polarity, SingleKind,
};
pub use error::{Error, Result};
pub use hadamard::{expval_full, expval_sandwich, expval_term, sample_expval, StateOracle};
pub use matrix::{DenseMatrix, SparseMatrix};
pub use pauli::{decompose_pauli, Pauli, PauliDecomposition, PauliString, PauliTerm};
pub use pde::{heat_1d, poisson_1d, wave_1d, Family, HeatParams, PdeSystem, WaveParams};
pub use sigma::{
    completion, decompose_numerical, merge_terms, reconstruct, term_matrix, CompletionGate,
    Decomposition, FactorString, SigmaFactor, SigmaTerm,
};
pub use simulator::{ancilla_probs, apply_gate, circuit_to_matrix, run, StateVector};
