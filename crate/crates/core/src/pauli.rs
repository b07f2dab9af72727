//! Pauli-basis decomposition by matrix splicing, used as the comparison
//! baseline for Sigma-basis term counts.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{bit, SparseMatrix};
use crate::sigma::{TermRecord, TermsFile};

pub const DEFAULT_PAULI_TOL: f64 = 1e-12;
pub const MAX_PAULI_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// `<row|P|col>` for single bits.
    pub fn element(self, row: usize, col: usize) -> Complex64 {
        let (zero, one, i) = (
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::i(),
        );
        match (self, row, col) {
            (Pauli::I, a, b) if a == b => one,
            (Pauli::X, a, b) if a != b => one,
            (Pauli::Y, 0, 1) => -i,
            (Pauli::Y, 1, 0) => i,
            (Pauli::Z, 0, 0) => one,
            (Pauli::Z, 1, 1) => -one,
            _ => zero,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        Some(match c {
            'I' => Pauli::I,
            'X' => Pauli::X,
            'Y' => Pauli::Y,
            'Z' => Pauli::Z,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString(pub Vec<Pauli>);

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{}", p.to_char()))
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: Option<Vec<_>> = s.chars().map(Pauli::from_char).collect();
        match v {
            Some(v) if !v.is_empty() => Ok(Self(v)),
            _ => Err(Error::InvalidFactors(s.to_string())),
        }
    }
}

impl PauliString {
    /// Sparse matrix of the string (one nonzero per row).
    pub fn matrix(&self) -> SparseMatrix {
        let n = self.0.len();
        let flip: usize = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, p)| matches!(p, Pauli::X | Pauli::Y))
            .map(|(q, _)| 1 << (n - 1 - q))
            .sum();
        let entries = (0..1usize << n).map(|r| {
            let c = r ^ flip;
            let v = self
                .0
                .iter()
                .enumerate()
                .map(|(q, p)| p.element(bit(r, q, n), bit(c, q, n)))
                .product();
            (r, c, v)
        });
        SparseMatrix::from_triplets(n, entries).expect("valid width")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coeff: Complex64,
    pub factors: PauliString,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliDecomposition {
    pub n_qubits: usize,
    pub terms: Vec<PauliTerm>,
}

impl PauliDecomposition {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn reconstruct(&self) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.n_qubits).expect("nonzero width");
        for t in &self.terms {
            for (r, c, v) in t.factors.matrix().iter() {
                out.add(r, c, t.coeff * v).expect("same width");
            }
        }
        out.prune();
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let file = TermsFile {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .map(|t| TermRecord {
                    re: t.coeff.re,
                    im: t.coeff.im,
                    factors: t.factors.to_string(),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TermsFile = serde_json::from_str(text)?;
        let terms = file
            .terms
            .into_iter()
            .map(|t| {
                let factors: PauliString = t.factors.parse()?;
                if factors.0.len() != file.n_qubits {
                    return Err(Error::WidthMismatch {
                        expected: file.n_qubits,
                        got: factors.0.len(),
                    });
                }
                Ok(PauliTerm {
                    coeff: Complex64::new(t.re, t.im),
                    factors,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            n_qubits: file.n_qubits,
            terms,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

/// Coefficient of string `P` is `Tr(P^dagger A) / 2^n`; strings with
/// `|coeff| <= tol` are dropped.
///
/// Each nonzero `A(r, c)` only meets strings whose X/Y pattern equals
/// `r xor c`, so the trace is accumulated entry by entry over those
/// `2^n` strings instead of scanning all `4^n`.
pub fn decompose_pauli(m: &SparseMatrix, tol: f64) -> Result<PauliDecomposition> {
    let n = m.n_qubits();
    if n > MAX_PAULI_QUBITS {
        return Err(Error::TooManyQubits {
            what: "Pauli decomposition",
            max: MAX_PAULI_QUBITS,
            got: n,
        });
    }
    // Key: per-qubit base-4 code, qubit 0 most significant, I<X<Y<Z.
    let mut acc: BTreeMap<u64, Complex64> = BTreeMap::new();
    let scale = 1.0 / (1u64 << n) as f64;
    for (r, c, v) in m.iter() {
        let diff = r ^ c;
        for choice in 0..1usize << n {
            let mut code = 0u64;
            let mut elem = Complex64::new(1.0, 0.0);
            for q in 0..n {
                let alt = bit(choice, q, n) == 1;
                let p = match (bit(diff, q, n) == 1, alt) {
                    (false, false) => Pauli::I,
                    (false, true) => Pauli::Z,
                    (true, false) => Pauli::X,
                    (true, true) => Pauli::Y,
                };
                elem *= p.element(bit(r, q, n), bit(c, q, n));
                code = code * 4 + p as u64;
            }
            *acc.entry(code).or_default() += elem.conj() * v * scale;
        }
    }
    let terms = acc
        .into_iter()
        .filter(|(_, z)| z.norm() > tol)
        .map(|(code, coeff)| PauliTerm {
            coeff,
            factors: decode(code, n),
        })
        .collect();
    Ok(PauliDecomposition { n_qubits: n, terms })
}

fn decode(mut code: u64, n: usize) -> PauliString {
    let mut v = vec![Pauli::I; n];
    for q in (0..n).rev() {
        v[q] = match code % 4 {
            0 => Pauli::I,
            1 => Pauli::X,
            2 => Pauli::Y,
            _ => Pauli::Z,
        };
        code /= 4;
    }
    PauliString(v)
}
