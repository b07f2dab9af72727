//! Sigma-basis terms and decompositions.
//!
//! A term is a complex coefficient times a tensor product of the five
//! single-qubit operators `I`, `s+ = |0><1|`, `s- = |1><0|`,
//! `s+s- = |0><0|` and `s-s+ = |1><1|`. Factor 0 is the leftmost tensor
//! position, i.e. the most significant qubit.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{bit, SparseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SigmaFactor {
    /// `I`
    Ident,
    /// `|0><1|`
    SPlus,
    /// `|1><0|`
    SMinus,
    /// `|0><0|`
    SPlusSMinus,
    /// `|1><1|`
    SMinusSPlus,
}

/// Single-qubit completion of a Sigma factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletionGate {
    X,
    Ident,
}

impl SigmaFactor {
    pub const ALL: [SigmaFactor; 5] = [
        SigmaFactor::Ident,
        SigmaFactor::SPlus,
        SigmaFactor::SMinus,
        SigmaFactor::SPlusSMinus,
        SigmaFactor::SMinusSPlus,
    ];

    /// Matrix element `<row|factor|col>` for bits `row, col`.
    pub fn element(self, row: usize, col: usize) -> u8 {
        let hit = match self {
            SigmaFactor::Ident => row == col,
            SigmaFactor::SPlus => row == 0 && col == 1,
            SigmaFactor::SMinus => row == 1 && col == 0,
            SigmaFactor::SPlusSMinus => row == 0 && col == 0,
            SigmaFactor::SMinusSPlus => row == 1 && col == 1,
        };
        hit as u8
    }

    /// The factor whose single nonzero element sits at `(row, col)`.
    pub fn from_bits(row: usize, col: usize) -> Self {
        match (row, col) {
            (0, 0) => SigmaFactor::SPlusSMinus,
            (0, 1) => SigmaFactor::SPlus,
            (1, 0) => SigmaFactor::SMinus,
            _ => SigmaFactor::SMinusSPlus,
        }
    }

    pub fn completion(self) -> CompletionGate {
        match self {
            SigmaFactor::SPlus | SigmaFactor::SMinus => CompletionGate::X,
            _ => CompletionGate::Ident,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            SigmaFactor::Ident => 'I',
            SigmaFactor::SPlus => 'P',
            SigmaFactor::SMinus => 'M',
            SigmaFactor::SPlusSMinus => 'A',
            SigmaFactor::SMinusSPlus => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        Some(match c {
            'I' => SigmaFactor::Ident,
            'P' => SigmaFactor::SPlus,
            'M' => SigmaFactor::SMinus,
            'A' => SigmaFactor::SPlusSMinus,
            'B' => SigmaFactor::SMinusSPlus,
            _ => return None,
        })
    }

    /// `(row, col)` bit pairs at which the factor is 1.
    fn support(self) -> &'static [(usize, usize)] {
        match self {
            SigmaFactor::Ident => &[(0, 0), (1, 1)],
            SigmaFactor::SPlus => &[(0, 1)],
            SigmaFactor::SMinus => &[(1, 0)],
            SigmaFactor::SPlusSMinus => &[(0, 0)],
            SigmaFactor::SMinusSPlus => &[(1, 1)],
        }
    }
}

/// Ordered factor string, e.g. `"MIA"` for `s- (x) I (x) s+s-`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FactorString(pub Vec<SigmaFactor>);

impl FactorString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn identity(n: usize) -> Self {
        Self(vec![SigmaFactor::Ident; n])
    }

    pub fn iter(&self) -> impl Iterator<Item = SigmaFactor> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for FactorString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{}", s.to_char()))
    }
}

impl FromStr for FactorString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let factors: Option<Vec<_>> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(SigmaFactor::from_char)
            .collect();
        match factors {
            Some(f) if !f.is_empty() => Ok(Self(f)),
            _ => Err(Error::InvalidFactors(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaTerm {
    pub coeff: Complex64,
    pub factors: FactorString,
}

impl SigmaTerm {
    pub fn new(coeff: Complex64, factors: FactorString) -> Self {
        Self { coeff, factors }
    }

    pub fn parse(coeff: Complex64, factors: &str) -> Result<Self> {
        Ok(Self::new(coeff, factors.parse()?))
    }

    pub fn n_qubits(&self) -> usize {
        self.factors.len()
    }

    pub fn ident_count(&self) -> usize {
        self.factors
            .iter()
            .filter(|&f| f == SigmaFactor::Ident)
            .count()
    }

    /// Number of `s+`/`s-` factors.
    pub fn flip_count(&self) -> usize {
        self.factors
            .iter()
            .filter(|f| f.completion() == CompletionGate::X)
            .count()
    }

    /// Kronecker product of the factors scaled by the coefficient.
    pub fn matrix(&self) -> SparseMatrix {
        let n = self.n_qubits();
        let mut m = SparseMatrix::zeros(n).expect("term has at least one factor");
        if self.coeff.norm() == 0.0 {
            return m;
        }
        let mut cells = vec![(0usize, 0usize)];
        for f in self.factors.iter() {
            cells = cells
                .into_iter()
                .flat_map(|(r, c)| {
                    f.support()
                        .iter()
                        .map(move |&(br, bc)| (2 * r + br, 2 * c + bc))
                })
                .collect();
        }
        for (r, c) in cells {
            m.add(r, c, self.coeff).expect("index within dimension");
        }
        m.prune();
        m
    }

    /// `completion()` per position; the Kronecker product is the unitary
    /// completion of the unit-coefficient term.
    pub fn completion(&self) -> Vec<CompletionGate> {
        self.factors.iter().map(SigmaFactor::completion).collect()
    }

    /// The `2^n x 2^n` permutation matrix of the completion.
    pub fn completion_matrix(&self) -> SparseMatrix {
        let n = self.n_qubits();
        let flip: usize = self
            .completion()
            .iter()
            .enumerate()
            .filter(|(_, g)| **g == CompletionGate::X)
            .map(|(p, _)| 1 << (n - 1 - p))
            .sum();
        SparseMatrix::from_triplets(
            n,
            (0..1usize << n).map(|r| (r, r ^ flip, Complex64::new(1.0, 0.0))),
        )
        .expect("valid width")
    }

    /// `<r|term|c> != 0` iff every factor is 1 at
    /// the corresponding bit pair.
    pub fn entry_is_one(&self, row: usize, col: usize) -> bool {
        let n = self.n_qubits();
        self.factors
            .iter()
            .enumerate()
            .all(|(p, f)| f.element(bit(row, p, n), bit(col, p, n)) == 1)
    }
}

/// `term_matrix`: free-function form of [`SigmaTerm::matrix`].
pub fn term_matrix(t: &SigmaTerm) -> SparseMatrix {
    t.matrix()
}

/// `completion`: free-function form of [`SigmaTerm::completion`].
pub fn completion(t: &SigmaTerm) -> Vec<CompletionGate> {
    t.completion()
}

/// A list of Sigma terms over a common register.
///
/// Terms are kept sorted by factor string with no two terms sharing a
/// string; adding a term whose string is present sums the coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    n_qubits: usize,
    terms: Vec<SigmaTerm>,
}

impl Decomposition {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = SigmaTerm>>(
        n_qubits: usize,
        terms: I,
    ) -> Result<Self> {
        let mut acc: BTreeMap<FactorString, Complex64> = BTreeMap::new();
        for t in terms {
            if t.n_qubits() != n_qubits {
                return Err(Error::WidthMismatch {
                    expected: n_qubits,
                    got: t.n_qubits(),
                });
            }
            *acc.entry(t.factors).or_default() += t.coeff;
        }
        Ok(Self::from_map(n_qubits, acc))
    }

    fn from_map(n_qubits: usize, acc: BTreeMap<FactorString, Complex64>) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .map(|(factors, coeff)| SigmaTerm { coeff, factors })
            .collect();
        Self { n_qubits, terms }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[SigmaTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficients(&self) -> Vec<Complex64> {
        self.terms.iter().map(|t| t.coeff).collect()
    }

    /// Sum of coefficient magnitudes.
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }

    /// Sum of two decompositions, combining equal strings.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        Self::from_terms(
            self.n_qubits,
            self.terms.iter().chain(other.terms.iter()).cloned(),
        )
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| SigmaTerm::new(t.coeff * s, t.factors.clone()));
        Self::from_terms(self.n_qubits, terms).expect("widths unchanged")
    }

    /// Tensor product `left (x) self`, prefixing every term's string.
    pub fn kron_left(&self, left: &SigmaTerm) -> Self {
        let n = left.n_qubits() + self.n_qubits;
        let terms = self.terms.iter().map(|t| {
            let mut f = left.factors.0.clone();
            f.extend_from_slice(&t.factors.0);
            SigmaTerm::new(left.coeff * t.coeff, FactorString(f))
        });
        Self::from_terms(n, terms).expect("consistent widths")
    }

    /// Tensor product `self (x) right`, suffixing every term's string.
    pub fn kron_right(&self, right: &Decomposition) -> Self {
        let n = self.n_qubits + right.n_qubits;
        let terms = self.terms.iter().flat_map(|a| {
            right.terms.iter().map(move |b| {
                let mut f = a.factors.0.clone();
                f.extend_from_slice(&b.factors.0);
                SigmaTerm::new(a.coeff * b.coeff, FactorString(f))
            })
        });
        Self::from_terms(n, terms).expect("consistent widths")
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&TermsFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TermsFile = serde_json::from_str(text)?;
        let terms = file
            .terms
            .into_iter()
            .map(|t| SigmaTerm::parse(Complex64::new(t.re, t.im), &t.factors))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(file.n_qubits, terms)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

/// On-disk layout shared by Sigma and Pauli decompositions.
#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct TermsFile {
    pub n_qubits: usize,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct TermRecord {
    pub re: f64,
    pub im: f64,
    pub factors: String,
}

impl From<&Decomposition> for TermsFile {
    fn from(d: &Decomposition) -> Self {
        Self {
            n_qubits: d.n_qubits,
            terms: d
                .terms
                .iter()
                .map(|t| TermRecord {
                    re: t.coeff.re,
                    im: t.coeff.im,
                    factors: t.factors.to_string(),
                })
                .collect(),
        }
    }
}

/// One term per nonzero entry: entry `(r, c, v)` becomes
/// `v * (x)_p sigma(q_r(p), q_c(p))`.
pub fn decompose_numerical(m: &SparseMatrix) -> Result<Decomposition> {
    if m.is_empty() {
        return Err(Error::Empty("matrix has no nonzero entries"));
    }
    let n = m.n_qubits();
    let terms = m.iter().map(|(r, c, v)| {
        let factors = (0..n)
            .map(|p| SigmaFactor::from_bits(bit(r, p, n), bit(c, p, n)))
            .collect();
        SigmaTerm::new(v, FactorString(factors))
    });
    Decomposition::from_terms(n, terms)
}

/// Sum of all term matrices.
pub fn reconstruct(d: &Decomposition) -> SparseMatrix {
    let mut out = SparseMatrix::zeros(d.n_qubits().max(1)).expect("nonzero width");
    for t in d.terms() {
        for (r, c, v) in t.matrix().iter() {
            out.add(r, c, v).expect("same width");
        }
    }
    out.prune();
    out
}

/// Greedily merges pairs `c * (..A..)`, `c * (..B..)` that differ only at
/// one position into `c * (..I..)`, until no pair remains.
///
/// Positions are scanned left to right; within a position, candidate
/// strings are visited in ascending order. Coefficients must match exactly.
pub fn merge_terms(d: &Decomposition) -> Decomposition {
    let n = d.n_qubits();
    let mut acc: BTreeMap<FactorString, Complex64> = d
        .terms()
        .iter()
        .map(|t| (t.factors.clone(), t.coeff))
        .collect();
    loop {
        let mut changed = false;
        for p in 0..n {
            let keys: Vec<FactorString> = acc
                .keys()
                .filter(|k| k.0[p] == SigmaFactor::SPlusSMinus)
                .cloned()
                .collect();
            for a_key in keys {
                let Some(&coeff) = acc.get(&a_key) else {
                    continue;
                };
                let mut b_key = a_key.clone();
                b_key.0[p] = SigmaFactor::SMinusSPlus;
                if acc.get(&b_key) != Some(&coeff) {
                    continue;
                }
                acc.remove(&a_key);
                acc.remove(&b_key);
                let mut merged = a_key;
                merged.0[p] = SigmaFactor::Ident;
                let slot = acc.entry(merged.clone()).or_default();
                *slot += coeff;
                if *slot == Complex64::new(0.0, 0.0) {
                    acc.remove(&merged);
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Decomposition::from_map(n, acc)
}
