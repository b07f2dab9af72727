//! Sparse complex matrices of power-of-two dimension.
//!
//! Index bits follow a single project-wide convention: bit `p` of a row or
//! column index is the value of qubit `p`, with `p = 0` the most significant
//! bit, so `r = sum_p 2^(n-1-p) q_r(p)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entries with magnitude at or below this are dropped.
pub const PRUNE_TOL: f64 = 1e-14;

/// Largest register `to_dense` will expand.
pub const MAX_DENSE_QUBITS: usize = 14;

pub type DenseMatrix = Array2<Complex64>;

/// Value of qubit `p` in index `idx` of an `n`-qubit register.
#[inline]
pub fn bit(idx: usize, p: usize, n: usize) -> usize {
    (idx >> (n - 1 - p)) & 1
}

/// Single-bit mask selecting qubit `p` of an `n`-qubit register.
#[inline]
pub fn qubit_mask(p: usize, n: usize) -> usize {
    1 << (n - 1 - p)
}

/// Complex matrix of dimension `2^n_qubits` in coordinate form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n_qubits: usize,
    entries: BTreeMap<(usize, usize), Complex64>,
}

impl SparseMatrix {
    pub fn zeros(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidParameter(
                "matrix needs at least one qubit".into(),
            ));
        }
        Ok(Self {
            n_qubits,
            entries: BTreeMap::new(),
        })
    }

    /// Builds a matrix from triplets; repeated coordinates are summed and
    /// the sums pruned.
    pub fn from_triplets<I>(n_qubits: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let mut m = Self::zeros(n_qubits)?;
        for (r, c, v) in triplets {
            m.add(r, c, v)?;
        }
        m.prune();
        Ok(m)
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        Self::from_triplets(n_qubits, (0..dim).map(|i| (i, i, Complex64::new(1.0, 0.0))))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries.get(&(row, col)).copied().unwrap_or_default()
    }

    /// Entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    /// Accumulates `v` into `(row, col)`. Call [`SparseMatrix::prune`]
    /// afterwards to restore the nonzero invariant.
    pub fn add(&mut self, row: usize, col: usize, v: Complex64) -> Result<()> {
        let dim = self.dim();
        if row >= dim || col >= dim {
            return Err(Error::IndexOutOfRange { row, col, dim });
        }
        *self.entries.entry((row, col)).or_default() += v;
        Ok(())
    }

    pub fn prune(&mut self) {
        self.entries.retain(|_, v| v.norm() > PRUNE_TOL);
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.entries.values_mut().for_each(|v| *v *= s);
        out.prune();
        out
    }

    /// True when every entry is an exact integer (real and imaginary parts).
    pub fn is_integer_valued(&self) -> bool {
        self.entries
            .values()
            .all(|v| v.re.fract() == 0.0 && v.im.fract() == 0.0)
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        if self.n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits {
                what: "dense conversion",
                max: MAX_DENSE_QUBITS,
                got: self.n_qubits,
            });
        }
        let dim = self.dim();
        let mut out = Array2::zeros((dim, dim));
        for (r, c, v) in self.iter() {
            out[[r, c]] = v;
        }
        Ok(out)
    }

    /// Inverse of [`SparseMatrix::to_dense`]; entries at or below the prune
    /// tolerance are dropped.
    pub fn from_dense(dense: &DenseMatrix) -> Result<Self> {
        let (rows, cols) = dense.dim();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        let n = log2_exact(rows)?;
        Self::from_triplets(n, dense.indexed_iter().map(|((r, c), &v)| (r, c, v)))
    }

    /// Frobenius norm of `self - other` computed on the sparse forms.
    pub fn frobenius_distance(&self, other: &Self) -> Result<f64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::ShapeMismatch(
                (self.dim(), self.dim()),
                (other.dim(), other.dim()),
            ));
        }
        let mut acc = 0.0;
        for (r, c, v) in self.iter() {
            acc += (v - other.get(r, c)).norm_sqr();
        }
        for (r, c, v) in other.iter() {
            if !self.entries.contains_key(&(r, c)) {
                acc += v.norm_sqr();
            }
        }
        Ok(acc.sqrt())
    }

    pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse_matrix_market(&text)
    }

    /// Parses Matrix Market coordinate format with a `real`, `integer` or
    /// `complex` field and `general` symmetry.
    pub fn parse_matrix_market(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let mm_err = |line: usize, msg: &str| Error::MatrixMarket {
            line: line + 1,
            msg: msg.into(),
        };

        let (hline, header) = lines.next().ok_or_else(|| mm_err(0, "empty file"))?;
        let tokens: Vec<String> = header
            .split_whitespace()
            .map(str::to_ascii_lowercase)
            .collect();
        if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
            return Err(mm_err(hline, "missing %%MatrixMarket header"));
        }
        if tokens[1] != "matrix" || tokens[2] != "coordinate" {
            return Err(mm_err(hline, "only 'matrix coordinate' is supported"));
        }
        let complex = match tokens[3].as_str() {
            "real" | "integer" => false,
            "complex" => true,
            other => return Err(mm_err(hline, &format!("unsupported field '{other}'"))),
        };
        if tokens[4] != "general" {
            return Err(mm_err(
                hline,
                &format!("unsupported symmetry '{}'", tokens[4]),
            ));
        }

        let mut body = lines.filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('%')
        });
        let (sline, size) = body
            .next()
            .ok_or_else(|| mm_err(hline, "missing size line"))?;
        let dims: Vec<usize> = size
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| mm_err(sline, "bad size line"))?;
        let [rows, cols, nnz] = dims[..] else {
            return Err(mm_err(sline, "size line needs 'rows cols nnz'"));
        };
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        let n = log2_exact(rows)?;

        let mut m = Self::zeros(n)?;
        let mut seen = 0usize;
        for (lno, line) in body {
            let f: Vec<&str> = line.split_whitespace().collect();
            let want = if complex { 4 } else { 3 };
            if f.len() != want {
                return Err(mm_err(
                    lno,
                    &format!("expected {want} fields, got {}", f.len()),
                ));
            }
            let idx = |s: &str| -> Result<usize> {
                let i: usize = s.parse().map_err(|_| mm_err(lno, "bad index"))?;
                i.checked_sub(1)
                    .ok_or_else(|| mm_err(lno, "indices are 1-based"))
            };
            let num = |s: &str| -> Result<f64> { s.parse().map_err(|_| mm_err(lno, "bad value")) };
            let (r, c) = (idx(f[0])?, idx(f[1])?);
            let v = Complex64::new(num(f[2])?, if complex { num(f[3])? } else { 0.0 });
            m.add(r, c, v)?;
            seen += 1;
        }
        if seen != nnz {
            return Err(mm_err(
                sline,
                &format!("declared {nnz} entries, found {seen}"),
            ));
        }
        m.prune();
        Ok(m)
    }

    /// Renders coordinate format; the field is `real` unless some entry has
    /// a nonzero imaginary part.
    pub fn to_matrix_market(&self) -> String {
        let complex = self.entries.values().any(|v| v.im != 0.0);
        let field = if complex { "complex" } else { "real" };
        let mut out = format!("%%MatrixMarket matrix coordinate {field} general\n");
        let _ = writeln!(out, "{} {} {}", self.dim(), self.dim(), self.nnz());
        for (r, c, v) in self.iter() {
            if complex {
                let _ = writeln!(out, "{} {} {:e} {:e}", r + 1, c + 1, v.re, v.im);
            } else {
                let _ = writeln!(out, "{} {} {:e}", r + 1, c + 1, v.re);
            }
        }
        out
    }

    pub fn save_matrix_market(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_matrix_market())?;
        Ok(())
    }
}

/// `log2(dim)` when `dim` is a power of two of at least 2.
pub fn log2_exact(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

pub fn frobenius_distance(a: &DenseMatrix, b: &DenseMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::ShapeMismatch(a.dim(), b.dim()));
    }
    Ok(a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Largest entrywise deviation of `m^† m` from the identity.
pub fn unitarity_error(m: &DenseMatrix) -> f64 {
    let prod = m.t().mapv(|z| z.conj()).dot(m);
    prod.indexed_iter()
        .map(|((i, j), &z)| {
            let target = if i == j { 1.0 } else { 0.0 };
            (z - Complex64::new(target, 0.0)).norm()
        })
        .fold(0.0, f64::max)
}
