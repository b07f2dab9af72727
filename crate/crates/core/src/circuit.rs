//! Gate-list circuits and the synthesis of block-encoding circuits for
//! Sigma terms.
//!
//! Qubit 0 is the most significant bit of a basis index. Term circuits
//! place their ancilla on qubit 0 and system qubit `p` on qubit `p + 1`,
//! so the extracted unitary has the block layout `[[A, *], [*, *]]`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{unitarity_error, DenseMatrix};
use crate::sigma::{CompletionGate, SigmaFactor, SigmaTerm};

/// Tolerance for accepting dense gates as unitary.
pub const UNITARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    /// Fires on `|0>`.
    Open,
    /// Fires on `|1>`.
    Closed,
}

impl Polarity {
    pub fn from_bit(b: usize) -> Self {
        if b == 1 {
            Polarity::Closed
        } else {
            Polarity::Open
        }
    }

    pub fn fires_on(self) -> usize {
        match self {
            Polarity::Open => 0,
            Polarity::Closed => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Control {
    #[serde(rename = "q")]
    pub qubit: usize,
    #[serde(rename = "pol")]
    pub polarity: Polarity,
}

impl Control {
    pub fn closed(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: Polarity::Closed,
        }
    }

    pub fn open(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: Polarity::Open,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SingleKind {
    X,
    H,
    S,
    Sdg,
}

impl SingleKind {
    pub fn matrix(self) -> DenseMatrix {
        let (o, z, i) = (
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::i(),
        );
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self {
            SingleKind::X => ndarray::array![[z, o], [o, z]],
            SingleKind::H => ndarray::array![[h, h], [h, -h]],
            SingleKind::S => ndarray::array![[o, z], [z, i]],
            SingleKind::Sdg => ndarray::array![[o, z], [z, -i]],
        }
    }

    fn name(self) -> &'static str {
        match self {
            SingleKind::X => "x",
            SingleKind::H => "h",
            SingleKind::S => "s",
            SingleKind::Sdg => "sdg",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Single {
        target: usize,
        kind: SingleKind,
    },
    /// X on `target` when every control fires.
    Mcx {
        controls: Vec<Control>,
        target: usize,
    },
    /// Dense unitary; `targets[0]` is the most significant bit of the
    /// matrix index.
    Dense {
        targets: Vec<usize>,
        matrix: DenseMatrix,
        label: String,
    },
    ControlledDense {
        controls: Vec<Control>,
        targets: Vec<usize>,
        matrix: DenseMatrix,
        label: String,
    },
}

impl Gate {
    pub fn x(target: usize) -> Self {
        Gate::Single {
            target,
            kind: SingleKind::X,
        }
    }

    pub fn h(target: usize) -> Self {
        Gate::Single {
            target,
            kind: SingleKind::H,
        }
    }

    /// Multi-controlled X; collapses to a plain X without controls.
    pub fn mcx(controls: Vec<Control>, target: usize) -> Self {
        if controls.is_empty() {
            Gate::x(target)
        } else {
            Gate::Mcx { controls, target }
        }
    }

    pub fn dense(targets: Vec<usize>, matrix: DenseMatrix, label: impl Into<String>) -> Self {
        Gate::Dense {
            targets,
            matrix,
            label: label.into(),
        }
    }

    pub fn controls(&self) -> &[Control] {
        match self {
            Gate::Mcx { controls, .. } | Gate::ControlledDense { controls, .. } => controls,
            _ => &[],
        }
    }

    /// Qubits acted on non-trivially (not controls).
    pub fn targets(&self) -> Vec<usize> {
        match self {
            Gate::Single { target, .. } | Gate::Mcx { target, .. } => vec![*target],
            Gate::Dense { targets, .. } | Gate::ControlledDense { targets, .. } => targets.clone(),
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        let mut q: Vec<usize> = self.controls().iter().map(|c| c.qubit).collect();
        q.extend(self.targets());
        q
    }

    /// Same gate with one more control.
    pub fn with_control(&self, ctrl: Control) -> Self {
        match self {
            Gate::Single {
                target,
                kind: SingleKind::X,
            } => Gate::Mcx {
                controls: vec![ctrl],
                target: *target,
            },
            Gate::Single { target, kind } => Gate::ControlledDense {
                controls: vec![ctrl],
                targets: vec![*target],
                matrix: kind.matrix(),
                label: kind.name().to_string(),
            },
            Gate::Mcx { controls, target } => {
                let mut c = vec![ctrl];
                c.extend_from_slice(controls);
                Gate::Mcx {
                    controls: c,
                    target: *target,
                }
            }
            Gate::Dense {
                targets,
                matrix,
                label,
            } => Gate::ControlledDense {
                controls: vec![ctrl],
                targets: targets.clone(),
                matrix: matrix.clone(),
                label: label.clone(),
            },
            Gate::ControlledDense {
                controls,
                targets,
                matrix,
                label,
            } => {
                let mut c = vec![ctrl];
                c.extend_from_slice(controls);
                Gate::ControlledDense {
                    controls: c,
                    targets: targets.clone(),
                    matrix: matrix.clone(),
                    label: label.clone(),
                }
            }
        }
    }

    fn remapped(&self, map: &[usize]) -> Self {
        let ctl = |cs: &[Control]| {
            cs.iter()
                .map(|c| Control {
                    qubit: map[c.qubit],
                    ..*c
                })
                .collect()
        };
        let tg = |ts: &[usize]| ts.iter().map(|&t| map[t]).collect();
        match self {
            Gate::Single { target, kind } => Gate::Single {
                target: map[*target],
                kind: *kind,
            },
            Gate::Mcx { controls, target } => Gate::Mcx {
                controls: ctl(controls),
                target: map[*target],
            },
            Gate::Dense {
                targets,
                matrix,
                label,
            } => Gate::Dense {
                targets: tg(targets),
                matrix: matrix.clone(),
                label: label.clone(),
            },
            Gate::ControlledDense {
                controls,
                targets,
                matrix,
                label,
            } => Gate::ControlledDense {
                controls: ctl(controls),
                targets: tg(targets),
                matrix: matrix.clone(),
                label: label.clone(),
            },
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        let mut seen = BTreeSet::new();
        for &q in &qs {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
            }
            if !seen.insert(q) {
                return Err(Error::QubitCollision(q));
            }
        }
        if let Gate::Dense {
            targets,
            matrix,
            label,
        }
        | Gate::ControlledDense {
            targets,
            matrix,
            label,
            ..
        } = self
        {
            let dim = 1usize << targets.len();
            if targets.is_empty() || matrix.dim() != (dim, dim) {
                return Err(Error::ShapeMismatch(matrix.dim(), (dim, dim)));
            }
            let deviation = unitarity_error(matrix);
            if deviation > UNITARY_TOL {
                return Err(Error::NotUnitary {
                    label: label.clone(),
                    deviation,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    ancillas: BTreeSet<usize>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
            ancillas: BTreeSet::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn ancillas(&self) -> impl Iterator<Item = usize> + '_ {
        self.ancillas.iter().copied()
    }

    pub fn mark_ancilla(&mut self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                n_qubits: self.n_qubits,
            });
        }
        self.ancillas.insert(q);
        Ok(())
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        g.validate(self.n_qubits)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::WidthMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        self.ancillas.extend(other.ancillas.iter().copied());
        Ok(())
    }

    pub fn used_qubits(&self) -> BTreeSet<usize> {
        self.gates.iter().flat_map(Gate::qubits).collect()
    }

    /// Relabels qubit `q` as `map[q]` inside a register of `n_qubits`.
    pub fn remapped(&self, map: &[usize], n_qubits: usize) -> Result<Circuit> {
        if map.len() != self.n_qubits {
            return Err(Error::WidthMismatch {
                expected: self.n_qubits,
                got: map.len(),
            });
        }
        let mut out = Circuit::new(n_qubits);
        for g in &self.gates {
            out.push(g.remapped(map))?;
        }
        for &a in &self.ancillas {
            out.mark_ancilla(map[a])?;
        }
        Ok(out)
    }

    /// Moves every qubit up by `offset` in a register of `n_qubits`.
    pub fn shifted(&self, offset: usize, n_qubits: usize) -> Result<Circuit> {
        let map: Vec<usize> = (0..self.n_qubits).map(|q| q + offset).collect();
        self.remapped(&map, n_qubits)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&CircuitFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<CircuitFile>(text)?.try_into()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// OpenQASM-3-flavoured listing. Open controls are written as closed
    /// controls conjugated by X; dense gates appear as comments.
    pub fn to_qasm(&self) -> String {
        let mut out = format!("OPENQASM 3.0;\nqubit[{}] q;\n", self.n_qubits);
        for g in &self.gates {
            let opens: Vec<usize> = g
                .controls()
                .iter()
                .filter(|c| c.polarity == Polarity::Open)
                .map(|c| c.qubit)
                .collect();
            for &q in &opens {
                let _ = writeln!(out, "x q[{q}];");
            }
            let args = |qs: Vec<usize>| {
                qs.iter()
                    .map(|q| format!("q[{q}]"))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            match g {
                Gate::Single { target, kind } => {
                    let _ = writeln!(out, "{} q[{target}];", kind.name());
                }
                Gate::Mcx { controls, .. } => {
                    let _ = writeln!(out, "ctrl({}) @ x {};", controls.len(), args(g.qubits()));
                }
                Gate::Dense { targets, label, .. } => {
                    let _ = writeln!(out, "// dense {label} {}", args(targets.clone()));
                }
                Gate::ControlledDense {
                    controls, label, ..
                } => {
                    let _ = writeln!(
                        out,
                        "// ctrl({}) @ dense {label} {}",
                        controls.len(),
                        args(g.qubits())
                    );
                }
            }
            for &q in &opens {
                let _ = writeln!(out, "x q[{q}];");
            }
        }
        out
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CircuitFile {
    n_qubits: usize,
    ancillas: Vec<usize>,
    gates: Vec<GateRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum GateRecord {
    X {
        target: usize,
    },
    H {
        target: usize,
    },
    S {
        target: usize,
    },
    Sdg {
        target: usize,
    },
    Mcx {
        controls: Vec<Control>,
        target: usize,
    },
    Dense {
        targets: Vec<usize>,
        label: String,
        matrix: Vec<[f64; 2]>,
    },
    Cdense {
        controls: Vec<Control>,
        targets: Vec<usize>,
        label: String,
        matrix: Vec<[f64; 2]>,
    },
}

fn flatten(m: &DenseMatrix) -> Vec<[f64; 2]> {
    m.iter().map(|z| [z.re, z.im]).collect()
}

/// Row-major `[re, im]` pairs into a square matrix.
pub(crate) fn unflatten(data: &[[f64; 2]]) -> Result<DenseMatrix> {
    let dim = (data.len() as f64).sqrt().round() as usize;
    if dim * dim != data.len() {
        return Err(Error::InvalidParameter(format!(
            "{} matrix entries is not a square",
            data.len()
        )));
    }
    let v = data
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    Ok(Array2::from_shape_vec((dim, dim), v).expect("length checked"))
}

impl From<&Circuit> for CircuitFile {
    fn from(c: &Circuit) -> Self {
        let gates = c
            .gates
            .iter()
            .map(|g| match g {
                Gate::Single { target, kind } => {
                    let target = *target;
                    match kind {
                        SingleKind::X => GateRecord::X { target },
                        SingleKind::H => GateRecord::H { target },
                        SingleKind::S => GateRecord::S { target },
                        SingleKind::Sdg => GateRecord::Sdg { target },
                    }
                }
                Gate::Mcx { controls, target } => GateRecord::Mcx {
                    controls: controls.clone(),
                    target: *target,
                },
                Gate::Dense {
                    targets,
                    matrix,
                    label,
                } => GateRecord::Dense {
                    targets: targets.clone(),
                    label: label.clone(),
                    matrix: flatten(matrix),
                },
                Gate::ControlledDense {
                    controls,
                    targets,
                    matrix,
                    label,
                } => GateRecord::Cdense {
                    controls: controls.clone(),
                    targets: targets.clone(),
                    label: label.clone(),
                    matrix: flatten(matrix),
                },
            })
            .collect();
        Self {
            n_qubits: c.n_qubits,
            ancillas: c.ancillas.iter().copied().collect(),
            gates,
        }
    }
}

impl TryFrom<CircuitFile> for Circuit {
    type Error = Error;

    fn try_from(f: CircuitFile) -> Result<Self> {
        let mut c = Circuit::new(f.n_qubits);
        for a in f.ancillas {
            c.mark_ancilla(a)?;
        }
        for g in f.gates {
            let single = |target, kind| Gate::Single { target, kind };
            c.push(match g {
                GateRecord::X { target } => single(target, SingleKind::X),
                GateRecord::H { target } => single(target, SingleKind::H),
                GateRecord::S { target } => single(target, SingleKind::S),
                GateRecord::Sdg { target } => single(target, SingleKind::Sdg),
                GateRecord::Mcx { controls, target } => Gate::mcx(controls, target),
                GateRecord::Dense {
                    targets,
                    label,
                    matrix,
                } => Gate::Dense {
                    targets,
                    label,
                    matrix: unflatten(&matrix)?,
                },
                GateRecord::Cdense {
                    controls,
                    targets,
                    label,
                    matrix,
                } => Gate::ControlledDense {
                    controls,
                    targets,
                    label,
                    matrix: unflatten(&matrix)?,
                },
            })?;
        }
        Ok(c)
    }
}

/// Unitary-completion circuit `U_l = [[A, A^c], [A^c, A]]` for a term
/// (coefficient ignored) on `n + 1` qubits, ancilla first:
/// X on every `s+`/`s-` position, X on the ancilla, then one multi-controlled
/// X on the ancilla with closed controls on `s-`, `s-s+`, open controls on
/// `s+`, `s+s-` and no control on `I`.
pub fn build_ul_circuit(t: &SigmaTerm) -> Result<Circuit> {
    let n = t.n_qubits();
    if n == 0 {
        return Err(Error::Empty("term has no factors"));
    }
    let mut c = Circuit::new(n + 1);
    c.mark_ancilla(0)?;
    for (p, g) in t.completion().into_iter().enumerate() {
        if g == CompletionGate::X {
            c.push(Gate::x(p + 1))?;
        }
    }
    c.push(Gate::x(0))?;
    let controls = t
        .factors
        .iter()
        .enumerate()
        .filter_map(|(p, f)| match f {
            SigmaFactor::SMinus | SigmaFactor::SMinusSPlus => Some(Control::closed(p + 1)),
            SigmaFactor::SPlus | SigmaFactor::SPlusSMinus => Some(Control::open(p + 1)),
            SigmaFactor::Ident => None,
        })
        .collect();
    c.push(Gate::mcx(controls, 0))?;
    Ok(c)
}

/// Gates exchanging basis states `a` and `b` of an `n_qubits` register.
///
/// When they differ in `k + 1` bits this uses `2k + 1` multi-controlled X
/// gates: flip the first differing bit of `a`, exchange the result with `b`
/// recursively, then undo the flip. Qubits in `free` carry no control, so
/// the gates act identically on every value of those qubits.
pub fn transposition_gates(
    n_qubits: usize,
    a: usize,
    b: usize,
    free: &[usize],
) -> Result<Vec<Gate>> {
    let dim = 1usize << n_qubits;
    if a >= dim || b >= dim {
        return Err(Error::InvalidParameter(format!(
            "basis states {a}, {b} outside {n_qubits} qubits"
        )));
    }
    if a == b {
        return Ok(Vec::new());
    }
    let mask = |q: usize| 1usize << (n_qubits - 1 - q);
    let differing: Vec<usize> = (0..n_qubits).filter(|&q| (a ^ b) & mask(q) != 0).collect();
    if differing.iter().any(|q| free.contains(q)) {
        return Err(Error::InvalidParameter(
            "free qubits must agree in both states".into(),
        ));
    }
    let flip = |state: usize, target: usize| -> Gate {
        let controls = (0..n_qubits)
            .filter(|&q| q != target && !free.contains(&q))
            .map(|q| Control {
                qubit: q,
                polarity: Polarity::from_bit((state & mask(q) != 0) as usize),
            })
            .collect();
        Gate::mcx(controls, target)
    };
    // Walk a towards b one differing bit at a time; the last flip is the
    // centre and the path is then undone in reverse.
    let (&last, path) = differing.split_last().expect("a != b");
    let mut state = a;
    let mut steps = Vec::with_capacity(path.len());
    for &q in path {
        steps.push(flip(state, q));
        state ^= mask(q);
    }
    let mut out = steps.clone();
    out.push(flip(state, last));
    out.extend(steps.into_iter().rev());
    Ok(out)
}

/// Signless dilation circuit `[[A, I - A A^T], [I - A^T A, A^T]]`: X on the
/// ancilla followed by the `2s + 1` gates exchanging each row `r` with
/// `2^n + c` for `A(r, c) = 1`, where `s` counts `s+`/`s-` factors.
pub fn build_dilation_circuit(t: &SigmaTerm) -> Result<Circuit> {
    let n = t.n_qubits();
    if n == 0 {
        return Err(Error::Empty("term has no factors"));
    }
    let mut c = Circuit::new(n + 1);
    c.mark_ancilla(0)?;
    c.push(Gate::x(0))?;

    // Representative nonzero: identity positions fixed at 0 and left free.
    let (mut r, mut col) = (0usize, 0usize);
    let mut free = Vec::new();
    for (p, f) in t.factors.iter().enumerate() {
        let (br, bc) = match f {
            SigmaFactor::Ident => {
                free.push(p + 1);
                (0, 0)
            }
            SigmaFactor::SPlus => (0, 1),
            SigmaFactor::SMinus => (1, 0),
            SigmaFactor::SPlusSMinus => (0, 0),
            SigmaFactor::SMinusSPlus => (1, 1),
        };
        r = 2 * r + br;
        col = 2 * col + bc;
    }
    for g in transposition_gates(n + 1, r, (1 << n) | col, &free)? {
        c.push(g)?;
    }
    Ok(c)
}

/// Gate tallies: single-qubit gates, the control arity of each
/// multi-controlled X, and dense (possibly controlled) gates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GateCount {
    pub single_qubit: usize,
    pub mcx: Vec<usize>,
    pub dense: usize,
}

pub fn gate_count(c: &Circuit) -> GateCount {
    let mut out = GateCount::default();
    for g in c.gates() {
        match g {
            Gate::Single { .. } => out.single_qubit += 1,
            Gate::Mcx { controls, .. } => out.mcx.push(controls.len()),
            Gate::Dense { .. } | Gate::ControlledDense { .. } => out.dense += 1,
        }
    }
    out
}

/// Adds `control` to every gate of `c`. The register grows to include the
/// control qubit when needed.
pub fn controlled(c: &Circuit, control: usize, polarity: Polarity) -> Result<Circuit> {
    if c.used_qubits().contains(&control) {
        return Err(Error::QubitCollision(control));
    }
    let mut out = Circuit::new(c.n_qubits().max(control + 1));
    let ctrl = Control {
        qubit: control,
        polarity,
    };
    for g in c.gates() {
        out.push(g.with_control(ctrl))?;
    }
    for a in c.ancillas() {
        out.mark_ancilla(a)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(s: &str) -> SigmaTerm {
        SigmaTerm::parse(Complex64::new(1.0, 0.0), s).unwrap()
    }

    #[test]
    fn ul_circuit_for_worked_example() {
        let c = build_ul_circuit(&term("MIA")).unwrap();
        assert_eq!(c.n_qubits(), 4);
        assert_eq!(
            c.gates(),
            &[
                Gate::x(1),
                Gate::x(0),
                Gate::Mcx {
                    controls: vec![Control::closed(1), Control::open(3)],
                    target: 0
                }
            ]
        );
        assert_eq!(
            gate_count(&c),
            GateCount {
                single_qubit: 2,
                mcx: vec![2],
                dense: 0
            }
        );
    }

    #[test]
    fn identity_term_normalizes_to_two_x() {
        let c = build_ul_circuit(&term("II")).unwrap();
        assert_eq!(c.gates(), &[Gate::x(0), Gate::x(0)]);
    }

    #[test]
    fn dilation_counts() {
        let c = build_dilation_circuit(&term("PM")).unwrap();
        assert_eq!(
            gate_count(&c),
            GateCount {
                single_qubit: 1,
                mcx: vec![2; 5],
                dense: 0
            }
        );
        let c = build_dilation_circuit(&term("AB")).unwrap();
        assert_eq!(gate_count(&c).mcx, vec![2]);
        let c = build_dilation_circuit(&term("PIM")).unwrap();
        assert_eq!(gate_count(&c).mcx, vec![2; 5]);
    }

    #[test]
    fn empty_circuit_counts() {
        assert_eq!(gate_count(&Circuit::new(3)), GateCount::default());
    }

    #[test]
    fn push_validates() {
        let mut c = Circuit::new(2);
        assert!(matches!(
            c.push(Gate::x(2)),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert!(matches!(
            c.push(Gate::Mcx {
                controls: vec![Control::closed(1)],
                target: 1
            }),
            Err(Error::QubitCollision(1))
        ));
        let bad = ndarray::array![
            [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
        ];
        assert!(matches!(
            c.push(Gate::dense(vec![0], bad, "bad")),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn controlled_rejects_collision() {
        let c = build_ul_circuit(&term("P")).unwrap();
        assert!(matches!(
            controlled(&c, 1, Polarity::Closed),
            Err(Error::QubitCollision(1))
        ));
        let grown = controlled(&c.shifted(1, 3).unwrap(), 0, Polarity::Open).unwrap();
        assert_eq!(grown.n_qubits(), 3);
        assert!(grown
            .gates()
            .iter()
            .all(|g| g.controls()[0] == Control::open(0)));
    }

    #[test]
    fn json_round_trip_and_schema() {
        let mut c = build_ul_circuit(&term("MIA")).unwrap();
        c.push(Gate::h(2)).unwrap();
        c.push(Gate::dense(vec![3], SingleKind::S.matrix(), "s"))
            .unwrap();
        c.push(
            Gate::x(1)
                .with_control(Control::open(2))
                .with_control(Control::closed(0)),
        )
        .unwrap();
        c.push(Gate::h(1).with_control(Control::closed(0))).unwrap();
        let text = c.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["gates"][2]["kind"], "mcx");
        assert_eq!(v["gates"][2]["controls"][1]["pol"], "open");
        assert_eq!(v["gates"][4]["kind"], "dense");
        assert_eq!(Circuit::from_json(&text).unwrap(), c);
    }

    #[test]
    fn qasm_renders_open_controls_with_x_conjugation() {
        let q = build_ul_circuit(&term("MIA")).unwrap().to_qasm();
        assert!(q.contains("qubit[4] q;"));
        assert!(
            q.contains("x q[3];\nctrl(2) @ x q[1], q[3], q[0];\nx q[3];"),
            "{q}"
        );
    }

    #[test]
    fn transposition_gate_counts() {
        for k in 0..4 {
            let b = (1usize << (k + 1)) - 1;
            let gates = transposition_gates(5, 0, b, &[]).unwrap();
            assert_eq!(gates.len(), 2 * k + 1);
        }
        assert!(transposition_gates(2, 0, 0, &[]).unwrap().is_empty());
    }
}
