//! Finite-difference linear systems for the 1D Poisson, heat and wave
//! equations, each paired with its recursive Sigma-basis decomposition.
//!
//! Registers put time qubits first (most significant) and spatial qubits
//! last, matching the Kronecker order `I_{n_t} (x) A_space`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::sigma::{Decomposition, FactorString, SigmaFactor, SigmaTerm};

/// A generated linear system `A u = b` and its decomposition.
#[derive(Debug, Clone)]
pub struct PdeSystem {
    pub family: Family,
    pub s: usize,
    /// Time qubits; zero for Poisson.
    pub t: usize,
    pub matrix: SparseMatrix,
    pub rhs: Option<Vec<Complex64>>,
    pub decomposition: Decomposition,
    pub predicted_term_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Poisson,
    Heat,
    Wave,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Poisson => "poisson",
            Family::Heat => "heat",
            Family::Wave => "wave",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "poisson" => Ok(Family::Poisson),
            "heat" => Ok(Family::Heat),
            "wave" => Ok(Family::Wave),
            other => Err(Error::InvalidParameter(format!("unknown family '{other}'"))),
        }
    }
}

impl PdeSystem {
    pub fn n_x(&self) -> usize {
        1 << self.s
    }

    pub fn n_t(&self) -> Option<usize> {
        (self.family != Family::Poisson).then(|| 1 << self.t)
    }
}

/// Parameters of the heat equation with Robin boundary `w1 u + w2 u_x = q`.
/// `w1 = 0` gives the Neumann problem, `w2 = 0` the Dirichlet one.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatParams {
    pub s: usize,
    pub t: usize,
    pub alpha: f64,
    pub length: f64,
    pub final_time: f64,
    pub q_flux: f64,
    pub k_cond: f64,
    pub robin_w1: f64,
    pub robin_w2: f64,
}

impl HeatParams {
    /// Neumann problem on the unit interval with unit constants.
    pub fn neumann(s: usize, t: usize) -> Self {
        Self {
            s,
            t,
            alpha: 1.0,
            length: 1.0,
            final_time: 1.0,
            q_flux: 1.0,
            k_cond: 1.0,
            robin_w1: 0.0,
            robin_w2: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.s < 1 || self.t < 1 {
            return bad("s and t must be at least 1");
        }
        if !(self.alpha > 0.0 && self.length > 0.0 && self.final_time > 0.0) {
            return bad("alpha, length and final time must be positive");
        }
        if self.k_cond == 0.0 || !self.k_cond.is_finite() {
            return bad("thermal conductivity must be nonzero");
        }
        if self.robin_w1 == 0.0 && self.robin_w2 == 0.0 {
            return bad("robin weights cannot both be zero");
        }
        if self.robin_w1 * self.dx() + self.robin_w2 == 0.0 {
            return bad("robin weights give a singular boundary correction");
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        self.length / (1u64 << self.s) as f64
    }

    pub fn dt(&self) -> f64 {
        self.final_time / ((1u64 << self.t) - 1) as f64
    }

    /// Value taken by the two boundary corrections of the Laplacian.
    pub fn corner_correction(&self) -> f64 {
        self.robin_w2 / (self.robin_w1 * self.dx() + self.robin_w2)
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn repeat(f: SigmaFactor, n: usize) -> Vec<SigmaFactor> {
    vec![f; n]
}

fn term(coeff: f64, parts: &[&[SigmaFactor]]) -> SigmaTerm {
    SigmaTerm::new(re(coeff), FactorString(parts.concat()))
}

/// Tridiagonal `2, -1` matrix of size `2^s`.
fn laplacian_matrix(s: usize, diag: f64, off: f64) -> SparseMatrix {
    let n = 1usize << s;
    let mut trip = Vec::with_capacity(3 * n);
    for i in 0..n {
        trip.push((i, i, re(diag)));
        if i + 1 < n {
            trip.push((i, i + 1, re(off)));
            trip.push((i + 1, i, re(off)));
        }
    }
    SparseMatrix::from_triplets(s, trip).expect("s >= 1")
}

/// Recursive decomposition of the `2, -1` tridiagonal matrix:
/// `A(s) = I (x) A(s-1) - s- (x) s+^(s-1) - s+ (x) s-^(s-1)`,
/// `A(1) = 2 I - s- - s+`.
pub fn poisson_decomposition(s: usize) -> Result<Decomposition> {
    use SigmaFactor::*;
    if s < 1 {
        return Err(Error::InvalidParameter("s must be at least 1".into()));
    }
    let mut d = Decomposition::from_terms(
        1,
        [
            term(2.0, &[&[Ident]]),
            term(-1.0, &[&[SMinus]]),
            term(-1.0, &[&[SPlus]]),
        ],
    )?;
    for level in 2..=s {
        let lower = d.kron_left(&term(1.0, &[&[Ident]]));
        let couplings = Decomposition::from_terms(
            level,
            [
                term(-1.0, &[&[SMinus], &repeat(SPlus, level - 1)]),
                term(-1.0, &[&[SPlus], &repeat(SMinus, level - 1)]),
            ],
        )?;
        d = lower.plus(&couplings)?;
    }
    Ok(d)
}

/// Poisson matrix with Dirichlet boundaries, `n_x = 2^s`. No right-hand side
/// is produced; `f` is left to the caller.
pub fn poisson_1d(s: usize) -> Result<PdeSystem> {
    let decomposition = poisson_decomposition(s)?;
    Ok(PdeSystem {
        family: Family::Poisson,
        s,
        t: 0,
        matrix: laplacian_matrix(s, 2.0, -1.0),
        rhs: None,
        decomposition,
        predicted_term_count: 2 * s + 1,
    })
}

/// Block lower-bidiagonal `A_1` of an Euler time stepping system:
/// `2^t` diagonal blocks `I_{2^s}` and `-I_{2^s}` on the block subdiagonal.
///
/// `A_1(t) = I (x) A_1(t-1) - s- (x) s+^(t-1) (x) I_{2^s}`, giving `t + 1`
/// terms.
pub fn ode_extended_a1(t: usize, s: usize) -> Result<Decomposition> {
    use SigmaFactor::*;
    if t < 1 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    let n = t + s;
    let space = repeat(Ident, s);
    let mut terms = vec![term(1.0, &[&repeat(Ident, n)])];
    for level in 1..=t {
        terms.push(term(
            -1.0,
            &[
                &repeat(Ident, t - level),
                &[SMinus],
                &repeat(SPlus, level - 1),
                &space,
            ],
        ));
    }
    Decomposition::from_terms(n, terms)
}

/// Ones on the first subdiagonal of a `2^t` matrix:
/// `S(t) = I (x) S(t-1) + s- (x) s+^(t-1)`, `S(1) = s-`.
pub fn subdiagonal_shift(t: usize) -> Result<Decomposition> {
    use SigmaFactor::*;
    if t < 1 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    let terms = (1..=t).map(|level| {
        term(
            1.0,
            &[
                &repeat(Ident, t - level),
                &[SMinus],
                &repeat(SPlus, level - 1),
            ],
        )
    });
    Decomposition::from_terms(t, terms)
}

/// Explicit-Euler extended system `A_1 - dt * (S (x) A')` for
/// `du/dt = A' u + b'` over `2^t` time points.
pub fn explicit_euler_system(a_prime: &Decomposition, dt: f64, t: usize) -> Result<Decomposition> {
    let a1 = ode_extended_a1(t, a_prime.n_qubits())?;
    let coupling = subdiagonal_shift(t)?.kron_right(a_prime).scaled(re(-dt));
    a1.plus(&coupling)
}

/// `A_p` decomposition: `-A_e` plus the two boundary projector terms.
fn robin_laplacian_decomposition(s: usize, corner: f64) -> Result<Decomposition> {
    use SigmaFactor::*;
    let corners = Decomposition::from_terms(
        s,
        [
            term(corner, &[&repeat(SPlusSMinus, s)]),
            term(corner, &[&repeat(SMinusSPlus, s)]),
        ],
    )?;
    poisson_decomposition(s)?.scaled(re(-1.0)).plus(&corners)
}

fn robin_laplacian_matrix(s: usize, corner: f64) -> SparseMatrix {
    let mut m = laplacian_matrix(s, -2.0, 1.0);
    let last = (1 << s) - 1;
    m.add(0, 0, re(corner)).expect("in range");
    m.add(last, last, re(corner)).expect("in range");
    m.prune();
    m
}

/// `(I_{n_t} - |0><0|^(x)t) (x) inner`: `inner` on every time block but the first.
fn skip_first_block(t: usize, inner: &Decomposition) -> Result<Decomposition> {
    use SigmaFactor::*;
    let all = Decomposition::from_terms(t, [term(1.0, &[&repeat(Ident, t)])])?;
    let first = Decomposition::from_terms(t, [term(-1.0, &[&repeat(SPlusSMinus, t)])])?;
    all.kron_right(inner).plus(&first.kron_right(inner))
}

/// Assembles `A_1 - scale * blockdiag(0, B, ..., B)` directly.
fn assemble_time_stepping(t: usize, block: &SparseMatrix, scale: f64) -> Result<SparseMatrix> {
    let bq = block.n_qubits();
    let bn = block.dim();
    let nt = 1usize << t;
    let mut m = SparseMatrix::zeros(t + bq)?;
    for k in 0..nt {
        for i in 0..bn {
            m.add(k * bn + i, k * bn + i, re(1.0))?;
            if k > 0 {
                m.add(k * bn + i, (k - 1) * bn + i, re(-1.0))?;
            }
        }
        if k > 0 {
            for (r, c, v) in block.iter() {
                m.add(k * bn + r, k * bn + c, -scale * v)?;
            }
        }
    }
    m.prune();
    Ok(m)
}

/// Backward-Euler heat system `A_h = A_1 - (alpha dt / dx^2) A_2`.
pub fn heat_1d(p: &HeatParams) -> Result<PdeSystem> {
    p.validate()?;
    let (s, t) = (p.s, p.t);
    let gamma = p.alpha * p.dt() / (p.dx() * p.dx());
    let corner = p.corner_correction();

    let a_p = robin_laplacian_decomposition(s, corner)?;
    let a2 = skip_first_block(t, &a_p)?;
    let decomposition = ode_extended_a1(t, s)?.plus(&a2.scaled(re(-gamma)))?;

    let matrix = assemble_time_stepping(t, &robin_laplacian_matrix(s, corner), gamma)?;

    let (nx, nt) = (1usize << s, 1usize << t);
    let flux = p.q_flux * p.dt() / (p.k_cond * p.dx());
    let mut rhs = vec![re(0.0); nx * nt];
    rhs[..nx].iter_mut().for_each(|v| *v = re(1.0));
    for k in 1..nt {
        rhs[k * nx] = re(flux);
    }

    Ok(PdeSystem {
        family: Family::Heat,
        s,
        t,
        matrix,
        rhs: Some(rhs),
        decomposition,
        predicted_term_count: (t + 1) + (4 * s + 6),
    })
}

/// Parameters of the Neumann wave equation.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveParams {
    pub s: usize,
    pub t: usize,
    pub c: f64,
    pub length: f64,
    pub final_time: f64,
}

impl WaveParams {
    pub fn new(s: usize, t: usize) -> Self {
        Self {
            s,
            t,
            c: 1.0,
            length: 1.0,
            final_time: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.s < 1 || self.t < 1 {
            return Err(Error::InvalidParameter("s and t must be at least 1".into()));
        }
        if !(self.c > 0.0 && self.length > 0.0 && self.final_time > 0.0) {
            return Err(Error::InvalidParameter(
                "c, length and final time must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        self.length / (1u64 << self.s) as f64
    }

    pub fn dt(&self) -> f64 {
        self.final_time / ((1u64 << self.t) - 1) as f64
    }
}

/// First-order wave system over `t + s + 1` qubits:
/// `A_w = A_1 - dt * blockdiag(0, A~, ..., A~)` with
/// `A~ = s- (x) (c^2/dx^2) A_p + s+ (x) I`.
pub fn wave_1d(p: &WaveParams) -> Result<PdeSystem> {
    use SigmaFactor::*;
    p.validate()?;
    let (s, t) = (p.s, p.t);
    let kappa = p.c * p.c / (p.dx() * p.dx());

    let lower = robin_laplacian_decomposition(s, 1.0)?
        .scaled(re(kappa))
        .kron_left(&term(1.0, &[&[SMinus]]));
    let upper = Decomposition::from_terms(s + 1, [term(1.0, &[&[SPlus], &repeat(Ident, s)])])?;
    let a_tilde = lower.plus(&upper)?;
    let decomposition =
        ode_extended_a1(t, s + 1)?.plus(&skip_first_block(t, &a_tilde)?.scaled(re(-p.dt())))?;

    let nx = 1usize << s;
    let mut block = SparseMatrix::zeros(s + 1)?;
    for i in 0..nx {
        block.add(i, nx + i, re(1.0))?;
    }
    for (r, c, v) in robin_laplacian_matrix(s, 1.0).iter() {
        block.add(nx + r, c, v * kappa)?;
    }
    block.prune();
    let matrix = assemble_time_stepping(t, &block, p.dt())?;

    let nt = 1usize << t;
    let mut rhs = vec![re(0.0); 2 * nx * nt];
    rhs[..2 * nx].iter_mut().for_each(|v| *v = re(1.0));

    Ok(PdeSystem {
        family: Family::Wave,
        s,
        t,
        matrix,
        rhs: Some(rhs),
        decomposition,
        predicted_term_count: (t + 1) + 2 * (2 * (s + 1) + 4),
    })
}
