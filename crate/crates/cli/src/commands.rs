use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde_json::json;
use sigma_lcu::hadamard::{expval_terms, sample_sandwich};
use sigma_lcu::pauli::DEFAULT_PAULI_TOL;
use sigma_lcu::verify::check_term;
use sigma_lcu::{
    assemble, build_ul_circuit, decompose_numerical, decompose_pauli, expval_sandwich, heat_1d,
    merge_terms, poisson_1d, resource_report, sample_expval, wave_1d, Circuit, Decomposition,
    HeatParams, PdeSystem, SigmaTerm, SparseMatrix, StateOracle, WaveParams,
};

use crate::{Command, FamilyArg, GenerateArgs};

const BLOCK_TOL: f64 = 1e-10;

pub fn dispatch(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Decompose {
            input,
            out,
            merge,
            tol,
        } => decompose(&input, &out, merge, tol),
        Command::Generate(args) => generate(&args),
        Command::Compare { family, range, out } => {
            compare(family, range.as_deref(), out.as_deref())
        }
        Command::Verify {
            decomp,
            dilation,
            circuits,
        } => verify(&decomp, dilation, &circuits),
        Command::Circuit { term, out, qasm } => circuit(&term, &out, qasm),
        Command::Expval {
            decomp,
            u,
            v,
            m,
            shots,
            seed,
            out,
        } => expval(&decomp, &u, &v, m.as_deref(), shots, seed, out.as_deref()),
        Command::BlockEncode {
            decomp,
            outdir,
            epsilon,
        } => block_encode(&decomp, &outdir, epsilon),
    }
}

fn load_decomposition(path: &Path) -> Result<Decomposition> {
    Decomposition::load(path).with_context(|| format!("reading {}", path.display()))
}

fn decompose(input: &Path, out: &Path, merge: bool, tol: f64) -> Result<ExitCode> {
    let m = SparseMatrix::load_matrix_market(input)
        .with_context(|| format!("reading {}", input.display()))?;
    let mut d = decompose_numerical(&m)?;
    if tol > 0.0 {
        let kept: Vec<SigmaTerm> = d
            .terms()
            .iter()
            .filter(|t| t.coeff.norm() >= tol)
            .cloned()
            .collect();
        d = Decomposition::from_terms(d.n_qubits(), kept)?;
    }
    if merge {
        d = merge_terms(&d);
    }
    d.save(out)?;
    println!("terms: {}  nnz: {}", d.len(), m.nnz());
    Ok(ExitCode::SUCCESS)
}

fn build_system(a: &GenerateArgs) -> Result<PdeSystem> {
    let need_t = || a.t.context("--t is required for heat and wave");
    Ok(match a.family {
        FamilyArg::Poisson => poisson_1d(a.s)?,
        FamilyArg::Heat => {
            let mut p = HeatParams::neumann(a.s, need_t()?);
            p.alpha = a.alpha.unwrap_or(p.alpha);
            p.length = a.length.unwrap_or(p.length);
            p.final_time = a.final_time.unwrap_or(p.final_time);
            p.q_flux = a.q_flux.unwrap_or(p.q_flux);
            p.k_cond = a.k_cond.unwrap_or(p.k_cond);
            p.robin_w1 = a.w1.unwrap_or(p.robin_w1);
            p.robin_w2 = a.w2.unwrap_or(p.robin_w2);
            heat_1d(&p)?
        }
        FamilyArg::Wave => {
            let mut p = WaveParams::new(a.s, need_t()?);
            p.c = a.c.unwrap_or(p.c);
            p.length = a.length.unwrap_or(p.length);
            p.final_time = a.final_time.unwrap_or(p.final_time);
            wave_1d(&p)?
        }
    })
}

fn pauli_count(sys: &PdeSystem) -> Result<usize> {
    Ok(decompose_pauli(&sys.matrix, DEFAULT_PAULI_TOL)?.len())
}

fn counts_row(sys: &PdeSystem, pauli: Option<usize>) -> String {
    format!(
        "{},{},{},{},{},{}",
        sys.family.name(),
        sys.n_x(),
        sys.n_t().map(|v| v.to_string()).unwrap_or_default(),
        sys.decomposition.len(),
        pauli.map(|v| v.to_string()).unwrap_or_default(),
        sys.predicted_term_count
    )
}

const CSV_HEADER: &str = "family,n_x,n_t,sigma_terms,pauli_terms,predicted";

fn generate(a: &GenerateArgs) -> Result<ExitCode> {
    let sys = build_system(a)?;
    fs::create_dir_all(&a.outdir)?;
    sys.matrix.save_matrix_market(a.outdir.join("matrix.mtx"))?;
    sys.decomposition
        .save(a.outdir.join("decomposition.json"))?;
    let rhs = sys
        .rhs
        .as_ref()
        .map(|v| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>());
    fs::write(a.outdir.join("rhs.json"), serde_json::to_string(&rhs)?)?;
    let pauli = pauli_count(&sys).ok();
    let row = counts_row(&sys, pauli);
    fs::write(
        a.outdir.join("counts.csv"),
        format!("{CSV_HEADER}\n{row}\n"),
    )?;
    println!("{row}");
    Ok(ExitCode::SUCCESS)
}

fn parse_sizes(family: FamilyArg, range: Option<&str>) -> Result<Vec<(usize, usize)>> {
    let log2 = |v: usize| -> Result<usize> {
        if v < 2 || !v.is_power_of_two() {
            bail!("size {v} is not a power of two >= 2");
        }
        Ok(v.trailing_zeros() as usize)
    };
    match family {
        FamilyArg::Poisson => {
            let (lo, hi) = range
                .unwrap_or("16..128")
                .split_once("..")
                .context("expected LO..HI")?;
            let (lo, hi) = (log2(lo.trim().parse()?)?, log2(hi.trim().parse()?)?);
            Ok((lo..=hi).map(|s| (s, 0)).collect())
        }
        FamilyArg::Heat | FamilyArg::Wave => range
            .unwrap_or("4(4),4(8),8(8),8(16)")
            .split(',')
            .map(|item| {
                let (nx, nt) = item
                    .trim()
                    .trim_end_matches(')')
                    .split_once('(')
                    .context("expected NX(NT)")?;
                Ok((log2(nx.parse()?)?, log2(nt.parse()?)?))
            })
            .collect(),
    }
}

fn compare(family: FamilyArg, range: Option<&str>, out: Option<&Path>) -> Result<ExitCode> {
    let mut csv = format!("{CSV_HEADER}\n");
    for (s, t) in parse_sizes(family, range)? {
        let sys = match family {
            FamilyArg::Poisson => poisson_1d(s)?,
            FamilyArg::Heat => heat_1d(&HeatParams::neumann(s, t))?,
            FamilyArg::Wave => wave_1d(&WaveParams::new(s, t))?,
        };
        csv.push_str(&counts_row(&sys, Some(pauli_count(&sys)?)));
        csv.push('\n');
    }
    match out {
        Some(p) => fs::write(p, &csv)?,
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(decomp: &Path, dilation: bool, overrides: &[String]) -> Result<ExitCode> {
    let d = load_decomposition(decomp)?;
    let mut custom = std::collections::BTreeMap::new();
    for o in overrides {
        let (idx, path) = o.split_once('=').context("expected INDEX=PATH")?;
        let idx: usize = idx.parse().context("term index")?;
        if idx >= d.len() {
            bail!("term index {idx} out of range ({} terms)", d.len());
        }
        custom.insert(
            idx,
            Circuit::load(path).with_context(|| format!("reading {path}"))?,
        );
    }
    println!(
        "{:>4}  {:<12} {:>9} {:>7} {:>6} {:>8}  result",
        "term", "factors", "structure", "unitary", "budget", "dilation"
    );
    let mut failures = Vec::new();
    for (i, t) in d.terms().iter().enumerate() {
        let circ = match custom.remove(&i) {
            Some(c) => c,
            None => build_ul_circuit(t)?,
        };
        let mark = |b: bool| if b { "ok" } else { "FAIL" };
        let (chk, passed) = match check_term(t, &circ, dilation) {
            Ok(chk) => {
                let p = chk.passed();
                (Some(chk), p)
            }
            Err(e) => {
                println!("{i:>4}  {:<12} error: {e}", t.factors.to_string());
                (None, false)
            }
        };
        if let Some(chk) = chk {
            println!(
                "{i:>4}  {:<12} {:>9} {:>7} {:>6} {:>8}  {}{}",
                chk.factors,
                mark(chk.structure),
                mark(chk.unitary),
                mark(chk.budget),
                chk.dilation.map(mark).unwrap_or("-"),
                if passed { "pass" } else { "FAIL" },
                chk.note.map(|n| format!(" ({n})")).unwrap_or_default()
            );
        }
        if !passed {
            failures.push(i);
        }
    }
    if failures.is_empty() {
        println!("all {} terms pass", d.len());
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("verification failed for terms {failures:?}");
        Ok(ExitCode::from(2))
    }
}

fn circuit(term: &str, out: &Path, qasm: bool) -> Result<ExitCode> {
    let t = SigmaTerm::parse(Complex64::new(1.0, 0.0), term)?;
    let c = build_ul_circuit(&t)?;
    c.save(out)?;
    if qasm {
        print!("{}", c.to_qasm());
    }
    Ok(ExitCode::SUCCESS)
}

fn expval(
    decomp: &Path,
    u: &Path,
    v: &Path,
    m: Option<&Path>,
    shots: Option<usize>,
    seed: u64,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let d = load_decomposition(decomp)?;
    let load = |p: &Path| StateOracle::load(p).with_context(|| format!("reading {}", p.display()));
    let (u, v) = (load(u)?, load(v)?);
    let pair = |z: Complex64| json!([z.re, z.im]);
    let mut per_term = Vec::new();
    let mut total = Complex64::new(0.0, 0.0);
    match m {
        None => {
            let values = match shots {
                None => expval_terms(&u, &v, &d)?.1,
                Some(n) => d
                    .terms()
                    .iter()
                    .enumerate()
                    .map(|(l, t)| sample_expval(&u, &v, t, n, seed.wrapping_add(l as u64)))
                    .collect::<sigma_lcu::Result<_>>()?,
            };
            for (t, e) in d.terms().iter().zip(values) {
                total += t.coeff * e;
                per_term.push(json!({"factors": t.factors.to_string(), "coeff": pair(t.coeff), "re": e.re, "im": e.im}));
            }
        }
        Some(mp) => {
            let m = load(mp)?;
            let mut k = 0u64;
            for (i, ti) in d.terms().iter().enumerate() {
                for (j, tj) in d.terms().iter().enumerate() {
                    let e = match shots {
                        None => expval_sandwich(&u, &v, &m, ti, tj)?,
                        Some(n) => sample_sandwich(&u, &v, &m, ti, tj, n, seed.wrapping_add(k))?,
                    };
                    k += 1;
                    total += ti.coeff.conj() * tj.coeff * e;
                    per_term.push(json!({"i": i, "j": j, "re": e.re, "im": e.im}));
                }
            }
        }
    }
    let report = json!({"re": total.re, "im": total.im, "per_term": per_term});
    let text = serde_json::to_string_pretty(&report)?;
    match out {
        Some(p) => fs::write(p, &text)?,
        None => println!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn block_encode(decomp: &Path, outdir: &Path, epsilon: f64) -> Result<ExitCode> {
    let d = load_decomposition(decomp)?;
    let resources = resource_report(&d, epsilon)?;
    let be = assemble(&d)?;
    let report = be.verify()?;
    fs::create_dir_all(outdir)?;
    be.overall.save(outdir.join("circuit.json"))?;
    fs::write(
        outdir.join("report.json"),
        serde_json::to_string_pretty(&report)?,
    )?;
    fs::write(
        outdir.join("resources.json"),
        serde_json::to_string_pretty(&resources)?,
    )?;
    println!(
        "lambda {}  frobenius_error {:.3e}  unitarity_error {:.3e}  qubits {}",
        report.lambda, report.frobenius_error, report.unitarity_error, report.qubits
    );
    if report.frobenius_error < BLOCK_TOL && report.unitarity_error < BLOCK_TOL {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("block encoding outside tolerance {BLOCK_TOL:e}");
        Ok(ExitCode::from(2))
    }
}
