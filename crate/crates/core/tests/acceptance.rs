//! Acceptance gate: one PASS/FAIL line per criterion, each with its
//! tolerance and wall-clock bound. Exits nonzero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use ndarray::s;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sigma_lcu::pauli::DEFAULT_PAULI_TOL;
use sigma_lcu::{
    assemble, build_dilation_circuit, build_ul_circuit, circuit_to_matrix, decompose_numerical,
    decompose_pauli, expval_sandwich, expval_term, gate_count, heat_1d, poisson_1d, reconstruct,
    run, wave_1d, Circuit, HeatParams, PdeSystem, SparseMatrix, StateVector, WaveParams,
};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

const HEAT_WAVE_GRID: [(usize, usize); 4] = [(2, 2), (2, 3), (3, 3), (3, 4)];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fig3_systems() -> Vec<PdeSystem> {
    let mut out: Vec<PdeSystem> = (4..=7).map(|s| poisson_1d(s).unwrap()).collect();
    for (s, t) in HEAT_WAVE_GRID {
        out.push(heat_1d(&HeatParams::neumann(s, t)).unwrap());
        out.push(wave_1d(&WaveParams::new(s, t)).unwrap());
    }
    out
}

fn c1_term_counts() -> Outcome {
    let poisson: Vec<usize> = (4..=7)
        .map(|s| poisson_1d(s).unwrap().decomposition.len())
        .collect();
    ensure(poisson == [9, 11, 13, 15], || {
        format!("poisson counts {poisson:?}")
    })?;
    let mut rows = Vec::new();
    for (s, t) in HEAT_WAVE_GRID {
        let h = heat_1d(&HeatParams::neumann(s, t))
            .unwrap()
            .decomposition
            .len();
        let w = wave_1d(&WaveParams::new(s, t)).unwrap().decomposition.len();
        let (hb, wb) = ((t + 1) + (4 * s + 6), (t + 1) + 2 * (2 * (s + 1) + 4));
        ensure(h <= hb, || {
            format!("heat {}({}) has {h} > {hb}", 1 << s, 1 << t)
        })?;
        ensure(w <= wb, || {
            format!("wave {}({}) has {w} > {wb}", 1 << s, 1 << t)
        })?;
        rows.push(format!(
            "{}({}): heat {h}/{hb} wave {w}/{wb}",
            1 << s,
            1 << t
        ));
    }
    Ok(format!("poisson {poisson:?}; {}", rows.join(", ")))
}

fn c2_reconstruction() -> Outcome {
    let mut exact = 0;
    let mut approx = 0;
    let check = |m: &SparseMatrix,
                 back: &SparseMatrix,
                 exact: &mut usize,
                 approx: &mut usize|
     -> Result<(), String> {
        if m.is_integer_valued() {
            *exact += 1;
            ensure(back == m, || {
                "integer-valued matrix not reproduced exactly".into()
            })
        } else {
            *approx += 1;
            let e = back.frobenius_distance(m).unwrap();
            ensure(e < 1e-12, || format!("frobenius error {e:e}"))
        }
    };
    for sys in fig3_systems() {
        check(
            &sys.matrix,
            &reconstruct(&sys.decomposition),
            &mut exact,
            &mut approx,
        )?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..100 {
        let n = rng.gen_range(1..=8);
        let density = rng.gen_range(0.01..=0.1);
        let mut m = random_sparse(&mut rng, n, density, i % 2 == 0);
        if m.is_empty() {
            m.add(0, 0, c(1.0, 0.0)).unwrap();
        }
        let d = decompose_numerical(&m).map_err(|e| e.to_string())?;
        check(&m, &reconstruct(&d), &mut exact, &mut approx)?;
    }
    Ok(format!("{exact} exact, {approx} within 1e-12"))
}

fn c3_completion_circuits() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let n = rng.gen_range(1..=7);
        let t = random_term(&mut rng, n);
        let circ = build_ul_circuit(&t).unwrap();
        let u = circuit_to_matrix(&circ).unwrap();
        let a = term_dense(&t);
        let ac = &completion_dense(&t) - &a;
        ensure(u == blocks(&a, &ac, &ac, &a), || {
            format!("{} block form", t.factors)
        })?;
        ensure(unitarity(&u) == 0.0, || {
            format!("{} not unitary", t.factors)
        })?;
        let g = gate_count(&circ);
        let arity = n - t.ident_count();
        if arity == 0 {
            // A control-free MCX is stored as X: ancilla X twice.
            ensure(g.mcx.is_empty() && g.single_qubit == 2, || {
                format!("{} identity budget {g:?}", t.factors)
            })?;
        } else {
            ensure(g.mcx == [arity] && g.single_qubit <= n + 1, || {
                format!("{} budget {g:?}", t.factors)
            })?;
        }
    }
    Ok("200 terms exact".into())
}

fn c4_corner_example() -> Outcome {
    let m = SparseMatrix::from_triplets(2, [(0, 3, c(1.0, 0.0)), (3, 0, c(2.0, 0.0))]).unwrap();
    let d = decompose_numerical(&m).unwrap();
    let sigma: Vec<(String, f64, f64)> = d
        .terms()
        .iter()
        .map(|t| (t.factors.to_string(), t.coeff.re, t.coeff.im))
        .collect();
    let mut want_sigma = vec![("PP".to_string(), 1.0, 0.0), ("MM".to_string(), 2.0, 0.0)];
    want_sigma.sort_by(|a, b| a.0.cmp(&b.0));
    let mut sorted = sigma.clone();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    ensure(sorted == want_sigma, || format!("sigma terms {sigma:?}"))?;
    let p = decompose_pauli(&m, DEFAULT_PAULI_TOL).unwrap();
    let want = [
        ("XX", c(0.75, 0.0)),
        ("XY", c(0.0, -0.25)),
        ("YX", c(0.0, -0.25)),
        ("YY", c(-0.75, 0.0)),
    ];
    ensure(p.len() == 4, || format!("{} pauli terms", p.len()))?;
    for (label, coeff) in want {
        let found = p
            .terms
            .iter()
            .find(|t| t.factors.to_string() == label)
            .ok_or(format!("missing {label}"))?;
        ensure((found.coeff - coeff).norm() < 1e-12, || {
            format!("{label} = {}", found.coeff)
        })?;
    }
    Ok("2 sigma terms, 4 pauli terms within 1e-12".into())
}

fn c5_hadamard_tests() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let d = heat_1d(&HeatParams::neumann(2, 2)).unwrap().decomposition;
    let n = d.n_qubits();
    let mut worst: f64 = 0.0;
    for t in d.terms() {
        for _ in 0..20 {
            let u = random_oracle(&mut rng, n, "u");
            let v = random_oracle(&mut rng, n, "v");
            let got = expval_term(&u, &v, t).map_err(|e| e.to_string())?;
            let want = overlap(u.matrix(), &term_dense(t), v.matrix());
            let e = (got.re - want.re).abs().max((got.im - want.im).abs());
            worst = worst.max(e);
            ensure(e < 1e-10, || format!("{}: error {e:e}", t.factors))?;
        }
    }
    for _ in 0..20 {
        let (u, v, m) = (
            random_oracle(&mut rng, 4, "u"),
            random_oracle(&mut rng, 4, "v"),
            random_oracle(&mut rng, 4, "m"),
        );
        let (ti, tj) = (random_term(&mut rng, 4), random_term(&mut rng, 4));
        let got = expval_sandwich(&u, &v, &m, &ti, &tj).map_err(|e| e.to_string())?;
        let inner = adjoint(&term_dense(&ti))
            .dot(m.matrix())
            .dot(&term_dense(&tj));
        let want = overlap(u.matrix(), &inner, v.matrix());
        let e = (got.re - want.re).abs().max((got.im - want.im).abs());
        worst = worst.max(e);
        ensure(e < 1e-10, || {
            format!("sandwich {} {}: error {e:e}", ti.factors, tj.factors)
        })?;
    }
    Ok(format!(
        "{} terms x 20 pairs + 20 sandwiches, max error {worst:.1e}",
        d.len()
    ))
}

fn c6_block_encoding() -> Outcome {
    let cases = [
        ("poisson s=1", poisson_1d(1).unwrap().decomposition),
        ("poisson s=2", poisson_1d(2).unwrap().decomposition),
        (
            "heat s=t=1",
            heat_1d(&HeatParams::neumann(1, 1)).unwrap().decomposition,
        ),
        (
            "wave s=t=1",
            wave_1d(&WaveParams::new(1, 1)).unwrap().decomposition,
        ),
    ];
    let mut notes = Vec::new();
    for (name, d) in cases {
        let r = assemble(&d)
            .and_then(|be| be.verify())
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(r.qubits <= 12, || format!("{name}: {} qubits", r.qubits))?;
        ensure(r.frobenius_error < 1e-10, || {
            format!("{name}: block error {:e}", r.frobenius_error)
        })?;
        ensure(r.unitarity_error < 1e-10, || {
            format!("{name}: unitarity {:e}", r.unitarity_error)
        })?;
        notes.push(format!(
            "{name} {}q err {:.1e}",
            r.qubits, r.frobenius_error
        ));
    }
    Ok(notes.join(", "))
}

fn c7_dilation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let t = random_term(&mut rng, n);
        let dil = build_dilation_circuit(&t).unwrap();
        let ul = build_ul_circuit(&t).unwrap();
        let g = gate_count(&dil);
        let k = t.flip_count();
        if n == t.ident_count() {
            ensure(g.mcx.is_empty() && g.single_qubit == 2, || {
                format!("{} identity dilation {g:?}", t.factors)
            })?;
        } else {
            ensure(g.mcx.len() == 2 * k + 1, || {
                format!("{}: {} MCX, want {}", t.factors, g.mcx.len(), 2 * k + 1)
            })?;
        }
        let md = circuit_to_matrix(&dil).unwrap();
        let mu = circuit_to_matrix(&ul).unwrap();
        let a = term_dense(&t);
        let dim = a.nrows();
        if k == 0 {
            ensure(md == mu, || format!("{}: matrices differ", t.factors))?;
        }
        ensure(md.slice(s![..dim, ..dim]) == a.view(), || {
            format!("{}: dilation block", t.factors)
        })?;
        ensure(mu.slice(s![..dim, ..dim]) == a.view(), || {
            format!("{}: completion block", t.factors)
        })?;
    }
    Ok("100 terms".into())
}

fn c8_truth_tables() -> Outcome {
    for (layout, table) in CCNOT_TABLES {
        let mut circ = Circuit::new(3);
        circ.push(ccnot(layout)).unwrap();
        for (input, &output) in table.iter().enumerate() {
            let got = run(&circ, &StateVector::basis(3, input).unwrap()).unwrap();
            ensure(got == StateVector::basis(3, output).unwrap(), || {
                format!("{layout}: row {input:03b}")
            })?;
        }
    }
    Ok("8 layouts".into())
}

fn c9_pauli_trend() -> Outcome {
    let mut last = 0.0;
    let mut rows = Vec::new();
    for s in 4..=7 {
        let sys = poisson_1d(s).unwrap();
        let nx = 1usize << s;
        let pauli = decompose_pauli(&sys.matrix, DEFAULT_PAULI_TOL)
            .map_err(|e| e.to_string())?
            .len();
        let sigma = sys.decomposition.len();
        let ratio = pauli as f64 / sigma as f64;
        ensure(ratio > last, || format!("ratio not increasing at n_x={nx}"))?;
        ensure(pauli >= nx / 2, || format!("n_x={nx}: {pauli} pauli terms"))?;
        last = ratio;
        rows.push(format!("{nx}:{pauli}/{sigma}"));
    }
    Ok(rows.join(" "))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            1,
            "sigma term counts",
            Duration::from_secs(1),
            c1_term_counts,
        ),
        (
            2,
            "exact reconstruction",
            Duration::from_secs(10),
            c2_reconstruction,
        ),
        (
            3,
            "completion circuits",
            Duration::from_secs(30),
            c3_completion_circuits,
        ),
        (
            4,
            "4x4 sigma/pauli example",
            Duration::from_secs(1),
            c4_corner_example,
        ),
        (
            5,
            "hadamard tests",
            Duration::from_secs(60),
            c5_hadamard_tests,
        ),
        (
            6,
            "block encoding",
            Duration::from_secs(120),
            c6_block_encoding,
        ),
        (
            7,
            "dilation comparison",
            Duration::from_secs(30),
            c7_dilation,
        ),
        (
            8,
            "ccnot truth tables",
            Duration::from_secs(1),
            c8_truth_tables,
        ),
        (
            9,
            "pauli/sigma trend",
            Duration::from_secs(60),
            c9_pauli_trend,
        ),
    ];
    let mut failed = 0;
    for (id, name, bound, f) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > bound => Err(format!("took {elapsed:.2?}")),
            r => r,
        };
        match result {
            Ok(detail) => println!("PASS {id} {name} [{elapsed:.2?} < {bound:?}] {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id} {name} [{elapsed:.2?} < {bound:?}] {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
