//! `sigma-lcu` command-line driver.
//!
//! Exit codes: 0 success, 1 invalid input or parameters, 2 a verification
//! check failed.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "sigma-lcu",
    version,
    about = "Sigma-basis decompositions, completion circuits and block encodings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a Matrix Market file into Sigma terms.
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Combine terms that share a coefficient.
        #[arg(long)]
        merge: bool,
        /// Drop terms whose coefficient magnitude is below this.
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
    },
    /// Generate a discretized PDE system and its decomposition.
    Generate(GenerateArgs),
    /// Sigma versus Pauli term counts as CSV.
    Compare {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Poisson: `16..128` (n_x bounds). Heat/wave: `4(4),4(8),8(8),8(16)`.
        #[arg(long)]
        range: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every term's completion circuit by unitary extraction.
    Verify {
        #[arg(long)]
        decomp: PathBuf,
        /// Also check the dilation circuit of each term.
        #[arg(long)]
        dilation: bool,
        /// Use a circuit from a file for one term: `INDEX=PATH`.
        #[arg(long = "circuit", value_name = "INDEX=PATH")]
        circuits: Vec<String>,
    },
    /// Build the completion circuit of one term.
    Circuit {
        /// Factor string over I, P, M, A, B, e.g. `MIA`.
        #[arg(long)]
        term: String,
        #[arg(long)]
        out: PathBuf,
        /// Also print a QASM listing.
        #[arg(long)]
        qasm: bool,
    },
    /// Hadamard-test expectation values for a decomposition.
    Expval {
        #[arg(long)]
        decomp: PathBuf,
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        v: PathBuf,
        /// Evaluate `<0|U^† A^† M A V|0>` instead.
        #[arg(long)]
        m: Option<PathBuf>,
        #[arg(long)]
        shots: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Assemble and verify the PREP/SELECT block encoding.
    BlockEncode {
        #[arg(long)]
        decomp: PathBuf,
        #[arg(long)]
        outdir: PathBuf,
        #[arg(long, default_value_t = 1e-3)]
        epsilon: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Poisson,
    Heat,
    Wave,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Space qubits, n_x = 2^s.
    #[arg(long)]
    s: usize,
    /// Time qubits, n_t = 2^t (heat and wave).
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Wave speed.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    length: Option<f64>,
    #[arg(long)]
    final_time: Option<f64>,
    #[arg(long)]
    q_flux: Option<f64>,
    #[arg(long)]
    k_cond: Option<f64>,
    #[arg(long)]
    w1: Option<f64>,
    #[arg(long)]
    w2: Option<f64>,
    #[arg(long)]
    outdir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
