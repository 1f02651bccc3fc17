//! `polygamy-lab`: compute entanglement and assistance measures of small
//! multipartite states, verify the power-weighted polygamy inequalities on
//! them, sweep exponents into CSV curves, fuzz random states, and reproduce
//! the pinned example values.
//!
//! Exit codes: 0 success (including an honestly unsatisfied hypothesis),
//! 1 bad input data, 2 usage error, 3 a satisfied-hypothesis inequality
//! violated beyond tolerance or a pinned value not reproduced.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod fuzz;
mod measure;
mod reproduce;
mod statefile;
mod sweep;
mod verify;

pub(crate) const EXIT_OK: u8 = 0;
pub(crate) const EXIT_DATA: u8 = 1;
pub(crate) const EXIT_USAGE: u8 = 2;
pub(crate) const EXIT_VIOLATION: u8 = 3;

/// Error plus the exit code it maps to.
#[derive(Debug)]
pub(crate) struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn data(message: impl Into<String>) -> Self {
        Self { code: EXIT_DATA, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

pub(crate) type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "polygamy-lab",
    version,
    about = "Entanglement assistance measures and polygamy-inequality checks for small multipartite states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a measure of a state at a cut
    Measure {
        /// Path to a JSON state file
        #[arg(long)]
        state: PathBuf,
        /// One of: concurrence, ca, tau_a, entropy, eoa, negativity, scren, screnoa, wootters
        #[arg(long)]
        measure: String,
        /// Side-A subsystem indices, comma separated
        #[arg(long, default_value = "0")]
        cut: String,
        /// Restart budget for roof-based measures
        #[arg(long)]
        restarts: Option<usize>,
        /// RNG seed for roof-based measures
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Verify one inequality on a state and print the full report
    Verify {
        /// Path to a JSON state file (not needed for lemma1)
        #[arg(long)]
        state: Option<PathBuf>,
        /// One of: lemma1, t1..t7, ckw, dual-ckw
        #[arg(long)]
        theorem: String,
        /// Exponent for the assistance-power forms (t1..t3, >= 2)
        #[arg(long)]
        alpha: Option<f64>,
        /// Exponent for the entropy/negativity forms (t4..t7, >= 1)
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sweep an exponent range into CSV rows (exponent,lhs,rhs,residual,precondition_met)
    Sweep {
        #[arg(long)]
        state: PathBuf,
        /// One of: t1..t7
        #[arg(long)]
        theorem: String,
        /// Inclusive range lo:hi:step
        #[arg(long)]
        range: String,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run checkers over Haar-random states; violations dump replay files
    Fuzz {
        /// Number of random states (>= 1)
        #[arg(long)]
        count: usize,
        /// Subsystem dimensions, comma separated
        #[arg(long, default_value = "2,2,2")]
        layout: String,
        /// Comma-separated subset of t1..t7, ckw, dual-ckw
        #[arg(long, default_value = "t1,ckw,dual-ckw")]
        theorems: String,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for violation replay files (default: current dir)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the pinned example values and compare against this build
    Reproduce {
        /// One of: ex1, ex2, ex3, ex4, fig1, fig2, fig3
        id: String,
        /// Also write the underlying sweep CSV (fig ids only)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Cap the rayon worker count from POLYGAMY_LAB_THREADS when set.
fn init_thread_pool() {
    if let Ok(v) = std::env::var("POLYGAMY_LAB_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Measure { state, measure, cut, restarts, seed } => {
            measure::run(&state, &measure, &cut, restarts, seed)
        }
        Command::Verify { state, theorem, alpha, beta, restarts, seed } => {
            verify::run(state.as_deref(), &theorem, alpha, beta, restarts, seed)
        }
        Command::Sweep { state, theorem, range, out, restarts, seed } => {
            sweep::run(&state, &theorem, &range, out.as_deref(), restarts, seed)
        }
        Command::Fuzz { count, layout, theorems, alpha, beta, seed, out } => {
            fuzz::run(count, &layout, &theorems, alpha, beta, seed, out.as_deref())
        }
        Command::Reproduce { id, out } => reproduce::run(&id, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_thread_pool();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

/// Scientific notation with 12 significant digits; shared by every record
/// and CSV writer so outputs are byte-reproducible.
pub(crate) fn fmt_value(x: f64) -> String {
    format!("{x:.11e}")
}

/// Parse comma-separated subsystem indices into a cut against `n` parts.
pub(crate) fn parse_cut(spec: &str, n: usize) -> CliResult<polygamy_core::Bipartition> {
    let mut side_a = Vec::new();
    for tok in spec.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let idx: usize = tok
            .parse()
            .map_err(|_| CliError::usage(format!("bad cut index `{tok}`")))?;
        side_a.push(idx);
    }
    polygamy_core::Bipartition::new(&side_a, n)
        .map_err(|e| CliError::usage(format!("cut `{spec}` does not fit the state: {e}")))
}

/// Roof configuration from CLI overrides.
pub(crate) fn roof_config(restarts: Option<usize>, seed: Option<u64>) -> polygamy_core::RoofConfig {
    let mut cfg = polygamy_core::RoofConfig::default();
    if let Some(r) = restarts {
        cfg.restarts = r.max(1);
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg
}
