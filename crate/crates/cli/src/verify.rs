//! `verify`: run one checker on one state, print the full report, and map
//! the verdict onto the exit-code contract.

use std::path::Path;

use polygamy_core::checker::{
    check_eoa_multi, check_screnoa_multi, check_tau_multi, check_tau_tripartite, ckw_check,
    lemma1_gap, ConditionKind, PolygamyReport, TheoremId,
};
use polygamy_core::linalg::haar_random_pure_with;
use polygamy_core::{StateVector, SubsystemLayout};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::statefile::StateFile;
use crate::{fmt_value, roof_config, CliError, CliResult, EXIT_OK, EXIT_VIOLATION};

pub fn run(
    state: Option<&Path>,
    theorem: &str,
    alpha: Option<f64>,
    beta: Option<f64>,
    restarts: Option<usize>,
    seed: Option<u64>,
) -> CliResult<u8> {
    let id: TheoremId = theorem.parse().map_err(|e| CliError::usage(format!("{e}")))?;
    match id {
        TheoremId::Lemma1 => run_lemma1(seed),
        TheoremId::Ckw | TheoremId::DualCkw => {
            let psi = require_pure(state)?;
            let (mono, dual) = ckw_check(&psi).map_err(|e| CliError::data(e.to_string()))?;
            let gap = if id == TheoremId::Ckw { mono } else { dual };
            println!("theorem = {id}");
            println!("gap = {}", fmt_value(gap));
            println!("tolerance = {}", fmt_value(1e-9));
            let holds = gap >= -1e-9;
            println!("holds = {holds}");
            Ok(if holds { EXIT_OK } else { EXIT_VIOLATION })
        }
        TheoremId::TauTripartite | TheoremId::TauSplit | TheoremId::TauOrdered => {
            let exponent = require_exponent(alpha, "--alpha", 2.0)?;
            let psi = require_pure(state)?;
            let report = match id {
                TheoremId::TauTripartite => check_tau_tripartite(&psi, exponent),
                _ => check_tau_multi(&psi, exponent),
            }
            .map_err(|e| CliError::data(e.to_string()))?;
            finish(id, report)
        }
        TheoremId::EoaSplit | TheoremId::EoaOrdered => {
            let exponent = require_exponent(beta, "--beta", 1.0)?;
            let rho = require_state(state)?.into_state()?.to_density();
            let report = check_eoa_multi(&rho, exponent, &roof_config(restarts, seed))
                .map_err(|e| CliError::data(e.to_string()))?;
            finish(id, report)
        }
        TheoremId::ScrenoaSplit | TheoremId::ScrenoaOrdered => {
            let exponent = require_exponent(beta, "--beta", 1.0)?;
            let rho = require_state(state)?.into_state()?.to_density();
            let report = check_screnoa_multi(&rho, exponent, &roof_config(restarts, seed))
                .map_err(|e| CliError::data(e.to_string()))?;
            finish(id, report)
        }
    }
}

/// Scalar-lemma verification: the fixed grid plus a seeded random sample.
fn run_lemma1(seed: Option<u64>) -> CliResult<u8> {
    let mut min_gap = f64::INFINITY;
    let mut argmin = (1.0, 1.0);
    for i in 0..100 {
        let x = 1.0 + 5.0 * (i as f64) / 99.0;
        for j in 0..100 {
            let t = 1.0 + 49.0 * (j as f64) / 99.0;
            let g = lemma1_gap(x, t).expect("grid inside domain");
            if g < min_gap {
                min_gap = g;
                argmin = (x, t);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
    use rand::Rng;
    for _ in 0..10_000 {
        let x = rng.gen_range(1.0..6.0);
        let t = rng.gen_range(1.0..50.0);
        let g = lemma1_gap(x, t).expect("sample inside domain");
        if g < min_gap {
            min_gap = g;
            argmin = (x, t);
        }
    }
    println!("theorem = lemma1");
    println!("grid = 100x100 on [1,6]x[1,50] plus 10000 random pairs");
    println!("min_gap = {}", fmt_value(min_gap));
    println!("argmin = ({}, {})", argmin.0, argmin.1);
    let holds = min_gap >= -1e-12;
    println!("holds = {holds}");
    Ok(if holds { EXIT_OK } else { EXIT_VIOLATION })
}

fn require_state(state: Option<&Path>) -> CliResult<StateFile> {
    let path = state.ok_or_else(|| CliError::usage("this theorem needs --state".to_string()))?;
    StateFile::load(path)
}

fn require_pure(state: Option<&Path>) -> CliResult<StateVector> {
    match require_state(state)?.into_state()? {
        crate::statefile::LoadedState::Pure(psi) => Ok(psi),
        crate::statefile::LoadedState::Mixed(_) => {
            Err(CliError::data("this theorem needs a pure state (kind = \"pure\")".to_string()))
        }
    }
}

fn require_exponent(value: Option<f64>, flag: &str, min: f64) -> CliResult<f64> {
    let e = value.ok_or_else(|| CliError::usage(format!("this theorem needs {flag}")))?;
    if e.is_nan() || e < min {
        return Err(CliError::usage(format!("{flag} must be >= {min}, got {e}")));
    }
    Ok(e)
}

fn finish(requested: TheoremId, report: PolygamyReport) -> CliResult<u8> {
    print_report(requested, &report);
    if report.holds || !report.precondition_met {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_VIOLATION)
    }
}

fn print_report(requested: TheoremId, r: &PolygamyReport) {
    println!("theorem = {}", r.theorem);
    if requested != r.theorem {
        println!("requested = {requested}");
    }
    println!("exponent = {}", r.exponent);
    if let Some(b) = r.branch {
        println!("branch = {b}");
    }
    let values: Vec<String> = r.classification.values.iter().map(|v| fmt_value(*v)).collect();
    println!("pair_values = {}", values.join(", "));
    let kind = match r.classification.condition_kind {
        ConditionKind::AllAscending => "all-ascending",
        ConditionKind::Split => "split",
        ConditionKind::Unsatisfied => "unsatisfied",
    };
    println!(
        "classification = {kind}{}",
        if r.classification.squared { " (on squared values)" } else { "" }
    );
    if let Some(m) = r.classification.split_m {
        println!("split_m = {m}");
    }
    println!("precondition_met = {}", r.precondition_met);
    println!("lhs = {}", fmt_value(r.lhs));
    println!("rhs = {}", fmt_value(r.rhs));
    println!("residual = {}", fmt_value(r.residual));
    println!("tolerance = {}", fmt_value(r.tolerance));
    println!("holds = {}", r.holds);
    if let Some(note) = &r.note {
        println!("note = {note}");
    }
}

/// Shared by fuzz: deterministic random pure state for stream `i`.
pub(crate) fn haar_state(layout: &SubsystemLayout, seed: u64, index: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    haar_random_pure_with(layout, &mut rng)
}
