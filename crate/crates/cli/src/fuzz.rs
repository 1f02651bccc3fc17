//! `fuzz`: run checkers over seeded Haar-random pure states. Output ordering
//! follows the input ordering regardless of worker scheduling, and any
//! violation dumps a replay file.

use std::path::Path;

use polygamy_core::checker::{
    check_eoa_multi, check_screnoa_multi, check_tau_multi, check_tau_tripartite, ckw_check,
    TheoremId,
};
use polygamy_core::{RoofConfig, StateVector, SubsystemLayout};
use rayon::prelude::*;

use crate::statefile::StateFile;
use crate::verify::haar_state;
use crate::{fmt_value, CliError, CliResult, EXIT_OK, EXIT_VIOLATION};

#[derive(Clone, Copy, PartialEq)]
enum Outcome {
    Pass,
    Unsatisfied,
    Violation(f64),
}

fn check_one(id: TheoremId, psi: &StateVector, alpha: f64, beta: f64, config: &RoofConfig) -> Outcome {
    let report = match id {
        TheoremId::Ckw | TheoremId::DualCkw => {
            return match ckw_check(psi) {
                Ok((mono, dual)) => {
                    let gap = if id == TheoremId::Ckw { mono } else { dual };
                    if gap >= -1e-9 {
                        Outcome::Pass
                    } else {
                        Outcome::Violation(gap)
                    }
                }
                Err(e) => unreachable!("layout validated before the run: {e}"),
            }
        }
        TheoremId::TauTripartite => check_tau_tripartite(psi, alpha),
        TheoremId::TauSplit | TheoremId::TauOrdered => check_tau_multi(psi, alpha),
        TheoremId::EoaSplit | TheoremId::EoaOrdered => {
            check_eoa_multi(&psi.to_density(), beta, config)
        }
        TheoremId::ScrenoaSplit | TheoremId::ScrenoaOrdered => {
            check_screnoa_multi(&psi.to_density(), beta, config)
        }
        TheoremId::Lemma1 => unreachable!("rejected before the run"),
    }
    .expect("state and exponent validated before the run");
    if !report.precondition_met {
        Outcome::Unsatisfied
    } else if report.holds {
        Outcome::Pass
    } else {
        Outcome::Violation(report.residual)
    }
}

#[allow(clippy::too_many_arguments)]
pub fn run(
    count: usize,
    layout_spec: &str,
    theorems: &str,
    alpha: f64,
    beta: f64,
    seed: u64,
    out_dir: Option<&Path>,
) -> CliResult<u8> {
    if count == 0 {
        return Err(CliError::usage("count must be >= 1".to_string()));
    }
    let dims: Vec<usize> = layout_spec
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::usage(format!("bad dimension `{t}`"))))
        .collect::<CliResult<_>>()?;
    let layout = SubsystemLayout::new(dims).map_err(|e| CliError::usage(format!("bad layout: {e}")))?;

    let ids: Vec<TheoremId> = theorems
        .split(',')
        .map(|t| t.trim().parse::<TheoremId>().map_err(|e| CliError::usage(format!("{e}"))))
        .collect::<CliResult<_>>()?;
    if ids.is_empty() {
        return Err(CliError::usage("theorem set is empty".to_string()));
    }
    for &id in &ids {
        match id {
            TheoremId::Lemma1 => {
                return Err(CliError::usage("lemma1 has no state input; use `verify`".to_string()))
            }
            TheoremId::Ckw | TheoremId::DualCkw => {
                if layout.dims().iter().any(|&d| d != 2) {
                    return Err(CliError::usage(format!("{id} needs an all-qubit layout")));
                }
            }
            TheoremId::TauTripartite => {
                if layout.subsystem_count() != 3 {
                    return Err(CliError::usage("t1 needs exactly three subsystems".to_string()));
                }
            }
            _ => {
                if layout.subsystem_count() < 3 {
                    return Err(CliError::usage(format!("{id} needs at least three subsystems")));
                }
            }
        }
        let needs_alpha = matches!(id, TheoremId::TauTripartite | TheoremId::TauSplit | TheoremId::TauOrdered);
        if needs_alpha && (alpha.is_nan() || alpha < 2.0) {
            return Err(CliError::usage(format!("--alpha must be >= 2 for {id}")));
        }
        let needs_beta = matches!(
            id,
            TheoremId::EoaSplit | TheoremId::EoaOrdered | TheoremId::ScrenoaSplit | TheoremId::ScrenoaOrdered
        );
        if needs_beta && (beta.is_nan() || beta < 1.0) {
            return Err(CliError::usage(format!("--beta must be >= 1 for {id}")));
        }
    }

    println!(
        "fuzz: count={count} layout={layout_spec} theorems={} alpha={alpha} beta={beta} seed={seed}",
        ids.iter().map(|i| i.token()).collect::<Vec<_>>().join(",")
    );

    let config = RoofConfig { seed, ..Default::default() };
    let rows: Vec<Vec<Outcome>> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let psi = haar_state(&layout, seed, i);
            ids.iter().map(|&id| check_one(id, &psi, alpha, beta, &config)).collect()
        })
        .collect();

    let dir = out_dir.unwrap_or_else(|| Path::new("."));
    let mut any_violation = false;
    for (j, &id) in ids.iter().enumerate() {
        let mut pass = 0usize;
        let mut unsat = 0usize;
        let mut violations = 0usize;
        for (i, row) in rows.iter().enumerate() {
            match row[j] {
                Outcome::Pass => pass += 1,
                Outcome::Unsatisfied => unsat += 1,
                Outcome::Violation(residual) => {
                    violations += 1;
                    any_violation = true;
                    let path = dir.join(format!("fuzz-violation-{}-{i}.json", id.token()));
                    let psi = haar_state(&layout, seed, i as u64);
                    StateFile::from_pure(&psi).save(&path)?;
                    println!(
                        "violation: theorem={} state_index={i} residual={} replay={}",
                        id.token(),
                        fmt_value(residual),
                        path.display()
                    );
                }
            }
        }
        println!("{}: pass={pass} unsatisfied={unsat} violations={violations}", id.token());
    }
    if any_violation {
        println!("result: VIOLATIONS FOUND");
        Ok(EXIT_VIOLATION)
    } else {
        println!("result: no violations");
        Ok(EXIT_OK)
    }
}
