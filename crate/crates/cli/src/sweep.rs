//! `sweep`: evaluate one prepared check across an exponent grid and emit
//! CSV. The state-dependent quantities (marginal values, left-hand base, and
//! classification) are computed once; only the weights vary per row.

use std::io::Write;
use std::path::Path;

use polygamy_core::checker::{
    prepare_eoa_multi, prepare_screnoa_multi, prepare_tau_multi, prepare_tau_tripartite,
    PreparedCheck, TheoremId,
};
use polygamy_core::RoofConfig;

use crate::statefile::{LoadedState, StateFile};
use crate::{fmt_value, roof_config, CliError, CliResult, EXIT_OK, EXIT_VIOLATION};

pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Grid {
    pub fn parse(spec: &str) -> CliResult<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::usage(format!("range `{spec}` is not lo:hi:step")));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>().map_err(|_| CliError::usage(format!("bad number `{p}` in range"))))
            .collect::<CliResult<_>>()?;
        let (lo, hi, step) = (nums[0], nums[1], nums[2]);
        if step.is_nan() || step <= 0.0 || hi.is_nan() || hi < lo {
            return Err(CliError::usage("range needs hi >= lo and step > 0".to_string()));
        }
        Ok(Self { lo, hi, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.lo + self.step * i as f64).collect()
    }
}

/// Build the exponent-independent part of the requested check.
pub fn prepare(
    id: TheoremId,
    loaded: &LoadedState,
    config: &RoofConfig,
) -> CliResult<PreparedCheck> {
    let prepared = match id {
        TheoremId::TauTripartite | TheoremId::TauSplit | TheoremId::TauOrdered => {
            let psi = loaded
                .as_pure()
                .ok_or_else(|| CliError::data("this theorem needs a pure state".to_string()))?;
            if id == TheoremId::TauTripartite {
                prepare_tau_tripartite(psi)
            } else {
                prepare_tau_multi(psi)
            }
        }
        TheoremId::EoaSplit | TheoremId::EoaOrdered => prepare_eoa_multi(&loaded.to_density(), config),
        TheoremId::ScrenoaSplit | TheoremId::ScrenoaOrdered => {
            prepare_screnoa_multi(&loaded.to_density(), config)
        }
        _ => return Err(CliError::usage(format!("theorem `{}` has no exponent to sweep", id))),
    };
    prepared.map_err(|e| CliError::data(e.to_string()))
}

/// CSV rows for a prepared check; returns the text and whether any
/// satisfied-hypothesis row was violated.
pub fn render_csv(prepared: &PreparedCheck, points: &[f64]) -> CliResult<(String, bool)> {
    let mut csv = String::from("exponent,lhs,rhs,residual,precondition_met\n");
    let mut violated = false;
    for &e in points {
        let report = prepared.at_exponent(e).map_err(|err| CliError::usage(err.to_string()))?;
        violated |= report.precondition_met && !report.holds;
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_value(e),
            fmt_value(report.lhs),
            fmt_value(report.rhs),
            fmt_value(report.residual),
            report.precondition_met
        ));
    }
    Ok((csv, violated))
}

pub fn run(
    state_path: &Path,
    theorem: &str,
    range: &str,
    out: Option<&Path>,
    restarts: Option<usize>,
    seed: Option<u64>,
) -> CliResult<u8> {
    let id: TheoremId = theorem.parse().map_err(|e| CliError::usage(format!("{e}")))?;
    let grid = Grid::parse(range)?;
    let loaded = StateFile::load(state_path)?.into_state()?;
    let prepared = prepare(id, &loaded, &roof_config(restarts, seed))?;
    if grid.lo < prepared.min_exponent() {
        return Err(CliError::usage(format!(
            "range starts at {} but the theorem domain needs >= {}",
            grid.lo,
            prepared.min_exponent()
        )));
    }

    let (csv, violated) = render_csv(&prepared, &grid.points())?;

    match out {
        Some(path) => std::fs::write(path, &csv)
            .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))?,
        None => {
            std::io::stdout()
                .write_all(csv.as_bytes())
                .map_err(|e| CliError::data(format!("stdout: {e}")))?;
        }
    }
    Ok(if violated { EXIT_VIOLATION } else { EXIT_OK })
}
