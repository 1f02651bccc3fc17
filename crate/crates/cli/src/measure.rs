//! `measure`: one value per invocation, printed as a `key = value` record.

use std::path::Path;

use polygamy_core::assistance::{concurrence_of_assistance, eoa, screnoa, tau_a_at_cut};
use polygamy_core::measures::{
    concurrence_pure, entanglement_entropy, flatten_to_bipartition, negativity, scren_pure,
    wootters_concurrence_2q,
};
use polygamy_core::roof::scren;
use polygamy_core::RoofResult;

use crate::statefile::{LoadedState, StateFile};
use crate::{fmt_value, parse_cut, roof_config, CliError, CliResult, EXIT_OK};

const MEASURES: &[&str] =
    &["concurrence", "ca", "tau_a", "entropy", "eoa", "negativity", "scren", "screnoa", "wootters"];

/// Resolve a cut spec against a loaded state. Plain `0,2` puts those
/// subsystems on side A and the rest on side B. The two-sided form `0|1`
/// names both sides explicitly; any subsystem on neither side is traced out
/// first, so `0|1` on a four-party state measures the marginal on parties
/// 0 and 1.
fn resolve_view(loaded: LoadedState, spec: &str) -> CliResult<(LoadedState, polygamy_core::Bipartition)> {
    let n = loaded.layout().subsystem_count();
    let Some((a_spec, b_spec)) = spec.split_once('|') else {
        let cut = parse_cut(spec, n)?;
        return Ok((loaded, cut));
    };
    let parse_side = |side: &str| -> CliResult<Vec<usize>> {
        let mut out = Vec::new();
        for tok in side.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            out.push(tok.parse::<usize>().map_err(|_| CliError::usage(format!("bad cut index `{tok}`")))?);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    };
    let side_a = parse_side(a_spec)?;
    let side_b = parse_side(b_spec)?;
    if side_a.is_empty() || side_b.is_empty() {
        return Err(CliError::usage("both sides of the cut must be nonempty".to_string()));
    }
    if side_a.iter().any(|i| side_b.contains(i)) {
        return Err(CliError::usage("cut sides overlap".to_string()));
    }
    let mut keep: Vec<usize> = side_a.iter().chain(&side_b).copied().collect();
    keep.sort_unstable();
    if keep.iter().any(|&i| i >= n) {
        return Err(CliError::usage(format!("cut index out of range for {n} subsystems")));
    }
    if keep.len() == n {
        let cut = polygamy_core::Bipartition::new(&side_a, n)
            .map_err(|e| CliError::usage(e.to_string()))?;
        return Ok((loaded, cut));
    }
    // trace out everything on neither side, then renumber
    let reduced = polygamy_core::linalg::partial_trace(&loaded.to_density(), &keep)
        .map_err(|e| CliError::data(e.to_string()))?;
    let renumbered: Vec<usize> = side_a
        .iter()
        .map(|i| keep.iter().position(|k| k == i).expect("member of keep"))
        .collect();
    let cut = polygamy_core::Bipartition::new(&renumbered, keep.len())
        .map_err(|e| CliError::usage(e.to_string()))?;
    Ok((LoadedState::Mixed(reduced), cut))
}

pub fn run(
    state_path: &Path,
    measure: &str,
    cut_spec: &str,
    restarts: Option<usize>,
    seed: Option<u64>,
) -> CliResult<u8> {
    if !MEASURES.contains(&measure) {
        return Err(CliError::usage(format!(
            "unknown measure `{measure}` (expected one of {})",
            MEASURES.join(", ")
        )));
    }
    let loaded = StateFile::load(state_path)?.into_state()?;
    let (loaded, cut) = resolve_view(loaded, cut_spec)?;
    let config = roof_config(restarts, seed);

    let pure_only = |name: &str| -> CliResult<&polygamy_core::StateVector> {
        loaded.as_pure().ok_or_else(|| {
            CliError::data(format!("measure `{name}` needs a pure state (kind = \"pure\")"))
        })
    };
    let two_qubit_view = |name: &str| -> CliResult<polygamy_core::DensityOperator> {
        let flat = flatten_to_bipartition(&loaded.to_density(), &cut)
            .map_err(|e| CliError::data(e.to_string()))?;
        if flat.layout().dims() != [2, 2] {
            return Err(CliError::data(format!(
                "measure `{name}` needs a two-qubit view; this cut gives {:?}",
                flat.layout().dims()
            )));
        }
        Ok(flat)
    };

    let mut roof_meta: Option<RoofResult> = None;
    let value = match measure {
        "concurrence" => concurrence_pure(pure_only("concurrence")?, &cut),
        "entropy" => entanglement_entropy(pure_only("entropy")?, &cut),
        "negativity" => negativity(&loaded.to_density(), &cut),
        "wootters" => wootters_concurrence_2q(&two_qubit_view("wootters")?),
        "ca" => concurrence_of_assistance(&two_qubit_view("ca")?),
        "tau_a" => tau_a_at_cut(&loaded.to_density(), &cut),
        "scren" => match &loaded {
            LoadedState::Pure(psi) => scren_pure(psi, &cut),
            LoadedState::Mixed(rho) => scren(rho, &cut, &config).map(|(v, meta)| {
                roof_meta = Some(meta);
                v
            }),
        },
        "eoa" => flatten_to_bipartition(&loaded.to_density(), &cut).and_then(|flat| {
            eoa(&flat, &config).map(|meta| {
                let v = meta.value;
                roof_meta = Some(meta);
                v
            })
        }),
        "screnoa" => flatten_to_bipartition(&loaded.to_density(), &cut).and_then(|flat| {
            screnoa(&flat, &config).map(|(v, meta)| {
                roof_meta = Some(meta);
                v
            })
        }),
        _ => unreachable!("validated above"),
    }
    .map_err(|e| CliError::data(e.to_string()))?;

    println!("measure = {measure}");
    println!(
        "cut = {} | {}",
        join_indices(cut.side_a()),
        join_indices(cut.side_b())
    );
    println!("value = {}", fmt_value(value));
    match &roof_meta {
        Some(meta) => {
            println!("method = convex-roof");
            println!("converged = {}", meta.converged);
            println!("restarts_used = {}", meta.restarts_used);
            println!("best_restart_seed = {}", meta.best_restart_seed);
            println!("seed = {}", config.seed);
        }
        None => println!("method = closed-form"),
    }
    Ok(EXIT_OK)
}

fn join_indices(v: &[usize]) -> String {
    v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}
