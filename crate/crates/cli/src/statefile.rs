//! On-disk state format: JSON with explicit `[re, im]` pairs so fuzz
//! counterexamples replay bit-exactly.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use polygamy_core::linalg::CMatrix;
use polygamy_core::{DensityOperator, StateVector, SubsystemLayout};

use crate::{CliError, CliResult};

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateFile {
    Pure {
        layout: Vec<usize>,
        /// Amplitudes as `[re, im]`, row-major over the layout.
        amplitudes: Vec<[f64; 2]>,
    },
    Mixed {
        layout: Vec<usize>,
        /// Square matrix as rows of `[re, im]` entries.
        matrix: Vec<Vec<[f64; 2]>>,
    },
}

#[derive(Debug)]
pub enum LoadedState {
    Pure(StateVector),
    Mixed(DensityOperator),
}

impl LoadedState {
    pub fn layout(&self) -> &SubsystemLayout {
        match self {
            LoadedState::Pure(s) => s.layout(),
            LoadedState::Mixed(d) => d.layout(),
        }
    }

    pub fn to_density(&self) -> DensityOperator {
        match self {
            LoadedState::Pure(s) => s.to_density(),
            LoadedState::Mixed(d) => d.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&StateVector> {
        match self {
            LoadedState::Pure(s) => Some(s),
            LoadedState::Mixed(_) => None,
        }
    }
}

impl StateFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::data(format!(
                "{}: line {}, column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            ))
        })
    }

    pub fn into_state(self) -> CliResult<LoadedState> {
        match self {
            StateFile::Pure { layout, amplitudes } => {
                let layout = SubsystemLayout::new(layout)
                    .map_err(|e| CliError::data(format!("bad layout: {e}")))?;
                let amps: Vec<Complex64> =
                    amplitudes.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                let state = StateVector::new(amps, layout)
                    .map_err(|e| CliError::data(format!("bad pure state: {e}")))?;
                Ok(LoadedState::Pure(state))
            }
            StateFile::Mixed { layout, matrix } => {
                let layout = SubsystemLayout::new(layout)
                    .map_err(|e| CliError::data(format!("bad layout: {e}")))?;
                let n = layout.total();
                if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
                    return Err(CliError::data(format!(
                        "matrix must be {n}x{n} to match the layout"
                    )));
                }
                let mut m = CMatrix::zeros(n, n);
                for (i, row) in matrix.iter().enumerate() {
                    for (j, [re, im]) in row.iter().enumerate() {
                        m[(i, j)] = Complex64::new(*re, *im);
                    }
                }
                let rho = DensityOperator::new(m, layout)
                    .map_err(|e| CliError::data(format!("bad density operator: {e}")))?;
                Ok(LoadedState::Mixed(rho))
            }
        }
    }

    pub fn from_pure(state: &StateVector) -> Self {
        StateFile::Pure {
            layout: state.layout().dims().to_vec(),
            amplitudes: state.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::data(format!("serialization failed: {e}")))?;
        std::fs::write(path, text)
            .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
    }
}
