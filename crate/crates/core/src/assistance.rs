//! "Of assistance" quantities: the maximum ensemble average of a pure-state
//! measure over all decompositions of a mixed state.
//!
//! The two-qubit concurrence of assistance and its per-block generalization
//! have a spectral closed form (the full sum of the conjugated spectrum),
//! which is the primary path here; the roof optimizer serves as an
//! independent cross-check. Entanglement of assistance and SCRENoA have no
//! closed form and go through the roof maximizer.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{tensor_product, CMatrix, DensityOperator};
use crate::measures::{
    conjugated_spectrum, entanglement_entropy, negativity_pure, two_qubit_spin_flip, Bipartition,
};
use crate::roof::{roof_optimize, RoofConfig, RoofDirection, RoofResult};

/// An antisymmetric two-level flip on side A tensored with one on side B:
/// `L_A^m (x) L_B^n`, where `L^{(i,j)} = -|i><j| + |j><i|` acts inside the
/// two-dimensional subspace spanned by the chosen basis pair.
#[derive(Debug, Clone)]
pub struct LOperatorPair {
    dims: (usize, usize),
    m_index: (usize, usize),
    n_index: (usize, usize),
    operator: CMatrix,
}

fn pair_flip(dim: usize, i: usize, j: usize) -> CMatrix {
    let mut l = CMatrix::zeros(dim, dim);
    l[(i, j)] = Complex64::new(-1.0, 0.0);
    l[(j, i)] = Complex64::new(1.0, 0.0);
    l
}

impl LOperatorPair {
    /// `m_index = (i, j)` with `i < j < d1`, `n_index = (k, l)` with
    /// `k < l < d2`.
    pub fn new(d1: usize, d2: usize, m_index: (usize, usize), n_index: (usize, usize)) -> Result<Self> {
        let (i, j) = m_index;
        let (k, l) = n_index;
        if !(i < j && j < d1) {
            return Err(Error::InvalidArgument(format!("bad side-A pair ({i},{j}) for dim {d1}")));
        }
        if !(k < l && l < d2) {
            return Err(Error::InvalidArgument(format!("bad side-B pair ({k},{l}) for dim {d2}")));
        }
        let operator = tensor_product(&pair_flip(d1, i, j), &pair_flip(d2, k, l));
        Ok(Self { dims: (d1, d2), m_index, n_index, operator })
    }

    /// All `d1(d1-1)/2 * d2(d2-1)/2` pairs in lexicographic order.
    pub fn all_pairs(d1: usize, d2: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for i in 0..d1 {
            for j in i + 1..d1 {
                for k in 0..d2 {
                    for l in k + 1..d2 {
                        out.push(Self::new(d1, d2, (i, j), (k, l)).expect("indices valid by loop"));
                    }
                }
            }
        }
        out
    }

    pub fn m_index(&self) -> (usize, usize) {
        self.m_index
    }

    pub fn n_index(&self) -> (usize, usize) {
        self.n_index
    }

    pub fn operator(&self) -> &CMatrix {
        &self.operator
    }
}

fn require_two_subsystems(rho: &DensityOperator, what: &str) -> Result<(usize, usize)> {
    let dims = rho.layout().dims();
    if dims.len() != 2 {
        return Err(Error::InvalidArgument(format!("{what} needs a two-subsystem layout")));
    }
    Ok((dims[0], dims[1]))
}

/// Concurrence of assistance of a two-qubit state: the full sum of the
/// descending spin-flip spectrum (contrast the Wootters difference).
pub fn concurrence_of_assistance(rho: &DensityOperator) -> Result<f64> {
    if rho.layout().dims() != [2, 2] {
        return Err(Error::InvalidArgument("concurrence of assistance needs a two-qubit state".into()));
    }
    Ok(conjugated_spectrum(rho.matrix(), &two_qubit_spin_flip())?.iter().sum())
}

/// Assistance value of one two-level block: the full conjugated-spectrum sum
/// for the flip `L_A^m (x) L_B^n`, equal to the maximized average of
/// `|<phi|(L_A^m (x) L_B^n)|phi*>|` over decompositions.
pub fn sub_ca(rho: &DensityOperator, pair: &LOperatorPair) -> Result<f64> {
    let dims = require_two_subsystems(rho, "block assistance")?;
    if dims != pair.dims {
        return Err(Error::InvalidArgument(format!(
            "state dims {dims:?} do not match operator dims {:?}",
            pair.dims
        )));
    }
    Ok(conjugated_spectrum(rho.matrix(), pair.operator())?.iter().sum())
}

/// Block-sum assistance bound of a bipartite state: the sum of [`sub_ca`]
/// over every two-level pair of the two sides. For a two-qubit state this is
/// exactly the concurrence of assistance (single block); in general it upper
/// bounds it.
pub fn tau_a(rho: &DensityOperator) -> Result<f64> {
    let (d1, d2) = require_two_subsystems(rho, "block-sum assistance")?;
    let mut acc = 0.0;
    for pair in LOperatorPair::all_pairs(d1, d2) {
        acc += sub_ca(rho, &pair)?;
    }
    Ok(acc)
}

/// [`tau_a`] of a multipartite state at a cut, after regrouping the cut into
/// a two-subsystem layout.
pub fn tau_a_at_cut(rho: &DensityOperator, cut: &Bipartition) -> Result<f64> {
    tau_a(&crate::measures::flatten_to_bipartition(rho, cut)?)
}

/// Which marginal of the generalized Schmidt state a closed form refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchmidtCut {
    /// The full cut of qubit A against the other two.
    AToBc,
    /// The marginal on qubits A and B (trace out C).
    Ab,
    /// The marginal on qubits A and C (trace out B).
    Ac,
}

/// Closed-form assistance values for the generalized Schmidt state
/// `l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>`:
///
/// * `A|BC`: `2 l0 sqrt(l2^2 + l3^2 + l4^2)`
/// * `AB`:   `2 l0 sqrt(l3^2 + l4^2)`
/// * `AC`:   `2 l0 sqrt(l2^2 + l4^2)`
///
/// The pair assignments follow the amplitude placement above: with only
/// `l0, l3` nonzero qubit C stays in `|0>` and the entanglement is in AB;
/// with only `l0, l2` nonzero it is in AC.
pub fn tau_a_gs_analytic(lambdas: &[f64; 5], target: SchmidtCut) -> Result<f64> {
    if lambdas.iter().any(|&l| l < 0.0 || !l.is_finite()) {
        return Err(Error::InvalidArgument("lambdas must be finite and nonnegative".into()));
    }
    let norm_sq: f64 = lambdas.iter().map(|l| l * l).sum();
    if (norm_sq - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!("sum of squared lambdas is {norm_sq}, not 1")));
    }
    let [l0, _, l2, l3, l4] = *lambdas;
    let val = match target {
        SchmidtCut::AToBc => 2.0 * l0 * (l2 * l2 + l3 * l3 + l4 * l4).sqrt(),
        SchmidtCut::Ab => 2.0 * l0 * (l3 * l3 + l4 * l4).sqrt(),
        SchmidtCut::Ac => 2.0 * l0 * (l2 * l2 + l4 * l4).sqrt(),
    };
    Ok(val)
}

/// Entanglement of assistance: the maximized average entropy of entanglement
/// over decompositions of a bipartite state. Roof-based; the returned value
/// is a certified lower bound on the true maximum.
pub fn eoa(rho: &DensityOperator, config: &RoofConfig) -> Result<RoofResult> {
    require_two_subsystems(rho, "entanglement of assistance")?;
    let cut = Bipartition::first_vs_rest(2)?;
    let cfg = config.clone().with_direction(RoofDirection::Maximize);
    roof_optimize(rho, move |psi| entanglement_entropy(psi, &cut).unwrap_or(0.0), &cfg)
}

/// SCREN of assistance: the square of the maximized average negativity over
/// decompositions of a bipartite state. Returns the squared value together
/// with the underlying roof result (whose `value` is the unsquared average).
pub fn screnoa(rho: &DensityOperator, config: &RoofConfig) -> Result<(f64, RoofResult)> {
    require_two_subsystems(rho, "SCRENoA")?;
    let cut = Bipartition::first_vs_rest(2)?;
    let cfg = config.clone().with_direction(RoofDirection::Maximize);
    let result = roof_optimize(rho, move |psi| negativity_pure(psi, &cut).unwrap_or(0.0), &cfg)?;
    Ok((result.value * result.value, result))
}
