//! Ensemble optimization over all pure-state decompositions of a density
//! operator.
//!
//! Every decomposition of `rho` with `K` members arises from a `K x r`
//! isometry applied to the spectral decomposition (`r` = rank), so the
//! search space is the set of such isometries. The optimizer is a
//! derivative-free random local search: orthonormalized Gaussian
//! perturbations of the current isometry with an adaptive step size, under
//! independent restarts. Restarts may run concurrently; the merge is a pure
//! reduction (best value wins, ties broken by lower restart index), so
//! results are deterministic for a fixed seed.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigensystem, CMatrix, DensityOperator, StateVector, EIG_CLAMP};
use crate::measures::{negativity_pure, Bipartition};

/// Members with weight below this are dropped rather than normalized.
const MEMBER_DROP: f64 = 1e-12;

/// Which extreme of the ensemble average to chase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoofDirection {
    Minimize,
    Maximize,
}

/// Optimizer budget and reproducibility knobs.
#[derive(Debug, Clone)]
pub struct RoofConfig {
    pub direction: RoofDirection,
    /// Decomposition cardinality. `None` picks `rank + 2`, capped at
    /// `rank^2`; explicit values are clamped into `[rank, rank^2]`.
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    pub max_iters: usize,
    /// Search stops once the adaptive step decays below this.
    pub step_tolerance: f64,
    pub seed: u64,
}

impl Default for RoofConfig {
    fn default() -> Self {
        Self {
            direction: RoofDirection::Maximize,
            ensemble_size: None,
            restarts: 32,
            max_iters: 400,
            step_tolerance: 1e-7,
            seed: 0,
        }
    }
}

impl RoofConfig {
    pub fn with_direction(mut self, direction: RoofDirection) -> Self {
        self.direction = direction;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn effective_ensemble_size(&self, rank: usize) -> usize {
        let cap = rank * rank;
        match self.ensemble_size {
            Some(k) => k.clamp(rank, cap.max(rank)),
            None => (rank + 2).min(cap.max(rank)),
        }
    }
}

/// A pure-state decomposition of a density operator.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<(f64, StateVector)>,
    source: DensityOperator,
}

impl Ensemble {
    pub fn members(&self) -> &[(f64, StateVector)] {
        &self.members
    }

    pub fn source(&self) -> &DensityOperator {
        &self.source
    }

    /// Weighted average of a pure-state functional over the members.
    pub fn average<F: Fn(&StateVector) -> f64>(&self, f: F) -> f64 {
        self.members.iter().map(|(p, s)| p * f(s)).sum()
    }

    /// Frobenius distance between `sum_i p_i |psi_i><psi_i|` and the source.
    pub fn reconstruction_error(&self) -> f64 {
        let n = self.source.layout().total();
        let mut acc = CMatrix::zeros(n, n);
        for (p, s) in &self.members {
            let v = crate::linalg::CVector::from_column_slice(s.amplitudes());
            acc += (&v * v.adjoint()).scale(*p);
        }
        (acc - self.source.matrix()).norm()
    }
}

/// Result of a roof optimization. In the maximize direction the value is a
/// certified lower bound on the true maximum (the returned ensemble achieves
/// it); in the minimize direction a certified upper bound on the minimum.
#[derive(Debug, Clone)]
pub struct RoofResult {
    pub value: f64,
    pub ensemble: Ensemble,
    pub converged: bool,
    pub restarts_used: usize,
    pub best_restart_seed: u64,
}

/// Spectral support of a density operator: eigenvalues above the rank cutoff
/// (descending) and their eigenvectors as columns.
fn spectral_support(rho: &DensityOperator) -> Result<(Vec<f64>, CMatrix)> {
    let (vals, vecs) = hermitian_eigensystem(rho.matrix())?;
    let r = vals.iter().filter(|&&l| l > EIG_CLAMP).count();
    if r == 0 {
        return Err(Error::Numeric("density operator has numerically zero rank".into()));
    }
    let n = rho.layout().total();
    let mut support = CMatrix::zeros(n, r);
    for i in 0..r {
        support.set_column(i, &vecs.column(i));
    }
    Ok((vals[..r].to_vec(), support))
}

/// Columns of `sqrt(lambda_j) |e_j>`; unnormalized ensemble members are rows
/// of `V * B^T` for an isometry `V`.
fn scaled_basis(lambdas: &[f64], vectors: &CMatrix) -> CMatrix {
    let mut b = vectors.clone();
    for (j, &l) in lambdas.iter().enumerate() {
        let s = Complex64::new(l.sqrt(), 0.0);
        for i in 0..b.nrows() {
            b[(i, j)] *= s;
        }
    }
    b
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    })
}

/// Modified Gram-Schmidt on the columns; degenerate columns are refilled
/// from the RNG so the result is always a full isometry.
fn orthonormalize(mut m: CMatrix, rng: &mut ChaCha8Rng) -> CMatrix {
    let (rows, cols) = (m.nrows(), m.ncols());
    for j in 0..cols {
        loop {
            for k in 0..j {
                let prev = m.column(k).clone_owned();
                let overlap = prev.dotc(&m.column(j).clone_owned());
                let col = m.column(j).clone_owned() - prev.scale_complex(overlap);
                m.set_column(j, &col);
            }
            let norm = m.column(j).norm();
            if norm > 1e-8 {
                let col = m.column(j).clone_owned().unscale(norm);
                m.set_column(j, &col);
                break;
            }
            let fresh = gaussian_matrix(rows, 1, rng);
            m.set_column(j, &fresh.column(0));
        }
    }
    m
}

trait ScaleComplex {
    fn scale_complex(&self, s: Complex64) -> Self;
}

impl ScaleComplex for crate::linalg::CVector {
    fn scale_complex(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }
}

/// Unnormalized-member sweep shared by the optimizer and the public
/// ensemble constructor, so both drop the same near-zero members.
fn weighted_members(basis: &CMatrix, v: &CMatrix) -> Vec<(f64, Vec<Complex64>)> {
    let k = v.nrows();
    let dim = basis.nrows();
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let mut member = vec![Complex64::ZERO; dim];
        for j in 0..v.ncols() {
            let w = v[(i, j)];
            if w == Complex64::ZERO {
                continue;
            }
            for (d, m) in member.iter_mut().enumerate() {
                *m += w * basis[(d, j)];
            }
        }
        let p: f64 = member.iter().map(|z| z.norm_sqr()).sum();
        if p < MEMBER_DROP {
            continue;
        }
        let inv = 1.0 / p.sqrt();
        for m in &mut member {
            *m *= inv;
        }
        out.push((p, member));
    }
    out
}

/// Build the decomposition induced by an isometry `v` (`K x r`, orthonormal
/// columns, `r` = rank of `rho`): unnormalized members
/// `sqrt(p_i)|psi_i> = sum_j v_ij sqrt(lambda_j)|e_j>` over the spectral
/// decomposition. Members below the drop threshold are omitted.
pub fn ensemble_from_isometry(rho: &DensityOperator, v: &CMatrix) -> Result<Ensemble> {
    let (lambdas, vectors) = spectral_support(rho)?;
    let r = lambdas.len();
    if v.ncols() != r {
        return Err(Error::InvalidArgument(format!(
            "isometry has {} columns, rank is {r}",
            v.ncols()
        )));
    }
    if v.nrows() < r {
        return Err(Error::InvalidArgument("isometry needs at least rank rows".into()));
    }
    let gram = v.adjoint() * v;
    if (gram - CMatrix::identity(r, r)).camax() > 1e-10 {
        return Err(Error::InvalidArgument("columns are not orthonormal".into()));
    }
    let basis = scaled_basis(&lambdas, &vectors);
    let members = weighted_members(&basis, v)
        .into_iter()
        .map(|(p, amps)| (p, StateVector::new_unchecked(amps, rho.layout().clone())))
        .collect();
    Ok(Ensemble { members, source: rho.clone() })
}

struct RestartOutcome {
    score: f64,
    stream: u64,
    isometry: CMatrix,
    converged: bool,
}

/// Optimize the ensemble average of `functional` over all decompositions of
/// `rho`, in the configured direction. Deterministic for a fixed seed; the
/// returned value is exactly the average of the functional over the returned
/// ensemble.
pub fn roof_optimize<F>(rho: &DensityOperator, functional: F, config: &RoofConfig) -> Result<RoofResult>
where
    F: Fn(&StateVector) -> f64 + Sync,
{
    if config.restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be >= 1".into()));
    }
    let (lambdas, vectors) = spectral_support(rho)?;
    let r = lambdas.len();
    let k = config.effective_ensemble_size(r);
    let basis = scaled_basis(&lambdas, &vectors);
    let layout = rho.layout().clone();

    let sign = match config.direction {
        RoofDirection::Maximize => 1.0,
        RoofDirection::Minimize => -1.0,
    };
    let evaluate = |v: &CMatrix| -> f64 {
        weighted_members(&basis, v)
            .into_iter()
            .map(|(p, amps)| p * functional(&StateVector::new_unchecked(amps, layout.clone())))
            .sum::<f64>()
            * sign
    };

    let outcomes: Vec<RestartOutcome> = (0..config.restarts as u64)
        .into_par_iter()
        .map(|stream| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(stream + 1);
            let mut current = orthonormalize(gaussian_matrix(k, r, &mut rng), &mut rng);
            let mut best = evaluate(&current);
            let mut sigma = 0.5;
            let mut converged = false;
            for _ in 0..config.max_iters {
                let step = gaussian_matrix(k, r, &mut rng).scale(sigma);
                let proposal = orthonormalize(&current + step, &mut rng);
                let score = evaluate(&proposal);
                if score > best {
                    best = score;
                    current = proposal;
                    sigma = (sigma * 1.1).min(1.0);
                } else {
                    sigma *= 0.95;
                }
                if sigma < config.step_tolerance {
                    converged = true;
                    break;
                }
            }
            RestartOutcome { score: best, stream, isometry: current, converged }
        })
        .collect();

    let best = outcomes
        .into_iter()
        .reduce(|a, b| {
            // strictly-better wins; ties keep the lower stream index
            if b.score > a.score {
                b
            } else {
                a
            }
        })
        .expect("restarts >= 1");

    let ensemble = ensemble_from_isometry(rho, &best.isometry)?;
    Ok(RoofResult {
        value: best.score * sign,
        ensemble,
        converged: best.converged,
        restarts_used: config.restarts,
        best_restart_seed: best.stream,
    })
}

/// Squared convex-roof extended negativity: the square of the minimized
/// average negativity over decompositions. The direction in `config` is
/// overridden to minimize.
pub fn scren(rho: &DensityOperator, cut: &Bipartition, config: &RoofConfig) -> Result<(f64, RoofResult)> {
    let cfg = config.clone().with_direction(RoofDirection::Minimize);
    let cut = cut.clone();
    let result = roof_optimize(rho, move |psi| negativity_pure(psi, &cut).unwrap_or(f64::INFINITY), &cfg)?;
    Ok((result.value * result.value, result))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar_random_pure, CVector, SubsystemLayout};
    use crate::measures::concurrence_pure;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn maximally_mixed_qubit() -> DensityOperator {
        DensityOperator::new(
            CMatrix::identity(2, 2).scale(0.5),
            SubsystemLayout::new(vec![2]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn identity_isometry_recovers_spectral_decomposition() {
        let psi = haar_random_pure(&SubsystemLayout::qubits(2).unwrap(), 4);
        let rho_pure = psi.to_density();
        let v = CMatrix::identity(1, 1);
        let e = ensemble_from_isometry(&rho_pure, &v).unwrap();
        assert_eq!(e.members().len(), 1);
        assert_abs_diff_eq!(e.members()[0].0, 1.0, epsilon = 1e-12);
        assert!(e.reconstruction_error() < 1e-10);

        let mixed = crate::states::random_mixed(&SubsystemLayout::qubits(2).unwrap(), 3, 5).unwrap();
        let r = mixed.rank();
        let e = ensemble_from_isometry(&mixed, &CMatrix::identity(r, r)).unwrap();
        assert_eq!(e.members().len(), r);
        assert!(e.reconstruction_error() < 1e-8);
        let psum: f64 = e.members().iter().map(|(p, _)| p).sum();
        assert_abs_diff_eq!(psum, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn hadamard_isometry_on_maximally_mixed() {
        let rho = maximally_mixed_qubit();
        let h = CMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(1.0), c(-1.0)])
            .scale(std::f64::consts::FRAC_1_SQRT_2);
        let e = ensemble_from_isometry(&rho, &h).unwrap();
        assert_eq!(e.members().len(), 2);
        for (p, s) in e.members() {
            assert_abs_diff_eq!(*p, 0.5, epsilon = 1e-12);
            // |+> or |-> up to phase: equal-magnitude amplitudes
            assert_abs_diff_eq!(s.amplitudes()[0].norm(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
            assert_abs_diff_eq!(s.amplitudes()[1].norm(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        }
        assert!(e.reconstruction_error() < 1e-10);
    }

    #[test]
    fn rejects_non_isometry() {
        let rho = maximally_mixed_qubit();
        let bad = CMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(1.0)]);
        assert!(ensemble_from_isometry(&rho, &bad).is_err());
        let wrong_cols = CMatrix::identity(3, 3);
        assert!(ensemble_from_isometry(&rho, &wrong_cols).is_err());
    }

    #[test]
    fn pure_state_roof_is_the_functional_value() {
        let psi = haar_random_pure(&SubsystemLayout::qubits(2).unwrap(), 17);
        let rho = psi.to_density();
        let cut = Bipartition::first_vs_rest(2).unwrap();
        let expected = concurrence_pure(&psi, &cut).unwrap();
        for direction in [RoofDirection::Minimize, RoofDirection::Maximize] {
            let cfg = RoofConfig { direction, restarts: 2, max_iters: 20, ..Default::default() };
            let res = roof_optimize(&rho, |s| concurrence_pure(s, &cut).unwrap(), &cfg).unwrap();
            assert_abs_diff_eq!(res.value, expected, epsilon = 1e-10);
        }
    }

    #[test]
    fn value_matches_returned_ensemble_average() {
        let rho = crate::states::random_mixed(&SubsystemLayout::qubits(2).unwrap(), 2, 9).unwrap();
        let cut = Bipartition::first_vs_rest(2).unwrap();
        let cfg = RoofConfig { restarts: 4, max_iters: 120, ..Default::default() };
        let res = roof_optimize(&rho, |s| concurrence_pure(s, &cut).unwrap(), &cfg).unwrap();
        let avg = res.ensemble.average(|s| concurrence_pure(s, &cut).unwrap());
        assert_abs_diff_eq!(res.value, avg, epsilon = 1e-10);
        assert!(res.ensemble.reconstruction_error() < 1e-8);
    }

    #[test]
    fn ensemble_size_overrides_are_clamped() {
        let rho = crate::states::random_mixed(&SubsystemLayout::qubits(2).unwrap(), 2, 44).unwrap();
        let cut = Bipartition::first_vs_rest(2).unwrap();
        // below rank clamps up to rank; above rank^2 clamps down
        for requested in [1usize, 100] {
            let cfg = RoofConfig {
                ensemble_size: Some(requested),
                restarts: 2,
                max_iters: 40,
                ..Default::default()
            };
            let res = roof_optimize(&rho, |s| concurrence_pure(s, &cut).unwrap(), &cfg).unwrap();
            let k = res.ensemble.members().len();
            assert!((2..=4).contains(&k), "requested {requested}, got {k} members");
            assert!(res.ensemble.reconstruction_error() < 1e-8);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let rho = crate::states::random_mixed(&SubsystemLayout::qubits(2).unwrap(), 2, 21).unwrap();
        let cut = Bipartition::first_vs_rest(2).unwrap();
        let cfg = RoofConfig { restarts: 6, max_iters: 60, seed: 123, ..Default::default() };
        let a = roof_optimize(&rho, |s| concurrence_pure(s, &cut).unwrap(), &cfg).unwrap();
        let b = roof_optimize(&rho, |s| concurrence_pure(s, &cut).unwrap(), &cfg).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.best_restart_seed, b.best_restart_seed);
    }

    #[test]
    fn more_restarts_never_lose_ground() {
        let rho = crate::states::random_mixed(&SubsystemLayout::qubits(2).unwrap(), 2, 33).unwrap();
        let cut = Bipartition::first_vs_rest(2).unwrap();
        let base = RoofConfig { seed: 7, max_iters: 80, ..Default::default() };
        let few = roof_optimize(
            &rho,
            |s| concurrence_pure(s, &cut).unwrap(),
            &RoofConfig { restarts: 3, ..base.clone() },
        )
        .unwrap();
        let many = roof_optimize(
            &rho,
            |s| concurrence_pure(s, &cut).unwrap(),
            &RoofConfig { restarts: 9, ..base },
        )
        .unwrap();
        assert!(many.value >= few.value);
    }

    #[test]
    fn sandwich_between_min_and_max() {
        let rho = crate::states::random_mixed(&SubsystemLayout::qubits(2).unwrap(), 2, 55).unwrap();
        let cut = Bipartition::first_vs_rest(2).unwrap();
        let f = |s: &StateVector| concurrence_pure(s, &cut).unwrap();
        let spectral = {
            let r = rho.rank();
            ensemble_from_isometry(&rho, &CMatrix::identity(r, r)).unwrap().average(f)
        };
        let cfg = RoofConfig { restarts: 8, max_iters: 200, ..Default::default() };
        let min = roof_optimize(&rho, f, &cfg.clone().with_direction(RoofDirection::Minimize)).unwrap();
        let max = roof_optimize(&rho, f, &cfg.with_direction(RoofDirection::Maximize)).unwrap();
        assert!(min.value <= spectral + 1e-9);
        assert!(spectral <= max.value + 1e-9);
    }

    #[test]
    fn scren_basics() {
        let psi = haar_random_pure(&SubsystemLayout::qubits(2).unwrap(), 88);
        let cut = Bipartition::first_vs_rest(2).unwrap();
        let cfg = RoofConfig { restarts: 4, max_iters: 60, ..Default::default() };
        let (val, _) = scren(&psi.to_density(), &cut, &cfg).unwrap();
        let expected = crate::measures::negativity_pure(&psi, &cut).unwrap().powi(2);
        assert_abs_diff_eq!(val, expected, epsilon = 1e-9);
    }

    #[test]
    fn scren_vanishes_on_separable_mixtures() {
        // 0.5 |00><00| + 0.5 |++><++|
        let layout = SubsystemLayout::qubits(2).unwrap();
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = c(0.5);
        let plus = CVector::from_element(4, c(0.5));
        m += (&plus * plus.adjoint()).scale(0.5);
        let rho = DensityOperator::new(m, layout).unwrap();
        let cut = Bipartition::first_vs_rest(2).unwrap();
        let cfg = RoofConfig { restarts: 16, max_iters: 300, ..Default::default() };
        let (val, _) = scren(&rho, &cut, &cfg).unwrap();
        assert!(val <= 1e-4, "scren of separable state: {val}");
    }

    #[test]
    fn scren_of_w3_marginal_matches_concurrence_roof() {
        // for two qubits the negativity of a pure state equals its
        // concurrence, so the minimized roofs coincide
        let w3 = crate::states::w_state(3).unwrap();
        let marginal = crate::linalg::partial_trace(&w3.to_density(), &[0, 1]).unwrap();
        let cut = Bipartition::first_vs_rest(2).unwrap();
        let cfg = RoofConfig { restarts: 16, max_iters: 300, ..Default::default() };
        let (val, _) = scren(&marginal, &cut, &cfg).unwrap();
        assert_abs_diff_eq!(val, 4.0 / 9.0, epsilon = 1e-2);
    }
}
