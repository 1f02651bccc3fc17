//! Dense complex linear algebra over small tensor-product Hilbert spaces.
//!
//! Everything here works on explicit `DMatrix<Complex64>` / amplitude-vector
//! representations; the intended scale is a handful of qubits or qudits
//! (total dimension in the tens, not thousands). Subsystem 0 is the
//! slowest-varying index: for a layout `(d0, d1, ..)` the computational
//! basis state `|i0 i1 ..>` sits at flat index `((i0*d1)+i1)*d2 + ..`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Eigenvalues of nominally-PSD matrices in `[-EIG_CLAMP, 0)` are treated as
/// zero (double-precision eigensolver noise); anything more negative is a
/// genuine domain violation.
pub const EIG_CLAMP: f64 = 1e-10;
/// Admission tolerance for state-vector normalization.
pub const NORM_TOL: f64 = 1e-12;
/// Admission tolerance for Hermiticity and unit trace of density operators.
pub const DENSITY_TOL: f64 = 1e-12;
/// Hermiticity tolerance accepted by the eigensystem routines.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Ordered local dimensions of a tensor-product space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemLayout {
    dims: Vec<usize>,
}

impl SubsystemLayout {
    /// A layout from explicit local dimensions; every dimension must be >= 2.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidArgument("layout needs at least one subsystem".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidArgument(format!("local dimension {d} < 2")));
        }
        Ok(Self { dims })
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn subsystem_count(&self) -> usize {
        self.dims.len()
    }

    /// Product of all local dimensions.
    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }
}

/// Flat index of a multi-index under row-major (subsystem 0 slowest) order.
pub(crate) fn flat_index(dims: &[usize], multi: &[usize]) -> usize {
    let mut f = 0;
    for (&d, &m) in dims.iter().zip(multi) {
        f = f * d + m;
    }
    f
}

/// Inverse of [`flat_index`]; writes into `out`.
pub(crate) fn unflatten(dims: &[usize], mut flat: usize, out: &mut [usize]) {
    for i in (0..dims.len()).rev() {
        out[i] = flat % dims[i];
        flat /= dims[i];
    }
}

/// Normalized pure state over a [`SubsystemLayout`].
#[derive(Debug, Clone)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    layout: SubsystemLayout,
}

impl StateVector {
    /// Amplitude list must match the layout's total dimension and have unit
    /// Euclidean norm within `NORM_TOL`.
    pub fn new(amplitudes: Vec<Complex64>, layout: SubsystemLayout) -> Result<Self> {
        if amplitudes.len() != layout.total() {
            return Err(Error::InvalidArgument(format!(
                "amplitude count {} does not match layout total {}",
                amplitudes.len(),
                layout.total()
            )));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!("state norm {norm} is not 1")));
        }
        Ok(Self { amplitudes, layout })
    }

    /// Skips the norm check; callers guarantee normalization by construction.
    pub(crate) fn new_unchecked(amplitudes: Vec<Complex64>, layout: SubsystemLayout) -> Self {
        Self { amplitudes, layout }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn to_density(&self) -> DensityOperator {
        let v = CVector::from_column_slice(&self.amplitudes);
        let m = &v * v.adjoint();
        DensityOperator { matrix: m, layout: self.layout.clone() }
    }

    /// Same amplitudes under a different subsystem grouping (total unchanged).
    pub fn with_layout(&self, layout: SubsystemLayout) -> Result<Self> {
        if layout.total() != self.layout.total() {
            return Err(Error::InvalidArgument("regrouped layout changes total dimension".into()));
        }
        Ok(Self { amplitudes: self.amplitudes.clone(), layout })
    }

    /// Permute subsystems: new subsystem `k` is old subsystem `perm[k]`.
    pub fn reorder_subsystems(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.layout.subsystem_count())?;
        let dims = self.layout.dims();
        let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
        let mut out = vec![Complex64::ZERO; self.amplitudes.len()];
        let mut mi = vec![0usize; dims.len()];
        let mut nm = vec![0usize; dims.len()];
        for (i, &a) in self.amplitudes.iter().enumerate() {
            unflatten(dims, i, &mut mi);
            for (k, &p) in perm.iter().enumerate() {
                nm[k] = mi[p];
            }
            out[flat_index(&new_dims, &nm)] = a;
        }
        Ok(Self { amplitudes: out, layout: SubsystemLayout::new(new_dims)? })
    }
}

/// Hermitian, positive-semidefinite, unit-trace operator over a layout.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: CMatrix,
    layout: SubsystemLayout,
}

impl DensityOperator {
    /// Admission checks: square of side `total`, Hermitian and unit-trace
    /// within `DENSITY_TOL`, eigenvalues >= `-EIG_CLAMP`. The stored matrix
    /// is symmetrized to `(m + m†)/2`.
    pub fn new(matrix: CMatrix, layout: SubsystemLayout) -> Result<Self> {
        let n = layout.total();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::InvalidArgument(format!(
                "matrix is {}x{}, layout total is {n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm_dev = (&matrix - matrix.adjoint()).camax();
        if herm_dev > 2.0 * DENSITY_TOL {
            return Err(Error::InvalidArgument(format!("matrix is not Hermitian (deviation {herm_dev:.3e})")));
        }
        let sym = (&matrix + matrix.adjoint()).scale(0.5);
        let trace = sym.trace();
        if (trace.re - 1.0).abs() > DENSITY_TOL || trace.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidArgument(format!("trace {trace} is not 1")));
        }
        let eigs = hermitian_eigenvalues(&sym);
        if let Some(&min) = eigs.last() {
            if min < -EIG_CLAMP {
                return Err(Error::InvalidArgument(format!("negative eigenvalue {min:.3e}")));
            }
        }
        Ok(Self { matrix: sym, layout })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    /// Number of eigenvalues above `EIG_CLAMP`.
    pub fn rank(&self) -> usize {
        hermitian_eigenvalues(&self.matrix).iter().filter(|&&l| l > EIG_CLAMP).count()
    }

    /// Same matrix under a different subsystem grouping (total unchanged).
    pub fn with_layout(&self, layout: SubsystemLayout) -> Result<Self> {
        if layout.total() != self.layout.total() {
            return Err(Error::InvalidArgument("regrouped layout changes total dimension".into()));
        }
        Ok(Self { matrix: self.matrix.clone(), layout })
    }

    /// Permute subsystems: new subsystem `k` is old subsystem `perm[k]`.
    pub fn reorder_subsystems(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.layout.subsystem_count())?;
        let dims = self.layout.dims();
        let n = self.layout.total();
        let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
        // Row/column relabeling under the same permutation.
        let mut map = vec![0usize; n];
        let mut mi = vec![0usize; dims.len()];
        let mut nm = vec![0usize; dims.len()];
        for (i, m) in map.iter_mut().enumerate() {
            unflatten(dims, i, &mut mi);
            for (k, &p) in perm.iter().enumerate() {
                nm[k] = mi[p];
            }
            *m = flat_index(&new_dims, &nm);
        }
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(map[i], map[j])] = self.matrix[(i, j)];
            }
        }
        Ok(Self { matrix: out, layout: SubsystemLayout::new(new_dims)? })
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidArgument("permutation length mismatch".into()));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidArgument("not a permutation".into()));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Kronecker product; the left factor is the slower-varying (leading)
/// subsystem, matching [`SubsystemLayout`] index order.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Trace out every subsystem not in `keep`; the result keeps the retained
/// dimensions in their original order and preserves the trace.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let dims = rho.layout().dims();
    let n = dims.len();
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(Error::InvalidArgument("keep set is empty".into()));
    }
    if keep.iter().any(|&k| k >= n) {
        return Err(Error::InvalidArgument("keep index out of range".into()));
    }
    let traced: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    if traced.is_empty() {
        return Ok(rho.clone());
    }
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let kd: usize = kept_dims.iter().product();
    let total = rho.layout().total();
    let mut out = CMatrix::zeros(kd, kd);
    let mut mi = vec![0usize; n];
    let mut mj = vec![0usize; n];
    let mut ki = vec![0usize; keep.len()];
    let mut kj = vec![0usize; keep.len()];
    for i in 0..total {
        unflatten(dims, i, &mut mi);
        for j in 0..total {
            unflatten(dims, j, &mut mj);
            if traced.iter().any(|&t| mi[t] != mj[t]) {
                continue;
            }
            for (s, &k) in keep.iter().enumerate() {
                ki[s] = mi[k];
                kj[s] = mj[k];
            }
            out[(flat_index(&kept_dims, &ki), flat_index(&kept_dims, &kj))] += rho.matrix()[(i, j)];
        }
    }
    DensityOperator::new(out, SubsystemLayout::new(kept_dims)?)
}

/// Transpose the indices of one subsystem. The result is Hermitian but not
/// necessarily positive, so it is returned as a bare matrix.
pub fn partial_transpose(rho: &DensityOperator, subsystem: usize) -> Result<CMatrix> {
    let dims = rho.layout().dims();
    let n = dims.len();
    if subsystem >= n {
        return Err(Error::InvalidArgument(format!("subsystem {subsystem} out of range")));
    }
    let total = rho.layout().total();
    let mut out = CMatrix::zeros(total, total);
    let mut mi = vec![0usize; n];
    let mut mj = vec![0usize; n];
    for i in 0..total {
        unflatten(dims, i, &mut mi);
        for j in 0..total {
            unflatten(dims, j, &mut mj);
            std::mem::swap(&mut mi[subsystem], &mut mj[subsystem]);
            let (r, c) = (flat_index(dims, &mi), flat_index(dims, &mj));
            std::mem::swap(&mut mi[subsystem], &mut mj[subsystem]);
            out[(r, c)] = rho.matrix()[(i, j)];
        }
    }
    Ok(out)
}

/// Sum of singular values. Hermitian inputs take the exact `sum(|eig|)`
/// route; general square matrices go through the eigenvalues of `M†M`.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidArgument("trace norm of a non-square matrix".into()));
    }
    if (m - m.adjoint()).camax() <= HERMITICITY_TOL {
        let sym = (m + m.adjoint()).scale(0.5);
        return Ok(hermitian_eigenvalues(&sym).iter().map(|l| l.abs()).sum());
    }
    let gram = m.adjoint() * m;
    Ok(hermitian_eigenvalues(&gram).iter().map(|&l| l.max(0.0).sqrt()).sum())
}

/// Eigenvalues of a Hermitian matrix, descending. Internal: assumes the
/// caller already symmetrized.
fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let mut eigs: Vec<f64> = h.clone().symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eigs
}

/// Full eigensystem of a Hermitian matrix: eigenvalues descending, matching
/// orthonormal eigenvectors as columns.
pub fn hermitian_eigensystem(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if h.nrows() != h.ncols() {
        return Err(Error::InvalidArgument("eigensystem of a non-square matrix".into()));
    }
    let dev = (h - h.adjoint()).camax();
    if dev > HERMITICITY_TOL {
        return Err(Error::InvalidArgument(format!("matrix is not Hermitian (deviation {dev:.3e})")));
    }
    let sym = (h + h.adjoint()).scale(0.5);
    let se = sym.symmetric_eigen();
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[b].partial_cmp(&se.eigenvalues[a]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &se.eigenvectors.column(i));
    }
    Ok((values, vectors))
}

/// Eigenvalues below this are zeroed before square roots are taken; the
/// square root amplifies eigensolver noise (~1e-15) to ~3e-8 otherwise.
pub(crate) const SQRT_NOISE_FLOOR: f64 = 1e-13;

/// Principal square root of a PSD matrix. Eigenvalues in `[-EIG_CLAMP, 0)`
/// are clamped to zero; anything below that is rejected.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigensystem(m)?;
    if let Some(&min) = values.last() {
        if min < -EIG_CLAMP {
            return Err(Error::Domain(format!("matrix is not PSD (eigenvalue {min:.3e})")));
        }
    }
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for (i, &l) in values.iter().enumerate() {
        if l < SQRT_NOISE_FLOOR {
            continue;
        }
        let v = vectors.column(i);
        out += (v * v.adjoint()).scale(l.sqrt());
    }
    Ok(out)
}

/// Unitarily invariant random pure state: i.i.d. complex Gaussian amplitudes,
/// normalized. Deterministic for a fixed seed.
pub fn haar_random_pure(layout: &SubsystemLayout, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_random_pure_with(layout, &mut rng)
}

/// As [`haar_random_pure`] but drawing from a caller-owned RNG stream.
pub fn haar_random_pure_with(layout: &SubsystemLayout, rng: &mut ChaCha8Rng) -> StateVector {
    let total = layout.total();
    loop {
        let mut amps: Vec<Complex64> = (0..total)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            })
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for a in &mut amps {
                *a /= norm;
            }
            return StateVector::new_unchecked(amps, layout.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn identity(n: usize) -> CMatrix {
        CMatrix::identity(n, n)
    }

    fn sigma_y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
    }

    fn bell_phi_plus() -> StateVector {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::new(
            vec![c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, 0.0)],
            SubsystemLayout::qubits(2).unwrap(),
        )
        .unwrap()
    }

    fn w3() -> StateVector {
        let a = 1.0 / 3f64.sqrt();
        let mut amps = vec![Complex64::ZERO; 8];
        amps[4] = c(a, 0.0);
        amps[2] = c(a, 0.0);
        amps[1] = c(a, 0.0);
        StateVector::new(amps, SubsystemLayout::qubits(3).unwrap()).unwrap()
    }

    #[test]
    fn layout_rejects_trivial_dims() {
        assert!(SubsystemLayout::new(vec![2, 1]).is_err());
        assert!(SubsystemLayout::new(vec![]).is_err());
        assert_eq!(SubsystemLayout::new(vec![2, 3, 4]).unwrap().total(), 24);
    }

    #[test]
    fn kron_identity() {
        assert_eq!(tensor_product(&identity(2), &identity(2)), identity(4));
    }

    #[test]
    fn kron_sigma_y_pair_flips_with_global_sign() {
        // (sy (x) sy)|00> = -|11>
        let op = tensor_product(&sigma_y(), &sigma_y());
        let ket00 = CVector::from_column_slice(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let out = op * ket00;
        assert_abs_diff_eq!(out[3].re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out[0].norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out[1].norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out[2].norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn kron_basis_projectors() {
        // e1e1^T (x) e2e2^T is the rank-1 projector onto multi-index (1, 2).
        let mut p1 = CMatrix::zeros(2, 2);
        p1[(1, 1)] = c(1.0, 0.0);
        let mut p2 = CMatrix::zeros(3, 3);
        p2[(2, 2)] = c(1.0, 0.0);
        let k = tensor_product(&p1, &p2);
        let idx = flat_index(&[2, 3], &[1, 2]);
        assert_eq!(idx, 5);
        for i in 0..6 {
            for j in 0..6 {
                let expect = if i == idx && j == idx { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(k[(i, j)].re, expect, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn ptrace_bell_marginal_is_maximally_mixed() {
        let rho = bell_phi_plus().to_density();
        let ra = partial_trace(&rho, &[0]).unwrap();
        assert_abs_diff_eq!(ra.matrix()[(0, 0)].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(ra.matrix()[(1, 1)].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(ra.matrix()[(0, 1)].norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn ptrace_product_state_factors() {
        // |0><0| (x) rho_b, keep B, gives back rho_b.
        let rho_b = CMatrix::from_row_slice(2, 2, &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]);
        let mut p0 = CMatrix::zeros(2, 2);
        p0[(0, 0)] = c(1.0, 0.0);
        let rho = DensityOperator::new(tensor_product(&p0, &rho_b), SubsystemLayout::qubits(2).unwrap()).unwrap();
        let rb = partial_trace(&rho, &[1]).unwrap();
        assert!((rb.matrix() - rho_b).camax() < 1e-13);
    }

    #[test]
    fn ptrace_w3_marginal() {
        let ra = partial_trace(&w3().to_density(), &[0]).unwrap();
        assert_abs_diff_eq!(ra.matrix()[(0, 0)].re, 2.0 / 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(ra.matrix()[(1, 1)].re, 1.0 / 3.0, epsilon = 1e-13);
    }

    #[test]
    fn ptrace_rejects_bad_keep() {
        let rho = bell_phi_plus().to_density();
        assert!(partial_trace(&rho, &[]).is_err());
        assert!(partial_trace(&rho, &[2]).is_err());
    }

    #[test]
    fn ptranspose_diagonal_unchanged() {
        let m = CMatrix::from_diagonal(&CVector::from_column_slice(&[
            c(0.4, 0.0),
            c(0.3, 0.0),
            c(0.2, 0.0),
            c(0.1, 0.0),
        ]));
        let rho = DensityOperator::new(m.clone(), SubsystemLayout::qubits(2).unwrap()).unwrap();
        assert!((partial_transpose(&rho, 0).unwrap() - m).camax() < 1e-15);
    }

    #[test]
    fn ptranspose_bell_spectrum() {
        let pt = partial_transpose(&bell_phi_plus().to_density(), 0).unwrap();
        let mut eigs = hermitian_eigensystem(&pt).unwrap().0;
        eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expect = [-0.5, 0.5, 0.5, 0.5];
        for (e, x) in eigs.iter().zip(expect) {
            assert_abs_diff_eq!(*e, x, epsilon = 1e-12);
        }
    }

    #[test]
    fn ptranspose_involution_and_ppt_products() {
        let rho_b = CMatrix::from_row_slice(2, 2, &[c(0.6, 0.0), c(0.2, 0.1), c(0.2, -0.1), c(0.4, 0.0)]);
        let mut p0 = CMatrix::zeros(2, 2);
        p0[(0, 0)] = c(1.0, 0.0);
        let rho = DensityOperator::new(tensor_product(&p0, &rho_b), SubsystemLayout::qubits(2).unwrap()).unwrap();
        let pt = partial_transpose(&rho, 1).unwrap();
        let twice = partial_transpose(
            &DensityOperator::new(pt.clone(), SubsystemLayout::qubits(2).unwrap()).unwrap(),
            1,
        )
        .unwrap();
        assert!((twice - rho.matrix()).camax() < 1e-14);
        // product states stay PSD under partial transpose
        let min = hermitian_eigensystem(&pt).unwrap().0.last().copied().unwrap();
        assert!(min >= -1e-10);
    }

    #[test]
    fn trace_norm_examples() {
        assert_abs_diff_eq!(trace_norm(&identity(4)).unwrap(), 4.0, epsilon = 1e-13);
        let d = CMatrix::from_diagonal(&CVector::from_column_slice(&[
            c(0.5, 0.0),
            c(0.5, 0.0),
            c(0.5, 0.0),
            c(-0.5, 0.0),
        ]));
        assert_abs_diff_eq!(trace_norm(&d).unwrap(), 2.0, epsilon = 1e-13);
        assert!(trace_norm(&CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn trace_norm_hermitian_matches_singular_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let g = random_gaussian(5, &mut rng);
            let h = (&g + g.adjoint()).scale(0.5);
            let via_eig = trace_norm(&h).unwrap();
            let gram = h.adjoint() * &h;
            let via_svals: f64 =
                hermitian_eigensystem(&gram).unwrap().0.iter().map(|&l| l.max(0.0).sqrt()).sum();
            assert_abs_diff_eq!(via_eig, via_svals, epsilon = 1e-10);
        }
    }

    fn random_gaussian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| {
            c(StandardNormal.sample(rng), StandardNormal.sample(rng))
        })
    }

    #[test]
    fn eigensystem_examples() {
        let (vals, _) = hermitian_eigensystem(&identity(2)).unwrap();
        assert_abs_diff_eq!(vals[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(vals[1], 1.0, epsilon = 1e-14);

        let sz = CMatrix::from_diagonal(&CVector::from_column_slice(&[c(1.0, 0.0), c(-1.0, 0.0)]));
        let (vals, _) = hermitian_eigensystem(&sz).unwrap();
        assert_abs_diff_eq!(vals[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(vals[1], -1.0, epsilon = 1e-14);

        let ra = partial_trace(&w3().to_density(), &[0]).unwrap();
        let (vals, _) = hermitian_eigensystem(ra.matrix()).unwrap();
        assert_abs_diff_eq!(vals[0], 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vals[1], 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn eigensystem_reconstructs_and_rejects_nonhermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2usize, 4, 8] {
            let g = random_gaussian(n, &mut rng);
            let h = (&g + g.adjoint()).scale(0.5);
            let (vals, vecs) = hermitian_eigensystem(&h).unwrap();
            let mut recon = CMatrix::zeros(n, n);
            for (i, &l) in vals.iter().enumerate() {
                let v = vecs.column(i);
                recon += (v * v.adjoint()).scale(l);
            }
            assert!((recon - &h).camax() < 1e-10, "reconstruction failed at n={n}");
            assert!((vecs.adjoint() * &vecs - identity(n)).camax() < 1e-10);
        }
        let g = random_gaussian(3, &mut rng);
        assert!(hermitian_eigensystem(&g).is_err());
    }

    #[test]
    fn psd_sqrt_examples() {
        let half = identity(2).scale(0.5);
        let s = psd_sqrt(&half).unwrap();
        assert!((s - identity(2).scale(0.5f64.sqrt())).camax() < 1e-13);

        let d = CMatrix::from_diagonal(&CVector::from_column_slice(&[c(0.8, 0.0), c(0.2, 0.0)]));
        let s = psd_sqrt(&d).unwrap();
        assert_abs_diff_eq!(s[(0, 0)].re, 0.8f64.sqrt(), epsilon = 1e-13);
        assert_abs_diff_eq!(s[(1, 1)].re, 0.2f64.sqrt(), epsilon = 1e-13);

        let neg = CMatrix::from_diagonal(&CVector::from_column_slice(&[c(1.5, 0.0), c(-0.5, 0.0)]));
        assert!(matches!(psd_sqrt(&neg), Err(Error::Domain(_))));
    }

    #[test]
    fn psd_sqrt_reconstruction_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for n in [2usize, 4, 8] {
            for _ in 0..10 {
                let g = random_gaussian(n, &mut rng);
                let p = &g * g.adjoint();
                let s = psd_sqrt(&p).unwrap();
                assert!((&s * &s - &p).camax() < 1e-9 * p.camax().max(1.0));
            }
        }
    }

    #[test]
    fn haar_deterministic_and_normalized() {
        let layout = SubsystemLayout::qubits(3).unwrap();
        let a = haar_random_pure(&layout, 42);
        let b = haar_random_pure(&layout, 42);
        assert_eq!(a.amplitudes(), b.amplitudes());
        let norm: f64 = a.amplitudes().iter().map(|x| x.norm_sqr()).sum();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        let other = haar_random_pure(&layout, 43);
        assert_ne!(a.amplitudes(), other.amplitudes());
    }

    #[test]
    fn haar_amplitude_statistics() {
        // mean |amp|^2 over many samples approaches 1/total
        let layout = SubsystemLayout::qubits(2).unwrap();
        let n = 10_000;
        let mut acc = 0.0;
        for seed in 0..n {
            let s = haar_random_pure(&layout, seed);
            acc += s.amplitudes()[0].norm_sqr();
        }
        assert_abs_diff_eq!(acc / n as f64, 0.25, epsilon = 5e-3);
    }

    #[test]
    fn reorder_subsystems_roundtrip() {
        let psi = w3();
        let swapped = psi.reorder_subsystems(&[1, 0, 2]).unwrap();
        let back = swapped.reorder_subsystems(&[1, 0, 2]).unwrap();
        assert_eq!(psi.amplitudes(), back.amplitudes());
        // |100> becomes |010> under A<->B swap
        assert_abs_diff_eq!(swapped.amplitudes()[2].re, 1.0 / 3f64.sqrt(), epsilon = 1e-14);

        let rho = psi.to_density().reorder_subsystems(&[2, 0, 1]).unwrap();
        let back = rho.reorder_subsystems(&[1, 2, 0]).unwrap();
        assert!((back.matrix() - psi.to_density().matrix()).camax() < 1e-14);
    }

    #[test]
    fn density_admission_checks() {
        let layout = SubsystemLayout::qubits(1).unwrap();
        let not_herm = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.3, 0.0), c(0.1, 0.0), c(0.5, 0.0)]);
        assert!(DensityOperator::new(not_herm, layout.clone()).is_err());
        let bad_trace = identity(2);
        assert!(DensityOperator::new(bad_trace, layout.clone()).is_err());
        let neg = CMatrix::from_diagonal(&CVector::from_column_slice(&[c(1.2, 0.0), c(-0.2, 0.0)]));
        assert!(DensityOperator::new(neg, layout).is_err());
    }
}
