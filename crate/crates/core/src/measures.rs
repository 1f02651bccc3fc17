//! Closed-form entanglement quantities: pure-state concurrence, entropy of
//! entanglement, negativity, and the two-qubit mixed-state formulas
//! (Wootters concurrence and its spin-flip spectrum).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    self, flat_index, hermitian_eigensystem, partial_transpose, psd_sqrt, trace_norm, unflatten,
    CMatrix, DensityOperator, StateVector, SubsystemLayout,
};

/// A bipartition of the subsystems into side A and its complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Bipartition {
    /// Side A indices against a layout with `subsystem_count` parts; both
    /// sides must end up nonempty.
    pub fn new(side_a: &[usize], subsystem_count: usize) -> Result<Self> {
        let mut a = side_a.to_vec();
        a.sort_unstable();
        a.dedup();
        if a.is_empty() {
            return Err(Error::InvalidArgument("side A is empty".into()));
        }
        if a.iter().any(|&i| i >= subsystem_count) {
            return Err(Error::InvalidArgument("side A index out of range".into()));
        }
        let b: Vec<usize> = (0..subsystem_count).filter(|i| !a.contains(i)).collect();
        if b.is_empty() {
            return Err(Error::InvalidArgument("side B is empty".into()));
        }
        Ok(Self { side_a: a, side_b: b })
    }

    /// The cut separating subsystem 0 from everything else.
    pub fn first_vs_rest(subsystem_count: usize) -> Result<Self> {
        Self::new(&[0], subsystem_count)
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    /// (dim of side A, dim of side B) under `layout`.
    pub fn split_dims(&self, layout: &SubsystemLayout) -> (usize, usize) {
        let dims = layout.dims();
        let da = self.side_a.iter().map(|&i| dims[i]).product();
        let db = self.side_b.iter().map(|&i| dims[i]).product();
        (da, db)
    }

    fn check_against(&self, layout: &SubsystemLayout) -> Result<()> {
        let n = layout.subsystem_count();
        if self.side_a.len() + self.side_b.len() != n || self.side_a.iter().any(|&i| i >= n) {
            return Err(Error::InvalidArgument("bipartition does not match layout".into()));
        }
        Ok(())
    }
}

/// Coefficient matrix of a pure state at a cut: rows indexed by the side-A
/// multi-index (original subsystem order), columns by side B. The reduced
/// operator on A is `M M†`.
pub fn coefficient_matrix(psi: &StateVector, cut: &Bipartition) -> Result<CMatrix> {
    cut.check_against(psi.layout())?;
    let dims = psi.layout().dims();
    let (da, db) = cut.split_dims(psi.layout());
    let a_dims: Vec<usize> = cut.side_a().iter().map(|&i| dims[i]).collect();
    let b_dims: Vec<usize> = cut.side_b().iter().map(|&i| dims[i]).collect();
    let mut m = CMatrix::zeros(da, db);
    let mut multi = vec![0usize; dims.len()];
    let mut ma = vec![0usize; a_dims.len()];
    let mut mb = vec![0usize; b_dims.len()];
    for (i, &amp) in psi.amplitudes().iter().enumerate() {
        unflatten(dims, i, &mut multi);
        for (s, &k) in cut.side_a().iter().enumerate() {
            ma[s] = multi[k];
        }
        for (s, &k) in cut.side_b().iter().enumerate() {
            mb[s] = multi[k];
        }
        m[(flat_index(&a_dims, &ma), flat_index(&b_dims, &mb))] = amp;
    }
    Ok(m)
}

/// Reduced operator of a pure state on side A of the cut.
pub fn reduced_density(psi: &StateVector, cut: &Bipartition) -> Result<CMatrix> {
    let m = coefficient_matrix(psi, cut)?;
    Ok(&m * m.adjoint())
}

/// Regroup a density operator into the two-subsystem layout `[dA, dB]`
/// induced by the cut (side A subsystems first, in their original order).
pub fn flatten_to_bipartition(rho: &DensityOperator, cut: &Bipartition) -> Result<DensityOperator> {
    cut.check_against(rho.layout())?;
    let perm: Vec<usize> = cut.side_a().iter().chain(cut.side_b()).copied().collect();
    let (da, db) = cut.split_dims(rho.layout());
    rho.reorder_subsystems(&perm)?.with_layout(SubsystemLayout::new(vec![da, db])?)
}

/// Pure-state concurrence at a cut: `sqrt(2 (1 - Tr rho_A^2))`.
pub fn concurrence_pure(psi: &StateVector, cut: &Bipartition) -> Result<f64> {
    let ra = reduced_density(psi, cut)?;
    let purity: f64 = ra.iter().map(|z| z.norm_sqr()).sum();
    Ok((2.0 * (1.0 - purity)).max(0.0).sqrt())
}

/// Squared concurrence of a bipartite pure state as the sum of squared 2x2
/// minors of its coefficient matrix:
/// `4 * sum_{i<j} sum_{k<l} |a_ik a_jl - a_il a_jk|^2`.
pub fn concurrence_sq_from_amplitudes(psi: &StateVector) -> Result<f64> {
    if psi.layout().subsystem_count() != 2 {
        return Err(Error::InvalidArgument("amplitude form needs exactly two subsystems".into()));
    }
    let dims = psi.layout().dims();
    let (d1, d2) = (dims[0], dims[1]);
    let a = |i: usize, k: usize| psi.amplitudes()[i * d2 + k];
    let mut acc = 0.0;
    for i in 0..d1 {
        for j in i + 1..d1 {
            for k in 0..d2 {
                for l in k + 1..d2 {
                    acc += (a(i, k) * a(j, l) - a(i, l) * a(j, k)).norm_sqr();
                }
            }
        }
    }
    Ok(4.0 * acc)
}

/// The spin-flip operator `sigma_y (x) sigma_y` for two qubits.
pub(crate) fn two_qubit_spin_flip() -> CMatrix {
    let i = Complex64::new(0.0, 1.0);
    let sy = CMatrix::from_row_slice(2, 2, &[Complex64::ZERO, -i, i, Complex64::ZERO]);
    linalg::tensor_product(&sy, &sy)
}

/// Descending square roots of the eigenvalues of `rho * (K rho^* K†)`,
/// computed through the Hermitian form `sqrt(rho) (K rho^* K†) sqrt(rho)`.
/// This is the spectrum behind both the Wootters concurrence and the
/// assistance quantities.
pub(crate) fn conjugated_spectrum(rho: &CMatrix, flip: &CMatrix) -> Result<Vec<f64>> {
    let rt = psd_sqrt(rho)?;
    let conj = rho.map(|z| z.conj());
    let tilde = flip * conj * flip.adjoint();
    let m = &rt * tilde * &rt;
    let (vals, _) = hermitian_eigensystem(&m)?;
    Ok(vals
        .into_iter()
        .map(|l| if l < crate::linalg::SQRT_NOISE_FLOOR { 0.0 } else { l.sqrt() })
        .collect())
}

/// Wootters concurrence of a two-qubit state:
/// `max(0, l1 - l2 - l3 - l4)` over the descending spin-flip spectrum.
pub fn wootters_concurrence_2q(rho: &DensityOperator) -> Result<f64> {
    if rho.layout().dims() != [2, 2] {
        return Err(Error::InvalidArgument("Wootters formula needs a two-qubit state".into()));
    }
    let l = conjugated_spectrum(rho.matrix(), &two_qubit_spin_flip())?;
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Entropy of entanglement at a cut: von Neumann entropy of the reduced
/// operator, in bits (base-2 logarithm).
pub fn entanglement_entropy(psi: &StateVector, cut: &Bipartition) -> Result<f64> {
    let ra = reduced_density(psi, cut)?;
    let (vals, _) = hermitian_eigensystem(&ra)?;
    Ok(vals.iter().filter(|&&l| l > 1e-15).map(|&l| -l * l.log2()).sum())
}

/// Negativity `||rho^{T_A}|| - 1` at a cut. Side A is made contiguous by an
/// internal subsystem permutation, so any cut is accepted.
pub fn negativity(rho: &DensityOperator, cut: &Bipartition) -> Result<f64> {
    let flat = flatten_to_bipartition(rho, cut)?;
    let pt = partial_transpose(&flat, 0)?;
    Ok(trace_norm(&pt)? - 1.0)
}

/// Negativity of a pure state: `(Tr sqrt(rho_A))^2 - 1`.
pub fn negativity_pure(psi: &StateVector, cut: &Bipartition) -> Result<f64> {
    let ra = reduced_density(psi, cut)?;
    let (vals, _) = hermitian_eigensystem(&ra)?;
    let s: f64 = vals
        .iter()
        .map(|&l| if l < crate::linalg::SQRT_NOISE_FLOOR { 0.0 } else { l.sqrt() })
        .sum();
    Ok(s * s - 1.0)
}

/// Squared convex-roof extended negativity of a pure state, which is just
/// the squared negativity.
pub fn scren_pure(psi: &StateVector, cut: &Bipartition) -> Result<f64> {
    let n = negativity_pure(psi, cut)?;
    Ok(n * n)
}
