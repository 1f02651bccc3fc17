//! Constructors for the named state families: the five-amplitude generalized
//! Schmidt form of a three-qubit pure state, W and GHZ states, and seeded
//! random mixed states for fuzzing.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{haar_random_pure_with, partial_trace, DensityOperator, StateVector, SubsystemLayout};

/// Parameters of the generalized Schmidt decomposition of a three-qubit pure
/// state: five nonnegative amplitudes with `sum(lambda_i^2) = 1` and one
/// relative phase on the second amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSchmidtParams {
    lambdas: [f64; 5],
    phase: f64,
}

impl GenSchmidtParams {
    pub fn new(lambdas: [f64; 5], phase: f64) -> Result<Self> {
        if lambdas.iter().any(|&l| l < 0.0 || !l.is_finite()) {
            return Err(Error::InvalidArgument("lambdas must be finite and nonnegative".into()));
        }
        let norm_sq: f64 = lambdas.iter().map(|l| l * l).sum();
        if (norm_sq - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "sum of squared lambdas is {norm_sq}, not 1"
            )));
        }
        Ok(Self { lambdas, phase })
    }

    /// Trigonometric form: `l0 = cos t0`, `l1 = sin t0 cos t1`,
    /// `l2 = sin t0 sin t1 cos t2`, `l3 = sin t0 sin t1 sin t2 cos t3`,
    /// `l4 = sin t0 sin t1 sin t2 sin t3`, with angles in `[0, pi/2]`.
    /// Normalization holds by construction.
    pub fn from_angles(thetas: [f64; 4], phase: f64) -> Result<Self> {
        if thetas.iter().any(|&t| !(0.0..=std::f64::consts::FRAC_PI_2).contains(&t)) {
            return Err(Error::InvalidArgument("angles must lie in [0, pi/2]".into()));
        }
        let [t0, t1, t2, t3] = thetas;
        let lambdas = [
            t0.cos(),
            t0.sin() * t1.cos(),
            t0.sin() * t1.sin() * t2.cos(),
            t0.sin() * t1.sin() * t2.sin() * t3.cos(),
            t0.sin() * t1.sin() * t2.sin() * t3.sin(),
        ];
        // renormalize away the last few ulps so `new` always accepts
        let norm: f64 = lambdas.iter().map(|l| l * l).sum::<f64>().sqrt();
        let lambdas = lambdas.map(|l| l / norm);
        Self::new(lambdas, phase)
    }

    pub fn lambdas(&self) -> &[f64; 5] {
        &self.lambdas
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }
}

/// Three-qubit state `l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> +
/// l4|111>`. Qubit 0 is the most significant bit, so the amplitudes land at
/// flat indices 0, 4, 5, 6, 7.
pub fn gen_schmidt_3q(params: &GenSchmidtParams) -> StateVector {
    let l = params.lambdas();
    let mut amps = vec![Complex64::ZERO; 8];
    amps[0] = Complex64::new(l[0], 0.0);
    amps[4] = Complex64::from_polar(l[1], params.phase());
    amps[5] = Complex64::new(l[2], 0.0);
    amps[6] = Complex64::new(l[3], 0.0);
    amps[7] = Complex64::new(l[4], 0.0);
    StateVector::new(amps, SubsystemLayout::qubits(3).expect("3 qubits"))
        .expect("normalized by GenSchmidtParams invariant")
}

/// Uniform single-excitation superposition on `n >= 2` qubits, amplitude
/// `1/sqrt(n)` on each basis state with exactly one excited qubit.
pub fn w_state(n: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::InvalidArgument("W state needs at least two qubits".into()));
    }
    let dim = 1usize << n;
    let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::ZERO; dim];
    for k in 0..n {
        amps[1 << (n - 1 - k)] = amp;
    }
    StateVector::new(amps, SubsystemLayout::qubits(n)?)
}

/// `(|0..0> + |1..1>)/sqrt(2)` on `n >= 2` qubits.
pub fn ghz_state(n: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::InvalidArgument("GHZ state needs at least two qubits".into()));
    }
    let dim = 1usize << n;
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut amps = vec![Complex64::ZERO; dim];
    amps[0] = amp;
    amps[dim - 1] = amp;
    StateVector::new(amps, SubsystemLayout::qubits(n)?)
}

/// Random mixed state of the given rank: partial trace of a Haar-random pure
/// state on `layout (x) ancilla(rank)`. Deterministic for a fixed seed.
pub fn random_mixed(layout: &SubsystemLayout, rank: usize, seed: u64) -> Result<DensityOperator> {
    if rank < 1 || rank > layout.total() {
        return Err(Error::InvalidArgument(format!(
            "rank {rank} outside 1..={}",
            layout.total()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if rank == 1 {
        return Ok(haar_random_pure_with(layout, &mut rng).to_density());
    }
    let mut dims = layout.dims().to_vec();
    dims.push(rank);
    let extended = SubsystemLayout::new(dims)?;
    let purification = haar_random_pure_with(&extended, &mut rng);
    let keep: Vec<usize> = (0..layout.subsystem_count()).collect();
    let reduced = partial_trace(&purification.to_density(), &keep)?;
    reduced.with_layout(layout.clone())
}
