//! Benchmark-only crate; see `benches/kernels.rs`.
//!
//! Shared fixtures live here so the bench target stays small.

use polygamy_core::linalg::{haar_random_pure, partial_trace};
use polygamy_core::states::random_mixed;
use polygamy_core::{DensityOperator, StateVector, SubsystemLayout};

pub fn haar_three_qubit(seed: u64) -> StateVector {
    haar_random_pure(&SubsystemLayout::qubits(3).expect("qubit layout"), seed)
}

pub fn rank2_two_qubit(seed: u64) -> DensityOperator {
    random_mixed(&SubsystemLayout::qubits(2).expect("qubit layout"), 2, seed).expect("valid rank")
}

pub fn two_by_four_marginal(seed: u64) -> DensityOperator {
    let psi = haar_random_pure(&SubsystemLayout::new(vec![2, 4, 2]).expect("layout"), seed);
    partial_trace(&psi.to_density(), &[0, 1]).expect("marginal")
}
