//! Inequality fuzzing: the scalar lemma on a grid, and the closed-form
//! polygamy/monogamy relations over Haar-random states.

use num_complex::Complex64;
use polygamy_core::assistance::{concurrence_of_assistance, tau_a};
use polygamy_core::checker::{
    check_tau_multi, check_tau_tripartite, ckw_check, classify_ordering, lemma1_gap, ConditionKind,
    TheoremId,
};
use polygamy_core::linalg::{haar_random_pure, partial_trace, StateVector, SubsystemLayout};
use polygamy_core::measures::{concurrence_pure, Bipartition};
use proptest::prelude::*;

#[test]
fn lemma1_grid_nonnegative() {
    // 100 x 100 grid over x in [1, 6], t in [1, 50]
    let mut min_gap = f64::INFINITY;
    for i in 0..100 {
        let x = 1.0 + 5.0 * (i as f64) / 99.0;
        for j in 0..100 {
            let t = 1.0 + 49.0 * (j as f64) / 99.0;
            min_gap = min_gap.min(lemma1_gap(x, t).unwrap());
        }
    }
    assert!(min_gap >= -1e-12, "grid min {min_gap:.3e}");
    // boundary equalities
    for i in 0..50 {
        let t = 1.0 + (i as f64) * 0.7;
        assert!(lemma1_gap(1.0, t).unwrap().abs() <= 1e-12);
        let x = 1.0 + (i as f64) * 0.1;
        assert!(lemma1_gap(x, 1.0).unwrap().abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lemma1_random_pairs(x in 1.0f64..6.0, t in 1.0f64..50.0) {
        prop_assert!(lemma1_gap(x, t).unwrap() >= -1e-12);
    }
}

#[test]
fn tripartite_residuals_nonnegative_on_haar_sample() {
    let layout = SubsystemLayout::qubits(3).unwrap();
    for seed in 0..200 {
        let psi = haar_random_pure(&layout, seed);
        for alpha in [2.0, 2.5, 3.0, 4.0] {
            let report = check_tau_tripartite(&psi, alpha).unwrap();
            assert!(report.holds, "seed={seed} alpha={alpha} residual={}", report.residual);
            assert!(report.residual >= -1e-9);
        }
    }
}

#[test]
fn dual_monogamy_and_pairwise_bound_on_haar_sample() {
    let layout = SubsystemLayout::qubits(3).unwrap();
    let cut = Bipartition::first_vs_rest(3).unwrap();
    for seed in 0..200 {
        let psi = haar_random_pure(&layout, seed);
        let (mono, dual) = ckw_check(&psi).unwrap();
        assert!(mono >= -1e-9, "seed={seed} monogamy gap {mono:.3e}");
        assert!(dual >= -1e-9, "seed={seed} dual gap {dual:.3e}");

        // squared-assistance pairwise bound at the full cut, block-sum route
        let rho = psi.to_density();
        let lhs = concurrence_pure(&psi, &cut).unwrap().powi(2);
        let rhs = tau_a(&partial_trace(&rho, &[0, 1]).unwrap()).unwrap().powi(2)
            + tau_a(&partial_trace(&rho, &[0, 2]).unwrap()).unwrap().powi(2);
        assert!(rhs - lhs >= -1e-9, "seed={seed} pairwise gap {:.3e}", rhs - lhs);
    }
}

/// Non-uniform single-excitation state: `a|10..0> + sum_i b_i |0..1_i..0>`.
fn w_class_state(a: f64, bs: &[f64]) -> StateVector {
    let n = bs.len() + 1;
    let dim = 1usize << n;
    let mut amps = vec![Complex64::ZERO; dim];
    amps[1 << (n - 1)] = Complex64::new(a, 0.0);
    for (i, &b) in bs.iter().enumerate() {
        amps[1 << (n - 2 - i)] = Complex64::new(b, 0.0);
    }
    StateVector::new(amps, SubsystemLayout::qubits(n).unwrap()).unwrap()
}

#[test]
fn split_form_end_to_end() {
    // pair values scale with the excitation weights, so (0.2, 0.3, 0.9, 0.4)
    // forces the split shape with m = 1
    let mut bs = [0.2, 0.3, 0.9, 0.4];
    let norm = (0.5f64 + bs.iter().map(|b| b * b).sum::<f64>()).sqrt();
    for b in &mut bs {
        *b /= norm;
    }
    let a = 0.5f64.sqrt() / norm;
    let psi = w_class_state(a, &bs);
    let report = check_tau_multi(&psi, 3.0).unwrap();
    assert_eq!(report.theorem, TheoremId::TauSplit);
    assert_eq!(report.classification.split_m, Some(1));
    assert!(report.precondition_met);
    assert!(report.holds, "residual {}", report.residual);

    // the same state at alpha = 2 has unit weights, so the split right-hand
    // side coincides with the ascending one
    let at2 = check_tau_multi(&psi, 2.0).unwrap();
    let ordered_rhs: f64 = at2.classification.values.iter().map(|v| v.powi(2)).sum();
    assert!((at2.rhs - ordered_rhs).abs() < 1e-10);
}

#[test]
fn w_class_pair_values_match_marginal_assistance() {
    // every pairwise marginal of a single-excitation state is effectively
    // two-qubit, so the block sum must agree with the two-qubit closed form
    let mut bs = [0.4, 0.7, 0.2];
    let norm = (0.25f64 + bs.iter().map(|b| b * b).sum::<f64>()).sqrt();
    for b in &mut bs {
        *b /= norm;
    }
    let a = 0.5 / norm;
    let psi = w_class_state(a, &bs);
    let rho = psi.to_density();
    for i in 1..4 {
        let marginal = partial_trace(&rho, &[0, i]).unwrap();
        let block = tau_a(&marginal).unwrap();
        let ca = concurrence_of_assistance(&marginal).unwrap();
        assert!((block - ca).abs() < 1e-12);
        assert!((ca - 2.0 * a * bs[i - 1]).abs() < 1e-8, "i={i} ca={ca}");
    }
}

#[test]
fn residual_curve_of_symmetric_state_decreases() {
    // closed-form residual curve shape: positive and strictly decreasing
    // over [2, 6] for the symmetric three-qubit example
    let f = |alpha: f64| 2f64.powf(alpha / 2.0) * (3f64.sqrt() / 3.0).powf(alpha);
    let mut prev = f64::INFINITY;
    let mut alpha = 2.0;
    while alpha <= 6.0 + 1e-9 {
        let y = f(alpha);
        assert!(y > 0.0);
        assert!(y < prev, "not decreasing at alpha={alpha}");
        prev = y;
        alpha += 0.1;
    }
}

#[test]
fn unsatisfied_multi_reports_no_claim() {
    // make the first pair dominate: a spike at B_0 and weak later pairs is
    // impossible for the physical tail ordering of this family, so force the
    // shape through classification directly
    let c = classify_ordering(&[1.0, 10.0, 1.0, 1.0], true).unwrap();
    assert_eq!(c.condition_kind, ConditionKind::Unsatisfied);
    assert_eq!(c.split_m, None);
}

#[test]
fn ghz_and_w_marginal_assistance_values() {
    let g4 = polygamy_core::states::ghz_state(4).unwrap();
    let rho = g4.to_density();
    for i in 1..4 {
        let m = partial_trace(&rho, &[0, i]).unwrap();
        assert!((concurrence_of_assistance(&m).unwrap() - 1.0).abs() < 1e-9);
    }
    let w4 = polygamy_core::states::w_state(4).unwrap();
    let rho = w4.to_density();
    for i in 1..4 {
        let m = partial_trace(&rho, &[0, i]).unwrap();
        assert!((concurrence_of_assistance(&m).unwrap() - 0.5).abs() < 1e-9);
    }
}
