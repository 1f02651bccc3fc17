//! Mechanical verification of the power-weighted polygamy inequalities:
//! ordering classification, branch selection, weighted right-hand sides, and
//! residual computation, reported with explicit precondition status.
//!
//! The inequalities come in three measure families (block-sum concurrence of
//! assistance, entanglement of assistance, SCRENoA) and two hypothesis
//! shapes: an all-ascending chain (every pairwise value is dominated by the
//! sum of its successors) and a split chain (ascending up to an index `m`,
//! descending after). Tripartite states need no hypothesis; the two-term
//! bound holds for either ordering of the pair.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigensystem, partial_trace, DensityOperator, StateVector};
use crate::measures::{concurrence_pure, entanglement_entropy, scren_pure, wootters_concurrence_2q, Bipartition};
use crate::assistance::{concurrence_of_assistance, eoa, screnoa, tau_a};
use crate::roof::RoofConfig;

/// Residual tolerance for purely closed-form evaluation paths.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
/// Residual tolerance when any side went through the roof optimizer: the
/// maximizer undershoots the true maximum, which can only shrink the
/// right-hand side, so the acceptance band widens one-sidedly.
pub const ROOF_PATH_TOL: f64 = 1e-9 + 5e-3;

/// Identifiers for the verifiable statements, matching the CLI tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremId {
    /// The scalar inequality `(1+t)^x <= 1 + (2^x - 1) t^x`.
    Lemma1,
    /// Two-term assistance bound for tripartite pure states (`t1`).
    TauTripartite,
    /// Split-weighted assistance bound, multipartite (`t2`).
    TauSplit,
    /// All-ascending assistance bound, multipartite (`t3`).
    TauOrdered,
    /// Split-weighted entanglement-of-assistance bound (`t4`).
    EoaSplit,
    /// All-ascending entanglement-of-assistance bound (`t5`).
    EoaOrdered,
    /// Split-weighted SCRENoA bound (`t6`).
    ScrenoaSplit,
    /// All-ascending SCRENoA bound (`t7`).
    ScrenoaOrdered,
    /// Squared-concurrence monogamy of an N-qubit pure state.
    Ckw,
    /// Its assistance dual.
    DualCkw,
}

impl TheoremId {
    pub fn token(&self) -> &'static str {
        match self {
            TheoremId::Lemma1 => "lemma1",
            TheoremId::TauTripartite => "t1",
            TheoremId::TauSplit => "t2",
            TheoremId::TauOrdered => "t3",
            TheoremId::EoaSplit => "t4",
            TheoremId::EoaOrdered => "t5",
            TheoremId::ScrenoaSplit => "t6",
            TheoremId::ScrenoaOrdered => "t7",
            TheoremId::Ckw => "ckw",
            TheoremId::DualCkw => "dual-ckw",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lemma1" => TheoremId::Lemma1,
            "t1" => TheoremId::TauTripartite,
            "t2" => TheoremId::TauSplit,
            "t3" => TheoremId::TauOrdered,
            "t4" => TheoremId::EoaSplit,
            "t5" => TheoremId::EoaOrdered,
            "t6" => TheoremId::ScrenoaSplit,
            "t7" => TheoremId::ScrenoaOrdered,
            "ckw" => TheoremId::Ckw,
            "dual-ckw" => TheoremId::DualCkw,
            other => return Err(Error::InvalidArgument(format!("unknown theorem id `{other}`"))),
        })
    }
}

/// Which hypothesis shape the per-pair values satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionKind {
    /// Every value is dominated by the sum of its successors.
    AllAscending,
    /// Ascending chain up to `m`, descending chain after.
    Split,
    /// Neither shape holds; no inequality is claimed.
    Unsatisfied,
}

/// Ordering classification of the per-pair measure values (index order
/// `B_0 .. B_{N-1}`). For the block-sum assistance family the conditions are
/// evaluated on squared values; the other families use raw values.
#[derive(Debug, Clone)]
pub struct OrderingClassification {
    pub values: Vec<f64>,
    pub split_m: Option<usize>,
    pub condition_kind: ConditionKind,
    pub squared: bool,
}

/// Verdict for one inequality at one exponent.
#[derive(Debug, Clone)]
pub struct PolygamyReport {
    pub theorem: TheoremId,
    pub exponent: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; nonnegative (within tolerance) when the hypothesis holds.
    pub residual: f64,
    pub classification: OrderingClassification,
    pub precondition_met: bool,
    pub holds: bool,
    /// Acceptance band used for `holds`.
    pub tolerance: f64,
    /// For the tripartite two-term form: 1 if the first pair value dominates
    /// (ties included), 2 otherwise.
    pub branch: Option<u8>,
    pub note: Option<String>,
}

/// Gap of the scalar bound: `1 + (2^x - 1) t^x - (1 + t)^x`, for
/// `x >= 1, t >= 1`. Nonnegative on that domain; zero at `x = 1` or `t = 1`.
pub fn lemma1_gap(x: f64, t: f64) -> Result<f64> {
    if x.is_nan() || t.is_nan() || x < 1.0 || t < 1.0 {
        return Err(Error::Domain(format!("lemma requires x >= 1 and t >= 1, got x={x}, t={t}")));
    }
    Ok(1.0 + (2f64.powf(x) - 1.0) * t.powf(x) - (1.0 + t).powf(x))
}

/// Classify per-pair values against the two hypothesis shapes. Values are
/// squared first when `squared` is set. The split index is the smallest
/// `m` in `[1, N-3]` making both chains hold, mirroring the theorem scope
/// (so a split needs at least four values).
pub fn classify_ordering(values: &[f64], squared: bool) -> Result<OrderingClassification> {
    if values.len() < 2 {
        return Err(Error::InvalidArgument("classification needs at least two values".into()));
    }
    if values.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidArgument("values must be finite and nonnegative".into()));
    }
    let w: Vec<f64> = values.iter().map(|&v| if squared { v * v } else { v }).collect();
    let n = w.len();
    let mut tail = vec![0.0; n];
    for i in (0..n - 1).rev() {
        tail[i] = tail[i + 1] + w[i + 1];
    }
    let ascending_at = |i: usize| w[i] <= tail[i];
    if (0..=n - 2).all(ascending_at) {
        return Ok(OrderingClassification {
            values: values.to_vec(),
            split_m: None,
            condition_kind: ConditionKind::AllAscending,
            squared,
        });
    }
    if n >= 4 {
        for m in 1..=n - 3 {
            let ascend = (0..=m).all(ascending_at);
            let descend = (m + 1..=n - 2).all(|j| w[j] >= tail[j]);
            if ascend && descend {
                return Ok(OrderingClassification {
                    values: values.to_vec(),
                    split_m: Some(m),
                    condition_kind: ConditionKind::Split,
                    squared,
                });
            }
        }
    }
    Ok(OrderingClassification {
        values: values.to_vec(),
        split_m: None,
        condition_kind: ConditionKind::Unsatisfied,
        squared,
    })
}

/// Measure family behind a prepared check; fixes the weight base and the
/// exponent domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    /// Block-sum concurrence of assistance: weight `2^(e/2) - 1`, `e >= 2`.
    Tau,
    /// Entanglement of assistance: weight `2^e - 1`, `e >= 1`.
    Eoa,
    /// SCRENoA: weight `2^e - 1`, `e >= 1`.
    Screnoa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RhsForm {
    /// Two-term branch form; no hypothesis needed.
    Pair,
    /// All-ascending weights `w^j`.
    Ordered,
    /// Split weights at `m`.
    Split(usize),
    /// Hypothesis unmet: ordered weights reported for information only.
    OrderedNoClaim,
}

/// Exponent-independent part of a polygamy check: pairwise values, the
/// left-hand base value, and the classified hypothesis. Reusable across an
/// exponent sweep so roof optimizations run once.
#[derive(Debug, Clone)]
pub struct PreparedCheck {
    family: Family,
    form: RhsForm,
    values: Vec<f64>,
    lhs_base: f64,
    classification: OrderingClassification,
    branch: Option<u8>,
    tolerance: f64,
    note: Option<String>,
}

impl PreparedCheck {
    /// Smallest exponent the family's bound is stated for.
    pub fn min_exponent(&self) -> f64 {
        match self.family {
            Family::Tau => 2.0,
            Family::Eoa | Family::Screnoa => 1.0,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn lhs_base(&self) -> f64 {
        self.lhs_base
    }

    pub fn classification(&self) -> &OrderingClassification {
        &self.classification
    }

    /// Assemble the report at one exponent.
    pub fn at_exponent(&self, exponent: f64) -> Result<PolygamyReport> {
        let min = self.min_exponent();
        if exponent.is_nan() || exponent < min {
            return Err(Error::Domain(format!(
                "exponent {exponent} below the family domain (needs >= {min})"
            )));
        }
        let w = match self.family {
            Family::Tau => 2f64.powf(exponent / 2.0) - 1.0,
            Family::Eoa | Family::Screnoa => 2f64.powf(exponent) - 1.0,
        };
        let powed: Vec<f64> = self.values.iter().map(|v| v.powf(exponent)).collect();
        let n = powed.len();
        let rhs = match self.form {
            RhsForm::Pair => {
                let (lo, hi) = match self.branch {
                    Some(1) => (powed[1], powed[0]),
                    _ => (powed[0], powed[1]),
                };
                lo + w * hi
            }
            RhsForm::Ordered | RhsForm::OrderedNoClaim => {
                powed.iter().enumerate().map(|(j, p)| w.powi(j as i32) * p).sum()
            }
            RhsForm::Split(m) => {
                let head: f64 = (0..=m).map(|j| w.powi(j as i32) * powed[j]).sum();
                let middle: f64 = (m + 1..=n - 2).map(|j| powed[j]).sum::<f64>() * w.powi(m as i32 + 2);
                let last = w.powi(m as i32 + 1) * powed[n - 1];
                head + middle + last
            }
        };
        let lhs = self.lhs_base.powf(exponent);
        let residual = rhs - lhs;
        let precondition_met = !matches!(self.form, RhsForm::OrderedNoClaim);
        let theorem = match (self.family, self.form) {
            (Family::Tau, RhsForm::Pair) => TheoremId::TauTripartite,
            (Family::Tau, RhsForm::Split(_)) => TheoremId::TauSplit,
            (Family::Tau, _) => TheoremId::TauOrdered,
            (Family::Eoa, RhsForm::Split(_)) => TheoremId::EoaSplit,
            (Family::Eoa, _) => TheoremId::EoaOrdered,
            (Family::Screnoa, RhsForm::Split(_)) => TheoremId::ScrenoaSplit,
            (Family::Screnoa, _) => TheoremId::ScrenoaOrdered,
        };
        Ok(PolygamyReport {
            theorem,
            exponent,
            lhs,
            rhs,
            residual,
            classification: self.classification.clone(),
            precondition_met,
            holds: precondition_met && residual >= -self.tolerance,
            tolerance: self.tolerance,
            branch: self.branch,
            note: self.note.clone(),
        })
    }
}

fn pair_branch(values: &[f64]) -> Option<u8> {
    if values.len() == 2 {
        Some(if values[0] >= values[1] { 1 } else { 2 })
    } else {
        None
    }
}

/// Pairwise-marginal density operators `rho_{A B_i}`, `i = 1..n-1`.
fn pair_marginals(rho: &DensityOperator) -> Result<Vec<DensityOperator>> {
    let n = rho.layout().subsystem_count();
    (1..n).map(|i| partial_trace(rho, &[0, i])).collect()
}

/// Dominant eigenvector of a rank-one density operator.
fn pure_from_rank_one(rho: &DensityOperator) -> Result<Option<StateVector>> {
    let (vals, vecs) = hermitian_eigensystem(rho.matrix())?;
    if vals.len() > 1 && vals[1] > crate::linalg::EIG_CLAMP {
        return Ok(None);
    }
    let col: Vec<_> = vecs.column(0).iter().copied().collect();
    Ok(Some(StateVector::new(col, rho.layout().clone())?))
}

/// Prepare the tripartite two-term assistance check. The pairwise values are
/// block-sum assistance quantities of the two marginals; the left-hand base
/// is the assistance value of the pure state at the full cut, which equals
/// its concurrence.
pub fn prepare_tau_tripartite(psi: &StateVector) -> Result<PreparedCheck> {
    if psi.layout().subsystem_count() != 3 {
        return Err(Error::InvalidArgument("tripartite check needs exactly three subsystems".into()));
    }
    let rho = psi.to_density();
    let values = vec![
        tau_a(&partial_trace(&rho, &[0, 1])?)?,
        tau_a(&partial_trace(&rho, &[0, 2])?)?,
    ];
    let lhs_base = concurrence_pure(psi, &Bipartition::first_vs_rest(3)?)?;
    let classification = classify_ordering(&values, true)?;
    Ok(PreparedCheck {
        family: Family::Tau,
        form: RhsForm::Pair,
        branch: pair_branch(&values),
        values,
        lhs_base,
        classification,
        tolerance: CLOSED_FORM_TOL,
        note: None,
    })
}

/// Tripartite two-term assistance bound at one exponent (`alpha >= 2`).
pub fn check_tau_tripartite(psi: &StateVector, alpha: f64) -> Result<PolygamyReport> {
    prepare_tau_tripartite(psi)?.at_exponent(alpha)
}

/// Prepare the multipartite assistance check. Three-party inputs delegate to
/// the tripartite two-term form; otherwise the classification picks the
/// all-ascending or split weight pattern, with an honest no-claim report
/// when neither hypothesis holds.
pub fn prepare_tau_multi(psi: &StateVector) -> Result<PreparedCheck> {
    let n = psi.layout().subsystem_count();
    if n < 3 {
        return Err(Error::InvalidArgument("multipartite check needs at least three subsystems".into()));
    }
    if n == 3 {
        return prepare_tau_tripartite(psi);
    }
    let rho = psi.to_density();
    let values: Vec<f64> = pair_marginals(&rho)?.iter().map(tau_a).collect::<Result<_>>()?;
    let lhs_base = concurrence_pure(psi, &Bipartition::first_vs_rest(n)?)?;
    let classification = classify_ordering(&values, true)?;
    let (form, note) = match classification.condition_kind {
        ConditionKind::AllAscending => (RhsForm::Ordered, None),
        ConditionKind::Split => (RhsForm::Split(classification.split_m.unwrap()), None),
        ConditionKind::Unsatisfied => (
            RhsForm::OrderedNoClaim,
            Some("ordering hypothesis unmet; no inequality claimed".to_string()),
        ),
    };
    Ok(PreparedCheck {
        family: Family::Tau,
        form,
        branch: None,
        values,
        lhs_base,
        classification,
        tolerance: CLOSED_FORM_TOL,
        note,
    })
}

/// Multipartite assistance bound at one exponent (`alpha >= 2`).
pub fn check_tau_multi(psi: &StateVector, alpha: f64) -> Result<PolygamyReport> {
    prepare_tau_multi(psi)?.at_exponent(alpha)
}

fn prepare_assistance_roof<FV, FP, FM>(
    rho: &DensityOperator,
    family: Family,
    pair_value: FV,
    pure_lhs: FP,
    mixed_lhs: FM,
    note: Option<String>,
) -> Result<PreparedCheck>
where
    FV: Fn(&DensityOperator) -> Result<f64>,
    FP: Fn(&StateVector) -> Result<f64>,
    FM: Fn(&DensityOperator) -> Result<f64>,
{
    let n = rho.layout().subsystem_count();
    if n < 3 {
        return Err(Error::InvalidArgument("polygamy check needs at least three subsystems".into()));
    }
    let values: Vec<f64> = pair_marginals(rho)?.iter().map(&pair_value).collect::<Result<_>>()?;
    let lhs_base = match pure_from_rank_one(rho)? {
        Some(psi) => pure_lhs(&psi)?,
        None => mixed_lhs(rho)?,
    };
    let classification = classify_ordering(&values, false)?;
    let (form, branch, extra_note) = if values.len() == 2 {
        (RhsForm::Pair, pair_branch(&values), None)
    } else {
        match classification.condition_kind {
            ConditionKind::AllAscending => (RhsForm::Ordered, None, None),
            ConditionKind::Split => (RhsForm::Split(classification.split_m.unwrap()), None, None),
            ConditionKind::Unsatisfied => (
                RhsForm::OrderedNoClaim,
                None,
                Some("ordering hypothesis unmet; no inequality claimed".to_string()),
            ),
        }
    };
    let note = match (note, extra_note) {
        (Some(a), Some(b)) => Some(format!("{a}; {b}")),
        (Some(a), None) => Some(a),
        (None, b) => b,
    };
    Ok(PreparedCheck {
        family,
        form,
        branch,
        values,
        lhs_base,
        classification,
        tolerance: ROOF_PATH_TOL,
        note,
    })
}

/// Prepare the entanglement-of-assistance check: pairwise values are
/// roof-maximized entropies of the two-party marginals; the left-hand base
/// for a pure input is its entropy of entanglement at the full cut, and for
/// a mixed input the roof-maximized entropy of the cut-flattened state.
pub fn prepare_eoa_multi(rho: &DensityOperator, config: &RoofConfig) -> Result<PreparedCheck> {
    let n = rho.layout().subsystem_count();
    let cut = Bipartition::first_vs_rest(n)?;
    prepare_assistance_roof(
        rho,
        Family::Eoa,
        |marginal| Ok(eoa(marginal, config)?.value),
        |psi| entanglement_entropy(psi, &cut),
        |mixed| {
            let flat = crate::measures::flatten_to_bipartition(mixed, &cut)?;
            Ok(eoa(&flat, config)?.value)
        },
        None,
    )
}

/// Entanglement-of-assistance bound at one exponent (`beta >= 1`).
pub fn check_eoa_multi(rho: &DensityOperator, beta: f64, config: &RoofConfig) -> Result<PolygamyReport> {
    prepare_eoa_multi(rho, config)?.at_exponent(beta)
}

/// Prepare the SCRENoA check. The ordering hypothesis is evaluated on the
/// SCRENoA values themselves, keeping the classification in the same
/// quantity as the bound.
pub fn prepare_screnoa_multi(rho: &DensityOperator, config: &RoofConfig) -> Result<PreparedCheck> {
    let n = rho.layout().subsystem_count();
    let cut = Bipartition::first_vs_rest(n)?;
    prepare_assistance_roof(
        rho,
        Family::Screnoa,
        |marginal| Ok(screnoa(marginal, config)?.0),
        |psi| scren_pure(psi, &cut),
        |mixed| {
            let flat = crate::measures::flatten_to_bipartition(mixed, &cut)?;
            Ok(screnoa(&flat, config)?.0)
        },
        Some("ordering condition evaluated on the SCRENoA values".to_string()),
    )
}

/// SCRENoA bound at one exponent (`beta >= 1`).
pub fn check_screnoa_multi(rho: &DensityOperator, beta: f64, config: &RoofConfig) -> Result<PolygamyReport> {
    prepare_screnoa_multi(rho, config)?.at_exponent(beta)
}

/// Squared-concurrence monogamy and its assistance dual for an N-qubit pure
/// state. Returns `(monogamy_gap, dual_gap)`:
///
/// * `monogamy_gap = C^2(A|rest) - sum_i C^2(rho_{A B_i})` (Wootters per pair)
/// * `dual_gap = sum_i C_a^2(rho_{A B_i}) - C^2(A|rest)`
///
/// Both are nonnegative up to numerical tolerance.
pub fn ckw_check(psi: &StateVector) -> Result<(f64, f64)> {
    if psi.layout().dims().iter().any(|&d| d != 2) {
        return Err(Error::InvalidArgument("monogamy check needs qubit subsystems".into()));
    }
    let n = psi.layout().subsystem_count();
    if n < 2 {
        return Err(Error::InvalidArgument("monogamy check needs at least two qubits".into()));
    }
    let rho = psi.to_density();
    let c2 = concurrence_pure(psi, &Bipartition::first_vs_rest(n)?)?.powi(2);
    let mut wootters_sq = 0.0;
    let mut ca_sq = 0.0;
    for marginal in pair_marginals(&rho)? {
        wootters_sq += wootters_concurrence_2q(&marginal)?.powi(2);
        ca_sq += concurrence_of_assistance(&marginal)?.powi(2);
    }
    Ok((c2 - wootters_sq, ca_sq - c2))
}
