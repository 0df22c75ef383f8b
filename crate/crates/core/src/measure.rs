//! Separable measurements that distinguish the members of a UPB, and
//! Born-rule simulation of their outcome statistics.

use crate::basis::{ProductBasis, ProductState};
use crate::extend::{complete_search, Completion, ExtendError};
use crate::numerics::{inner, CMat, Tolerance};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("a separable distinguishing measurement needs at least 2 members, got {0}")]
    TooFewMembers(usize),
    #[error("no completion supplied (or found) for the sub-basis missing member {index}")]
    CompletionMissing { index: usize },
    #[error("completion for member {index} lives on dims {got:?}, expected {want:?}")]
    DimensionMismatch {
        index: usize,
        got: Vec<usize>,
        want: Vec<usize>,
    },
    #[error("completeness identity violated: residual {residual:.3e} > 1e-9")]
    CompletenessViolated { residual: f64 },
    #[error(transparent)]
    Extend(#[from] ExtendError),
}

/// One element of a separable measurement: the rank-one product operator
/// `amplitude * |m><m|` with `m` the unit product state with the stored
/// per-party factors. The global operator is never formed during
/// construction; factors are the ground truth.
#[derive(Debug, Clone)]
pub struct SepElement {
    pub label: String,
    pub amplitude: f64,
    pub state: ProductState,
}

impl SepElement {
    /// `<psi| A†A |psi> = amplitude^2 |<m|psi>|^2`, computed from the local
    /// factors.
    pub fn born_weight(&self, psi: &ProductState) -> f64 {
        let ov = self.state.overlap(psi);
        self.amplitude * self.amplitude * ov.norm_sqr()
    }

    /// The global operator `amplitude * |m><m|` (for verification only).
    pub fn global_op(&self) -> CMat {
        CMat::projector(&self.state.global()).scaled(self.amplitude)
    }
}

/// A complete separable measurement: every element is a product operator and
/// `sum_m (A^m)† A^m = I` within 1e-9.
#[derive(Debug, Clone)]
pub struct SepMeasurement {
    dims: Vec<usize>,
    elements: Vec<SepElement>,
}

impl SepMeasurement {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn elements(&self) -> &[SepElement] {
        &self.elements
    }

    /// `max_abs(sum (A^m)†A^m - I)`.
    pub fn completeness_residual(&self) -> f64 {
        let d: usize = self.dims.iter().product();
        let mut sum = CMat::zeros(d, d);
        for e in &self.elements {
            sum = sum.add(&CMat::projector(&e.state.global()).scaled(e.amplitude * e.amplitude));
        }
        sum.sub(&CMat::identity(d)).max_abs()
    }
}

/// Builds the distinguishing separable measurement for a k-member UPB from
/// per-member completions: `completions[i]` must be a full orthogonal
/// product basis of the same space containing the sub-basis with member i
/// removed. Elements are `(1/sqrt k) |m><m|` for every completion state `m`
/// orthogonal to that sub-basis (these span its orthocomplement) and
/// `sqrt((k-1)/k) |psi_i><psi_i|` for every member.
pub fn build_sep_measurement(
    upb: &ProductBasis,
    completions: &[Option<ProductBasis>],
    tol: Tolerance,
) -> Result<SepMeasurement, MeasureError> {
    let k = upb.len();
    if k < 2 {
        return Err(MeasureError::TooFewMembers(k));
    }
    assert_eq!(completions.len(), k, "one completion per removed member");
    let d = upb.total_dim();
    let mut elements = Vec::new();
    for (i, completion) in completions.iter().enumerate() {
        let completion = completion
            .as_ref()
            .ok_or(MeasureError::CompletionMissing { index: i })?;
        if completion.dims() != upb.dims() {
            return Err(MeasureError::DimensionMismatch {
                index: i,
                got: completion.dims().to_vec(),
                want: upb.dims().to_vec(),
            });
        }
        // Completion states orthogonal to every member of S_i span S_i^perp.
        let mut found = 0usize;
        for (m, state) in completion.states().iter().enumerate() {
            let in_perp = upb
                .states()
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .all(|(_, s)| s.overlap(state).norm() <= tol.eps());
            if in_perp {
                elements.push(SepElement {
                    label: format!("perp:{i}:{m}"),
                    amplitude: 1.0 / (k as f64).sqrt(),
                    state: state.clone(),
                });
                found += 1;
            }
        }
        if found != d - (k - 1) {
            return Err(MeasureError::CompletionMissing { index: i });
        }
    }
    for (i, s) in upb.states().iter().enumerate() {
        elements.push(SepElement {
            label: format!("member:{i}"),
            amplitude: ((k as f64 - 1.0) / k as f64).sqrt(),
            state: s.clone(),
        });
    }
    let meas = SepMeasurement {
        dims: upb.dims().to_vec(),
        elements,
    };
    let residual = meas.completeness_residual();
    if residual > 1e-9 {
        return Err(MeasureError::CompletenessViolated { residual });
    }
    Ok(meas)
}

/// Convenience pipeline: completes each k-1 member sub-basis by search in
/// the original space, then assembles the measurement.
pub fn theorem2_measurement(
    upb: &ProductBasis,
    tol: Tolerance,
    budget: u64,
) -> Result<SepMeasurement, MeasureError> {
    let k = upb.len();
    if k < 2 {
        return Err(MeasureError::TooFewMembers(k));
    }
    let mut completions = Vec::with_capacity(k);
    for i in 0..k {
        let raw: Vec<Vec<crate::numerics::CVec>> = upb
            .states()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, s)| s.locals().to_vec())
            .collect();
        let sub = crate::basis::verify_pb(upb.dims(), &raw, tol)
            .expect("sub-basis of a valid basis is valid");
        match complete_search(&sub, tol, budget)? {
            Completion::Complete(c) => completions.push(Some(c)),
            Completion::Incomplete { .. } => completions.push(None),
        }
    }
    build_sep_measurement(upb, &completions, tol)
}

/// Born-rule outcome distribution: label -> probability.
#[derive(Debug, Clone)]
pub struct OutcomeDistribution {
    probs: BTreeMap<String, f64>,
}

impl OutcomeDistribution {
    pub fn probs(&self) -> &BTreeMap<String, f64> {
        &self.probs
    }

    pub fn prob(&self, label: &str) -> f64 {
        self.probs.get(label).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    /// The unique most likely label, when its probability beats every other
    /// label by the given margin.
    pub fn argmax_with_margin(&self, margin: f64) -> Option<&str> {
        let mut sorted: Vec<(&String, f64)> =
            self.probs.iter().map(|(l, &p)| (l, p)).collect();
        sorted.sort_by(|a, b| b.1.total_cmp(&a.1));
        match sorted.as_slice() {
            [] => None,
            [(l, _)] => Some(l.as_str()),
            [(l, p0), (_, p1), ..] if p0 - p1 >= margin => Some(l.as_str()),
            _ => None,
        }
    }
}

/// `p(m) = <psi|(A^m)†A^m|psi>` for every element.
pub fn simulate(meas: &SepMeasurement, state: &ProductState) -> OutcomeDistribution {
    assert_eq!(
        state.dims(),
        meas.dims(),
        "state dimensions must match the measurement"
    );
    let mut probs = BTreeMap::new();
    for e in meas.elements() {
        probs.insert(e.label.clone(), e.born_weight(state));
    }
    let dist = OutcomeDistribution { probs };
    debug_assert!((dist.total() - 1.0).abs() < 1e-9);
    dist
}

/// Result of checking the Pyr34 distinguishing protocol's geometry.
#[derive(Debug, Clone)]
pub struct ProtocolReport {
    /// Human-readable description of each violated relation.
    pub violations: Vec<String>,
    /// Largest |<u_j|w_i>| over the 15 required zero relations.
    pub max_zero_defect: f64,
    /// Largest |<v_{i+1}|v_{i+4}>| over the five survivor pairs.
    pub max_survivor_overlap: f64,
    /// The constant c with sum_j |u_j><u_j| = c * I.
    pub povm_scalar: f64,
}

impl ProtocolReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies the geometry behind Bob's five-outcome POVM for Pyr34:
/// `<u_j|w_i> = 0` for `i in {j, j+2, j+3} mod 5` (within 1e-10), the two
/// surviving Alice states `v_{i+1}, v_{i+4}` are orthogonal, and
/// `sum_j |u_j><u_j|` is a multiple of the identity.
pub fn pyr34_protocol_check() -> ProtocolReport {
    let v = crate::constructions::pyramid_vectors();
    let w = crate::constructions::pyr34_w_vectors();
    let u = crate::constructions::pyr34_bob_povm();
    let mut violations = Vec::new();
    let mut max_zero = 0.0f64;
    for j in 0..5usize {
        for off in [0usize, 2, 3] {
            let i = (j + off) % 5;
            let ov = inner(&u[j], &w[i]).expect("dims match").norm();
            max_zero = max_zero.max(ov);
            if ov > 1e-10 {
                violations.push(format!("<u_{j}|w_{i}> = {ov:.3e} (expected 0)"));
            }
        }
    }
    let mut max_surv = 0.0f64;
    for i in 0..5usize {
        let a = (i + 1) % 5;
        let b = (i + 4) % 5;
        let ov = inner(&v[a], &v[b]).expect("dims match").norm();
        max_surv = max_surv.max(ov);
        if ov > 1e-12 {
            violations.push(format!(
                "survivors v_{a}, v_{b} after outcome {i} are not orthogonal: {ov:.3e}"
            ));
        }
    }
    let mut sum = CMat::zeros(4, 4);
    for uj in &u {
        sum = sum.add(&CMat::projector(&uj.normalized()).scaled(uj.norm().powi(2)));
    }
    let scalar = sum[(0, 0)].re;
    let defect = sum.sub(&CMat::identity(4).scaled(scalar)).max_abs();
    if defect > 1e-12 {
        violations.push(format!(
            "sum |u><u| deviates from {scalar} * I by {defect:.3e}"
        ));
    }
    ProtocolReport {
        violations,
        max_zero_defect: max_zero,
        max_survivor_overlap: max_surv,
        povm_scalar: scalar,
    }
}
