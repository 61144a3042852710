//! Predictors for the outcome of an X-measurement, and the certificate that
//! none exists when the input set is not clonable.
//!
//! The network: prepare `z`, measure `X` into a target, let the predictor
//! write `p_z` into a second register, then compare target and prediction.
//! A predictor for `Z` must make the comparer sharp-yes for every `z ∈ Z`.

use serde::Serialize;

use crate::error::{CtError, Result};
use crate::kernel::{is_task_possible, validate_variable, Attribute, Model, PossibilityVerdict, Repr, Status, Variable};
use crate::label::Label;
use crate::linalg::{self, CMat, CVec};
use crate::predicates::{cloning_task, is_generalised_mixture, restricted_variable};
use crate::quantum::{build_comparer, build_measurer, Comparison, Labeling, MeasurerSpec};
use crate::state::{PureState, QState};
use crate::tolerance::tol;

/// An X-observable, the variable of inputs to be predicted, and the X-measurer.
#[derive(Debug, Clone)]
pub struct PredictorProblem {
    pub x: Variable,
    pub z: Variable,
    pub measurer: MeasurerSpec,
}

impl PredictorProblem {
    /// Use the standard measurer of `x` (member `k` writes `|k>`).
    pub fn new(x: Variable, z: Variable) -> Result<Self> {
        let measurer = build_measurer(&x, &Labeling::standard(x.len(), x.len().max(2))?)?;
        Ok(PredictorProblem { x, z, measurer })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PredictorStatus {
    Exists,
    Impossible,
}

/// Which branch of the case analysis rules a predictor out.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum PredictorCertificate {
    /// Two members are forced to the same prediction, but predictions must
    /// form an information variable (pairwise orthogonal).
    ForcedClash { first: String, second: String, label: String },
    /// Every outcome possible for `member` is already predicted for another
    /// member, so `p_member` must be orthogonal to all of them and the
    /// comparer is sharp-no.
    OrthogonalPrediction { member: String, forced: Vec<String>, comparer_expectation: f64 },
    /// Comparer sharpness needs every cross term `c_x p_x'` (x ≠ x') to
    /// vanish; with two or more non-zero weights only `p = 0` solves it.
    CrossTermInfeasible { member: String, weights: Vec<(String, f64)>, constraint_rank: usize, target_dim: usize },
}

impl PredictorCertificate {
    pub fn describe(&self) -> String {
        match self {
            PredictorCertificate::ForcedClash { first, second, label } => {
                format!("members {first} and {second} are both forced to predict '{label}'")
            }
            PredictorCertificate::OrthogonalPrediction { member, forced, comparer_expectation } => format!(
                "prediction for {member} must be orthogonal to {}, giving comparer expectation {comparer_expectation}",
                forced.join(", ")
            ),
            PredictorCertificate::CrossTermInfeasible { member, weights, constraint_rank, target_dim } => {
                let w: Vec<String> = weights.iter().map(|(l, x)| format!("{l}:{x:.6}")).collect();
                format!(
                    "cross terms for {member} (weights {}) have rank {constraint_rank} = target dimension {target_dim}; only p = 0 satisfies them",
                    w.join(", ")
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictorVerdict {
    pub status: PredictorStatus,
    /// Prediction vector on the target register for each member of `Z`.
    pub predictions: Vec<(Label, CVec)>,
    pub certificate: Option<PredictorCertificate>,
}

/// Single state of an attribute used as a predictor input.
fn member_state(l: &Label, a: &Attribute) -> Result<QState> {
    match a.repr() {
        Repr::States(s) if s.len() == 1 => Ok(s[0].clone()),
        _ => Err(CtError::Unsupported(format!("member {l} must be a single (pure or mixed) state"))),
    }
}

pub fn predictor_feasible(problem: &PredictorProblem) -> Result<PredictorVerdict> {
    let PredictorProblem { x, z, measurer } = problem;
    let t = tol();
    let projectors: Vec<CMat> = x.attributes().iter().map(|a| a.projector()).collect::<Result<_>>()?;
    let targets: Vec<CVec> = measurer.declared().iter().map(|(_, v)| v.clone()).collect();
    if targets.len() != x.len() {
        return Err(CtError::Precondition("measurer outcomes do not match the observable".into()));
    }
    let dt = measurer.target_dim();
    // weights[k][j] = Tr(rho_{z_k} P_{x_j})
    let mut weights = Vec::new();
    for (l, a) in z.members() {
        let s = member_state(l, a)?;
        let w: Vec<f64> = projectors.iter().map(|p| s.expectation(p)).collect();
        let sharp = w.iter().any(|v| *v >= 1.0 - t);
        if !sharp && !is_generalised_mixture(a, x)?.verdict {
            return Err(CtError::Unsupported(format!(
                "member {l} is neither sharp in the observable nor a generalised mixture of it"
            )));
        }
        weights.push(w);
    }
    // Forced predictions for members sharp in X.
    let mut forced: Vec<Option<usize>> = vec![None; z.len()];
    for (k, w) in weights.iter().enumerate() {
        forced[k] = (0..w.len()).find(|&j| w[j] >= 1.0 - t);
    }
    let zl = z.labels();
    let xl = x.labels();
    for a in 0..z.len() {
        for b in 0..a {
            if let (Some(i), Some(j)) = (forced[a], forced[b]) {
                if i == j {
                    return Ok(impossible(PredictorCertificate::ForcedClash {
                        first: zl[b].to_string(),
                        second: zl[a].to_string(),
                        label: xl[i].to_string(),
                    }));
                }
            }
        }
    }
    for (k, w) in weights.iter().enumerate() {
        if forced[k].is_some() {
            continue;
        }
        let nz: Vec<usize> = (0..w.len()).filter(|&j| w[j] > t).collect();
        let taken: Vec<usize> = forced.iter().flatten().copied().collect();
        if nz.iter().all(|j| taken.contains(j)) {
            // p must be orthogonal to every forced prediction; take the first
            // such unit vector and evaluate the comparer on it.
            let forced_vecs: Vec<CVec> = taken.iter().map(|&j| targets[j].clone()).collect();
            let comp = linalg::completion(&forced_vecs, dt);
            let e = match comp.first() {
                Some(p) => nz.iter().map(|&j| w[j] * linalg::inner(&targets[j], p).norm_sqr()).sum::<f64>(),
                None => 0.0,
            };
            return Ok(impossible(PredictorCertificate::OrthogonalPrediction {
                member: zl[k].to_string(),
                forced: nz.iter().map(|&j| xl[j].to_string()).collect(),
                comparer_expectation: e,
            }));
        }
        // Cross-term constraints: for every outcome j with weight, the
        // prediction must have no component outside 'x_j'.
        let mut rows: Vec<CVec> = Vec::new();
        for &j in &nz {
            for v in linalg::completion(std::slice::from_ref(&targets[j]), dt) {
                rows.push(v.map(|c| c.conj()) * linalg::c(w[j].sqrt(), 0.0));
            }
        }
        let rank = linalg::rank(&rows);
        if rank >= dt {
            return Ok(impossible(PredictorCertificate::CrossTermInfeasible {
                member: zl[k].to_string(),
                weights: nz.iter().map(|&j| (xl[j].to_string(), w[j])).collect(),
                constraint_rank: rank,
                target_dim: dt,
            }));
        }
        return Err(CtError::Precondition(format!(
            "member {} has a single outcome but was not classified as sharp",
            zl[k]
        )));
    }
    let predictions: Vec<(Label, CVec)> =
        zl.iter().zip(&forced).map(|(l, f)| (l.clone(), targets[f.expect("all forced")].clone())).collect();
    let verdict = PredictorVerdict { status: PredictorStatus::Exists, predictions, certificate: None };
    if !replay_network(problem, &verdict)? {
        return Err(CtError::Precondition("forced predictions failed to replay".into()));
    }
    Ok(verdict)
}

fn impossible(c: PredictorCertificate) -> PredictorVerdict {
    PredictorVerdict { status: PredictorStatus::Impossible, predictions: vec![], certificate: Some(c) }
}

/// Run the network for every member with its prediction and report whether
/// the comparer answers sharp-yes each time.
pub fn replay_network(problem: &PredictorProblem, verdict: &PredictorVerdict) -> Result<bool> {
    if verdict.status != PredictorStatus::Exists {
        return Ok(false);
    }
    let m = &problem.measurer;
    let dt = m.target_dim();
    let targets: Vec<CVec> = m.declared().iter().map(|(_, v)| v.clone()).collect();
    let mut dims = m.joint_dims();
    dims.push(dt);
    let ns = m.source_dims().len();
    let comparer = build_comparer(&dims, ns, ns + 1, &targets, &targets)?;
    for (l, a) in problem.z.members() {
        let s = member_state(l, a)?;
        let (_, p) = verdict
            .predictions
            .iter()
            .find(|(pl, _)| pl == l)
            .ok_or_else(|| CtError::Precondition(format!("no prediction for {l}")))?;
        let pred = QState::Pure(PureState::from_vector(p.clone(), vec![dt])?);
        let joint = m.measure(&s)?.tensor(&pred);
        if comparer.compare(&joint)?.outcome != Comparison::SharpYes {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of running both the cloning oracle and the predictor analysis on
/// `Z = X_y ∪ {y}`.
#[derive(Debug, Clone)]
pub struct UnpredictabilityReport {
    pub z: Variable,
    /// Cloning verdict for each receptive candidate tried.
    pub cloning: Vec<(String, PossibilityVerdict)>,
    pub cloning_status: Status,
    pub predictor: PredictorVerdict,
}

impl UnpredictabilityReport {
    /// Both analyses rule out their constructor.
    pub fn both_impossible(&self) -> bool {
        self.cloning_status == Status::Impossible && self.predictor.status == PredictorStatus::Impossible
    }
}

/// Label used for `y` inside `Z`.
pub fn y_label() -> Label {
    Label::sym("y")
}

pub fn unpredictability_certificate(x: &Variable, y: &Attribute, model: &Model) -> Result<UnpredictabilityReport> {
    if !matches!(model, Model::Quantum(_)) {
        return Err(CtError::Unsupported("unpredictability certificates need the quantum backend".into()));
    }
    let xy = restricted_variable(x, y)?;
    if xy.len() < 2 {
        return Err(CtError::Degenerate(format!("{} is sharp in the observable; Z would be predictable", y.describe())));
    }
    let mut members: Vec<(Label, Attribute)> = xy.members().to_vec();
    members.push((y_label(), y.clone()));
    let z = validate_variable(members)?;
    let mut cloning = Vec::new();
    let mut cloning_status = Status::Impossible;
    let blank = Attribute::pure(
        z.substrate(),
        PureState::from_vector(linalg::basis_vector(z.substrate().size(), 0), z.substrate().atom_sizes())?,
    )?;
    let mut candidates: Vec<Attribute> = z.attributes().into_iter().cloned().collect();
    if !candidates.iter().any(|c| c.set_eq(&blank).unwrap_or(false)) {
        candidates.push(blank);
    }
    for x0 in &candidates {
        let v = is_task_possible(&cloning_task(&z, x0)?, model)?;
        match v.status {
            Status::Possible => cloning_status = Status::Possible,
            Status::Unknown if cloning_status == Status::Impossible => cloning_status = Status::Unknown,
            _ => {}
        }
        cloning.push((x0.describe(), v));
    }
    let predictor = predictor_feasible(&PredictorProblem::new(x.clone(), z.clone())?)?;
    Ok(UnpredictabilityReport { z, cloning, cloning_status, predictor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::SubstrateSpec;
    use std::sync::Arc;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn basis_var(sub: &Arc<SubstrateSpec>) -> Variable {
        let d = sub.size();
        validate_variable(
            (0..d).map(|k| (Label::int(k as i64), Attribute::pure(sub, PureState::basis(d, k)).unwrap())).collect(),
        )
        .unwrap()
    }

    fn var_of(sub: &Arc<SubstrateSpec>, states: Vec<(Label, PureState)>) -> Variable {
        validate_variable(states.into_iter().map(|(l, s)| (l, Attribute::pure(sub, s).unwrap())).collect()).unwrap()
    }

    #[test]
    fn sharp_members_are_predictable() {
        let q = SubstrateSpec::quantum("q", 2).unwrap();
        let x = basis_var(&q);
        let p = PredictorProblem::new(x.clone(), x).unwrap();
        let v = predictor_feasible(&p).unwrap();
        assert_eq!(v.status, PredictorStatus::Exists);
        assert!(replay_network(&p, &v).unwrap());
    }

    #[test]
    fn adding_plus_forces_orthogonal_prediction() {
        let q = SubstrateSpec::quantum("q", 2).unwrap();
        let x = basis_var(&q);
        let plus = PureState::from_real(&[S, S]).unwrap();
        let z = var_of(
            &q,
            vec![
                (Label::int(0), PureState::basis(2, 0)),
                (Label::int(1), PureState::basis(2, 1)),
                (Label::sym("+"), plus),
            ],
        );
        let v = predictor_feasible(&PredictorProblem::new(x, z).unwrap()).unwrap();
        assert_eq!(v.status, PredictorStatus::Impossible);
        match v.certificate.unwrap() {
            PredictorCertificate::OrthogonalPrediction { comparer_expectation, .. } => {
                assert!(comparer_expectation.abs() < 1e-12)
            }
            other => panic!("unexpected certificate {other:?}"),
        }
    }

    #[test]
    fn plus_alone_fails_on_cross_terms() {
        let q = SubstrateSpec::quantum("q", 2).unwrap();
        let x = basis_var(&q);
        let z = var_of(&q, vec![(Label::sym("+"), PureState::from_real(&[S, S]).unwrap())]);
        let v = predictor_feasible(&PredictorProblem::new(x, z).unwrap()).unwrap();
        assert!(matches!(v.certificate, Some(PredictorCertificate::CrossTermInfeasible { constraint_rank: 2, .. })));
    }

    #[test]
    fn certificate_for_plus_and_qutrit() {
        let m = Model::quantum();
        let q = SubstrateSpec::quantum("q", 2).unwrap();
        let y = Attribute::pure(&q, PureState::from_real(&[S, S]).unwrap()).unwrap();
        let r = unpredictability_certificate(&basis_var(&q), &y, &m).unwrap();
        assert!(r.both_impossible());
        let q3 = SubstrateSpec::quantum("q3", 3).unwrap();
        let y3 = Attribute::pure(&q3, PureState::from_real(&[S, 0.0, S]).unwrap()).unwrap();
        let r3 = unpredictability_certificate(&basis_var(&q3), &y3, &m).unwrap();
        assert!(r3.both_impossible());
        assert_eq!(r3.z.len(), 3);
    }

    #[test]
    fn sharp_y_is_degenerate() {
        let q = SubstrateSpec::quantum("q", 2).unwrap();
        let y = Attribute::pure(&q, PureState::basis(2, 0)).unwrap();
        assert!(matches!(
            unpredictability_certificate(&basis_var(&q), &y, &Model::quantum()),
            Err(CtError::Degenerate(_))
        ));
    }

    #[test]
    fn unrelated_state_is_unsupported() {
        let q3 = SubstrateSpec::quantum("q3", 3).unwrap();
        let x = var_of(&q3, vec![(Label::int(0), PureState::basis(3, 0)), (Label::int(1), PureState::basis(3, 1))]);
        let z = var_of(&q3, vec![(Label::sym("w"), PureState::from_real(&[S, 0.0, S]).unwrap())]);
        assert!(matches!(
            predictor_feasible(&PredictorProblem::new(x, z).unwrap()),
            Err(CtError::Unsupported(_))
        ));
    }
}
