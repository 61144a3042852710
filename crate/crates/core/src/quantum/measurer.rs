//! Non-perturbing measurers `|x>|r> -> |x>|o_x>` completed to unitaries.

use crate::error::{CtError, Result};
use crate::kernel::{Attribute, Variable};
use crate::label::Label;
use crate::linalg::{self, CMat, CVec};
use crate::state::{PureState, QState};
use crate::tolerance::tol;

/// Largest joint source ⊗ target dimension for which a measurer is built.
pub const MEASURER_DIM_GUARD: usize = 1024;

/// Where each member's outcome is written on the target.
#[derive(Debug, Clone, PartialEq)]
pub struct Labeling {
    pub target_dim: usize,
    /// Target vector for each member of the measured variable, in member order.
    pub targets: Vec<CVec>,
    /// Receptive state of the target.
    pub receptive: CVec,
}

impl Labeling {
    /// Member `k` writes `|k>` into a target of dimension `target_dim`; receptive `|0>`.
    pub fn standard(members: usize, target_dim: usize) -> Result<Self> {
        if target_dim < members {
            return Err(CtError::Precondition(format!(
                "target dimension {target_dim} is smaller than the {members} outcomes"
            )));
        }
        Ok(Labeling {
            target_dim,
            targets: (0..members).map(|k| linalg::basis_vector(target_dim, k)).collect(),
            receptive: linalg::basis_vector(target_dim, 0),
        })
    }

    /// Member `k` writes `|slots[k]>`.
    pub fn slots(slots: &[usize], target_dim: usize) -> Result<Self> {
        if slots.iter().any(|&s| s >= target_dim) {
            return Err(CtError::Precondition("slot outside target dimension".into()));
        }
        Ok(Labeling {
            target_dim,
            targets: slots.iter().map(|&k| linalg::basis_vector(target_dim, k)).collect(),
            receptive: linalg::basis_vector(target_dim, 0),
        })
    }
}

/// One branch of the measurement: a source basis vector and the outcome it writes.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub label: Label,
    pub source: CVec,
    pub target: CVec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurerSpec {
    source_dims: Vec<usize>,
    target_dim: usize,
    branches: Vec<Branch>,
    receptive: CVec,
    /// Read-out declaration: which target vector means which label.
    declared: Vec<(Label, CVec)>,
    unitary: CMat,
}

/// Measurer of a variable whose members have mutually orthogonal spans.
/// Each member's span is enumerated into an orthonormal basis; all basis
/// vectors of one member write the same outcome.
pub fn build_measurer(x: &Variable, labeling: &Labeling) -> Result<MeasurerSpec> {
    if labeling.targets.len() != x.len() {
        return Err(CtError::Precondition(format!(
            "labeling has {} targets for {} members",
            labeling.targets.len(),
            x.len()
        )));
    }
    let mut branches = Vec::new();
    for ((label, attr), target) in x.members().iter().zip(&labeling.targets) {
        for v in attr.span_basis()? {
            branches.push(Branch { label: label.clone(), source: v, target: target.clone() });
        }
    }
    let declared = x.labels().into_iter().zip(labeling.targets.iter().cloned()).collect();
    MeasurerSpec::from_branches(
        x.substrate().atom_sizes(),
        labeling.target_dim,
        branches,
        labeling.receptive.clone(),
        declared,
    )
}

impl MeasurerSpec {
    pub fn from_branches(
        source_dims: Vec<usize>,
        target_dim: usize,
        branches: Vec<Branch>,
        receptive: CVec,
        declared: Vec<(Label, CVec)>,
    ) -> Result<Self> {
        let ds: usize = source_dims.iter().product();
        let joint = ds * target_dim;
        if joint > MEASURER_DIM_GUARD {
            return Err(CtError::Size(format!("measurer dimension {joint} exceeds {MEASURER_DIM_GUARD}")));
        }
        let t = tol();
        for (i, b) in branches.iter().enumerate() {
            if b.source.len() != ds || b.target.len() != target_dim {
                return Err(CtError::DimensionMismatch { expected: ds, found: b.source.len() });
            }
            for a in &branches[..i] {
                if linalg::inner(&a.source, &b.source).norm() > t {
                    return Err(CtError::NotMeasurable(format!(
                        "source states for `{}` and `{}` are not orthogonal (overlap {:.6})",
                        a.label,
                        b.label,
                        linalg::inner(&a.source, &b.source).norm()
                    )));
                }
                let overlap = linalg::inner(&a.target, &b.target).norm();
                let ok = if a.label == b.label { (overlap - 1.0).abs() <= t } else { overlap <= t };
                if !ok {
                    return Err(CtError::NotMeasurable(format!(
                        "outcomes for `{}` and `{}` are not distinguishable on the target",
                        a.label, b.label
                    )));
                }
            }
        }
        let inputs: Vec<CVec> = branches.iter().map(|b| linalg::kron_vec(&b.source, &receptive)).collect();
        let outputs: Vec<CVec> = branches.iter().map(|b| linalg::kron_vec(&b.source, &b.target)).collect();
        let unitary = linalg::extend_to_unitary(&inputs, &outputs, joint)?;
        Ok(MeasurerSpec { source_dims, target_dim, branches, receptive, declared, unitary })
    }

    /// Same physical device with a different read-out declaration.
    pub fn declare_labels(mut self, declared: Vec<(Label, CVec)>) -> Self {
        self.declared = declared;
        self
    }

    pub fn source_dim(&self) -> usize {
        self.source_dims.iter().product()
    }

    pub fn source_dims(&self) -> &[usize] {
        &self.source_dims
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    /// Factor dimensions of the joint system: source factors then target.
    pub fn joint_dims(&self) -> Vec<usize> {
        let mut d = self.source_dims.clone();
        d.push(self.target_dim);
        d
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn receptive(&self) -> &CVec {
        &self.receptive
    }

    pub fn declared(&self) -> &[(Label, CVec)] {
        &self.declared
    }

    pub fn unitary(&self) -> &CMat {
        &self.unitary
    }

    pub fn receptive_state(&self) -> PureState {
        PureState::from_vector(self.receptive.clone(), vec![self.target_dim]).expect("unit receptive vector")
    }

    /// Whether a joint state has the target in the receptive state.
    pub fn is_receptive(&self, joint: &QState) -> bool {
        let p_r = linalg::outer(&self.receptive, &self.receptive);
        let op = linalg::kron(&linalg::identity(self.source_dim()), &p_r);
        joint.expectation(&op) >= 1.0 - tol()
    }

    /// Prepare the target in its receptive state next to `source`, then measure.
    pub fn measure(&self, source: &QState) -> Result<QState> {
        let joint = source.tensor(&QState::Pure(self.receptive_state()));
        self.apply(&joint)
    }

    /// Apply the measurer to a joint source ⊗ target state.
    pub fn apply(&self, joint: &QState) -> Result<QState> {
        let d = self.source_dim() * self.target_dim;
        if joint.dim() != d {
            return Err(CtError::DimensionMismatch { expected: d, found: joint.dim() });
        }
        if !self.is_receptive(joint) {
            return Err(CtError::Precondition("target is not in the receptive state".into()));
        }
        let dims = self.joint_dims();
        Ok(match joint.apply(&self.unitary)? {
            QState::Pure(p) => QState::Pure(p.regroup(dims)?),
            QState::Mixed(m) => QState::Mixed(m.regroup(dims)?),
        })
    }

    /// Projector onto a target vector, lifted to the joint system.
    fn target_projector(&self, v: &CVec) -> CMat {
        linalg::kron(&linalg::identity(self.source_dim()), &linalg::outer(v, v))
    }

    /// Probability weight of each declared outcome in a joint state.
    pub fn outcome_weights(&self, joint: &QState) -> Vec<(Label, f64)> {
        self.declared.iter().map(|(l, v)| (l.clone(), joint.expectation(&self.target_projector(v)))).collect()
    }

    /// The declared outcome on which the target is sharp, if any.
    pub fn sharp_outcome(&self, joint: &QState) -> Option<Label> {
        let t = tol();
        self.outcome_weights(joint).into_iter().find(|(_, w)| *w >= 1.0 - t).map(|(l, _)| l)
    }

    /// Whether this device physically measures `z`: every state spanned by a
    /// member writes one target vector, and distinct members write
    /// orthogonal target vectors.
    pub fn measures(&self, z: &Variable) -> Result<bool> {
        if z.substrate().size() != self.source_dim() {
            return Ok(false);
        }
        let t = 1e-7;
        let r = self.receptive_state();
        let mut member_targets: Vec<CVec> = Vec::new();
        for (_, attr) in z.members() {
            let mut target: Option<CVec> = None;
            for v in attr.span_basis()? {
                let src = PureState::from_vector(v.clone(), vec![v.len()])?;
                let out = &self.unitary * linalg::kron_vec(src.vector(), r.vector());
                // Read the target by projecting onto v ⊗ C^dt.
                let dt = self.target_dim;
                let mut tv = CVec::zeros(dt);
                for k in 0..dt {
                    let probe = linalg::kron_vec(&v, &linalg::basis_vector(dt, k));
                    tv[k] = linalg::inner(&probe, &out);
                }
                if (tv.norm() - 1.0).abs() > t {
                    return Ok(false);
                }
                match &target {
                    None => target = Some(tv),
                    Some(prev) => {
                        if (linalg::inner(prev, &tv).norm() - 1.0).abs() > t {
                            return Ok(false);
                        }
                    }
                }
            }
            let Some(tv) = target else { return Ok(false) };
            if member_targets.iter().any(|p| linalg::inner(p, &tv).norm() > t) {
                return Ok(false);
            }
            member_targets.push(tv);
        }
        Ok(true)
    }

    /// Output variable on the target substrate (declared labels).
    pub fn output_variable(
        &self,
        target: &std::sync::Arc<crate::kernel::SubstrateSpec>,
    ) -> Result<Variable> {
        let members = self
            .declared
            .iter()
            .map(|(l, v)| {
                let p = PureState::from_vector(v.clone(), vec![self.target_dim])?;
                Ok((l.clone(), Attribute::pure(target, p)?))
            })
            .collect::<Result<Vec<_>>>()?;
        crate::kernel::validate_variable(members)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{validate_variable, SubstrateSpec};
    use crate::linalg::c;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn basis_variable(d: usize) -> Variable {
        let q = SubstrateSpec::quantum("q", d).unwrap();
        validate_variable(
            (0..d)
                .map(|k| (Label::int(k as i64), Attribute::pure(&q, PureState::basis(d, k)).unwrap()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn computational_measurer_entangles() {
        let x = basis_variable(2);
        let m = build_measurer(&x, &Labeling::standard(2, 2).unwrap()).unwrap();
        let (a, b) = (0.6, 0.8);
        let src = QState::Pure(PureState::from_real(&[a, b]).unwrap());
        let out = m.measure(&src).unwrap();
        let want = PureState::from_real(&[a, 0.0, 0.0, b]).unwrap();
        assert!(out.same_state(&QState::Pure(want)));
        let sharp = m.measure(&QState::Pure(PureState::basis(2, 1))).unwrap();
        assert_eq!(m.sharp_outcome(&sharp), Some(Label::int(1)));
        assert!(m.measures(&x).unwrap());
    }

    #[test]
    fn hadamard_measurer_on_zero() {
        let q = SubstrateSpec::quantum("q", 2).unwrap();
        let plus = PureState::from_real(&[S, S]).unwrap();
        let minus = PureState::from_real(&[S, -S]).unwrap();
        let y = validate_variable(vec![
            (Label::sym("+"), Attribute::pure(&q, plus.clone()).unwrap()),
            (Label::sym("-"), Attribute::pure(&q, minus.clone()).unwrap()),
        ])
        .unwrap();
        let m = build_measurer(&y, &Labeling::standard(2, 2).unwrap()).unwrap();
        let out = m.measure(&QState::Pure(PureState::basis(2, 0))).unwrap();
        let want = PureState::superpose(
            &[&plus.tensor(&PureState::basis(2, 0)), &minus.tensor(&PureState::basis(2, 1))],
            &[c(S, 0.0), c(S, 0.0)],
        )
        .unwrap();
        assert!(out.same_state(&QState::Pure(want)));
    }

    #[test]
    fn non_orthogonal_variable_is_not_measurable() {
        let q = SubstrateSpec::quantum("q", 2).unwrap();
        let x = validate_variable(vec![
            (Label::int(0), Attribute::pure(&q, PureState::basis(2, 0)).unwrap()),
            (Label::int(1), Attribute::pure(&q, PureState::from_real(&[S, S]).unwrap()).unwrap()),
        ])
        .unwrap();
        assert!(matches!(
            build_measurer(&x, &Labeling::standard(2, 2).unwrap()),
            Err(CtError::NotMeasurable(_))
        ));
    }

    #[test]
    fn non_receptive_target_rejected() {
        let x = basis_variable(2);
        let m = build_measurer(&x, &Labeling::standard(2, 2).unwrap()).unwrap();
        let joint = QState::Pure(PureState::basis(2, 0).tensor(&PureState::basis(2, 1)));
        assert!(matches!(m.apply(&joint), Err(CtError::Precondition(_))));
    }
}
