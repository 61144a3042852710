//! Checks whether a pair of observables supports decisions in games of chance.

use num_rational::BigRational;
use serde::Serialize;

use crate::ensembles::{partition_of_unity, verify_e1_e2};
use crate::error::{CtError, Result};
use crate::kernel::{coarsen_variable, validate_variable, Attribute, Coarsening, Kind, Model, Variable};
use crate::label::Label;
use crate::linalg::{self, c, CMat, CVec};
use crate::predicates::{detect_superinformation, is_generalised_mixture};
use crate::quantum::{build_measurer, permutation_computation, LabelPermutation, Labeling};
use crate::state::{PureState, QState};

pub const NO_COMPLEMENTARY: &str = "no complementary observables";

/// N-sweep used for the convergence part of T1.
pub const T1_SWEEP: [usize; 5] = [10, 20, 50, 100, 200];
pub const T1_BOUND: f64 = 0.005;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionVerdict {
    pub condition: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionSupportReport {
    pub complementary: bool,
    pub conditions: Vec<ConditionVerdict>,
    /// `‖(|x1x1> + |x2x2>)/√2 − (|y+y+> + |y-y->)/√2‖` for the chosen pair.
    pub doubling_residual: Option<f64>,
    /// Labels of `x1, x2, y+, y-`.
    pub pair: Option<[String; 4]>,
    pub reason: Option<String>,
}

impl DecisionSupportReport {
    pub fn pass(&self) -> bool {
        self.complementary && self.conditions.iter().all(|c| c.pass)
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionVerdict> {
        self.conditions.iter().find(|c| c.condition == name)
    }

    fn failed(reason: &str) -> Self {
        let conditions = ["T1", "R1", "R2", "R3", "R4"]
            .iter()
            .map(|n| ConditionVerdict { condition: n.to_string(), pass: false, detail: reason.to_string() })
            .collect();
        DecisionSupportReport {
            complementary: false,
            conditions,
            doubling_residual: None,
            pair: None,
            reason: Some(reason.to_string()),
        }
    }
}

fn verdict(name: &str, pass: bool, detail: impl Into<String>) -> ConditionVerdict {
    ConditionVerdict { condition: name.into(), pass, detail: detail.into() }
}

fn single_pure(a: &Attribute) -> Option<PureState> {
    a.single_state().and_then(|s| s.to_pure())
}

/// Swap of two orthonormal vectors, identity elsewhere.
fn swap_unitary(u: &CVec, v: &CVec) -> Result<CMat> {
    let ls = [Label::int(0), Label::int(1)];
    let pi = LabelPermutation::transposition(&ls, &ls[0], &ls[1])?;
    permutation_computation(&pi, &ls, &[u.clone(), v.clone()])
}

/// Non-trivial generalised mixture: also disjoint from every member.
fn nontrivial_mixture(z: &Attribute, h: &Variable) -> Result<bool> {
    Ok(is_generalised_mixture(z, h)?.verdict && h.attributes().iter().all(|a| z.is_disjoint(a).unwrap_or(false)))
}

pub fn check_decision_support(model: &Model, x: &Variable, y: &Variable) -> Result<DecisionSupportReport> {
    if x.substrate().kind() == Kind::Classical || model.kind() == Kind::Classical {
        return Ok(DecisionSupportReport::failed(NO_COMPLEMENTARY));
    }
    let complementary = detect_superinformation(x, y, model)?.verdict;
    if x.len() < 2 || y.len() < 2 {
        let mut r = DecisionSupportReport::failed("observables need at least two members");
        r.complementary = complementary;
        return Ok(r);
    }
    let xs: Vec<Option<PureState>> = x.attributes().iter().map(|a| single_pure(a)).collect();
    let ys: Vec<Option<PureState>> = y.attributes().iter().map(|a| single_pure(a)).collect();

    // Choose x1, x2, y+, y- passing R1, or the first pair if none does.
    let mut chosen: Option<(usize, usize, usize, usize)> = None;
    let mut r1 = false;
    'search: for i in 0..x.len() {
        for j in i + 1..x.len() {
            for k in 0..y.len() {
                for l in k + 1..y.len() {
                    if [i, j].iter().any(|&t| xs[t].is_none()) || [k, l].iter().any(|&t| ys[t].is_none()) {
                        continue;
                    }
                    let xt = validate_variable(vec![x.members()[i].clone(), x.members()[j].clone()])?;
                    let yt = validate_variable(vec![y.members()[k].clone(), y.members()[l].clone()])?;
                    let ok = nontrivial_mixture(&x.members()[i].1, &yt)?
                        && nontrivial_mixture(&x.members()[j].1, &yt)?
                        && nontrivial_mixture(&y.members()[k].1, &xt)?
                        && nontrivial_mixture(&y.members()[l].1, &xt)?;
                    if chosen.is_none() || ok {
                        chosen = Some((i, j, k, l));
                        r1 = ok;
                    }
                    if ok {
                        break 'search;
                    }
                }
            }
        }
    }
    let Some((i, j, k, l)) = chosen else {
        let mut r = DecisionSupportReport::failed("members must be single pure states");
        r.complementary = complementary;
        return Ok(r);
    };
    let r1_detail = if r1 { "non-trivial mixtures both ways" } else { "no pair of non-trivial mixtures" };
    let (x1, x2) = (xs[i].clone().expect("pure"), xs[j].clone().expect("pure"));
    let (yp, ym) = (ys[k].clone().expect("pure"), ys[l].clone().expect("pure"));
    let names = [
        x.members()[i].0.to_string(),
        x.members()[j].0.to_string(),
        y.members()[k].0.to_string(),
        y.members()[l].0.to_string(),
    ];
    let mut conditions = Vec::new();

    // T1: partitions of unity on S and on the doubled substrate.
    let t1 = t1_check(x, &yp)?;
    conditions.push(t1);
    conditions.push(verdict("R1", r1, format!("({}, {}) vs ({}, {}): {r1_detail}", names[0], names[1], names[2], names[3])));

    // R2: swap invariances.
    let sx = swap_unitary(x1.vector(), x2.vector()).ok();
    let sy = swap_unitary(yp.vector(), ym.vector()).ok();
    let r2 = match (&sx, &sy) {
        (Some(sx), Some(sy)) => {
            yp.apply(sx)?.same_ray(&yp)
                && ym.apply(sx)?.same_ray(&ym)
                && x1.apply(sy)?.same_ray(&x1)
                && x2.apply(sy)?.same_ray(&x2)
        }
        _ => false,
    };
    conditions.push(verdict("R2", r2, if r2 { "swaps leave y± and x_i invariant" } else { "swap invariance fails" }));

    // R3: equal intrinsic parts after measuring X.
    let r3 = match build_measurer(x, &Labeling::standard(x.len(), x.len().max(2))?) {
        Ok(m) => {
            let ns = m.source_dims().len();
            let keep: Vec<usize> = (0..ns).collect();
            let ap = m.measure(&QState::Pure(yp.clone()))?.density().reduce(&keep)?;
            let am = m.measure(&QState::Pure(ym.clone()))?.density().reduce(&keep)?;
            let same = ap.approx_eq(&am);
            let inv = sx.as_ref().is_some_and(|s| ap.apply(s).map(|r| r.approx_eq(&ap)).unwrap_or(false));
            (same && inv, format!("equal intrinsic parts: {same}; swap invariant: {inv}"))
        }
        Err(e) => (false, format!("no measurer: {e}")),
    };
    conditions.push(verdict("R3", r3.0, r3.1));

    // R4: q as the two-register state with the doubling identity.
    let (r4, r4_detail, residual) = r4_check(x, y, (i, j, k, l), [&x1, &x2, &yp, &ym], sx.as_ref(), sy.as_ref())?;
    conditions.push(verdict("R4", r4, r4_detail));

    let mut report = DecisionSupportReport {
        complementary,
        conditions,
        doubling_residual: Some(residual),
        pair: Some(names),
        reason: None,
    };
    report.reason = if !complementary {
        Some(NO_COMPLEMENTARY.into())
    } else {
        report.conditions.iter().find(|c| !c.pass).map(|c| format!("{} fails: {}", c.condition, c.detail))
    };
    Ok(report)
}

/// Observable with labels replaced by member positions when they are not numeric.
fn numeric(x: &Variable) -> Result<Variable> {
    if x.numeric_labels().is_ok() {
        return Ok(x.clone());
    }
    let labels = x.labels();
    x.relabel(|l| Ok(Label::int(labels.iter().position(|m| m == l).expect("own label") as i64)))
}

fn t1_check(x: &Variable, yp: &PureState) -> Result<ConditionVerdict> {
    let xn = numeric(x)?;
    let eps = BigRational::new(1.into(), 50.into());
    let z = QState::Pure(yp.clone());
    let single = match verify_e1_e2(&z, &xn, &T1_SWEEP, &eps, T1_BOUND) {
        Ok(rep) => rep.pass(),
        Err(CtError::Domain(_)) => false,
        Err(e) => return Err(e),
    };
    let doubled = coarsen_variable(&xn, &xn, Coarsening::Sum)?;
    let zz = QState::Pure(yp.tensor(yp));
    let pair = match partition_of_unity(&zz, &doubled) {
        Ok(p) => (p.values().iter().sum::<f64>() - 1.0).abs() <= 1e-12,
        Err(CtError::Domain(_)) => false,
        Err(e) => return Err(e),
    };
    Ok(verdict(
        "T1",
        single && pair,
        format!("X-partition converges on y+: {single}; X_a+X_b partition of (y+, y+) exists: {pair}"),
    ))
}

type R4 = (bool, String, f64);

fn r4_check(
    x: &Variable,
    y: &Variable,
    (i, j, k, l): (usize, usize, usize, usize),
    [x1, x2, yp, ym]: [&PureState; 4],
    sx: Option<&CMat>,
    sy: Option<&CMat>,
) -> Result<R4> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let xx = |a: &PureState, b: &PureState, phase: CVec| -> Result<PureState> {
        PureState::superpose(&[&a.tensor(a), &b.tensor(b)], &[c(s, 0.0) * phase[0], c(s, 0.0) * phase[1]])
    };
    let phases: Vec<CVec> = [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]
        .iter()
        .map(|p| CVec::from_vec(vec![c(1.0, 0.0), *p]))
        .collect();
    let lhs0 = xx(x1, x2, phases[0].clone())?;
    let rhs0 = xx(yp, ym, phases[0].clone())?;
    let residual = (lhs0.vector() - rhs0.vector()).norm();
    let mut found: Option<PureState> = None;
    'outer: for p in &phases {
        let q = xx(x1, x2, p.clone())?;
        for t in &phases {
            if q.same_ray(&xx(yp, ym, t.clone())?) {
                found = Some(q);
                break 'outer;
            }
        }
    }
    let Some(q) = found else {
        return Ok((false, format!("no doubled state shared by both pairs (residual {residual:.3e})"), residual));
    };
    let sub = crate::kernel::compose_substrates(x.substrate(), x.substrate())?;
    let q_attr = Attribute::pure(&sub, q.regroup(sub.atom_sizes())?)?;
    let diag = |v: &Variable, a: usize, b: usize| -> Result<Variable> {
        validate_variable(vec![
            (Label::sym("aa"), v.members()[a].1.product(&v.members()[a].1)?),
            (Label::sym("bb"), v.members()[b].1.product(&v.members()[b].1)?),
        ])
    };
    let s_x = diag(x, i, j)?;
    let s_y = diag(y, k, l)?;
    let mix_x = nontrivial_mixture(&q_attr, &s_x)?;
    let mix_y = nontrivial_mixture(&q_attr, &s_y)?;
    let parallel = |u: Option<&CMat>| u.is_some_and(|u| q.apply(&linalg::kron(u, u)).map(|r| r.same_ray(&q)).unwrap_or(false));
    let (inv_x, inv_y) = (parallel(sx), parallel(sy));
    let pass = mix_x && mix_y && inv_x && inv_y;
    Ok((
        pass,
        format!(
            "identity residual {residual:.3e}; mixture of S_x: {mix_x}, of S_y: {mix_y}; parallel swap invariant: {inv_x}, {inv_y}"
        ),
        residual,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::ClassicalModel;
    use crate::kernel::SubstrateSpec;
    use crate::quantum::QuantumModel;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn var(sub: &std::sync::Arc<SubstrateSpec>, states: &[(i64, [f64; 2])]) -> Variable {
        validate_variable(
            states
                .iter()
                .map(|(l, a)| (Label::int(*l), Attribute::pure(sub, PureState::from_real(a).unwrap()).unwrap()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn qubit_supports_decisions() {
        let sub = SubstrateSpec::quantum("q", 2).unwrap();
        let x = var(&sub, &[(0, [1.0, 0.0]), (1, [0.0, 1.0])]);
        let y = var(&sub, &[(1, [S, S]), (-1, [S, -S])]);
        let r = check_decision_support(&Model::Quantum(QuantumModel::default()), &x, &y).unwrap();
        assert!(r.pass(), "{r:#?}");
        assert!(r.doubling_residual.unwrap() < 1e-9);
    }

    #[test]
    fn degenerate_pair_fails_r1() {
        let sub = SubstrateSpec::quantum("q", 2).unwrap();
        let x = var(&sub, &[(0, [1.0, 0.0]), (1, [0.0, 1.0])]);
        let r = check_decision_support(&Model::Quantum(QuantumModel::default()), &x, &x).unwrap();
        assert!(!r.pass());
        assert!(!r.condition("R1").unwrap().pass);
    }

    #[test]
    fn classical_bit_fails() {
        let bit = SubstrateSpec::classical("bit", vec!["0", "1"]).unwrap();
        let x = validate_variable(vec![
            (Label::int(0), Attribute::labelled(&bit, &["0"]).unwrap()),
            (Label::int(1), Attribute::labelled(&bit, &["1"]).unwrap()),
        ])
        .unwrap();
        let r = check_decision_support(&Model::Classical(ClassicalModel::default()), &x, &x).unwrap();
        assert!(!r.pass());
        assert_eq!(r.reason.as_deref(), Some(NO_COMPLEMENTARY));
    }
}
