//! Information-theoretic predicates on variables: computation and information
//! variables, distinguishability, measurability, the bar operation,
//! observables, superinformation, generalised mixtures and measurement
//! consistency.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{CtError, Result};
use crate::kernel::{
    compose_substrates, is_task_possible, validate_variable, Attribute, Kind, Model, PossibilityVerdict, Repr,
    Status, SubstrateSpec, Task, Variable,
};
use crate::label::Label;
use crate::linalg::{self, CVec};
use crate::quantum::MeasurerSpec;
use crate::state::{PureState, QState};
use crate::tolerance::tol;

/// One piece of supporting evidence for a predicate verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub item: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<Status>,
    pub detail: String,
}

impl Evidence {
    pub fn note(item: impl Into<String>, detail: impl Into<String>) -> Self {
        Evidence { item: item.into(), status: None, detail: detail.into() }
    }

    pub fn verdict(item: impl Into<String>, v: &PossibilityVerdict) -> Self {
        Evidence { item: item.into(), status: Some(v.status), detail: v.reason() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredicateReport {
    pub predicate: String,
    pub subject: String,
    pub verdict: bool,
    pub evidence: Vec<Evidence>,
}

impl PredicateReport {
    fn new(predicate: &str, subject: impl Into<String>, verdict: bool, evidence: Vec<Evidence>) -> Self {
        PredicateReport { predicate: predicate.into(), subject: subject.into(), verdict, evidence }
    }
}

fn describe_variable(v: &Variable) -> String {
    let parts: Vec<String> = v.members().iter().map(|(l, a)| format!("{l}={}", a.describe())).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Attribute in a form the possibility oracles accept.
fn oracle_form(a: &Attribute) -> Result<Attribute> {
    a.enumerate_basis()
}

/// Task `{x -> Π(x)}` for a permutation of the member indices.
fn permutation_task(v: &Variable, image: &[usize]) -> Result<Task> {
    let attrs: Vec<Attribute> = v.attributes().into_iter().map(oracle_form).collect::<Result<_>>()?;
    let pairs = (0..attrs.len()).map(|i| (attrs[i].clone(), attrs[image[i]].clone())).collect();
    Task::new(v.substrate(), pairs, true)
}

/// True iff every permutation of the labels is a possible task. Adjacent
/// transpositions generate the symmetric group, so only those are checked.
pub fn is_computation_variable(v: &Variable, model: &Model) -> Result<PredicateReport> {
    let n = v.len();
    let labels = v.labels();
    let mut evidence = Vec::new();
    let mut ok = true;
    if n == 1 {
        evidence.push(Evidence::note("permutations", "single member: only the identity"));
    }
    for i in 0..n.saturating_sub(1) {
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(i, i + 1);
        let task = permutation_task(v, &image)?;
        let verdict = is_task_possible(&task, model)?;
        ok &= verdict.is_possible();
        evidence.push(Evidence::verdict(format!("swap {} <-> {}", labels[i], labels[i + 1]), &verdict));
    }
    Ok(PredicateReport::new("computation variable", describe_variable(v), ok, evidence))
}

/// Blank receptive state used alongside the members as cloning candidates.
fn blank_attribute(sub: &Arc<SubstrateSpec>) -> Result<Attribute> {
    match sub.kind() {
        Kind::Classical => Attribute::points(sub, vec![0]),
        Kind::Quantum => {
            let dims = sub.atom_sizes();
            let v = linalg::basis_vector(sub.size(), 0);
            Attribute::pure(sub, PureState::from_vector(v, dims)?)
        }
    }
    .map(|a| a.with_name("blank"))
}

/// The cloning task `{(x, x0) -> (x, x)}` on `S ⊕ S`.
pub fn cloning_task(v: &Variable, x0: &Attribute) -> Result<Task> {
    let sub = compose_substrates(v.substrate(), v.substrate())?;
    let x0 = oracle_form(x0)?;
    let mut pairs = Vec::new();
    for a in v.attributes() {
        let a = oracle_form(a)?;
        pairs.push((a.product(&x0)?, a.product(&a)?));
    }
    Task::new(&sub, pairs, true)
}

/// Computation variable whose cloning task is possible for some receptive
/// attribute (members of the variable and a blank state are tried).
pub fn is_information_variable(v: &Variable, model: &Model) -> Result<PredicateReport> {
    let comp = is_computation_variable(v, model)?;
    let mut evidence = comp.evidence.clone();
    if !comp.verdict {
        evidence.push(Evidence::note("cloning", "not attempted: not a computation variable"));
        return Ok(PredicateReport::new("information variable", describe_variable(v), false, evidence));
    }
    let mut candidates: Vec<Attribute> = v.attributes().into_iter().cloned().collect();
    let blank = blank_attribute(v.substrate())?;
    if !candidates.iter().any(|c| c.set_eq(&blank).unwrap_or(false)) {
        candidates.push(blank);
    }
    let mut cloned = false;
    for x0 in &candidates {
        let task = cloning_task(v, x0)?;
        let verdict = is_task_possible(&task, model)?;
        evidence.push(Evidence::verdict(format!("clone with receptive {}", x0.describe()), &verdict));
        if verdict.is_possible() {
            cloned = true;
            break;
        }
    }
    Ok(PredicateReport::new("information variable", describe_variable(v), cloned, evidence))
}

fn target_substrate(v: &Variable) -> Result<Arc<SubstrateSpec>> {
    let n = v.len();
    match v.substrate().kind() {
        Kind::Classical => SubstrateSpec::classical("target", v.labels().iter().map(|l| l.to_string()).collect()),
        Kind::Quantum => SubstrateSpec::quantum("target", n),
    }
}

fn target_attribute(t: &Arc<SubstrateSpec>, k: usize) -> Result<Attribute> {
    match t.kind() {
        Kind::Classical => Attribute::points(t, vec![k]),
        Kind::Quantum => Attribute::pure(t, PureState::basis(t.size(), k)),
    }
}

/// The non-perturbing measurement task `{(x, '0') -> (x, 'x')}` into a fresh
/// target with one state per member.
pub fn measurement_task(v: &Variable) -> Result<Task> {
    let t = target_substrate(v)?;
    let sub = compose_substrates(v.substrate(), &t)?;
    let receptive = target_attribute(&t, 0)?;
    let mut pairs = Vec::new();
    for (k, a) in v.attributes().into_iter().enumerate() {
        let a = oracle_form(a)?;
        pairs.push((a.product(&receptive)?, a.product(&target_attribute(&t, k)?)?));
    }
    Task::new(&sub, pairs, true)
}

/// Distinguishability decided by the possibility oracle: the task of writing
/// each member's label into a fresh target, i.e. into the information
/// variable `{(x, 'x')}`.
pub fn is_distinguishable_by_task(v: &Variable, model: &Model) -> Result<PredicateReport> {
    let task = measurement_task(v)?;
    let verdict = is_task_possible(&task, model)?;
    Ok(PredicateReport::new(
        "distinguishable",
        describe_variable(v),
        verdict.is_possible(),
        vec![Evidence::verdict("label-writing task", &verdict)],
    ))
}

/// Distinguishability. The quantum backend uses pairwise orthogonality of
/// the members' spans, which agrees with the task oracle (see tests).
pub fn is_distinguishable(v: &Variable, model: &Model) -> Result<PredicateReport> {
    match model {
        Model::Classical(_) => is_distinguishable_by_task(v, model),
        Model::Quantum(_) => {
            let spans: Vec<Vec<CVec>> = v.attributes().iter().map(|a| a.span_basis()).collect::<Result<_>>()?;
            let labels = v.labels();
            let t = tol();
            let mut evidence = Vec::new();
            let mut ok = true;
            for i in 0..spans.len() {
                for j in 0..i {
                    let worst = spans[i]
                        .iter()
                        .flat_map(|a| spans[j].iter().map(move |b| linalg::inner(a, b).norm()))
                        .fold(0.0f64, f64::max);
                    if worst > t {
                        ok = false;
                        evidence.push(Evidence::note(
                            format!("{} vs {}", labels[j], labels[i]),
                            format!("overlap {worst:.6} exceeds tolerance"),
                        ));
                    }
                }
            }
            if ok {
                evidence.push(Evidence::note("orthogonality", "all members pairwise orthogonal"));
            }
            Ok(PredicateReport::new("distinguishable", describe_variable(v), ok, evidence))
        }
    }
}

/// Measurability. With `non_perturbing` the source must stay in its input
/// attribute; otherwise any distinguishing measurement qualifies.
pub fn is_measurable(v: &Variable, model: &Model, non_perturbing: bool) -> Result<PredicateReport> {
    if !non_perturbing {
        let mut r = is_distinguishable_by_task(v, model)?;
        r.predicate = "measurable".into();
        return Ok(r);
    }
    let task = measurement_task(v)?;
    let verdict = is_task_possible(&task, model)?;
    Ok(PredicateReport::new(
        "measurable (non-perturbing)",
        describe_variable(v),
        verdict.is_possible(),
        vec![Evidence::verdict("measurement task", &verdict)],
    ))
}

/// Everything distinguishable from `x`: the orthogonal complement of its span
/// (quantum) or the set complement (classical).
pub fn bar(x: &Attribute) -> Result<Attribute> {
    let sub = x.substrate();
    match x.repr() {
        Repr::Points(p) => {
            let rest: Vec<usize> = (0..sub.size()).filter(|i| !p.contains(i)).collect();
            if rest.is_empty() {
                return Err(CtError::Degenerate("complement of the whole state space is empty".into()));
            }
            Attribute::points(sub, rest)
        }
        _ => {
            let basis = x.span_basis()?;
            Attribute::subspace(sub, linalg::completion(&basis, sub.size()))
        }
    }
}

/// Span closure of a single attribute (classical: the attribute itself).
pub fn double_bar(x: &Attribute) -> Result<Attribute> {
    match x.repr() {
        Repr::Points(_) => Ok(x.clone()),
        _ => Attribute::subspace(x.substrate(), x.span_basis()?),
    }
}

/// `bar(bar(u_X))`: the subspace spanned by all members.
pub fn span_closure(v: &Variable) -> Result<Attribute> {
    let u = v.union()?;
    double_bar(&u)
}

/// Every member equals its own span closure.
pub fn is_observable(v: &Variable) -> Result<PredicateReport> {
    let mut ok = true;
    let mut evidence = Vec::new();
    for (l, a) in v.members() {
        let closed = a.set_eq(&double_bar(a)?)?;
        ok &= closed;
        let detail = if closed { "equals its span closure" } else { "strictly smaller than its span closure" };
        evidence.push(Evidence::note(l.to_string(), detail));
    }
    Ok(PredicateReport::new("observable", describe_variable(v), ok, evidence))
}

/// Information observable: an information variable that is also an observable.
pub fn is_information_observable(v: &Variable, model: &Model) -> Result<PredicateReport> {
    let info = is_information_variable(v, model)?;
    let obs = is_observable(v)?;
    let mut evidence = info.evidence;
    evidence.extend(obs.evidence);
    Ok(PredicateReport::new("information observable", describe_variable(v), info.verdict && obs.verdict, evidence))
}

/// Both are information observables, their attributes are mutually
/// disjoint, and their union is not an information variable.
pub fn detect_superinformation(x: &Variable, y: &Variable, model: &Model) -> Result<PredicateReport> {
    let subject = format!("{} & {}", describe_variable(x), describe_variable(y));
    let mut evidence = Vec::new();
    let rx = is_information_observable(x, model)?;
    let ry = is_information_observable(y, model)?;
    evidence.push(Evidence::note("first is information observable", rx.verdict.to_string()));
    evidence.push(Evidence::note("second is information observable", ry.verdict.to_string()));
    if !(rx.verdict && ry.verdict) {
        return Ok(PredicateReport::new("superinformation", subject, false, evidence));
    }
    let union = match x.union_with(y, ("X", "Y")) {
        Ok(u) => u,
        Err(CtError::Disjointness { first, second, witness }) => {
            evidence.push(Evidence::note("disjointness", format!("{first} and {second} share {witness}")));
            return Ok(PredicateReport::new("superinformation", subject, false, evidence));
        }
        Err(e) => return Err(e),
    };
    let ru = is_information_variable(&union, model)?;
    evidence.push(Evidence::note("union is information variable", ru.verdict.to_string()));
    evidence.extend(ru.evidence);
    Ok(PredicateReport::new("superinformation", subject, !ru.verdict, evidence))
}

/// Weight of attribute `y` on the span of `x` (maximised over the states of `y`).
fn overlap_weight(y: &Attribute, x: &Attribute) -> Result<f64> {
    let p = x.projector()?;
    match y.repr() {
        Repr::States(s) => Ok(s.iter().map(|z| z.expectation(&p)).fold(0.0, f64::max)),
        Repr::Subspace(b) => Ok(b.iter().map(|v| linalg::inner(v, &(&p * v)).re).fold(0.0, f64::max)),
        Repr::Points(_) => Err(CtError::Unsupported("restricted variables need a quantum backend".into())),
    }
}

/// `X_y`: members of `X` with non-zero overlap with `y`.
pub fn restricted_variable(x: &Variable, y: &Attribute) -> Result<Variable> {
    if y.kind() != Kind::Quantum {
        return Err(CtError::Unsupported("restricted variables need a quantum backend".into()));
    }
    let t = tol();
    let mut keep = Vec::new();
    for (l, a) in x.members() {
        if overlap_weight(y, a)? > t {
            keep.push((l.clone(), a.clone()));
        }
    }
    if keep.is_empty() {
        return Err(CtError::Degenerate(format!("{} has no overlap with any member", y.describe())));
    }
    validate_variable(keep)
}

/// Whether `z` is a (possibly trivial) generalised mixture of the members of `h`.
pub fn is_generalised_mixture(z: &Attribute, h: &Variable) -> Result<PredicateReport> {
    let subject = format!("{} over {}", z.describe(), describe_variable(h));
    for (l, a) in h.members() {
        if z.set_eq(a)? {
            return Ok(PredicateReport::new(
                "generalised mixture",
                subject,
                true,
                vec![Evidence::note("trivial", format!("equals member {l}"))],
            ));
        }
    }
    let mut evidence = Vec::new();
    for (l, a) in h.members() {
        if let Some(w) = z.overlap_witness(a)? {
            evidence.push(Evidence::note(format!("disjoint from {l}"), format!("false: shares {w}")));
            return Ok(PredicateReport::new("generalised mixture", subject, false, evidence));
        }
        if z.is_subset(a)? {
            evidence.push(Evidence::note(format!("not contained in {l}"), "false"));
            return Ok(PredicateReport::new("generalised mixture", subject, false, evidence));
        }
    }
    evidence.push(Evidence::note("disjoint from and not contained in every member", "true"));
    let span = span_closure(h)?;
    let sharp = z.is_subset(&span)?;
    let detail = match z.repr() {
        Repr::Points(_) => format!("contained in union: {sharp}"),
        _ => {
            let p = span.projector()?;
            let worst = match z.repr() {
                Repr::States(s) => s.iter().map(|q| q.expectation(&p)).fold(1.0, f64::min),
                Repr::Subspace(b) => b.iter().map(|v| linalg::inner(v, &(&p * v)).re).fold(1.0, f64::min),
                Repr::Points(_) => unreachable!(),
            };
            format!("span projector expectation {worst:.9}")
        }
    };
    evidence.push(Evidence::note("span projector sharp with span value", detail));
    Ok(PredicateReport::new("generalised mixture", subject, sharp, evidence))
}

/// Pure probe states drawn from an attribute (listed states, or a subspace basis).
fn probe_states(a: &Attribute) -> Result<Vec<QState>> {
    match a.repr() {
        Repr::States(s) => Ok(s.clone()),
        Repr::Subspace(_) => Ok(a.enumerate_basis()?.state_list()?.to_vec()),
        Repr::Points(_) => Err(CtError::Unsupported("measurement consistency needs a quantum backend".into())),
    }
}

/// Whenever one implementation delivers a sharp output on a probe inside the
/// span of `z`, every implementation does, with the same label.
pub fn check_measurement_consistency(
    z: &Variable,
    implementations: &[MeasurerSpec],
    probes: &[Attribute],
) -> Result<PredicateReport> {
    for (k, m) in implementations.iter().enumerate() {
        if !m.measures(z)? {
            return Err(CtError::NotAMeasurer(format!("implementation {k} does not measure {}", describe_variable(z))));
        }
    }
    let span = span_closure(z)?;
    let mut evidence = Vec::new();
    let mut ok = true;
    let mut checked = 0usize;
    for probe in probes {
        if !probe.is_subset(&span)? {
            evidence.push(Evidence::note(probe.describe(), "skipped: outside the span of the variable"));
            continue;
        }
        for s in probe_states(probe)? {
            checked += 1;
            let outcomes: Vec<Option<Label>> =
                implementations.iter().map(|m| m.measure(&s).map(|j| m.sharp_outcome(&j))).collect::<Result<_>>()?;
            let any_sharp = outcomes.iter().any(Option::is_some);
            let agree = outcomes.windows(2).all(|w| w[0] == w[1]);
            if any_sharp && !agree {
                ok = false;
                let rendered: Vec<String> =
                    outcomes.iter().map(|o| o.as_ref().map_or("non-sharp".into(), |l| format!("'{l}'"))).collect();
                evidence.push(Evidence::note(format!("probe {s}"), format!("counterexample: {}", rendered.join(" vs "))));
            }
        }
    }
    evidence.push(Evidence::note("probes", format!("{checked} probe states checked")));
    Ok(PredicateReport::new("measurement consistency", describe_variable(z), ok, evidence))
}
