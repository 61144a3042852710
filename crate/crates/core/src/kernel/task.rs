use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::classical::{self, ClassicalModel, ClassicalWitness};
use crate::error::{CtError, Result};
use crate::kernel::attribute::Attribute;
use crate::kernel::substrate::{compose_substrates, Kind, SubstrateSpec};
use crate::quantum::oracle::{self, QuantumModel, QuantumWitness};

/// Ordered input→output attribute pairs on one substrate.
#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    substrate: Arc<SubstrateSpec>,
    pairs: Vec<(Attribute, Attribute)>,
    side_effects: bool,
}

impl Task {
    pub fn new(substrate: &Arc<SubstrateSpec>, pairs: Vec<(Attribute, Attribute)>, side_effects: bool) -> Result<Self> {
        for (input, output) in &pairs {
            for a in [input, output] {
                if !a.substrate().same_as(substrate) {
                    return Err(CtError::SubstrateMismatch(format!(
                        "attribute `{}` is not on task substrate {}",
                        a.describe(),
                        substrate.id()
                    )));
                }
            }
        }
        for (i, (ai, _)) in pairs.iter().enumerate() {
            for (aj, _) in &pairs[..i] {
                if let Some(w) = aj.overlap_witness(ai)? {
                    return Err(CtError::Disjointness { first: aj.describe(), second: ai.describe(), witness: w });
                }
            }
        }
        Ok(Task { substrate: substrate.clone(), pairs, side_effects })
    }

    /// Build a task, taking the substrate from the first pair.
    pub fn from_pairs(pairs: Vec<(Attribute, Attribute)>, side_effects: bool) -> Result<Self> {
        let sub = pairs
            .first()
            .map(|(a, _)| a.substrate().clone())
            .ok_or_else(|| CtError::InvalidAttribute("task with no pairs needs an explicit substrate".into()))?;
        Self::new(&sub, pairs, side_effects)
    }

    /// `{a → a}` for each listed attribute.
    pub fn identity(substrate: &Arc<SubstrateSpec>, attrs: &[Attribute]) -> Result<Self> {
        Self::new(substrate, attrs.iter().map(|a| (a.clone(), a.clone())).collect(), false)
    }

    pub fn substrate(&self) -> &Arc<SubstrateSpec> {
        &self.substrate
    }

    pub fn pairs(&self) -> &[(Attribute, Attribute)] {
        &self.pairs
    }

    pub fn side_effects(&self) -> bool {
        self.side_effects
    }

    pub fn with_side_effects(mut self, allowed: bool) -> Self {
        self.side_effects = allowed;
        self
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a} -> {b}")?;
        }
        write!(f, "}}")?;
        if self.side_effects {
            write!(f, " (side effects allowed)")?;
        }
        Ok(())
    }
}

/// Parallel composition: every product of pairs on the composite substrate.
pub fn parallel_task(a: &Task, b: &Task) -> Result<Task> {
    let sub = compose_substrates(&a.substrate, &b.substrate)?;
    let mut pairs = Vec::with_capacity(a.pairs.len() * b.pairs.len());
    for (ai, ao) in &a.pairs {
        for (bi, bo) in &b.pairs {
            pairs.push((ai.product(bi)?.rehome(&sub)?, ao.product(bo)?.rehome(&sub)?));
        }
    }
    Task::new(&sub, pairs, a.side_effects || b.side_effects)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Possible,
    Impossible,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Possible => "possible",
            Status::Impossible => "impossible",
            Status::Unknown => "unknown",
        })
    }
}

/// Reason a task was refused (or left undecided).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub criterion: String,
    pub reason: String,
}

/// Backend construction data proving possibility.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// The vacuous task needs no construction.
    Identity,
    Classical(ClassicalWitness),
    Quantum(QuantumWitness),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PossibilityVerdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub certificate: Option<Certificate>,
}

impl PossibilityVerdict {
    pub fn possible(witness: Witness) -> Self {
        PossibilityVerdict { status: Status::Possible, witness: Some(witness), certificate: None }
    }

    pub fn impossible(criterion: impl Into<String>, reason: impl Into<String>) -> Self {
        PossibilityVerdict {
            status: Status::Impossible,
            witness: None,
            certificate: Some(Certificate { criterion: criterion.into(), reason: reason.into() }),
        }
    }

    pub fn unknown(criterion: impl Into<String>, reason: impl Into<String>) -> Self {
        PossibilityVerdict {
            status: Status::Unknown,
            witness: None,
            certificate: Some(Certificate { criterion: criterion.into(), reason: reason.into() }),
        }
    }

    pub fn is_possible(&self) -> bool {
        self.status == Status::Possible
    }

    pub fn reason(&self) -> String {
        match (&self.status, &self.certificate) {
            (Status::Possible, _) => "possible".into(),
            (s, Some(c)) => format!("{s}: {} ({})", c.reason, c.criterion),
            (s, None) => s.to_string(),
        }
    }
}

/// A possibility backend.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Classical(ClassicalModel),
    Quantum(QuantumModel),
}

impl Model {
    pub fn classical() -> Self {
        Model::Classical(ClassicalModel::default())
    }

    pub fn quantum() -> Self {
        Model::Quantum(QuantumModel::default())
    }

    pub fn kind(&self) -> Kind {
        match self {
            Model::Classical(_) => Kind::Classical,
            Model::Quantum(_) => Kind::Quantum,
        }
    }
}

/// Decide a task with the matching backend.
pub fn is_task_possible(task: &Task, model: &Model) -> Result<PossibilityVerdict> {
    if task.substrate.kind() != model.kind() {
        return Err(CtError::Dispatch(format!(
            "{} task sent to {} backend",
            task.substrate.kind(),
            model.kind()
        )));
    }
    if task.pairs.is_empty() {
        return Ok(PossibilityVerdict::possible(Witness::Identity));
    }
    match model {
        Model::Classical(m) => classical::classical_possible(task, m),
        Model::Quantum(m) => oracle::unitary_task_feasible(task, m),
    }
}

/// Replay a verdict's witness against the task.
pub fn check_witness(task: &Task, verdict: &PossibilityVerdict, model: &Model) -> Result<bool> {
    if verdict.status != Status::Possible {
        return Ok(false);
    }
    match (&verdict.witness, model) {
        (Some(Witness::Identity), _) => Ok(task.pairs.is_empty()),
        (Some(Witness::Classical(w)), Model::Classical(m)) => classical::check_classical_witness(task, w, m),
        (Some(Witness::Quantum(w)), Model::Quantum(_)) => oracle::check_quantum_witness(task, w),
        (None, _) => Ok(false),
        _ => Err(CtError::Dispatch("witness issued by a different backend".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_of_bit_tasks() {
        let bit = SubstrateSpec::classical("bit", vec!["0", "1"]).unwrap();
        let z = Attribute::labelled(&bit, &["0"]).unwrap();
        let o = Attribute::labelled(&bit, &["1"]).unwrap();
        let a = Task::new(&bit, vec![(z.clone(), o.clone())], false).unwrap();
        let b = Task::new(&bit, vec![(z.clone(), z.clone())], true).unwrap();
        let p = parallel_task(&a, &b).unwrap();
        assert_eq!(p.pairs().len(), 1);
        assert!(p.side_effects());
        assert_eq!(p.pairs()[0].0.points_list().unwrap(), &[0]);
        assert_eq!(p.pairs()[0].1.points_list().unwrap(), &[2]);
    }

    #[test]
    fn overlapping_inputs_rejected() {
        let bit = SubstrateSpec::classical("bit", vec!["0", "1"]).unwrap();
        let z = Attribute::labelled(&bit, &["0"]).unwrap();
        let both = Attribute::labelled(&bit, &["0", "1"]).unwrap();
        assert!(Task::new(&bit, vec![(z.clone(), z.clone()), (both.clone(), z)], false).is_err());
    }

    #[test]
    fn empty_task_is_possible_everywhere() {
        let q = SubstrateSpec::quantum("q", 2).unwrap();
        let t = Task::new(&q, vec![], false).unwrap();
        let v = is_task_possible(&t, &Model::quantum()).unwrap();
        assert!(v.is_possible());
        assert!(check_witness(&t, &v, &Model::quantum()).unwrap());
        assert!(matches!(is_task_possible(&t, &Model::classical()), Err(CtError::Dispatch(_))));
    }
}
