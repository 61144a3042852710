//! Possibility oracle for reversible classical finite models.

use std::collections::BTreeSet;

use crate::error::{CtError, Result};
use crate::kernel::{PossibilityVerdict, Task, Witness};

/// Largest number of choice-function assignments the search will consider.
pub const ASSIGNMENT_GUARD: u128 = 1_000_000;

/// Classical backend. Side effects are absorbed by one generic ancilla with
/// `ancilla_budget` states, prepared in a fixed state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalModel {
    pub ancilla_budget: usize,
}

impl Default for ClassicalModel {
    fn default() -> Self {
        ClassicalModel { ancilla_budget: 8 }
    }
}

impl ClassicalModel {
    pub fn new(ancilla_budget: usize) -> Self {
        ClassicalModel { ancilla_budget }
    }

    /// Ancilla states available to a task: the garbage register needs at
    /// least its fixed start state.
    fn ancilla_states(&self, side_effects: bool) -> usize {
        if side_effects {
            self.ancilla_budget.max(1)
        } else {
            1
        }
    }
}

/// A choice function together with the permutation of substrate × ancilla
/// that realizes it. Joint index is `state * ancilla_states + ancilla`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalWitness {
    /// (input state, output state) for every state of every input attribute.
    pub assignment: Vec<(usize, usize)>,
    pub ancilla_states: usize,
    pub permutation: Vec<usize>,
}

pub fn classical_possible(task: &Task, model: &ClassicalModel) -> Result<PossibilityVerdict> {
    let mut inputs: Vec<(usize, Vec<usize>)> = Vec::new();
    for (input, output) in task.pairs() {
        let outs = output.points_list()?.to_vec();
        for &s in input.points_list()? {
            inputs.push((s, outs.clone()));
        }
    }
    let count = inputs.iter().try_fold(1u128, |acc, (_, o)| acc.checked_mul(o.len() as u128));
    match count {
        Some(c) if c <= ASSIGNMENT_GUARD => {}
        _ => {
            return Err(CtError::Size(format!(
                "choice-function space exceeds {ASSIGNMENT_GUARD} assignments"
            )))
        }
    }
    let cap = model.ancilla_states(task.side_effects());
    let n = task.substrate().size();
    // Most constrained inputs first.
    inputs.sort_by_key(|(s, o)| (o.len(), *s));
    let mut fiber = vec![0usize; n];
    let mut chosen = vec![0usize; inputs.len()];
    if search(&inputs, 0, cap, &mut fiber, &mut chosen) {
        let mut slots = vec![0usize; n];
        let mut assignment = Vec::with_capacity(inputs.len());
        let mut targets = Vec::with_capacity(inputs.len());
        for (i, (s, _)) in inputs.iter().enumerate() {
            let t = chosen[i];
            assignment.push((*s, t));
            targets.push((*s, t * cap + slots[t]));
            slots[t] += 1;
        }
        let permutation = complete_permutation(n * cap, cap, &targets);
        return Ok(PossibilityVerdict::possible(Witness::Classical(ClassicalWitness {
            assignment,
            ancilla_states: cap,
            permutation,
        })));
    }
    Ok(obstruction(task, cap))
}

fn search(inputs: &[(usize, Vec<usize>)], k: usize, cap: usize, fiber: &mut [usize], chosen: &mut [usize]) -> bool {
    if k == inputs.len() {
        return true;
    }
    for &t in &inputs[k].1 {
        if fiber[t] < cap {
            fiber[t] += 1;
            chosen[k] = t;
            if search(inputs, k + 1, cap, fiber, chosen) {
                return true;
            }
            fiber[t] -= 1;
        }
    }
    false
}

/// Extend the partial map `(s, 0) -> target` to a bijection, filling the
/// remaining sources and targets in index order.
fn complete_permutation(size: usize, cap: usize, targets: &[(usize, usize)]) -> Vec<usize> {
    let mut perm = vec![usize::MAX; size];
    let mut used = vec![false; size];
    for &(s, t) in targets {
        perm[s * cap] = t;
        used[t] = true;
    }
    let mut free = (0..size).filter(|&t| !used[t]);
    for p in perm.iter_mut() {
        if *p == usize::MAX {
            *p = free.next().expect("counts match");
        }
    }
    perm
}

fn obstruction(task: &Task, cap: usize) -> PossibilityVerdict {
    let criterion = if cap == 1 { "injectivity" } else { "ancilla capacity" };
    for (input, output) in task.pairs() {
        let (i, o) = (input.len(), output.len());
        if i > cap * o {
            return PossibilityVerdict::impossible(
                criterion,
                format!(
                    "`{}` has {i} states but `{}` offers only {o} output state(s) with {cap} ancilla slot(s) each",
                    input.describe(),
                    output.describe()
                ),
            );
        }
    }
    let mut ins = 0;
    let mut outs = BTreeSet::new();
    for (input, output) in task.pairs() {
        ins += input.len();
        outs.extend(output.points_list().unwrap_or(&[]).iter().copied());
    }
    if ins > cap * outs.len() {
        return PossibilityVerdict::impossible(
            criterion,
            format!("{ins} input states share {} output states with {cap} ancilla slot(s) each", outs.len()),
        );
    }
    PossibilityVerdict::impossible(criterion, "exhaustive search found no admissible choice function")
}

pub fn check_classical_witness(task: &Task, w: &ClassicalWitness, model: &ClassicalModel) -> Result<bool> {
    let cap = w.ancilla_states;
    if cap != model.ancilla_states(task.side_effects()) {
        return Ok(false);
    }
    let size = task.substrate().size() * cap;
    if w.permutation.len() != size {
        return Ok(false);
    }
    let mut seen = vec![false; size];
    for &p in &w.permutation {
        if p >= size || seen[p] {
            return Ok(false);
        }
        seen[p] = true;
    }
    for (input, output) in task.pairs() {
        let outs = output.points_list()?;
        for &s in input.points_list()? {
            let image = w.permutation[s * cap];
            if !outs.contains(&(image / cap)) {
                return Ok(false);
            }
            if !task.side_effects() && image % cap != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check_witness, compose_all, is_task_possible, Attribute, Model, Status, SubstrateSpec};

    #[test]
    fn traffic_light_switch_off() {
        let lamp = SubstrateSpec::classical("lamp", vec!["off", "on"]).unwrap();
        let light = compose_all(&[lamp.clone(), lamp.clone(), lamp]).unwrap();
        let off = Attribute::points(&light, vec![0]).unwrap();
        let on = Attribute::points(&light, (1..8).collect()).unwrap();
        let task = Task::new(&light, vec![(on, off)], true).unwrap();
        let model = Model::classical();
        let v = is_task_possible(&task, &model).unwrap();
        assert_eq!(v.status, Status::Possible);
        assert!(check_witness(&task, &v, &model).unwrap());
        let strict = task.clone().with_side_effects(false);
        assert_eq!(is_task_possible(&strict, &model).unwrap().status, Status::Impossible);
    }

    #[test]
    fn bit_cloning_without_side_effects() {
        let bit = SubstrateSpec::classical("bit", vec!["0", "1"]).unwrap();
        let two = crate::kernel::compose_substrates(&bit, &bit).unwrap();
        let pt = |i| Attribute::points(&two, vec![i]).unwrap();
        let task = Task::new(&two, vec![(pt(0), pt(0)), (pt(2), pt(3))], false).unwrap();
        let model = Model::classical();
        let v = is_task_possible(&task, &model).unwrap();
        assert!(v.is_possible());
        assert!(check_witness(&task, &v, &model).unwrap());
    }

    #[test]
    fn merge_needs_an_ancilla() {
        let bit = SubstrateSpec::classical("bit", vec!["0", "1"]).unwrap();
        let z = Attribute::labelled(&bit, &["0"]).unwrap();
        let o = Attribute::labelled(&bit, &["1"]).unwrap();
        let task = Task::new(&bit, vec![(z.clone(), z.clone()), (o, z)], false).unwrap();
        let none = Model::Classical(ClassicalModel::new(0));
        let v = is_task_possible(&task, &none).unwrap();
        assert_eq!(v.status, Status::Impossible);
        assert_eq!(v.certificate.unwrap().criterion, "injectivity");
        let with = task.with_side_effects(true);
        assert!(is_task_possible(&with, &Model::classical()).unwrap().is_possible());
    }

    #[test]
    fn tampered_witness_fails_replay() {
        let bit = SubstrateSpec::classical("bit", vec!["0", "1"]).unwrap();
        let z = Attribute::labelled(&bit, &["0"]).unwrap();
        let o = Attribute::labelled(&bit, &["1"]).unwrap();
        let task = Task::new(&bit, vec![(z.clone(), o.clone()), (o, z)], false).unwrap();
        let model = Model::classical();
        let mut v = is_task_possible(&task, &model).unwrap();
        if let Some(Witness::Classical(w)) = v.witness.as_mut() {
            w.permutation = vec![0, 1];
        }
        assert!(!check_witness(&task, &v, &model).unwrap());
    }
}
