//! Unitary-extension possibility oracle.
//!
//! A set of pure input states can be mapped to chosen output states by a
//! unitary iff the Gram matrices agree (up to a phase per output state).
//! With side effects the outputs may be entangled with garbage `g_i`, which
//! is possible iff `G_in = G_out ∘ A` for some Gram matrix `A` of unit vectors.

use nalgebra::SymmetricEigen;

use crate::error::{CtError, Result};
use crate::kernel::{PossibilityVerdict, Task, Witness};
use crate::linalg::{self, c, CMat, CVec, C64};
use crate::state::PureState;
use crate::tolerance::tol;

/// Largest number of choice functions searched.
pub const CHOICE_GUARD: u128 = 1_000_000;

/// Quantum backend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumModel {
    /// Witness unitaries are materialized only up to this dimension.
    pub max_unitary_dim: usize,
}

impl Default for QuantumModel {
    fn default() -> Self {
        QuantumModel { max_unitary_dim: 256 }
    }
}

/// Pairwise inner products `entries[i][j] = <s_i|s_j>`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub entries: CMat,
}

pub fn gram(states: &[PureState]) -> Result<GramMatrix> {
    let n = states.len();
    if let Some(first) = states.first() {
        for s in states {
            if s.dim() != first.dim() {
                return Err(CtError::DimensionMismatch { expected: first.dim(), found: s.dim() });
            }
        }
    }
    let mut g = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = states[i].inner(&states[j]);
        }
    }
    Ok(GramMatrix { entries: g })
}

fn gram_of(vectors: &[&CVec]) -> CMat {
    let n = vectors.len();
    CMat::from_fn(n, n, |i, j| linalg::inner(vectors[i], vectors[j]))
}

/// Construction data for a quantum possibility verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumWitness {
    /// For each input state (pairs in order, states in listed order), the
    /// index of the chosen state in the corresponding output attribute.
    pub choice: Vec<usize>,
    /// Phase applied to each chosen output state.
    pub phases: Vec<C64>,
    /// Garbage vectors left in the ancilla (side-effect tasks only).
    pub garbage: Option<Vec<CVec>>,
    /// Unitary on substrate (⊗ garbage ancilla) mapping inputs to outputs.
    pub unitary: Option<CMat>,
}

struct Problem {
    inputs: Vec<PureState>,
    options: Vec<Vec<PureState>>,
    g_in: CMat,
}

fn problem(task: &Task) -> Result<Problem> {
    let mut inputs = Vec::new();
    let mut options = Vec::new();
    for (input, output) in task.pairs() {
        let outs = output.pure_states()?;
        for s in input.pure_states()? {
            inputs.push(s);
            options.push(outs.clone());
        }
    }
    let count = options.iter().try_fold(1u128, |acc, o| acc.checked_mul(o.len() as u128));
    match count {
        Some(c) if c <= CHOICE_GUARD => {}
        _ => return Err(CtError::Size(format!("choice-function space exceeds {CHOICE_GUARD}"))),
    }
    let g_in = gram(&inputs)?.entries;
    Ok(Problem { inputs, options, g_in })
}

enum Leaf {
    Feasible(QuantumWitness),
    Infeasible(String, String),
    Undecided(String),
}

/// Decide a task on a quantum substrate.
pub fn unitary_task_feasible(task: &Task, model: &QuantumModel) -> Result<PossibilityVerdict> {
    let p = problem(task)?;
    let side = task.side_effects();
    let mut first_failure: Option<(String, String)> = None;
    let mut undecided: Option<String> = None;
    let mut chosen = Vec::with_capacity(p.inputs.len());
    let found = search(&p, side, model, &mut chosen, &mut first_failure, &mut undecided)?;
    if let Some(w) = found {
        return Ok(PossibilityVerdict::possible(Witness::Quantum(w)));
    }
    if let Some(reason) = undecided {
        return Ok(PossibilityVerdict::unknown("PSD completion", reason));
    }
    let (criterion, reason) =
        first_failure.unwrap_or_else(|| ("Gram equality".into(), "no admissible choice function".into()));
    Ok(PossibilityVerdict::impossible(criterion, reason))
}

fn search(
    p: &Problem,
    side: bool,
    model: &QuantumModel,
    chosen: &mut Vec<usize>,
    failure: &mut Option<(String, String)>,
    undecided: &mut Option<String>,
) -> Result<Option<QuantumWitness>> {
    let k = chosen.len();
    if k == p.inputs.len() {
        return match evaluate(p, chosen, side, model)? {
            Leaf::Feasible(w) => Ok(Some(w)),
            Leaf::Infeasible(c, r) => {
                failure.get_or_insert((c, r));
                Ok(None)
            }
            Leaf::Undecided(r) => {
                undecided.get_or_insert(r);
                Ok(None)
            }
        };
    }
    let t = tol();
    'options: for (idx, o) in p.options[k].iter().enumerate() {
        for (j, &cj) in chosen.iter().enumerate() {
            let gin = p.g_in[(j, k)];
            let gout = p.options[j][cj].inner(o);
            if let Some((c, r)) = pair_obstruction(gin, gout, side, t, j, k) {
                failure.get_or_insert((c, r));
                continue 'options;
            }
        }
        chosen.push(idx);
        let r = search(p, side, model, chosen, failure, undecided)?;
        chosen.pop();
        if r.is_some() {
            return Ok(r);
        }
    }
    Ok(None)
}

fn pair_obstruction(gin: C64, gout: C64, side: bool, t: f64, j: usize, k: usize) -> Option<(String, String)> {
    if !side {
        if (gin.norm() - gout.norm()).abs() > t {
            return Some((
                "Gram equality".into(),
                format!(
                    "|<in_{j}|in_{k}>| = {:.6} but |<out_{j}|out_{k}>| = {:.6}",
                    gin.norm(),
                    gout.norm()
                ),
            ));
        }
        return None;
    }
    if gout.norm() <= t {
        if gin.norm() > t {
            return Some((
                "side-effect Gram factorization".into(),
                format!("outputs {j},{k} orthogonal but inputs overlap by {:.6}", gin.norm()),
            ));
        }
        return None;
    }
    let a = gin / gout;
    if a.norm() > 1.0 + t {
        return Some((
            "side-effect Gram factorization".into(),
            format!("garbage overlap |A_{j}{k}| = {:.6} exceeds 1", a.norm()),
        ));
    }
    None
}

/// Phases `phi` with `conj(phi_i) phi_j G_out_ij = G_in_ij`, if they exist.
fn solve_phases(g_in: &CMat, g_out: &CMat) -> Option<Vec<C64>> {
    let n = g_in.nrows();
    let t = tol();
    let mut phase: Vec<Option<C64>> = vec![None; n];
    for root in 0..n {
        if phase[root].is_some() {
            continue;
        }
        phase[root] = Some(c(1.0, 0.0));
        let mut queue = vec![root];
        while let Some(i) = queue.pop() {
            let pi = phase[i].unwrap();
            for j in 0..n {
                if phase[j].is_none() && g_out[(i, j)].norm() > t {
                    let z = g_in[(i, j)] / (pi.conj() * g_out[(i, j)]);
                    if z.norm() < 1e-300 {
                        return None;
                    }
                    phase[j] = Some(z / z.norm());
                    queue.push(j);
                }
            }
        }
    }
    let phase: Vec<C64> = phase.into_iter().map(|p| p.unwrap()).collect();
    for i in 0..n {
        for j in 0..n {
            if (phase[i].conj() * phase[j] * g_out[(i, j)] - g_in[(i, j)]).norm() > t {
                return None;
            }
        }
    }
    Some(phase)
}

fn evaluate(p: &Problem, chosen: &[usize], side: bool, model: &QuantumModel) -> Result<Leaf> {
    let outs: Vec<&PureState> = chosen.iter().enumerate().map(|(i, &c)| &p.options[i][c]).collect();
    let out_vecs: Vec<&CVec> = outs.iter().map(|s| s.vector()).collect();
    let g_out = gram_of(&out_vecs);
    let d = p.inputs.first().map(|s| s.dim()).unwrap_or(1);
    if let Some(phases) = solve_phases(&p.g_in, &g_out) {
        let outputs: Vec<CVec> = out_vecs.iter().zip(&phases).map(|(v, ph)| *v * *ph).collect();
        let inputs: Vec<CVec> = p.inputs.iter().map(|s| s.vector().clone()).collect();
        let unitary = if d <= model.max_unitary_dim { Some(linalg::extend_to_unitary(&inputs, &outputs, d)?) } else { None };
        return Ok(Leaf::Feasible(QuantumWitness { choice: chosen.to_vec(), phases, garbage: None, unitary }));
    }
    if !side {
        return Ok(Leaf::Infeasible(
            "Gram equality".into(),
            "output overlaps match in modulus but no consistent choice of phases exists".into(),
        ));
    }
    let n = p.inputs.len();
    let t = tol();
    let mut a = CMat::identity(n, n);
    let mut free = false;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if g_out[(i, j)].norm() > t {
                a[(i, j)] = p.g_in[(i, j)] / g_out[(i, j)];
            } else {
                a[(i, j)] = c(0.0, 0.0);
                free = true;
            }
        }
    }
    let a = linalg::hermitian_part(&a);
    let min = linalg::min_eigenvalue_hermitian(&a);
    if min < -t {
        if free {
            return Ok(Leaf::Undecided(format!(
                "zero-completed garbage Gram matrix has eigenvalue {min:.3e}; other completions not searched"
            )));
        }
        return Ok(Leaf::Infeasible(
            "side-effect Gram factorization".into(),
            format!("required garbage Gram matrix is not positive semidefinite (eigenvalue {min:.3e})"),
        ));
    }
    let garbage = factor_gram(&a);
    let r = garbage.first().map(|g| g.len()).unwrap_or(1);
    let unitary = if d * r <= model.max_unitary_dim {
        let blank = linalg::basis_vector(r, 0);
        let inputs: Vec<CVec> = p.inputs.iter().map(|s| linalg::kron_vec(s.vector(), &blank)).collect();
        let outputs: Vec<CVec> = out_vecs.iter().zip(&garbage).map(|(v, g)| linalg::kron_vec(v, g)).collect();
        Some(linalg::extend_to_unitary(&inputs, &outputs, d * r)?)
    } else {
        None
    };
    Ok(Leaf::Feasible(QuantumWitness {
        choice: chosen.to_vec(),
        phases: vec![c(1.0, 0.0); n],
        garbage: Some(garbage),
        unitary,
    }))
}

/// Vectors `g_i` with `<g_i|g_j> = A_ij` for a PSD matrix `A`, in dimension rank(A).
fn factor_gram(a: &CMat) -> Vec<CVec> {
    let n = a.nrows();
    let eig = SymmetricEigen::new(a.clone());
    let keep: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] > 1e-12).collect();
    let r = keep.len().max(1);
    (0..n)
        .map(|i| {
            let mut g = CVec::zeros(r);
            for (row, &k) in keep.iter().enumerate() {
                // B = diag(sqrt(lambda)) V^dagger, g_i = B e_i
                g[row] = eig.eigenvectors[(i, k)].conj() * eig.eigenvalues[k].sqrt();
            }
            let norm = g.norm();
            if norm > 0.0 {
                g / c(norm, 0.0)
            } else {
                linalg::basis_vector(r, 0)
            }
        })
        .collect()
}

/// Replay a quantum witness against its task.
pub fn check_quantum_witness(task: &Task, w: &QuantumWitness) -> Result<bool> {
    let p = problem(task)?;
    let n = p.inputs.len();
    if w.choice.len() != n || w.phases.len() != n {
        return Ok(false);
    }
    if w.choice.iter().enumerate().any(|(i, &c)| c >= p.options[i].len()) {
        return Ok(false);
    }
    let outs: Vec<CVec> =
        w.choice.iter().enumerate().map(|(i, &c)| p.options[i][c].vector() * w.phases[i]).collect();
    let check = 1e-7;
    match &w.garbage {
        None => {
            let refs: Vec<&CVec> = outs.iter().collect();
            if (gram_of(&refs) - &p.g_in).camax() > check {
                return Ok(false);
            }
            if let Some(u) = &w.unitary {
                if !linalg::is_unitary(u, check) {
                    return Ok(false);
                }
                for (s, o) in p.inputs.iter().zip(&outs) {
                    if (u * s.vector() - o).camax() > check {
                        return Ok(false);
                    }
                }
            }
        }
        Some(g) => {
            if g.len() != n {
                return Ok(false);
            }
            for i in 0..n {
                for j in 0..n {
                    let lhs = linalg::inner(&outs[i], &outs[j]) * linalg::inner(&g[i], &g[j]);
                    if (lhs - p.g_in[(i, j)]).norm() > check {
                        return Ok(false);
                    }
                }
            }
            if let Some(u) = &w.unitary {
                let r = g[0].len();
                let blank = linalg::basis_vector(r, 0);
                if !linalg::is_unitary(u, check) {
                    return Ok(false);
                }
                for i in 0..n {
                    let lhs = u * linalg::kron_vec(p.inputs[i].vector(), &blank);
                    if (lhs - linalg::kron_vec(&outs[i], &g[i])).camax() > check {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check_witness, compose_substrates, is_task_possible, Attribute, Model, Status, SubstrateSpec};

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn cloning_task(states: &[PureState], side: bool) -> Task {
        let q = SubstrateSpec::quantum("q", states[0].dim()).unwrap();
        let qq = compose_substrates(&q, &q).unwrap();
        let blank = PureState::basis(states[0].dim(), 0);
        let pairs = states
            .iter()
            .map(|s| {
                (
                    Attribute::pure(&qq, s.tensor(&blank)).unwrap(),
                    Attribute::pure(&qq, s.tensor(s)).unwrap(),
                )
            })
            .collect();
        Task::new(&qq, pairs, side).unwrap()
    }

    #[test]
    fn gram_examples() {
        let g = gram(&[PureState::basis(2, 0), PureState::basis(2, 1)]).unwrap();
        assert!((g.entries - CMat::identity(2, 2)).camax() < 1e-15);
        let plus = PureState::from_real(&[S, S]).unwrap();
        let g = gram(&[PureState::basis(2, 0), plus]).unwrap();
        assert!((g.entries[(0, 1)].re - S).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_cloning_is_possible() {
        let t = cloning_task(&[PureState::basis(2, 0), PureState::basis(2, 1)], false);
        let m = Model::quantum();
        let v = is_task_possible(&t, &m).unwrap();
        assert!(v.is_possible());
        assert!(check_witness(&t, &v, &m).unwrap());
    }

    #[test]
    fn non_orthogonal_cloning_is_impossible() {
        let plus = PureState::from_real(&[S, S]).unwrap();
        let m = Model::quantum();
        let t = cloning_task(&[PureState::basis(2, 0), plus.clone()], false);
        let v = is_task_possible(&t, &m).unwrap();
        assert_eq!(v.status, Status::Impossible);
        assert_eq!(v.certificate.as_ref().unwrap().criterion, "Gram equality");
        let t = cloning_task(&[PureState::basis(2, 0), plus], true);
        let v = is_task_possible(&t, &m).unwrap();
        assert_eq!(v.status, Status::Impossible);
        assert!(v.certificate.unwrap().reason.contains("1.414214"));
    }

    #[test]
    fn phases_are_free() {
        let q = SubstrateSpec::quantum("q", 2).unwrap();
        let plus = PureState::from_real(&[S, S]).unwrap();
        let minus = PureState::from_real(&[S, -S]).unwrap();
        let i_plus = PureState::new(vec![c(0.0, S), c(0.0, S)]).unwrap();
        let pairs = vec![
            (Attribute::pure(&q, PureState::basis(2, 0)).unwrap(), Attribute::pure(&q, i_plus).unwrap()),
            (Attribute::pure(&q, PureState::basis(2, 1)).unwrap(), Attribute::pure(&q, minus).unwrap()),
            (Attribute::pure(&q, plus).unwrap(), Attribute::pure(&q, PureState::basis(2, 0)).unwrap()),
        ];
        let t = Task::new(&q, pairs, false).unwrap();
        let m = Model::quantum();
        let v = is_task_possible(&t, &m).unwrap();
        assert!(v.is_possible(), "{}", v.reason());
        assert!(check_witness(&t, &v, &m).unwrap());
    }

    #[test]
    fn side_effect_witness_replays() {
        // Merge two orthogonal states into one output, garbage keeps them apart.
        let q = SubstrateSpec::quantum("q", 2).unwrap();
        let zero = Attribute::pure(&q, PureState::basis(2, 0)).unwrap();
        let one = Attribute::pure(&q, PureState::basis(2, 1)).unwrap();
        let t = Task::new(&q, vec![(zero.clone(), zero.clone()), (one, zero)], true).unwrap();
        let m = Model::quantum();
        let v = is_task_possible(&t, &m).unwrap();
        assert!(v.is_possible());
        assert!(check_witness(&t, &v, &m).unwrap());
        let strict = t.with_side_effects(false);
        assert_eq!(is_task_possible(&strict, &m).unwrap().status, Status::Impossible);
    }

    #[test]
    fn subspace_attributes_rejected() {
        let q = SubstrateSpec::quantum("q", 2).unwrap();
        let line = Attribute::subspace(&q, vec![linalg::basis_vector(2, 0)]).unwrap();
        let t = Task::new(&q, vec![(line.clone(), line)], false).unwrap();
        assert!(matches!(is_task_possible(&t, &Model::quantum()), Err(CtError::Representation(_))));
    }
}
