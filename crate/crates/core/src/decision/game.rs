//! Games of chance: a payoff observable together with a game attribute.

use num_rational::BigRational;
use num_traits::Zero;

use crate::ensembles::{partition_over_spans, PartitionOfUnity};
use crate::error::{CtError, Result};
use crate::kernel::{coarsen_variable, validate_variable, Attribute, Coarsening, Kind, Repr, Variable};
use crate::label::{rational_to_f64, Label};
use crate::linalg::{self, CMat, CVec};
use crate::quantum::{permutation_computation, LabelPermutation};
use crate::state::QState;
use crate::tolerance::tol;

#[derive(Debug, Clone)]
pub struct Game {
    observable: Variable,
    attribute: Attribute,
    partition: PartitionOfUnity,
    children: Vec<Game>,
}

impl Game {
    pub fn observable(&self) -> &Variable {
        &self.observable
    }

    pub fn attribute(&self) -> &Attribute {
        &self.attribute
    }

    pub fn children(&self) -> &[Game] {
        &self.children
    }

    pub fn is_composite(&self) -> bool {
        !self.children.is_empty()
    }

    /// Representative state of the game attribute.
    pub fn state(&self) -> QState {
        match self.attribute.repr() {
            Repr::States(s) => s[0].clone(),
            Repr::Subspace(b) => QState::Pure(
                crate::state::PureState::from_vector(b[0].clone(), self.attribute.substrate().atom_sizes())
                    .expect("unit basis vector"),
            ),
            Repr::Points(_) => unreachable!("games are quantum"),
        }
    }

    pub fn payoffs(&self) -> Vec<BigRational> {
        self.observable.numeric_labels().expect("checked at construction")
    }
}

/// Replace every member by its span and check the members are mutually orthogonal.
fn as_observable(x: &Variable) -> Result<(Variable, Vec<Vec<CVec>>)> {
    if x.substrate().kind() != Kind::Quantum {
        return Err(CtError::Unsupported("games are evaluated on the quantum backend".into()));
    }
    x.numeric_labels()?;
    let spans = x.map_attributes(|a| {
        let b = a.span_basis()?;
        Ok(Attribute::subspace(a.substrate(), b)?.with_name(a.describe()))
    })?;
    let bases: Vec<Vec<CVec>> = spans.attributes().iter().map(|a| a.span_basis()).collect::<Result<_>>()?;
    for i in 0..bases.len() {
        for j in 0..i {
            for u in &bases[i] {
                for v in &bases[j] {
                    if linalg::inner(u, v).norm() > tol() {
                        return Err(CtError::InvalidAttribute(format!(
                            "payoff members `{}` and `{}` are not orthogonal",
                            spans.members()[i].0,
                            spans.members()[j].0
                        )));
                    }
                }
            }
        }
    }
    Ok((spans, bases))
}

fn game_states(z: &Attribute) -> Result<Vec<QState>> {
    match z.repr() {
        Repr::States(s) => Ok(s.clone()),
        Repr::Subspace(_) => Ok(z.enumerate_basis()?.state_list()?.to_vec()),
        Repr::Points(_) => Err(CtError::Unsupported("games are evaluated on the quantum backend".into())),
    }
}

/// A game `G_X(z)`. Every state of `z` must be sharp in a member of `X` or a
/// generalised mixture of its members, and all of them must share one
/// partition of unity.
pub fn make_game(x: &Variable, z: &Attribute) -> Result<Game> {
    let (observable, bases) = as_observable(x)?;
    if z.is_empty() {
        return Err(CtError::IllegitimateAttribute("empty game attribute".into()));
    }
    let states = game_states(z)?;
    let mut first: Option<PartitionOfUnity> = None;
    for s in &states {
        let p = partition_over_spans(s, &observable, &bases).map_err(|e| match e {
            CtError::Domain(msg) => CtError::IllegitimateAttribute(msg),
            other => other,
        })?;
        match &first {
            None => first = Some(p),
            Some(f) => {
                if f.values().iter().zip(p.values()).any(|(a, b)| (a - b).abs() > tol()) {
                    return Err(CtError::IllegitimateAttribute(format!(
                        "{} has no single partition of unity",
                        z.describe()
                    )));
                }
            }
        }
    }
    let partition = first.expect("non-empty attribute");
    let attribute = z.rehome(observable.substrate())?;
    Ok(Game { observable, attribute, partition, children: Vec::new() })
}

pub fn game_partition(g: &Game) -> Result<PartitionOfUnity> {
    Ok(g.partition.clone())
}

/// `Σ_x f(z)_x · x`.
pub fn game_value(g: &Game) -> Result<f64> {
    let p = game_partition(g)?;
    Ok(p.entries.iter().map(|(l, f)| f * l.as_f64().expect("numeric")).sum())
}

/// The value with the partition snapped to rationals, when that succeeds.
pub fn game_value_exact(g: &Game) -> Result<Option<BigRational>> {
    let p = game_partition(g)?;
    Ok(p.snapped().map(|fs| {
        fs.iter().zip(&p.entries).fold(BigRational::zero(), |acc, (f, (l, _))| {
            acc + f * l.as_rational().expect("numeric")
        })
    }))
}

/// `G_{X_a+X_b}((z, z'))` on the composite substrate.
pub fn compose_games(g1: &Game, g2: &Game) -> Result<Game> {
    let observable = coarsen_variable(&g1.observable, &g2.observable, Coarsening::Sum)?;
    let attribute = g1.attribute.product(&g2.attribute)?;
    let mut g = make_game(&observable, &attribute)?;
    g.children = vec![g1.clone(), g2.clone()];
    Ok(g)
}

/// A relabeling of payoffs.
#[derive(Debug, Clone, PartialEq)]
pub enum Transform {
    /// `x -> x + k`.
    Shift(BigRational),
    /// `x -> -x`.
    Reflect,
    Permute(LabelPermutation),
}

fn relabel(t: &Transform, l: &Label) -> Result<Label> {
    let v = l.as_rational()?;
    Ok(match t {
        Transform::Shift(k) => Label::Num(v + k),
        Transform::Reflect => Label::Num(-v.clone()),
        Transform::Permute(pi) => pi.apply(l).map_err(|e| CtError::Transform(e.to_string()))?,
    })
}

/// `G_{T(X)}(z)`: the same attribute played against the relabeled observable.
pub fn transform_game(g: &Game, t: &Transform) -> Result<Game> {
    make_game(&g.observable.relabel(|l| relabel(t, l))?, &g.attribute)
}

/// The transform as a permutation of the observable's own labels. Reflection
/// of labels not symmetric about zero reflects about their midpoint.
pub fn label_permutation(x: &Variable, t: &Transform) -> Result<LabelPermutation> {
    let labels = x.labels();
    let pairs = match t {
        Transform::Permute(pi) => return Ok(pi.clone()),
        Transform::Shift(_) => {
            labels.iter().map(|l| Ok((l.clone(), relabel(t, l)?))).collect::<Result<Vec<_>>>()?
        }
        Transform::Reflect => {
            let vals = x.numeric_labels()?;
            let lo = vals.iter().min().expect("non-empty");
            let hi = vals.iter().max().expect("non-empty");
            let twice_mid = lo + hi;
            labels.iter().zip(&vals).map(|(l, v)| (l.clone(), Label::Num(&twice_mid - v))).collect()
        }
    };
    LabelPermutation::from_pairs(pairs).map_err(|e| CtError::Transform(e.to_string()))
}

/// Unitary carrying the span of each member `x` onto that of `Π(x)`,
/// identity on the complement of the observable's span.
pub fn observable_permutation_unitary(x: &Variable, pi: &LabelPermutation) -> Result<CMat> {
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    let mut pairs = Vec::new();
    let bases: Vec<Vec<CVec>> = x.attributes().iter().map(|a| a.span_basis()).collect::<Result<_>>()?;
    for (i, (l, _)) in x.members().iter().enumerate() {
        let img = pi.apply(l).map_err(|e| CtError::Transform(e.to_string()))?;
        let j = x.position(&img).ok_or_else(|| CtError::Transform(format!("`{img}` is not a payoff")))?;
        if bases[i].len() != bases[j].len() {
            return Err(CtError::Transform(format!("members `{l}` and `{img}` have different dimensions")));
        }
        for (k, v) in bases[i].iter().enumerate() {
            let tag = |m: &Label| Label::sym(format!("{m}#{k}"));
            labels.push(tag(l));
            basis.push(v.clone());
            pairs.push((tag(l), tag(&img)));
        }
    }
    let sub_pi = LabelPermutation::from_pairs(pairs).map_err(|e| CtError::Transform(e.to_string()))?;
    permutation_computation(&sub_pi, &labels, &basis)
}

/// `G_X(T(z))`: the attribute acted on by the permutation unitary of the transform.
pub fn transform_attribute(g: &Game, t: &Transform) -> Result<Game> {
    let pi = label_permutation(&g.observable, t)?;
    let u = observable_permutation_unitary(&g.observable, &pi)?;
    let attribute = g.attribute.map_unitary(&u)?;
    make_game(&g.observable, &attribute)
}

/// Variable with the given payoffs on basis states of a `d`-dimensional system.
pub fn payoff_observable(substrate: &std::sync::Arc<crate::kernel::SubstrateSpec>, payoffs: &[BigRational]) -> Result<Variable> {
    let d = substrate.size();
    if payoffs.len() > d {
        return Err(CtError::Size(format!("{} payoffs on a {d}-dimensional system", payoffs.len())));
    }
    validate_variable(
        payoffs
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let v = crate::state::PureState::basis(d, k).regroup(substrate.atom_sizes())?;
                Ok((Label::Num(p.clone()), Attribute::pure(substrate, v)?))
            })
            .collect::<Result<Vec<_>>>()?,
    )
}

/// `Σ f_x x` for an explicit weight vector.
pub fn expected_payoff(weights: &[BigRational], payoffs: &[BigRational]) -> Result<BigRational> {
    if weights.len() != payoffs.len() {
        return Err(CtError::Domain("one weight per payoff required".into()));
    }
    Ok(weights.iter().zip(payoffs).map(|(w, x)| w * x).sum())
}

pub fn value_f64(v: &BigRational) -> f64 {
    rational_to_f64(v)
}
