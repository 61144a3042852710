use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{CtError, Result};
use crate::kernel::attribute::Attribute;
use crate::kernel::substrate::SubstrateSpec;
use crate::label::Label;
use crate::linalg::{self, CVec};
use crate::tolerance::rank_tol;

/// A set of pairwise-disjoint labelled attributes of one substrate.
#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    substrate: Arc<SubstrateSpec>,
    members: Vec<(Label, Attribute)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coarsening {
    Sum,
    Product,
}

/// Check labels are distinct and attributes pairwise disjoint.
pub fn validate_variable(members: Vec<(Label, Attribute)>) -> Result<Variable> {
    let first = members
        .first()
        .ok_or_else(|| CtError::InvalidAttribute("a variable needs at least one attribute".into()))?;
    let substrate = first.1.substrate().clone();
    // Mutually orthogonal spans share no state; only other pairs need the full test.
    let spans: Vec<Option<Vec<CVec>>> = members.iter().map(|(_, a)| a.span_basis().ok()).collect();
    let orthogonal = |i: usize, j: usize| match (&spans[i], &spans[j]) {
        (Some(a), Some(b)) => a.iter().all(|u| b.iter().all(|v| linalg::inner(u, v).norm() <= rank_tol())),
        _ => false,
    };
    for (i, (li, ai)) in members.iter().enumerate() {
        for (j, (lj, aj)) in members[..i].iter().enumerate() {
            if li == lj {
                return Err(CtError::DuplicateLabel(li.to_string()));
            }
            if orthogonal(i, j) {
                ai.check_same(aj)?;
                continue;
            }
            if let Some(w) = aj.overlap_witness(ai)? {
                return Err(CtError::Disjointness { first: member_name(lj, aj), second: member_name(li, ai), witness: w });
            }
        }
    }
    Ok(Variable { substrate, members })
}

fn member_name(label: &Label, a: &Attribute) -> String {
    match a.name() {
        Some(n) => format!("{label}:{n}"),
        None => label.to_string(),
    }
}

impl Variable {
    pub fn substrate(&self) -> &Arc<SubstrateSpec> {
        &self.substrate
    }

    pub fn members(&self) -> &[(Label, Attribute)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.members.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn attribute(&self, label: &Label) -> Option<&Attribute> {
        self.members.iter().find(|(l, _)| l == label).map(|(_, a)| a)
    }

    pub fn position(&self, label: &Label) -> Option<usize> {
        self.members.iter().position(|(l, _)| l == label)
    }

    pub fn attributes(&self) -> Vec<&Attribute> {
        self.members.iter().map(|(_, a)| a).collect()
    }

    /// `u_X`: the union of all members.
    pub fn union(&self) -> Result<Attribute> {
        Attribute::union(&self.attributes())
    }

    /// Numeric labels as exact rationals.
    pub fn numeric_labels(&self) -> Result<Vec<BigRational>> {
        self.members.iter().map(|(l, _)| l.as_rational().cloned()).collect()
    }

    /// Same attributes under new labels (validated for distinctness).
    pub fn relabel(&self, f: impl Fn(&Label) -> Result<Label>) -> Result<Variable> {
        let members = self
            .members
            .iter()
            .map(|(l, a)| Ok((f(l)?, a.clone())))
            .collect::<Result<Vec<_>>>()?;
        validate_variable(members)
    }

    /// Apply a map to every attribute, keeping labels.
    pub fn map_attributes(&self, f: impl Fn(&Attribute) -> Result<Attribute>) -> Result<Variable> {
        let members = self.members.iter().map(|(l, a)| Ok((l.clone(), f(a)?))).collect::<Result<Vec<_>>>()?;
        validate_variable(members)
    }

    /// Sub-variable keeping the members whose label satisfies `keep`.
    pub fn restrict(&self, keep: impl Fn(&Label, &Attribute) -> bool) -> Result<Variable> {
        let members: Vec<_> = self.members.iter().filter(|(l, a)| keep(l, a)).cloned().collect();
        validate_variable(members)
    }

    /// The variable whose members are those of both operands, labels made
    /// distinct by prefixing (e.g. `X:0`, `Y:0`). Disjointness is enforced.
    pub fn union_with(&self, other: &Variable, prefixes: (&str, &str)) -> Result<Variable> {
        let tag = |p: &str, l: &Label| Label::sym(format!("{p}:{l}"));
        let mut members: Vec<(Label, Attribute)> =
            self.members.iter().map(|(l, a)| (tag(prefixes.0, l), a.clone())).collect();
        members.extend(other.members.iter().map(|(l, a)| (tag(prefixes.1, l), a.clone())));
        validate_variable(members)
    }

    /// The product variable `X1 × X2` on the composite, labelled by pairs.
    pub fn product(&self, other: &Variable) -> Result<Variable> {
        let mut members = Vec::new();
        for (l1, a1) in &self.members {
            for (l2, a2) in &other.members {
                members.push((Label::sym(format!("({l1},{l2})")), a1.product(a2)?));
            }
        }
        validate_variable(members)
    }
}

/// The sum or product coarsening of `X1 × X2` on the composite substrate.
/// Attributes with the same combined label are united; subspace members
/// unite to the span.
pub fn coarsen_variable(x1: &Variable, x2: &Variable, mode: Coarsening) -> Result<Variable> {
    let l1 = x1.numeric_labels()?;
    let l2 = x2.numeric_labels()?;
    let mut buckets: BTreeMap<BigRational, Vec<Attribute>> = BTreeMap::new();
    for (i, (_, a1)) in x1.members.iter().enumerate() {
        for (j, (_, a2)) in x2.members.iter().enumerate() {
            let v = match mode {
                Coarsening::Sum => &l1[i] + &l2[j],
                Coarsening::Product => &l1[i] * &l2[j],
            };
            buckets.entry(v).or_default().push(a1.product(a2)?);
        }
    }
    let members = buckets
        .into_iter()
        .map(|(v, attrs)| {
            let refs: Vec<&Attribute> = attrs.iter().collect();
            Ok((Label::Num(v), Attribute::union(&refs)?))
        })
        .collect::<Result<Vec<_>>>()?;
    validate_variable(members)
}
