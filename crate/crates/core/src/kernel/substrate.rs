use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{CtError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Classical,
    Quantum,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Classical => f.write_str("classical"),
            Kind::Quantum => f.write_str("quantum"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Universe {
    /// Finite set of named classical states.
    Labels(Vec<String>),
    /// Complex Hilbert-space dimension.
    Dim(usize),
}

/// A physical system: a finite classical state set or a finite-dimensional
/// quantum system, possibly composite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstrateSpec {
    id: String,
    kind: Kind,
    universe: Universe,
    factors: Vec<Arc<SubstrateSpec>>,
}

impl SubstrateSpec {
    pub fn classical<S: Into<String>>(id: impl Into<String>, labels: Vec<S>) -> Result<Arc<Self>> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let id = id.into();
        if labels.is_empty() {
            return Err(CtError::InvalidComposition(format!("classical substrate `{id}` has no states")));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(CtError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Arc::new(SubstrateSpec { id, kind: Kind::Classical, universe: Universe::Labels(labels), factors: vec![] }))
    }

    pub fn quantum(id: impl Into<String>, dim: usize) -> Result<Arc<Self>> {
        let id = id.into();
        if dim == 0 {
            return Err(CtError::InvalidComposition(format!("quantum substrate `{id}` has dimension 0")));
        }
        Ok(Arc::new(SubstrateSpec { id, kind: Kind::Quantum, universe: Universe::Dim(dim), factors: vec![] }))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn factors(&self) -> &[Arc<SubstrateSpec>] {
        &self.factors
    }

    pub fn is_atomic(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of classical states, or the Hilbert-space dimension.
    pub fn size(&self) -> usize {
        match &self.universe {
            Universe::Labels(l) => l.len(),
            Universe::Dim(d) => *d,
        }
    }

    /// Atomic factors in order, with nested composites flattened.
    pub fn atoms(&self) -> Vec<Arc<SubstrateSpec>> {
        if self.factors.is_empty() {
            return vec![Arc::new(self.clone())];
        }
        self.factors.iter().flat_map(|f| f.atoms()).collect()
    }

    /// Sizes of the atomic factors (the tensor structure of a quantum composite).
    pub fn atom_sizes(&self) -> Vec<usize> {
        self.atoms().iter().map(|a| a.size()).collect()
    }

    pub fn label_of(&self, index: usize) -> Option<&str> {
        match &self.universe {
            Universe::Labels(l) => l.get(index).map(String::as_str),
            Universe::Dim(_) => None,
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        match &self.universe {
            Universe::Labels(l) => l.iter().position(|x| x == label),
            Universe::Dim(_) => None,
        }
    }

    /// Same system: identical structure. Pointer equality is checked first.
    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

impl fmt::Display for SubstrateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}, {} states)", self.id, self.kind, self.size())
    }
}

/// The composite `a ⊕ b`. Classical states are ordered pairs (first factor
/// major); the quantum dimension is the tensor product.
pub fn compose_substrates(a: &Arc<SubstrateSpec>, b: &Arc<SubstrateSpec>) -> Result<Arc<SubstrateSpec>> {
    if a.kind != b.kind {
        return Err(CtError::InvalidComposition(format!(
            "cannot compose {} substrate `{}` with {} substrate `{}`",
            a.kind, a.id, b.kind, b.id
        )));
    }
    let universe = match (&a.universe, &b.universe) {
        (Universe::Labels(la), Universe::Labels(lb)) => {
            let mut out = Vec::with_capacity(la.len() * lb.len());
            for x in la {
                for y in lb {
                    out.push(format!("{x},{y}"));
                }
            }
            Universe::Labels(out)
        }
        (Universe::Dim(da), Universe::Dim(db)) => Universe::Dim(da * db),
        _ => unreachable!("kinds already checked"),
    };
    Ok(Arc::new(SubstrateSpec {
        id: format!("{}*{}", a.id, b.id),
        kind: a.kind,
        universe,
        factors: vec![a.clone(), b.clone()],
    }))
}

/// Fold `compose_substrates` over a nonempty list.
pub fn compose_all(parts: &[Arc<SubstrateSpec>]) -> Result<Arc<SubstrateSpec>> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| CtError::InvalidComposition("no substrates to compose".into()))?;
    rest.iter().try_fold(first.clone(), |acc, s| compose_substrates(&acc, s))
}
