use std::fmt;
use std::sync::Arc;

use crate::error::{CtError, Result};
use crate::kernel::substrate::{compose_substrates, Kind, SubstrateSpec};
use crate::linalg::{self, CMat, CVec};
use crate::state::{PureState, QState};
use crate::tolerance::tol;

/// How an attribute's states are given.
#[derive(Debug, Clone, PartialEq)]
pub enum Repr {
    /// Indices into a classical universe.
    Points(Vec<usize>),
    /// Finite list of quantum states.
    States(Vec<QState>),
    /// All states supported in a subspace, given by an orthonormal basis.
    /// An empty basis is the empty attribute (only produced by `bar`).
    Subspace(Vec<CVec>),
}

/// A set of states of one substrate.
#[derive(Debug, Clone, PartialEq)]
pub struct Attribute {
    substrate: Arc<SubstrateSpec>,
    repr: Repr,
    name: Option<String>,
}

impl Attribute {
    /// Classical attribute from state indices.
    pub fn points(substrate: &Arc<SubstrateSpec>, indices: Vec<usize>) -> Result<Self> {
        if substrate.kind() != Kind::Classical {
            return Err(CtError::Representation("point sets need a classical substrate".into()));
        }
        if indices.is_empty() {
            return Err(CtError::InvalidAttribute("empty state set".into()));
        }
        let n = substrate.size();
        let mut seen = vec![false; n];
        for &i in &indices {
            if i >= n {
                return Err(CtError::InvalidAttribute(format!("state index {i} outside universe of {n}")));
            }
            if seen[i] {
                let label = substrate.label_of(i).unwrap_or("?");
                return Err(CtError::InvalidAttribute(format!("duplicate state `{label}`")));
            }
            seen[i] = true;
        }
        Ok(Attribute { substrate: substrate.clone(), repr: Repr::Points(indices), name: None })
    }

    /// Classical attribute from state labels.
    pub fn labelled<S: AsRef<str>>(substrate: &Arc<SubstrateSpec>, labels: &[S]) -> Result<Self> {
        let idx = labels
            .iter()
            .map(|l| {
                substrate
                    .index_of(l.as_ref())
                    .ok_or_else(|| CtError::InvalidAttribute(format!("unknown state `{}`", l.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::points(substrate, idx)
    }

    /// Extensional quantum attribute.
    pub fn states(substrate: &Arc<SubstrateSpec>, states: Vec<QState>) -> Result<Self> {
        if substrate.kind() != Kind::Quantum {
            return Err(CtError::Representation("state lists need a quantum substrate".into()));
        }
        if states.is_empty() {
            return Err(CtError::InvalidAttribute("empty state set".into()));
        }
        let d = substrate.size();
        let dims = substrate.atom_sizes();
        let mut out: Vec<QState> = Vec::with_capacity(states.len());
        for s in states {
            if s.dim() != d {
                return Err(CtError::DimensionMismatch { expected: d, found: s.dim() });
            }
            if out.iter().any(|t| t.same_state(&s)) {
                return Err(CtError::InvalidAttribute(format!("duplicate state {s}")));
            }
            let s = match s {
                QState::Pure(p) if p.dims() != dims.as_slice() => QState::Pure(p.regroup(dims.clone())?),
                QState::Mixed(m) if m.dims() != dims.as_slice() => QState::Mixed(m.regroup(dims.clone())?),
                other => other,
            };
            out.push(s);
        }
        Ok(Attribute { substrate: substrate.clone(), repr: Repr::States(out), name: None })
    }

    pub fn pure(substrate: &Arc<SubstrateSpec>, state: PureState) -> Result<Self> {
        Self::states(substrate, vec![QState::Pure(state)])
    }

    pub fn pures(substrate: &Arc<SubstrateSpec>, states: Vec<PureState>) -> Result<Self> {
        Self::states(substrate, states.into_iter().map(QState::Pure).collect())
    }

    /// Subspace attribute from an orthonormal basis.
    pub fn subspace(substrate: &Arc<SubstrateSpec>, basis: Vec<CVec>) -> Result<Self> {
        if substrate.kind() != Kind::Quantum {
            return Err(CtError::Representation("subspaces need a quantum substrate".into()));
        }
        let d = substrate.size();
        let t = tol();
        for (i, v) in basis.iter().enumerate() {
            if v.len() != d {
                return Err(CtError::DimensionMismatch { expected: d, found: v.len() });
            }
            for (j, w) in basis.iter().enumerate().take(i + 1) {
                let ip = linalg::inner(w, v).norm();
                let want = if i == j { 1.0 } else { 0.0 };
                if (ip - want).abs() > t {
                    return Err(CtError::InvalidAttribute("subspace basis is not orthonormal".into()));
                }
            }
        }
        Ok(Attribute { substrate: substrate.clone(), repr: Repr::Subspace(basis), name: None })
    }

    /// Subspace attribute spanned by arbitrary vectors.
    pub fn span(substrate: &Arc<SubstrateSpec>, vectors: &[CVec]) -> Result<Self> {
        Self::subspace(substrate, linalg::orthonormal_basis(vectors))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Name if set, otherwise a short rendering of the contents.
    pub fn describe(&self) -> String {
        if let Some(n) = &self.name {
            return n.clone();
        }
        match &self.repr {
            Repr::Points(p) => {
                let labels: Vec<&str> = p.iter().map(|&i| self.substrate.label_of(i).unwrap_or("?")).collect();
                format!("{{{}}}", labels.join(","))
            }
            Repr::States(s) => {
                let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", parts.join(", "))
            }
            Repr::Subspace(b) => format!("span(dim {})", b.len()),
        }
    }

    pub fn substrate(&self) -> &Arc<SubstrateSpec> {
        &self.substrate
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn kind(&self) -> Kind {
        self.substrate.kind()
    }

    pub fn is_subspace(&self) -> bool {
        matches!(self.repr, Repr::Subspace(_))
    }

    pub fn is_empty(&self) -> bool {
        matches!(&self.repr, Repr::Subspace(b) if b.is_empty())
    }

    /// Number of listed states (extensional) or subspace dimension.
    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Points(p) => p.len(),
            Repr::States(s) => s.len(),
            Repr::Subspace(b) => b.len(),
        }
    }

    pub fn points_list(&self) -> Result<&[usize]> {
        match &self.repr {
            Repr::Points(p) => Ok(p),
            _ => Err(CtError::Representation("expected a classical point set".into())),
        }
    }

    pub fn state_list(&self) -> Result<&[QState]> {
        match &self.repr {
            Repr::States(s) => Ok(s),
            Repr::Subspace(_) => Err(CtError::Representation(
                "subspace attribute given where an explicit state list is required; enumerate a basis first".into(),
            )),
            Repr::Points(_) => Err(CtError::Representation("expected quantum states".into())),
        }
    }

    /// All listed states as pure states.
    pub fn pure_states(&self) -> Result<Vec<PureState>> {
        self.state_list()?
            .iter()
            .map(|s| {
                s.to_pure()
                    .ok_or_else(|| CtError::Representation(format!("mixed state {s} where a pure state is required")))
            })
            .collect()
    }

    /// The single state of a singleton extensional attribute.
    pub fn single_state(&self) -> Option<&QState> {
        match &self.repr {
            Repr::States(s) if s.len() == 1 => Some(&s[0]),
            _ => None,
        }
    }

    /// Extensional attribute listing an orthonormal basis of a subspace
    /// (extensional attributes are returned unchanged).
    pub fn enumerate_basis(&self) -> Result<Attribute> {
        match &self.repr {
            Repr::Subspace(b) => {
                if b.is_empty() {
                    return Err(CtError::InvalidAttribute("empty subspace has no basis".into()));
                }
                let dims = self.substrate.atom_sizes();
                let states = b
                    .iter()
                    .map(|v| PureState::from_vector(v.clone(), dims.clone()).map(QState::Pure))
                    .collect::<Result<Vec<_>>>()?;
                let mut a = Attribute::states(&self.substrate, states)?;
                a.name = self.name.clone();
                Ok(a)
            }
            _ => Ok(self.clone()),
        }
    }

    /// Orthonormal basis of the span of all states (supports of mixed states included).
    pub fn span_basis(&self) -> Result<Vec<CVec>> {
        match &self.repr {
            Repr::Subspace(b) => Ok(b.clone()),
            Repr::States(s) => {
                let vecs: Vec<CVec> = s.iter().flat_map(|x| x.support()).collect();
                Ok(linalg::orthonormal_basis(&vecs))
            }
            Repr::Points(_) => Err(CtError::Representation("classical attribute has no span".into())),
        }
    }

    /// Projector onto the span.
    pub fn projector(&self) -> Result<CMat> {
        Ok(linalg::projector(&self.span_basis()?, self.substrate.size()))
    }

    pub(crate) fn check_same(&self, other: &Attribute) -> Result<()> {
        if self.substrate.same_as(&other.substrate) {
            Ok(())
        } else {
            Err(CtError::SubstrateMismatch(format!(
                "`{}` is on {} but `{}` is on {}",
                self.describe(),
                self.substrate.id(),
                other.describe(),
                other.substrate.id()
            )))
        }
    }

    /// Whether a quantum state belongs to this attribute.
    pub fn contains_state(&self, s: &QState) -> Result<bool> {
        match &self.repr {
            Repr::States(list) => Ok(list.iter().any(|t| t.same_state(s))),
            Repr::Subspace(b) => {
                if b.is_empty() {
                    return Ok(false);
                }
                let w = match s {
                    QState::Pure(p) => linalg::weight_in_span_pure(b, p.vector()),
                    QState::Mixed(m) => linalg::weight_in_span(b, m.matrix()),
                };
                Ok(w >= 1.0 - tol())
            }
            Repr::Points(_) => Err(CtError::Representation("classical attribute holds no quantum states".into())),
        }
    }

    /// `None` if disjoint, otherwise a rendering of a shared state.
    pub fn overlap_witness(&self, other: &Attribute) -> Result<Option<String>> {
        self.check_same(other)?;
        match (&self.repr, &other.repr) {
            (Repr::Points(a), Repr::Points(b)) => {
                Ok(a.iter().find(|i| b.contains(i)).map(|&i| self.substrate.label_of(i).unwrap_or("?").to_string()))
            }
            (Repr::States(a), _) => {
                for s in a {
                    if other.contains_state(s)? {
                        return Ok(Some(s.to_string()));
                    }
                }
                Ok(None)
            }
            (Repr::Subspace(_), Repr::States(_)) => other.overlap_witness(self),
            (Repr::Subspace(a), Repr::Subspace(b)) => Ok(linalg::intersection_witness(a, b).map(|v| {
                let dims = self.substrate.atom_sizes();
                PureState::from_vector(v, dims).map(|p| p.to_string()).unwrap_or_else(|_| "vector".into())
            })),
            _ => Err(CtError::Representation("cannot compare classical and quantum attributes".into())),
        }
    }

    pub fn is_disjoint(&self, other: &Attribute) -> Result<bool> {
        Ok(self.overlap_witness(other)?.is_none())
    }

    /// Set inclusion `self ⊆ other`.
    pub fn is_subset(&self, other: &Attribute) -> Result<bool> {
        self.check_same(other)?;
        match (&self.repr, &other.repr) {
            (Repr::Points(a), Repr::Points(b)) => Ok(a.iter().all(|i| b.contains(i))),
            (Repr::States(a), _) => {
                for s in a {
                    if !other.contains_state(s)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (Repr::Subspace(a), Repr::Subspace(b)) => Ok(linalg::intersection_dim(a, b) == a.len()),
            (Repr::Subspace(a), Repr::States(list)) => match a.len() {
                0 => Ok(true),
                // A one-dimensional subspace holds exactly one physical state.
                1 => {
                    let p = PureState::from_vector(a[0].clone(), self.substrate.atom_sizes())?;
                    Ok(list.iter().any(|t| t.same_state(&QState::Pure(p.clone()))))
                }
                _ => Ok(false),
            },
            _ => Err(CtError::Representation("cannot compare classical and quantum attributes".into())),
        }
    }

    pub fn set_eq(&self, other: &Attribute) -> Result<bool> {
        Ok(self.is_subset(other)? && other.is_subset(self)?)
    }

    /// The attribute `(a, b)` on the composite substrate.
    pub fn product(&self, other: &Attribute) -> Result<Attribute> {
        let sub = compose_substrates(&self.substrate, &other.substrate)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Points(a), Repr::Points(b)) => {
                let nb = other.substrate.size();
                Repr::Points(a.iter().flat_map(|&i| b.iter().map(move |&j| i * nb + j)).collect())
            }
            (Repr::States(a), Repr::States(b)) => {
                Repr::States(a.iter().flat_map(|x| b.iter().map(move |y| x.tensor(y))).collect())
            }
            _ => {
                let a = self.as_subspace_basis()?;
                let b = other.as_subspace_basis()?;
                Repr::Subspace(a.iter().flat_map(|x| b.iter().map(move |y| linalg::kron_vec(x, y))).collect())
            }
        };
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) => Some(format!("({a},{b})")),
            _ => None,
        };
        Ok(Attribute { substrate: sub, repr, name })
    }

    /// Basis of a subspace attribute, or of a single pure state viewed as a
    /// one-dimensional subspace. Other extensional sets are not subspaces.
    pub(crate) fn as_subspace_basis(&self) -> Result<Vec<CVec>> {
        match &self.repr {
            Repr::Subspace(b) => Ok(b.clone()),
            Repr::States(s) if s.len() == 1 => match s[0].to_pure() {
                Some(p) => Ok(vec![p.vector().clone()]),
                None => Err(CtError::Representation("mixed state cannot be combined with a subspace".into())),
            },
            _ => Err(CtError::Representation(
                "cannot combine a multi-state extensional attribute with a subspace attribute".into(),
            )),
        }
    }

    /// Union of attributes on one substrate. Extensional sets are concatenated;
    /// if any member is a subspace the result is the span of everything.
    pub fn union(parts: &[&Attribute]) -> Result<Attribute> {
        let first = parts.first().ok_or_else(|| CtError::InvalidAttribute("empty union".into()))?;
        for p in parts {
            first.check_same(p)?;
        }
        let sub = first.substrate.clone();
        if parts.iter().all(|p| matches!(p.repr, Repr::Points(_))) {
            let mut idx: Vec<usize> = Vec::new();
            for p in parts {
                for &i in p.points_list()? {
                    if !idx.contains(&i) {
                        idx.push(i);
                    }
                }
            }
            return Attribute::points(&sub, idx);
        }
        if parts.iter().all(|p| matches!(p.repr, Repr::States(_))) {
            let mut states: Vec<QState> = Vec::new();
            for p in parts {
                for s in p.state_list()? {
                    if !states.iter().any(|t| t.same_state(s)) {
                        states.push(s.clone());
                    }
                }
            }
            return Attribute::states(&sub, states);
        }
        let mut vecs = Vec::new();
        for p in parts {
            vecs.extend(p.span_basis()?);
        }
        Attribute::span(&sub, &vecs)
    }

    /// Image under a permutation of classical states.
    pub fn map_points(&self, perm: &[usize]) -> Result<Attribute> {
        let p = self.points_list()?;
        let mut a = Attribute::points(&self.substrate, p.iter().map(|&i| perm[i]).collect())?;
        a.name = self.name.clone();
        Ok(a)
    }

    /// Image under a unitary on the substrate.
    pub fn map_unitary(&self, u: &CMat) -> Result<Attribute> {
        let d = self.substrate.size();
        if u.nrows() != d {
            return Err(CtError::DimensionMismatch { expected: d, found: u.nrows() });
        }
        let repr = match &self.repr {
            Repr::States(s) => Repr::States(s.iter().map(|x| x.apply(u)).collect::<Result<Vec<_>>>()?),
            Repr::Subspace(b) => Repr::Subspace(b.iter().map(|v| u * v).collect()),
            Repr::Points(_) => return Err(CtError::Representation("unitary on classical attribute".into())),
        };
        Ok(Attribute { substrate: self.substrate.clone(), repr, name: self.name.clone() })
    }

    /// Replace the substrate reference (e.g. after regrouping factors of the same size).
    pub(crate) fn rehome(&self, substrate: &Arc<SubstrateSpec>) -> Result<Attribute> {
        if substrate.size() != self.substrate.size() || substrate.kind() != self.substrate.kind() {
            return Err(CtError::SubstrateMismatch(format!("cannot move attribute to {}", substrate.id())));
        }
        let dims = substrate.atom_sizes();
        let repr = match &self.repr {
            Repr::States(s) => Repr::States(
                s.iter()
                    .map(|x| match x {
                        QState::Pure(p) => p.regroup(dims.clone()).map(QState::Pure),
                        QState::Mixed(m) => m.regroup(dims.clone()).map(QState::Mixed),
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            other => other.clone(),
        };
        Ok(Attribute { substrate: substrate.clone(), repr, name: self.name.clone() })
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::basis_vector;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn qubit() -> Arc<SubstrateSpec> {
        SubstrateSpec::quantum("q", 2).unwrap()
    }

    #[test]
    fn duplicate_states_rejected() {
        let q = qubit();
        let plus = PureState::from_real(&[S, S]).unwrap();
        let minus_phase = PureState::from_real(&[-S, -S]).unwrap();
        assert!(Attribute::pures(&q, vec![plus, minus_phase]).is_err());
    }

    #[test]
    fn singleton_equals_its_line() {
        let q = qubit();
        let zero = Attribute::pure(&q, PureState::basis(2, 0)).unwrap();
        let line = Attribute::subspace(&q, vec![basis_vector(2, 0)]).unwrap();
        assert!(zero.set_eq(&line).unwrap());
        let both = Attribute::pures(&q, vec![PureState::basis(2, 0), PureState::basis(2, 1)]).unwrap();
        let plane = Attribute::span(&q, &[basis_vector(2, 0), basis_vector(2, 1)]).unwrap();
        assert!(both.is_subset(&plane).unwrap());
        assert!(!plane.is_subset(&both).unwrap());
    }

    #[test]
    fn non_orthogonal_singletons_are_disjoint() {
        let q = qubit();
        let zero = Attribute::pure(&q, PureState::basis(2, 0)).unwrap();
        let plus = Attribute::pure(&q, PureState::from_real(&[S, S]).unwrap()).unwrap();
        assert!(zero.is_disjoint(&plus).unwrap());
    }

    #[test]
    fn cross_substrate_rejected() {
        let a = Attribute::pure(&qubit(), PureState::basis(2, 0)).unwrap();
        let other = SubstrateSpec::quantum("r", 2).unwrap();
        let b = Attribute::pure(&other, PureState::basis(2, 0)).unwrap();
        assert!(matches!(a.is_disjoint(&b), Err(CtError::SubstrateMismatch(_))));
    }

    #[test]
    fn classical_product_indices() {
        let bit = SubstrateSpec::classical("bit", vec!["0", "1"]).unwrap();
        let one = Attribute::labelled(&bit, &["1"]).unwrap();
        let zero = Attribute::labelled(&bit, &["0"]).unwrap();
        let p = one.product(&zero).unwrap();
        assert_eq!(p.points_list().unwrap(), &[2]);
        assert_eq!(p.substrate().label_of(2), Some("1,0"));
    }
}
