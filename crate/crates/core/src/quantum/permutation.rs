//! Unitaries permuting the members of an orthonormal labelled basis.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;

use crate::error::{CtError, Result};
use crate::kernel::Variable;
use crate::label::Label;
use crate::linalg::{self, CMat, CVec};

/// A bijection on a finite label set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelPermutation {
    map: BTreeMap<Label, Label>,
}

impl LabelPermutation {
    pub fn from_pairs(pairs: Vec<(Label, Label)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (a, b) in pairs {
            if map.insert(a.clone(), b).is_some() {
                return Err(CtError::PermutationClosure(format!("label `{a}` mapped twice")));
            }
        }
        let dom: BTreeSet<&Label> = map.keys().collect();
        let img: BTreeSet<&Label> = map.values().collect();
        if dom != img {
            return Err(CtError::PermutationClosure("image differs from domain".into()));
        }
        Ok(LabelPermutation { map })
    }

    pub fn identity(labels: &[Label]) -> Self {
        LabelPermutation { map: labels.iter().map(|l| (l.clone(), l.clone())).collect() }
    }

    /// Exchange `a` and `b`, fixing every other label.
    pub fn transposition(labels: &[Label], a: &Label, b: &Label) -> Result<Self> {
        if !labels.contains(a) || !labels.contains(b) {
            return Err(CtError::PermutationClosure(format!("`{a}` or `{b}` is not a label")));
        }
        let pairs = labels
            .iter()
            .map(|l| {
                let img = if l == a {
                    b.clone()
                } else if l == b {
                    a.clone()
                } else {
                    l.clone()
                };
                (l.clone(), img)
            })
            .collect();
        Self::from_pairs(pairs)
    }

    /// `x -> x + k` when that is closed on the labels, otherwise a cyclic
    /// shift by `k` positions in label order.
    pub fn shift(labels: &[Label], k: i64) -> Result<Self> {
        let set: BTreeSet<&Label> = labels.iter().collect();
        let kk = BigRational::from_integer(k.into());
        let arithmetic: Option<Vec<(Label, Label)>> = labels
            .iter()
            .map(|l| {
                let v = l.as_rational().ok()? + &kk;
                let img = Label::Num(v);
                set.contains(&img).then(|| (l.clone(), img))
            })
            .collect();
        if let Some(pairs) = arithmetic {
            return Self::from_pairs(pairs);
        }
        let mut sorted: Vec<Label> = labels.to_vec();
        sorted.sort();
        let n = sorted.len() as i64;
        let pairs = sorted
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), sorted[((i as i64 + k).rem_euclid(n)) as usize].clone()))
            .collect();
        Self::from_pairs(pairs)
    }

    /// `x -> -x`; the labels must be numeric and closed under negation.
    pub fn reflection(labels: &[Label]) -> Result<Self> {
        let set: BTreeSet<&Label> = labels.iter().collect();
        let pairs = labels
            .iter()
            .map(|l| {
                let img = Label::Num(-l.as_rational()?.clone());
                if set.contains(&img) {
                    Ok((l.clone(), img))
                } else {
                    Err(CtError::PermutationClosure(format!("-{l} is not a label")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_pairs(pairs)
    }

    pub fn apply(&self, l: &Label) -> Result<Label> {
        self.map.get(l).cloned().ok_or_else(|| CtError::PermutationClosure(format!("`{l}` not in domain")))
    }

    pub fn inverse(&self) -> Self {
        LabelPermutation { map: self.map.iter().map(|(a, b)| (b.clone(), a.clone())).collect() }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Label, &Label)> {
        self.map.iter()
    }
}

/// Unitary `U` with `U|x> = |Π(x)>` on the basis and identity on its orthogonal complement.
pub fn permutation_computation(pi: &LabelPermutation, labels: &[Label], basis: &[CVec]) -> Result<CMat> {
    if labels.len() != basis.len() {
        return Err(CtError::Precondition("one basis vector per label required".into()));
    }
    let dim = basis.first().map(|v| v.len()).ok_or_else(|| CtError::Precondition("empty basis".into()))?;
    let domain: BTreeSet<&Label> = pi.map.keys().collect();
    let given: BTreeSet<&Label> = labels.iter().collect();
    if domain != given {
        return Err(CtError::PermutationClosure("permutation domain differs from the basis labels".into()));
    }
    let p = linalg::projector(basis, dim);
    let mut u = linalg::identity(dim) - p;
    for (l, v) in labels.iter().zip(basis) {
        let img = pi.apply(l)?;
        let k = labels.iter().position(|x| *x == img).expect("closed");
        u += linalg::outer(&basis[k], v);
    }
    if !linalg::is_unitary(&u, 1e-9) {
        return Err(CtError::Precondition("basis is not orthonormal".into()));
    }
    Ok(u)
}

/// Orthonormal basis vector of each member of a variable of single pure states
/// (or one-dimensional subspaces).
pub fn variable_basis(x: &Variable) -> Result<Vec<CVec>> {
    x.members()
        .iter()
        .map(|(l, a)| {
            let b = a.span_basis()?;
            if b.len() != 1 {
                return Err(CtError::Precondition(format!("member `{l}` is not a single pure state")));
            }
            Ok(b[0].clone())
        })
        .collect()
}

/// Permutation computation for a variable of single pure states.
pub fn permutation_unitary(pi: &LabelPermutation, x: &Variable) -> Result<CMat> {
    permutation_computation(pi, &x.labels(), &variable_basis(x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis_vector, c};
    use crate::state::PureState;

    fn labels(xs: &[i64]) -> Vec<Label> {
        xs.iter().map(|&x| Label::int(x)).collect()
    }

    #[test]
    fn swap_fixes_plus() {
        let ls = labels(&[0, 1]);
        let b: Vec<CVec> = (0..2).map(|k| basis_vector(2, k)).collect();
        let s = LabelPermutation::transposition(&ls, &ls[0], &ls[1]).unwrap();
        let u = permutation_computation(&s, &ls, &b).unwrap();
        let plus = PureState::from_real(&[0.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
        assert!(plus.apply(&u).unwrap().same_ray(&plus));
        assert!((u[(0, 1)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn identity_gives_identity() {
        let ls = labels(&[0, 1, 2]);
        let b: Vec<CVec> = (0..3).map(|k| basis_vector(3, k)).collect();
        let u = permutation_computation(&LabelPermutation::identity(&ls), &ls, &b).unwrap();
        assert!((u - linalg::identity(3)).camax() < 1e-15);
    }

    #[test]
    fn cyclic_shift_moves_zero_to_one() {
        let ls = labels(&[0, 1, 2]);
        let b: Vec<CVec> = (0..3).map(|k| basis_vector(3, k)).collect();
        let t = LabelPermutation::shift(&ls, 1).unwrap();
        assert_eq!(t.apply(&Label::int(2)).unwrap(), Label::int(0));
        let u = permutation_computation(&t, &ls, &b).unwrap();
        assert!((&u * &b[0] - &b[1]).camax() < 1e-15);
    }

    #[test]
    fn reflection_needs_negation_closure() {
        assert!(LabelPermutation::reflection(&labels(&[-1, 0, 1])).is_ok());
        assert!(matches!(LabelPermutation::reflection(&labels(&[0, 1])), Err(CtError::PermutationClosure(_))));
    }
}
