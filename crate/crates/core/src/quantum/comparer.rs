//! Two-outcome measurement of whether two factors hold the same basis value.

use serde::Serialize;

use crate::error::{CtError, Result};
use crate::linalg::{self, CMat, CVec};
use crate::state::QState;
use crate::tolerance::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    SharpYes,
    SharpNo,
    NonSharp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparerResult {
    pub outcome: Comparison,
    pub expectation: f64,
}

/// Projector onto `span{|x>_a |x>_b}` inside a joint system.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparer {
    dims: Vec<usize>,
    projector: CMat,
}

/// Comparer of factors `a` and `b` of a joint system with factor sizes `dims`,
/// using basis `basis_a[k]` on `a` paired with `basis_b[k]` on `b`.
pub fn build_comparer(dims: &[usize], a: usize, b: usize, basis_a: &[CVec], basis_b: &[CVec]) -> Result<Comparer> {
    if a == b {
        return Err(CtError::Precondition("comparer needs two distinct factors".into()));
    }
    for &f in &[a, b] {
        if f >= dims.len() {
            return Err(CtError::BadFactor { index: f, factors: dims.len() });
        }
    }
    if basis_a.len() != basis_b.len() {
        return Err(CtError::Precondition("the two bases must have the same labels".into()));
    }
    for (v, d) in basis_a.iter().map(|v| (v, dims[a])).chain(basis_b.iter().map(|v| (v, dims[b]))) {
        if v.len() != d {
            return Err(CtError::DimensionMismatch { expected: d, found: v.len() });
        }
    }
    let pairs: Vec<CVec> = basis_a.iter().zip(basis_b).map(|(x, y)| linalg::kron_vec(x, y)).collect();
    let local = linalg::projector(&linalg::orthonormal_basis(&pairs), dims[a] * dims[b]);
    let projector = linalg::embed_operator(&local, dims, &[a, b])?;
    Ok(Comparer { dims: dims.to_vec(), projector })
}

impl Comparer {
    pub fn projector(&self) -> &CMat {
        &self.projector
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn compare(&self, joint: &QState) -> Result<ComparerResult> {
        let d = self.projector.nrows();
        if joint.dim() != d {
            return Err(CtError::DimensionMismatch { expected: d, found: joint.dim() });
        }
        let e = joint.expectation(&self.projector);
        let t = tol();
        let outcome = if e >= 1.0 - t {
            Comparison::SharpYes
        } else if e <= t {
            Comparison::SharpNo
        } else {
            Comparison::NonSharp
        };
        Ok(ComparerResult { outcome, expectation: e })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::basis_vector;
    use crate::state::PureState;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn qubit_comparer() -> Comparer {
        let b: Vec<CVec> = (0..2).map(|k| basis_vector(2, k)).collect();
        build_comparer(&[2, 2], 0, 1, &b, &b).unwrap()
    }

    #[test]
    fn bell_state_is_sharp_yes() {
        let bell = PureState::from_real(&[S, 0.0, 0.0, S]).unwrap();
        assert_eq!(qubit_comparer().compare(&bell.into()).unwrap().outcome, Comparison::SharpYes);
    }

    #[test]
    fn mismatched_basis_state_is_sharp_no() {
        let s = PureState::basis(4, 1);
        assert_eq!(qubit_comparer().compare(&s.into()).unwrap().outcome, Comparison::SharpNo);
    }

    #[test]
    fn half_overlap_is_not_sharp() {
        let s = PureState::from_real(&[S, S, 0.0, 0.0]).unwrap();
        let r = qubit_comparer().compare(&s.into()).unwrap();
        assert_eq!(r.outcome, Comparison::NonSharp);
        assert!((r.expectation - 0.5).abs() < 1e-12);
    }

    #[test]
    fn embedded_comparer_ignores_middle_factor() {
        let b: Vec<CVec> = (0..2).map(|k| basis_vector(2, k)).collect();
        let cmp = build_comparer(&[2, 3, 2], 0, 2, &b, &b).unwrap();
        let s = PureState::basis(2, 1).tensor(&PureState::basis(3, 2)).tensor(&PureState::basis(2, 1));
        assert_eq!(cmp.compare(&s.into()).unwrap().outcome, Comparison::SharpYes);
    }
}
