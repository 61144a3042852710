//! Pure and mixed quantum states with an explicit tensor-factor structure.

use std::fmt;

use crate::error::{CtError, Result};
use crate::linalg::{self, c, C64, CMat, CVec};
use crate::tolerance::tol;

/// Unit vector in `C^d`; `dims` records the tensor factors (product equals `d`).
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: CVec,
    dims: Vec<usize>,
}

impl PureState {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let d = amps.len();
        Self::with_dims(amps, vec![d])
    }

    pub fn with_dims(amps: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        let v = CVec::from_vec(amps);
        Self::from_vector(v, dims)
    }

    pub fn from_vector(amps: CVec, dims: Vec<usize>) -> Result<Self> {
        if amps.is_empty() {
            return Err(CtError::InvalidState("empty amplitude list".into()));
        }
        let total: usize = dims.iter().product();
        if total != amps.len() || dims.iter().any(|&d| d == 0) {
            return Err(CtError::DimensionMismatch { expected: total, found: amps.len() });
        }
        let n = amps.norm();
        if (n - 1.0).abs() > tol() {
            return Err(CtError::InvalidState(format!("norm {n} is not 1")));
        }
        Ok(PureState { amps, dims })
    }

    /// Normalise the given amplitudes (must be non-zero).
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let d = amps.len();
        let v = CVec::from_vec(amps);
        let n = v.norm();
        if n < 1e-300 {
            return Err(CtError::InvalidState("zero vector".into()));
        }
        Self::from_vector(v / c(n, 0.0), vec![d])
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|x| c(*x, 0.0)).collect())
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        PureState { amps: linalg::basis_vector(dim, index), dims: vec![dim] }
    }

    /// Equal superposition of the given states (which need not be orthogonal).
    pub fn superpose(states: &[&PureState], coeffs: &[C64]) -> Result<Self> {
        let first = states.first().ok_or_else(|| CtError::InvalidState("no states".into()))?;
        let mut v = CVec::zeros(first.dim());
        for (s, a) in states.iter().zip(coeffs) {
            if s.dim() != first.dim() {
                return Err(CtError::DimensionMismatch { expected: first.dim(), found: s.dim() });
            }
            v += &s.amps * *a;
        }
        let n = v.norm();
        if n < 1e-300 {
            return Err(CtError::InvalidState("superposition vanishes".into()));
        }
        Self::from_vector(v / c(n, 0.0), first.dims.clone())
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn vector(&self) -> &CVec {
        &self.amps
    }

    pub fn amplitude(&self, i: usize) -> C64 {
        self.amps[i]
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        linalg::inner(&self.amps, &other.amps)
    }

    /// Phase-insensitive equality: `|<a|b>| >= 1 - tol`.
    pub fn same_ray(&self, other: &PureState) -> bool {
        self.dim() == other.dim() && self.inner(other).norm() >= 1.0 - tol()
    }

    pub fn orthogonal_to(&self, other: &PureState) -> bool {
        self.inner(other).norm() <= tol()
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        PureState { amps: linalg::kron_vec(&self.amps, &other.amps), dims }
    }

    /// Reinterpret the factor structure (product must match).
    pub fn regroup(&self, dims: Vec<usize>) -> Result<PureState> {
        Self::from_vector(self.amps.clone(), dims)
    }

    pub fn density(&self) -> MixedState {
        MixedState { matrix: linalg::outer(&self.amps, &self.amps), dims: self.dims.clone() }
    }

    pub fn apply(&self, u: &CMat) -> Result<PureState> {
        if u.ncols() != self.dim() {
            return Err(CtError::DimensionMismatch { expected: u.ncols(), found: self.dim() });
        }
        PureState::from_vector(u * &self.amps, self.dims.clone())
    }

    /// `<psi|P|psi>` for a Hermitian operator `P`.
    pub fn expectation(&self, p: &CMat) -> f64 {
        linalg::inner(&self.amps, &(p * &self.amps)).re
    }

    /// Pure state with the first significant amplitude made real positive.
    pub fn canonical_phase(&self) -> PureState {
        PureState { amps: linalg::normalise_phase(&self.amps), dims: self.dims.clone() }
    }
}

impl fmt::Display for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let canon = self.canonical_phase();
        write!(f, "[")?;
        for (i, a) in canon.amps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if a.im.abs() < 1e-12 {
                write!(f, "{:.6}", a.re)?;
            } else {
                write!(f, "{:.6}{:+.6}i", a.re, a.im)?;
            }
        }
        write!(f, "]")
    }
}

/// Density operator: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedState {
    matrix: CMat,
    dims: Vec<usize>,
}

impl MixedState {
    pub fn new(matrix: CMat) -> Result<Self> {
        let d = matrix.nrows();
        Self::with_dims(matrix, vec![d])
    }

    pub fn with_dims(matrix: CMat, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if !matrix.is_square() || matrix.nrows() != total || total == 0 {
            return Err(CtError::DimensionMismatch { expected: total, found: matrix.nrows() });
        }
        let t = tol();
        if !linalg::is_hermitian(&matrix, t) {
            return Err(CtError::InvalidState("density matrix is not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > t || tr.im.abs() > t {
            return Err(CtError::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = linalg::min_eigenvalue_hermitian(&matrix);
        if min < -t {
            return Err(CtError::InvalidState(format!("minimum eigenvalue {min} is negative")));
        }
        Ok(MixedState { matrix, dims })
    }

    /// Maximally mixed state on `C^d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        MixedState { matrix: linalg::identity(dim) * c(1.0 / dim as f64, 0.0), dims: vec![dim] }
    }

    /// Convex combination of pure states with the given weights (summing to 1).
    pub fn mixture(parts: &[(f64, &PureState)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| CtError::InvalidState("empty mixture".into()))?;
        let d = first.1.dim();
        let mut m = CMat::zeros(d, d);
        for (w, s) in parts {
            if s.dim() != d {
                return Err(CtError::DimensionMismatch { expected: d, found: s.dim() });
            }
            m += s.density().matrix * c(*w, 0.0);
        }
        Self::with_dims(m, first.1.dims.clone())
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn tensor(&self, other: &MixedState) -> MixedState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        MixedState { matrix: linalg::kron(&self.matrix, &other.matrix), dims }
    }

    pub fn regroup(&self, dims: Vec<usize>) -> Result<MixedState> {
        Self::with_dims(self.matrix.clone(), dims)
    }

    /// Reduced state on the kept factors (partial trace over the rest).
    pub fn reduce(&self, keep: &[usize]) -> Result<MixedState> {
        let m = linalg::partial_trace(&self.matrix, &self.dims, keep)?;
        let dims = keep.iter().map(|&k| self.dims[k]).collect();
        Ok(MixedState { matrix: m, dims })
    }

    pub fn apply(&self, u: &CMat) -> Result<MixedState> {
        if u.ncols() != self.dim() {
            return Err(CtError::DimensionMismatch { expected: u.ncols(), found: self.dim() });
        }
        Ok(MixedState { matrix: u * &self.matrix * u.adjoint(), dims: self.dims.clone() })
    }

    /// `Tr(rho P)`.
    pub fn expectation(&self, p: &CMat) -> f64 {
        (&self.matrix * p).trace().re
    }

    pub fn approx_eq(&self, other: &MixedState) -> bool {
        self.dim() == other.dim() && (&self.matrix - &other.matrix).camax() <= tol()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Eigenvectors spanning the support.
    pub fn support(&self) -> Vec<CVec> {
        linalg::support(&self.matrix, 1e-7).into_iter().map(|(_, v)| v).collect()
    }

    /// The pure state if this density matrix has rank one.
    pub fn as_pure(&self) -> Option<PureState> {
        let sup = linalg::support(&self.matrix, 1e-7);
        if sup.len() == 1 && (sup[0].0 - 1.0).abs() <= 1e-7 {
            PureState::from_vector(linalg::normalise_phase(&sup[0].1), self.dims.clone()).ok()
        } else {
            None
        }
    }
}

/// Either kind of quantum state.
#[derive(Debug, Clone, PartialEq)]
pub enum QState {
    Pure(PureState),
    Mixed(MixedState),
}

impl QState {
    pub fn dim(&self) -> usize {
        match self {
            QState::Pure(p) => p.dim(),
            QState::Mixed(m) => m.dim(),
        }
    }

    pub fn dims(&self) -> &[usize] {
        match self {
            QState::Pure(p) => p.dims(),
            QState::Mixed(m) => m.dims(),
        }
    }

    pub fn density(&self) -> MixedState {
        match self {
            QState::Pure(p) => p.density(),
            QState::Mixed(m) => m.clone(),
        }
    }

    pub fn expectation(&self, p: &CMat) -> f64 {
        match self {
            QState::Pure(s) => s.expectation(p),
            QState::Mixed(m) => m.expectation(p),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            QState::Pure(p) => Some(p),
            QState::Mixed(_) => None,
        }
    }

    /// Pure if possible (rank-one mixed states are converted).
    pub fn to_pure(&self) -> Option<PureState> {
        match self {
            QState::Pure(p) => Some(p.clone()),
            QState::Mixed(m) => m.as_pure(),
        }
    }

    /// Equality of physical states: phase-insensitive for pure states,
    /// entrywise density-matrix comparison otherwise.
    pub fn same_state(&self, other: &QState) -> bool {
        match (self, other) {
            (QState::Pure(a), QState::Pure(b)) => a.same_ray(b),
            _ => self.density().approx_eq(&other.density()),
        }
    }

    pub fn tensor(&self, other: &QState) -> QState {
        match (self, other) {
            (QState::Pure(a), QState::Pure(b)) => QState::Pure(a.tensor(b)),
            _ => QState::Mixed(self.density().tensor(&other.density())),
        }
    }

    pub fn apply(&self, u: &CMat) -> Result<QState> {
        Ok(match self {
            QState::Pure(p) => QState::Pure(p.apply(u)?),
            QState::Mixed(m) => QState::Mixed(m.apply(u)?),
        })
    }

    /// Vectors spanning the support.
    pub fn support(&self) -> Vec<CVec> {
        match self {
            QState::Pure(p) => vec![p.vector().clone()],
            QState::Mixed(m) => m.support(),
        }
    }
}

impl From<PureState> for QState {
    fn from(p: PureState) -> Self {
        QState::Pure(p)
    }
}

impl From<MixedState> for QState {
    fn from(m: MixedState) -> Self {
        QState::Mixed(m)
    }
}

impl fmt::Display for QState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QState::Pure(p) => write!(f, "{p}"),
            QState::Mixed(m) => {
                write!(f, "rho(diag=[")?;
                for i in 0..m.dim() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{:.6}", m.matrix()[(i, i)].re)?;
                }
                write!(f, "])")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn rejects_non_unit_vectors() {
        assert!(PureState::from_real(&[1.0, 1.0]).is_err());
        assert!(PureState::from_real(&[S, S]).is_ok());
    }

    #[test]
    fn phase_insensitive_equality() {
        let a = PureState::from_real(&[S, S]).unwrap();
        let b = PureState::new(vec![c(0.0, S), c(0.0, S)]).unwrap();
        assert!(a.same_ray(&b));
        assert!(!a.same_ray(&PureState::basis(2, 0)));
    }

    #[test]
    fn bell_reduction_is_maximally_mixed() {
        let bell = PureState::with_dims(vec![c(S, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(S, 0.0)], vec![2, 2]).unwrap();
        let r = bell.density().reduce(&[0]).unwrap();
        assert!(r.approx_eq(&MixedState::maximally_mixed(2)));
    }

    #[test]
    fn mixed_validation() {
        let bad = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(MixedState::new(bad).is_err());
        let neg = CMat::from_row_slice(2, 2, &[c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        assert!(MixedState::new(neg).is_err());
    }

    #[test]
    fn rank_one_mixed_is_pure() {
        let plus = PureState::from_real(&[S, S]).unwrap();
        let back = plus.density().as_pure().unwrap();
        assert!(back.same_ray(&plus));
        assert!(MixedState::maximally_mixed(2).as_pure().is_none());
    }
}
