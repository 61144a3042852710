//! Small dense complex linear algebra on top of nalgebra.
//!
//! Dimensions in this crate stay below a few hundred, so everything here is
//! plain dense arithmetic. Gram–Schmidt always runs in index order and with a
//! second re-orthogonalisation pass, which keeps the completions deterministic.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{CtError, Result};
use crate::tolerance::{rank_tol, tol};

pub type C64 = Complex64;
pub type CVec = DVector<C64>;
pub type CMat = DMatrix<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn basis_vector(dim: usize, index: usize) -> CVec {
    let mut v = CVec::zeros(dim);
    v[index] = C64::new(1.0, 0.0);
    v
}

/// `<a|b>`, antilinear in the first argument.
pub fn inner(a: &CVec, b: &CVec) -> C64 {
    a.dotc(b)
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let mut out = CVec::zeros(a.len() * b.len());
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i * b.len() + j] = ai * bj;
        }
    }
    out
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn outer(a: &CVec, b: &CVec) -> CMat {
    a * b.adjoint()
}

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

/// Orthogonalise `v` against an orthonormal list, twice for stability.
fn orthogonalise(v: &CVec, basis: &[CVec]) -> CVec {
    let mut w = v.clone();
    for _ in 0..2 {
        for e in basis {
            let p = inner(e, &w);
            w -= e * p;
        }
    }
    w
}

/// Orthonormal basis of the span of `vectors`, built in index order.
pub fn orthonormal_basis(vectors: &[CVec]) -> Vec<CVec> {
    let mut basis: Vec<CVec> = Vec::new();
    for v in vectors {
        let w = orthogonalise(v, &basis);
        let n = w.norm();
        if n > rank_tol() {
            basis.push(w / C64::new(n, 0.0));
        }
    }
    basis
}

pub fn rank(vectors: &[CVec]) -> usize {
    orthonormal_basis(vectors).len()
}

/// Extend an orthonormal list to a basis of `C^dim` by Gram–Schmidt over the
/// computational basis in index order; returns only the added vectors.
pub fn completion(basis: &[CVec], dim: usize) -> Vec<CVec> {
    let mut all: Vec<CVec> = basis.to_vec();
    let mut added = Vec::new();
    for k in 0..dim {
        if all.len() == dim {
            break;
        }
        let w = orthogonalise(&basis_vector(dim, k), &all);
        let n = w.norm();
        if n > 1e-6 {
            let e = w / C64::new(n, 0.0);
            all.push(e.clone());
            added.push(e);
        }
    }
    added
}

/// Orthogonal projector onto the span of an orthonormal list.
pub fn projector(basis: &[CVec], dim: usize) -> CMat {
    let mut p = CMat::zeros(dim, dim);
    for e in basis {
        p += outer(e, e);
    }
    p
}

/// Dimension of the intersection of two spans.
pub fn intersection_dim(a: &[CVec], b: &[CVec]) -> usize {
    let ra = rank(a);
    let rb = rank(b);
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    (ra + rb).saturating_sub(rank(&both))
}

/// Vector in the intersection of two spans, if one exists. Uses the largest
/// principal angle cosine, read off the SVD of the overlap matrix.
pub fn intersection_witness(a: &[CVec], b: &[CVec]) -> Option<CVec> {
    let qa = orthonormal_basis(a);
    let qb = orthonormal_basis(b);
    if qa.is_empty() || qb.is_empty() {
        return None;
    }
    let overlap = CMat::from_fn(qa.len(), qb.len(), |i, j| inner(&qa[i], &qb[j]));
    let svd = overlap.svd(true, false);
    let (idx, val) = svd.singular_values.iter().enumerate().max_by(|x, y| x.1.partial_cmp(y.1).unwrap())?;
    if *val > 1.0 - 1e-6 {
        let u = svd.u.as_ref()?.column(idx).into_owned();
        let mut v = CVec::zeros(qa[0].len());
        for (k, q) in qa.iter().enumerate() {
            v += q * u[k];
        }
        let n = v.norm();
        Some(normalise_phase(&(v / C64::new(n, 0.0))))
    } else {
        None
    }
}

/// `Σ_k <b_k| ρ |b_k>` for an orthonormal list, i.e. `Tr(P ρ)`.
pub fn weight_in_span(basis: &[CVec], rho: &CMat) -> f64 {
    basis.iter().map(|b| inner(b, &(rho * b)).re).sum()
}

/// `Σ_k |<b_k|ψ>|^2` for an orthonormal list.
pub fn weight_in_span_pure(basis: &[CVec], psi: &CVec) -> f64 {
    basis.iter().map(|b| inner(b, psi).norm_sqr()).sum()
}

/// Rotate the global phase so that the first significant amplitude is real positive.
pub fn normalise_phase(v: &CVec) -> CVec {
    match v.iter().find(|a| a.norm() > 1e-6) {
        Some(a) => {
            let ph = a / C64::new(a.norm(), 0.0);
            v * ph.conj()
        }
        None => v.clone(),
    }
}

pub fn is_hermitian(m: &CMat, eps: f64) -> bool {
    m.is_square() && (m - m.adjoint()).camax() <= eps
}

/// Hermitian part, used to remove round-off before eigen-decomposition.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

pub fn eigenvalues_hermitian(m: &CMat) -> Vec<f64> {
    let mut ev: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

pub fn min_eigenvalue_hermitian(m: &CMat) -> f64 {
    eigenvalues_hermitian(m).first().copied().unwrap_or(0.0)
}

/// Eigenvectors of a Hermitian matrix whose eigenvalues exceed `threshold`.
pub fn support(m: &CMat, threshold: f64) -> Vec<(f64, CVec)> {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut out: Vec<(f64, CVec)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > threshold)
        .map(|(i, v)| (*v, eig.eigenvectors.column(i).into_owned()))
        .collect();
    out.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    out
}

pub fn is_unitary(u: &CMat, eps: f64) -> bool {
    u.is_square() && (u.adjoint() * u - identity(u.nrows())).camax() <= eps
}

/// Unitary `U` on `C^dim` with `U inputs[i] = outputs[i]`.
///
/// The inputs and outputs must have equal Gram matrices. Off the span of the
/// inputs, `U` maps the index-order completion of the input basis onto the
/// index-order completion of the output basis.
pub fn extend_to_unitary(inputs: &[CVec], outputs: &[CVec], dim: usize) -> Result<CMat> {
    if inputs.len() != outputs.len() {
        return Err(CtError::Precondition("input/output count mismatch".into()));
    }
    for v in inputs.iter().chain(outputs) {
        if v.len() != dim {
            return Err(CtError::DimensionMismatch { expected: dim, found: v.len() });
        }
    }
    let n = inputs.len();
    let mut e_basis: Vec<CVec> = Vec::new();
    let mut coeffs: Vec<CVec> = Vec::new();
    for (i, v) in inputs.iter().enumerate() {
        let mut w = v.clone();
        let mut cvec = CVec::zeros(n);
        cvec[i] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for (e, ce) in e_basis.iter().zip(&coeffs) {
                let p = inner(e, &w);
                w -= e * p;
                cvec -= ce * p;
            }
        }
        let norm = w.norm();
        if norm > rank_tol() {
            let s = C64::new(1.0 / norm, 0.0);
            e_basis.push(w * s);
            coeffs.push(cvec * s);
        }
    }
    let mut f_basis: Vec<CVec> = Vec::with_capacity(e_basis.len());
    for cvec in &coeffs {
        let mut f = CVec::zeros(dim);
        for (ci, out) in cvec.iter().zip(outputs) {
            f += out * *ci;
        }
        f_basis.push(f);
    }
    for (a, fa) in f_basis.iter().enumerate() {
        for (b, fb) in f_basis.iter().enumerate() {
            let expect = if a == b { 1.0 } else { 0.0 };
            if (inner(fa, fb) - C64::new(expect, 0.0)).norm() > 1e-6 {
                return Err(CtError::Precondition(
                    "output Gram matrix differs from input Gram matrix".into(),
                ));
            }
        }
    }
    let e_extra = completion(&e_basis, dim);
    let f_extra = completion(&f_basis, dim);
    let mut u = CMat::zeros(dim, dim);
    for (e, f) in e_basis.iter().chain(&e_extra).zip(f_basis.iter().chain(&f_extra)) {
        u += outer(f, e);
    }
    let tolerance = tol().max(1e-9) * 1e3;
    for (v, w) in inputs.iter().zip(outputs) {
        if (&u * v - w).camax() > tolerance {
            return Err(CtError::Precondition("unitary extension failed to reproduce outputs".into()));
        }
    }
    Ok(u)
}

/// Partial trace keeping the listed factors (in the given order).
pub fn partial_trace(rho: &CMat, dims: &[usize], keep: &[usize]) -> Result<CMat> {
    let total: usize = dims.iter().product();
    if rho.nrows() != total || rho.ncols() != total {
        return Err(CtError::DimensionMismatch { expected: total, found: rho.nrows() });
    }
    for &k in keep {
        if k >= dims.len() {
            return Err(CtError::BadFactor { index: k, factors: dims.len() });
        }
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let keep_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let kd: usize = keep_dims.iter().product();
    let td: usize = traced_dims.iter().product();
    let strides = strides(dims);
    let index_of = |kidx: usize, tidx: usize| -> usize {
        let kd_digits = digits(kidx, &keep_dims);
        let td_digits = digits(tidx, &traced_dims);
        let mut idx = 0;
        for (pos, &f) in keep.iter().enumerate() {
            idx += kd_digits[pos] * strides[f];
        }
        for (pos, &f) in traced.iter().enumerate() {
            idx += td_digits[pos] * strides[f];
        }
        idx
    };
    let mut out = CMat::zeros(kd, kd);
    for a in 0..kd {
        for b in 0..kd {
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..td {
                acc += rho[(index_of(a, t), index_of(b, t))];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Lift an operator acting on the listed factors (in that order) to the
/// full tensor product, acting as identity on the remaining factors.
pub fn embed_operator(op: &CMat, dims: &[usize], factors: &[usize]) -> Result<CMat> {
    for &k in factors {
        if k >= dims.len() {
            return Err(CtError::BadFactor { index: k, factors: dims.len() });
        }
    }
    let sub_dims: Vec<usize> = factors.iter().map(|&k| dims[k]).collect();
    let sd: usize = sub_dims.iter().product();
    if op.nrows() != sd || op.ncols() != sd {
        return Err(CtError::DimensionMismatch { expected: sd, found: op.nrows() });
    }
    let total: usize = dims.iter().product();
    let rest: Vec<usize> = (0..dims.len()).filter(|i| !factors.contains(i)).collect();
    let split = |idx: usize| -> (usize, Vec<usize>) {
        let d = digits(idx, dims);
        let mut s = 0;
        for &f in factors {
            s = s * dims[f] + d[f];
        }
        (s, rest.iter().map(|&r| d[r]).collect())
    };
    let parts: Vec<(usize, Vec<usize>)> = (0..total).map(split).collect();
    let mut out = CMat::zeros(total, total);
    for i in 0..total {
        for j in 0..total {
            if parts[i].1 == parts[j].1 {
                out[(i, j)] = op[(parts[i].0, parts[j].0)];
            }
        }
    }
    Ok(out)
}

/// Row-major strides for a tensor-product index with the given factor dimensions.
pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Mixed-radix digits of `index` (most significant first).
pub fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        out[i] = index % dims[i];
        index /= dims[i];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[(f64, f64)]) -> CVec {
        CVec::from_iterator(xs.len(), xs.iter().map(|(r, i)| c(*r, *i)))
    }

    #[test]
    fn completion_is_index_ordered() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = v(&[(s, 0.0), (s, 0.0)]);
        let extra = completion(&[plus], 2);
        assert_eq!(extra.len(), 1);
        assert!((extra[0][0] - c(s, 0.0)).norm() < 1e-12);
        assert!((extra[0][1] - c(-s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn intersection_of_planes_in_three_dims() {
        let e = |i| basis_vector(3, i);
        assert_eq!(intersection_dim(&[e(0), e(1)], &[e(1), e(2)]), 1);
        assert_eq!(intersection_dim(&[e(0)], &[e(1), e(2)]), 0);
        let w = intersection_witness(&[e(0), e(1)], &[e(1), e(2)]).unwrap();
        assert!((w[1].norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn unitary_extension_maps_inputs() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let ins = vec![basis_vector(2, 0), basis_vector(2, 1)];
        let outs = vec![v(&[(s, 0.0), (s, 0.0)]), v(&[(s, 0.0), (-s, 0.0)])];
        let u = extend_to_unitary(&ins, &outs, 2).unwrap();
        assert!(is_unitary(&u, 1e-12));
        assert!((&u * &ins[1] - &outs[1]).camax() < 1e-12);
    }

    #[test]
    fn unitary_extension_rejects_gram_mismatch() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let ins = vec![basis_vector(2, 0), basis_vector(2, 1)];
        let outs = vec![basis_vector(2, 0), v(&[(s, 0.0), (s, 0.0)])];
        assert!(extend_to_unitary(&ins, &outs, 2).is_err());
    }

    #[test]
    fn partial_trace_of_product() {
        let a = outer(&basis_vector(2, 0), &basis_vector(2, 0));
        let b = outer(&basis_vector(3, 2), &basis_vector(3, 2));
        let rho = kron(&a, &b);
        let r1 = partial_trace(&rho, &[2, 3], &[1]).unwrap();
        assert!((r1 - &b).camax() < 1e-12);
        let r0 = partial_trace(&rho, &[2, 3], &[0]).unwrap();
        assert!((r0 - &a).camax() < 1e-12);
        assert!(partial_trace(&rho, &[2, 3], &[2]).is_err());
    }
}
