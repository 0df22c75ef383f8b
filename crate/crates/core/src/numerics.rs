//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Everything downstream (orthogonality checks, local ranks, partial
//! transposes, spectra) is built on the handful of primitives in this module.
//! All equality claims are tolerance claims; thresholds are relative to the
//! scale of the inputs wherever the inputs are not normalized.

use num_complex::Complex64;
use thiserror::Error;

pub type Complex = Complex64;

#[derive(Debug, Error, PartialEq)]
pub enum NumericsError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("non-finite entry encountered")]
    NonFinite,
    #[error("tolerance must satisfy 0 < eps < 1e-3, got {0}")]
    BadTolerance(f64),
}

/// Global numeric tolerance. Decisions (orthogonality, rank pivots, PPT)
/// compare against `eps`; analytically forced identities are asserted
/// tighter in tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(eps: f64) -> Result<Self, NumericsError> {
        if eps > 0.0 && eps < 1e-3 {
            Ok(Tolerance { eps })
        } else {
            Err(NumericsError::BadTolerance(eps))
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

/// A dense complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CVec {
    entries: Vec<Complex>,
}

impl CVec {
    pub fn new(entries: Vec<Complex>) -> Self {
        CVec { entries }
    }

    pub fn from_real(entries: &[f64]) -> Self {
        CVec {
            entries: entries.iter().map(|&x| Complex::new(x, 0.0)).collect(),
        }
    }

    /// Standard basis vector `e_k` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Self {
        let mut entries = vec![Complex::new(0.0, 0.0); d];
        entries[k] = Complex::new(1.0, 0.0);
        CVec { entries }
    }

    pub fn zeros(d: usize) -> Self {
        CVec {
            entries: vec![Complex::new(0.0, 0.0); d],
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, s: Complex) -> CVec {
        CVec {
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn normalized(&self) -> CVec {
        let n = self.norm();
        self.scaled(Complex::new(1.0 / n, 0.0))
    }

    pub fn conj(&self) -> CVec {
        CVec {
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn add(&self, other: &CVec) -> CVec {
        debug_assert_eq!(self.dim(), other.dim());
        CVec {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CVec) -> CVec {
        debug_assert_eq!(self.dim(), other.dim());
        CVec {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Subtract the component along a unit vector `b`: `self - <b|self> b`.
    pub fn reject(&self, b: &CVec) -> CVec {
        let c = inner(b, self).expect("dimension mismatch in reject");
        self.sub(&b.scaled(c))
    }

    /// Zero-pad into dimension `d >= dim`.
    pub fn padded(&self, d: usize) -> CVec {
        debug_assert!(d >= self.dim());
        let mut entries = self.entries.clone();
        entries.resize(d, Complex::new(0.0, 0.0));
        CVec { entries }
    }
}

/// A dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex] {
        &self.data
    }

    /// Rank-1 projector `|v><v|` (v need not be normalized; caller decides).
    pub fn projector(v: &CVec) -> Self {
        let d = v.dim();
        CMat::from_fn(d, d, |r, c| v.entries()[r] * v.entries()[c].conj())
    }

    pub fn scaled(&self, s: f64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &CMat) -> CMat {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        let mut out = CMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        assert_eq!(self.cols, v.dim());
        let mut out = CVec::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = Complex::new(0.0, 0.0);
            for c in 0..self.cols {
                acc += self[(r, c)] * v.entries()[c];
            }
            out.entries[r] = acc;
        }
        out
    }

    pub fn trace(&self) -> Complex {
        debug_assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                let d = (self[(r, c)] - self[(c, r)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex;
    fn index(&self, (r, c): (usize, usize)) -> &Complex {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex {
        &mut self.data[r * self.cols + c]
    }
}

/// Hermitian inner product `<a|b>`, conjugate-linear in the first argument.
pub fn inner(a: &CVec, b: &CVec) -> Result<Complex, NumericsError> {
    if a.dim() != b.dim() {
        return Err(NumericsError::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// An orthonormal accumulator for incremental rank tracking.
///
/// `try_insert` Gram-Schmidts the vector against the current basis and keeps
/// the residual iff its norm exceeds `tol * scale`, where `scale` is the
/// largest input norm seen so far (relative pivot threshold).
#[derive(Debug, Clone, Default)]
pub struct OrthoAccumulator {
    basis: Vec<CVec>,
    scale: f64,
}

impl OrthoAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CVec] {
        &self.basis
    }

    /// Returns true iff the vector increased the rank.
    pub fn try_insert(&mut self, v: &CVec, tol: Tolerance) -> bool {
        self.scale = self.scale.max(v.norm());
        let mut r = v.clone();
        // Two passes of modified Gram-Schmidt for numerical safety.
        for _ in 0..2 {
            for b in &self.basis {
                r = r.reject(b);
            }
        }
        let n = r.norm();
        if n > tol.eps() * self.scale.max(1e-300) {
            self.basis.push(r.scaled(Complex::new(1.0 / n, 0.0)));
            true
        } else {
            false
        }
    }
}

/// Numerical rank of a set of vectors via pivoted orthogonalization.
/// The empty set has rank 0.
pub fn rank(vectors: &[CVec], tol: Tolerance) -> usize {
    let mut acc = OrthoAccumulator::new();
    for v in vectors {
        acc.try_insert(v, tol);
    }
    acc.rank()
}

/// Orthonormal basis of the orthogonal complement of `span(vectors)` in
/// dimension `d`, in canonical order: each standard basis vector `e_0, e_1,
/// ...` is Gram-Schmidted against the inputs and the output so far, and kept
/// when a nonzero residual survives. Deterministic by construction.
pub fn complement(vectors: &[CVec], d: usize, tol: Tolerance) -> Vec<CVec> {
    let mut acc = OrthoAccumulator::new();
    for v in vectors {
        acc.try_insert(v, tol);
    }
    complement_of_accumulator(&acc, d, tol)
}

/// Complement basis given an already-orthonormalized span.
pub fn complement_of_accumulator(acc: &OrthoAccumulator, d: usize, tol: Tolerance) -> Vec<CVec> {
    let mut out: Vec<CVec> = Vec::new();
    for k in 0..d {
        let mut r = CVec::basis(d, k);
        for _ in 0..2 {
            for b in acc.basis() {
                r = r.reject(b);
            }
            for b in &out {
                r = r.reject(b);
            }
        }
        let n = r.norm();
        if n > tol.eps() {
            out.push(r.scaled(Complex::new(1.0 / n, 0.0)));
        }
    }
    out
}

/// Tensor product of local vectors, leftmost party most significant.
pub fn kron_all(locals: &[CVec]) -> CVec {
    assert!(!locals.is_empty(), "kron_all of empty list");
    let mut acc = locals[0].clone();
    for l in &locals[1..] {
        let mut next = Vec::with_capacity(acc.dim() * l.dim());
        for a in acc.entries() {
            for b in l.entries() {
                next.push(a * b);
            }
        }
        acc = CVec::new(next);
    }
    acc
}

fn decompose_index(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        out[i] = idx % dims[i];
        idx /= dims[i];
    }
    out
}

fn compose_index(parts: &[usize], dims: &[usize]) -> usize {
    let mut idx = 0;
    for (p, d) in parts.iter().zip(dims) {
        idx = idx * d + p;
    }
    idx
}

/// Partial transpose of a square operator over the chosen party.
pub fn partial_transpose(
    rho: &CMat,
    dims: &[usize],
    party: usize,
) -> Result<CMat, NumericsError> {
    let total: usize = dims.iter().product();
    if rho.rows() != total || rho.cols() != total {
        return Err(NumericsError::DimensionMismatch(rho.rows(), total));
    }
    assert!(party < dims.len());
    let mut out = CMat::zeros(total, total);
    for r in 0..total {
        let mut rp = decompose_index(r, dims);
        for c in 0..total {
            let mut cp = decompose_index(c, dims);
            std::mem::swap(&mut rp[party], &mut cp[party]);
            let nr = compose_index(&rp, dims);
            let nc = compose_index(&cp, dims);
            std::mem::swap(&mut rp[party], &mut cp[party]);
            out[(nr, nc)] = rho[(r, c)];
        }
    }
    Ok(out)
}

/// All eigenvalues of a Hermitian matrix, ascending, by cyclic complex Jacobi.
///
/// Converges to near machine precision; the contract downstream is 1e-10 on
/// matrices of side <= 256.
pub fn hermitian_eigenvalues(rho: &CMat, tol: Tolerance) -> Result<Vec<f64>, NumericsError> {
    Ok(jacobi_diagonalize(rho, tol, false)?.0)
}

/// Eigenvalues (ascending) with matching orthonormal eigenvectors.
pub fn hermitian_eigen(rho: &CMat, tol: Tolerance) -> Result<(Vec<f64>, Vec<CVec>), NumericsError> {
    let (eigs, vecs) = jacobi_diagonalize(rho, tol, true)?;
    Ok((eigs, vecs.expect("vectors requested")))
}

fn jacobi_diagonalize(
    rho: &CMat,
    tol: Tolerance,
    want_vectors: bool,
) -> Result<(Vec<f64>, Option<Vec<CVec>>), NumericsError> {
    if !rho.is_finite() {
        return Err(NumericsError::NonFinite);
    }
    let defect = rho.hermiticity_defect();
    let scale = rho.max_abs().max(1e-300);
    if defect > tol.eps() * scale.max(1.0) {
        return Err(NumericsError::NotHermitian(defect));
    }
    let n = rho.rows();
    let mut a = rho.clone();
    // Symmetrize to kill roundoff-level defects.
    for r in 0..n {
        for c in r + 1..n {
            let avg = (a[(r, c)] + a[(c, r)].conj()) * 0.5;
            a[(r, c)] = avg;
            a[(c, r)] = avg.conj();
        }
        let d = a[(r, r)].re;
        a[(r, r)] = Complex::new(d, 0.0);
    }
    let mut v = if want_vectors {
        Some(CMat::identity(n))
    } else {
        None
    };
    let frob: f64 = a.data().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let stop = (frob * 1e-15).max(1e-300);
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let b = apq.norm();
                if b <= stop / (n as f64) {
                    continue;
                }
                let phase = apq / b; // e^{i phi}
                let alpha = a[(p, p)].re;
                let gamma = a[(q, q)].re;
                let tau = (gamma - alpha) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U = diag(1, e^{-i phi}) * [[c, s], [-s, c]]: the diagonal
                // factor makes the 2x2 block real symmetric, the real
                // rotation then annihilates the off-diagonal entry.
                let upp = Complex::new(c, 0.0);
                let upq = Complex::new(s, 0.0);
                let uqp = -phase.conj() * s;
                let uqq = phase.conj() * c;
                // A <- A U (column update)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * upp + akq * uqp;
                    a[(k, q)] = akp * upq + akq * uqq;
                }
                // A <- U^dagger A (row update)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
                    a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
                }
                if let Some(vm) = v.as_mut() {
                    // V <- V U, so columns of V track the eigenbasis.
                    for k in 0..n {
                        let vkp = vm[(k, p)];
                        let vkq = vm[(k, q)];
                        vm[(k, p)] = vkp * upp + vkq * uqp;
                        vm[(k, q)] = vkp * upq + vkq * uqq;
                    }
                }
                // Clean the rotated pair.
                let dp = a[(p, p)].re;
                let dq = a[(q, q)].re;
                a[(p, p)] = Complex::new(dp, 0.0);
                a[(q, q)] = Complex::new(dq, 0.0);
                a[(p, q)] = Complex::new(0.0, 0.0);
                a[(q, p)] = Complex::new(0.0, 0.0);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let eigs: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.map(|vm| {
        order
            .iter()
            .map(|&col| CVec::new((0..n).map(|r| vm[(r, col)]).collect()))
            .collect()
    });
    Ok((eigs, vectors))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eig_hermitian(rho: &CMat, tol: Tolerance) -> Result<f64, NumericsError> {
    Ok(hermitian_eigenvalues(rho, tol)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn inner_orthonormal_basis() {
        let a = CVec::basis(2, 0);
        let b = CVec::basis(2, 1);
        assert_eq!(inner(&a, &b).unwrap(), c(0.0, 0.0));
        assert_eq!(inner(&a, &a).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn inner_conjugate_linear_first_argument() {
        let a = CVec::new(vec![c(0.0, 1.0), c(1.0, 0.0)]);
        let b = CVec::new(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        // <ia|b> = -i <a|b>
        assert_eq!(inner(&a, &b).unwrap(), c(0.0, -1.0));
    }

    #[test]
    fn inner_dimension_mismatch() {
        let a = CVec::basis(2, 0);
        let b = CVec::basis(3, 0);
        assert!(matches!(
            inner(&a, &b),
            Err(NumericsError::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn rank_simple_cases() {
        let tol = Tolerance::default();
        assert_eq!(rank(&[], tol), 0);
        let v1 = CVec::basis(3, 0);
        let v2 = CVec::basis(3, 1);
        assert_eq!(rank(&[v1.clone(), v2.clone()], tol), 2);
        assert_eq!(rank(&[v1.clone(), v1.scaled(c(2.0, 1.0))], tol), 1);
    }

    #[test]
    fn rank_is_scale_invariant() {
        // Relative pivot threshold: tiny overall normalization must not
        // collapse the rank.
        let tol = Tolerance::default();
        let v1 = CVec::basis(3, 0).scaled(c(1e-8, 0.0));
        let v2 = CVec::basis(3, 1).scaled(c(1e-8, 0.0));
        assert_eq!(rank(&[v1, v2], tol), 2);
    }

    #[test]
    fn complement_canonical() {
        let tol = Tolerance::default();
        let comp = complement(&[CVec::basis(3, 0), CVec::basis(3, 1)], 3, tol);
        assert_eq!(comp.len(), 1);
        assert!((inner(&comp[0], &CVec::basis(3, 2)).unwrap().norm() - 1.0).abs() < 1e-12);
        // Full-rank input -> empty complement.
        let full = vec![CVec::basis(2, 0), CVec::basis(2, 1)];
        assert!(complement(&full, 2, tol).is_empty());
    }

    #[test]
    fn complement_rank_sum() {
        let tol = Tolerance::default();
        let vs = vec![
            CVec::new(vec![c(1.0, 0.0), c(0.5, 0.2), c(0.0, -1.0), c(0.3, 0.0)]),
            CVec::new(vec![c(0.0, 1.0), c(1.0, 0.0), c(0.2, 0.2), c(0.0, 0.0)]),
        ];
        let r = rank(&vs, tol);
        let comp = complement(&vs, 4, tol);
        assert_eq!(r + comp.len(), 4);
        for (i, a) in comp.iter().enumerate() {
            for v in &vs {
                assert!(inner(a, v).unwrap().norm() < 1e-10);
            }
            for b in comp.iter().skip(i + 1) {
                assert!(inner(a, b).unwrap().norm() < 1e-12);
            }
            assert!((a.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn kron_basics() {
        let v = kron_all(&[CVec::basis(2, 0), CVec::basis(2, 0)]);
        assert_eq!(v.entries()[0], c(1.0, 0.0));
        assert_eq!(v.dim(), 4);
        // Norm multiplicativity.
        let a = CVec::new(vec![c(1.0, 2.0), c(0.0, -1.0)]);
        let b = CVec::new(vec![c(0.5, 0.0), c(0.0, 0.3), c(1.0, 1.0)]);
        let k = kron_all(&[a.clone(), b.clone()]);
        assert!((k.norm() - a.norm() * b.norm()).abs() < 1e-12 * k.norm());
    }

    fn max_entangled_2x2_projector() -> CMat {
        let r = 1.0 / 2.0f64.sqrt();
        let psi = CVec::new(vec![c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, 0.0)]);
        CMat::projector(&psi)
    }

    #[test]
    fn partial_transpose_involutive_and_trace_preserving() {
        let dims = [2, 2];
        let m = max_entangled_2x2_projector();
        let pt = partial_transpose(&m, &dims, 1).unwrap();
        let ptpt = partial_transpose(&pt, &dims, 1).unwrap();
        for r in 0..4 {
            for cidx in 0..4 {
                assert!((ptpt[(r, cidx)] - m[(r, cidx)]).norm() < 1e-15);
            }
        }
        assert!((pt.trace() - m.trace()).norm() < 1e-14);
        assert!(pt.hermiticity_defect() < 1e-14);
    }

    #[test]
    fn partial_transpose_of_product_projector_conjugates_party() {
        let a = CVec::new(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let b = CVec::new(vec![c(0.0, 0.6), c(0.8, 0.0)]);
        let proj = CMat::projector(&kron_all(&[a.clone(), b.clone()]));
        let pt = partial_transpose(&proj, &[2, 2], 1).unwrap();
        let expected = CMat::projector(&kron_all(&[a, b.conj()]));
        for r in 0..4 {
            for cidx in 0..4 {
                assert!((pt[(r, cidx)] - expected[(r, cidx)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn min_eig_identity_quarter() {
        let tol = Tolerance::default();
        let m = CMat::identity(4).scaled(0.25);
        assert!((min_eig_hermitian(&m, tol).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn min_eig_pt_of_maximally_entangled() {
        // Direct 4x4 eigendecomposition oracle: PT of the Bell projector is
        // (1/2) SWAP, spectrum {1/2, 1/2, 1/2, -1/2}.
        let tol = Tolerance::default();
        let pt = partial_transpose(&max_entangled_2x2_projector(), &[2, 2], 1).unwrap();
        let eigs = hermitian_eigenvalues(&pt, tol).unwrap();
        assert!((eigs[0] + 0.5).abs() < 1e-12);
        assert!((eigs[3] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn min_eig_rejects_non_hermitian() {
        let tol = Tolerance::default();
        let mut m = CMat::identity(2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            min_eig_hermitian(&m, tol),
            Err(NumericsError::NotHermitian(_))
        ));
    }

    #[test]
    fn jacobi_matches_random_hermitian_invariants() {
        // Trace and Frobenius norm are spectral invariants; check both, plus
        // eigenvalue interlacing bounds via Gershgorin.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let tol = Tolerance::default();
        for n in [2usize, 5, 16] {
            let mut m = CMat::zeros(n, n);
            for r in 0..n {
                m[(r, r)] = c(rng.gen_range(-1.0..1.0), 0.0);
                for cc in r + 1..n {
                    let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    m[(r, cc)] = z;
                    m[(cc, r)] = z.conj();
                }
            }
            let eigs = hermitian_eigenvalues(&m, tol).unwrap();
            let tr: f64 = eigs.iter().sum();
            assert!((tr - m.trace().re).abs() < 1e-10);
            let fro2: f64 = m.data().iter().map(|z| z.norm_sqr()).sum();
            let sum2: f64 = eigs.iter().map(|e| e * e).sum();
            assert!((fro2 - sum2).abs() < 1e-9 * fro2.max(1.0));
        }
    }

    #[test]
    fn eigenvectors_satisfy_eigen_equation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let tol = Tolerance::default();
        let n = 6;
        let mut m = CMat::zeros(n, n);
        for r in 0..n {
            m[(r, r)] = c(rng.gen_range(-1.0..1.0), 0.0);
            for cc in r + 1..n {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(r, cc)] = z;
                m[(cc, r)] = z.conj();
            }
        }
        let (eigs, vecs) = hermitian_eigen(&m, tol).unwrap();
        for (lambda, x) in eigs.iter().zip(&vecs) {
            assert!((x.norm() - 1.0).abs() < 1e-10);
            let mx = m.apply(x);
            let res = mx.sub(&x.scaled(c(*lambda, 0.0)));
            assert!(res.norm() < 1e-9, "residual {}", res.norm());
        }
        for i in 0..n {
            for j in i + 1..n {
                assert!(inner(&vecs[i], &vecs[j]).unwrap().norm() < 1e-9);
            }
        }
    }

    #[test]
    fn tolerance_bounds() {
        assert!(Tolerance::new(1e-9).is_ok());
        assert!(Tolerance::new(0.0).is_err());
        assert!(Tolerance::new(1e-2).is_err());
    }
}
