// Copyright 2026 The geodesic-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense linear-algebra helpers over nalgebra.

use nalgebra::{Complex, DMatrix, DVector, Schur};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type RMatrix = DMatrix<f64>;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Largest entry magnitude.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// `A B - B A`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `Tr(A† B)` without forming the product.
pub fn trace_adjoint_product(a: &CMatrix, b: &CMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `Q diag(d) Q†`.
pub fn spectral_compose(q: &CMatrix, d: &[C64]) -> CMatrix {
    let mut scaled = q.clone();
    for (mut col, &s) in scaled.column_iter_mut().zip(d) {
        col *= s;
    }
    scaled * q.adjoint()
}

/// Eigendecomposition `H = Q diag(values) Q†` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(h: &CMatrix) -> Self {
        let eig = h.clone().symmetric_eigen();
        Self {
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        }
    }

    /// `f(H) = Q f(Λ) Q†` for a complex-valued spectral function.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let d: Vec<C64> = self.values.iter().map(|&x| f(x)).collect();
        spectral_compose(&self.vectors, &d)
    }
}

/// Eigendecomposition `W = Q diag(values) Q†` of a normal (here: unitary)
/// matrix with unitary `Q`.
#[derive(Clone, Debug)]
pub struct NormalEigen {
    pub values: Vec<C64>,
    pub vectors: CMatrix,
}

impl NormalEigen {
    pub fn new(w: &CMatrix) -> Result<Self> {
        let dim = w.nrows();
        if let Some(schur) = Schur::try_new(w.clone(), f64::EPSILON, 1000 * dim.max(1)) {
            let (q, t) = schur.unpack();
            let values = t.diagonal().iter().copied().collect();
            return Ok(Self { values, vectors: q });
        }
        Self::via_hermitian_pencil(w)
    }

    /// The Hermitian and anti-Hermitian parts of a normal matrix commute, so
    /// a generic real combination of them shares its eigenvectors.
    fn via_hermitian_pencil(w: &CMatrix) -> Result<Self> {
        let half = c64(0.5, 0.0);
        let re_part = (w + w.adjoint()) * half;
        let im_part = (w - w.adjoint()) * c64(0.0, -0.5);
        let mix = &re_part + &im_part * c64(0.618_033_988_749_894_9, 0.0);
        let eig = HermitianEigen::new(&mix);
        let q = eig.vectors;
        let t = q.adjoint() * w * &q;
        let values: Vec<C64> = t.diagonal().iter().copied().collect();
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NoConvergence);
        }
        Ok(Self { values, vectors: q })
    }
}

/// Minimum-norm least-squares solution of `A x ≈ b` via the SVD, treating
/// singular values below `rel_cutoff * σ_max` as zero. Returns `(x, ‖Ax - b‖)`.
pub fn lstsq_min_norm(a: &RMatrix, b: &DVector<f64>, rel_cutoff: f64) -> (DVector<f64>, f64) {
    let cols = a.ncols();
    if cols == 0 || a.nrows() == 0 {
        return (DVector::zeros(cols), b.norm());
    }
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let vt = svd.v_t.as_ref().expect("right singular vectors requested");
    let sigma_max = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    let cutoff = rel_cutoff * sigma_max;
    let mut x = DVector::zeros(cols);
    if sigma_max > 0.0 {
        for (k, &s) in svd.singular_values.iter().enumerate() {
            if s > cutoff {
                let coeff = u.column(k).dot(b) / s;
                x += vt.row(k).transpose() * coeff;
            }
        }
    }
    let residual = (a * &x - b).norm();
    (x, residual)
}

/// Orthonormal basis (as columns) of the null space of `A`, with singular
/// values below `rel_tol * σ_max` counted as zero.
pub fn null_space(a: &RMatrix, rel_tol: f64) -> RMatrix {
    let cols = a.ncols();
    if cols == 0 {
        return RMatrix::zeros(0, 0);
    }
    // Pad to at least `cols` rows so the SVD yields a full right basis.
    let padded = if a.nrows() < cols {
        let mut p = RMatrix::zeros(cols, cols);
        p.rows_mut(0, a.nrows()).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let sigma_max = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    let kept: Vec<usize> = (0..cols)
        .filter(|&k| {
            let s = svd.singular_values.get(k).copied().unwrap_or(0.0);
            sigma_max == 0.0 || s <= rel_tol * sigma_max
        })
        .collect();
    let mut basis = RMatrix::zeros(cols, kept.len());
    for (out, &k) in kept.iter().enumerate() {
        basis.set_column(out, &vt.row(k).transpose());
    }
    basis
}
