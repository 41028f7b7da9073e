// Copyright 2026 The geodesic-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! The commuting ansatz: restricted Hamiltonians that generate `V` at unit
//! time must commute with `log V`. That condition is linear in the
//! parameters, so the feasible set is the null space of
//! `φ ↦ [H(φ), log V]` on the masked coordinates.

use crate::error::{Error, Result};
use crate::linalg::{commutator, max_abs, null_space, CMatrix, RMatrix};
use crate::manifold::{SuManifold, UnitaryMatrix};
use crate::pauli::{LieVector, RestrictionMask};

/// Singular values below this fraction of the largest span the null space.
pub const NULL_SPACE_REL_TOL: f64 = 1e-10;
/// Bound on `‖[H(b), log V]‖_max` for accepted basis vectors.
pub const COMMUTATOR_RESIDUAL_TOL: f64 = 1e-8;

/// Orthogonal projection onto a linear subspace of parameter space.
pub trait Subspace {
    fn project(&self, v: &LieVector) -> LieVector;
}

impl Subspace for RestrictionMask {
    fn project(&self, v: &LieVector) -> LieVector {
        self.apply(v).expect("vector length matches mask")
    }
}

#[derive(Clone, Debug)]
pub struct CommutantBasis {
    pub basis: Vec<LieVector>,
    /// `-i log V` on the principal branch (Hermitian).
    pub target_log: CMatrix,
    pub residual_tol: f64,
}

impl CommutantBasis {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `Σ_b (b·v) b`.
    pub fn project_to_commutant(&self, v: &LieVector) -> LieVector {
        let mut out = LieVector::zeros(v.qubits());
        for b in &self.basis {
            let c = b.dot(v);
            if c != 0.0 {
                out = out.add_scaled(c, b);
            }
        }
        out
    }

    /// `‖[H(v), log V]‖_max`.
    pub fn residual(&self, manifold: &SuManifold, v: &LieVector) -> Result<f64> {
        let h = manifold.basis().hermitian_from_vector(v)?;
        Ok(max_abs(&commutator(&h, &self.target_log)))
    }
}

impl Subspace for CommutantBasis {
    fn project(&self, v: &LieVector) -> LieVector {
        self.project_to_commutant(v)
    }
}

/// Orthonormal basis of `{φ : R_H φ = φ, [H(φ), log V] = 0}`.
///
/// Fails with [`Error::EmptyCommutant`] when only `φ = 0` commutes; callers
/// fall back to unconstrained updates.
pub fn commutant_basis(
    manifold: &SuManifold,
    target: &UnitaryMatrix,
    mask: &RestrictionMask,
) -> Result<CommutantBasis> {
    if mask.qubits() != manifold.qubits() {
        return Err(Error::QubitMismatch {
            expected: manifold.qubits(),
            actual: mask.qubits(),
        });
    }
    let target_log = manifold.principal_log_unitary(target)?.gamma;
    let dim = manifold.dim();
    let cols = mask.count();
    let mut system = RMatrix::zeros(2 * dim * dim, cols);
    for (col, &pos) in mask.allowed_indices().iter().enumerate() {
        let g = manifold.basis().word(pos).matrix();
        let c = commutator(&g, &target_log);
        for (k, z) in c.iter().enumerate() {
            system[(2 * k, col)] = z.re;
            system[(2 * k + 1, col)] = z.im;
        }
    }
    let null = null_space(&system, NULL_SPACE_REL_TOL);
    let basis: Vec<LieVector> = null
        .column_iter()
        .map(|c| mask.expand(c.as_slice()))
        .collect();
    if basis.is_empty() {
        return Err(Error::EmptyCommutant);
    }
    let cb = CommutantBasis {
        basis,
        target_log,
        residual_tol: COMMUTATOR_RESIDUAL_TOL,
    };
    for b in &cb.basis {
        let r = cb.residual(manifold, b)?;
        if r > cb.residual_tol {
            return Err(Error::InvalidConfig(format!(
                "commutant vector residual {r:e} exceeds tolerance"
            )));
        }
    }
    Ok(cb)
}
