// Copyright 2026 The geodesic-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Numerics on SU(N): the exponential parametrization `U(θ) = exp(iH(θ))`,
//! its exact Jacobian in the form of effective generators, principal
//! logarithms of unitaries and the geodesics they generate.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c64, identity, max_abs, spectral_compose, trace_adjoint_product, CMatrix, HermitianEigen,
    NormalEigen, C64,
};
use crate::pauli::{dimension, LieVector, PauliBasis, RestrictionMask};

/// Unitarity tolerance on `‖U†U - I‖_max`.
pub const UNITARY_TOL: f64 = 1e-10;
/// Eigenvalues closer than this to `-1` are flagged as sitting on the branch cut.
pub const BRANCH_CUT_TOL: f64 = 1e-9;
/// Eigenvalue gaps below this use the confluent divided difference.
pub const DEGENERATE_GAP: f64 = 1e-8;

/// Dense unitary matrix, validated at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix(CMatrix);

impl UnitaryMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(m.nrows(), m.ncols()));
        }
        let dev = unitarity_deviation(&m);
        if !dev.is_finite() || dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self(identity(dim))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        Self(self.0.adjoint())
    }

    pub fn compose(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        Self(&self.0 * &other.0)
    }

    pub fn determinant(&self) -> C64 {
        self.0.clone().determinant()
    }
}

pub fn unitarity_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m.adjoint() * m - identity(m.nrows())))
}

/// Argument in `(-π, π]`.
pub fn principal_arg(z: C64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// How the scalar objective is read off `Tr(U†V)/N`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityKind {
    /// `Re Tr(U†V)/N`.
    #[default]
    RealPart,
    /// `|Tr(U†V)|/N`.
    PhaseInvariant,
}

/// Fidelity between two unitaries under the real-part convention.
pub fn fidelity(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
    fidelity_with(u, v, FidelityKind::RealPart)
}

pub fn fidelity_with(u: &UnitaryMatrix, v: &UnitaryMatrix, kind: FidelityKind) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(u.dim(), v.dim()));
    }
    Ok(fidelity_of_trace(
        trace_adjoint_product(u.matrix(), v.matrix()),
        u.dim(),
        kind,
    ))
}

pub(crate) fn fidelity_of_trace(tr: C64, dim: usize, kind: FidelityKind) -> f64 {
    let f = match kind {
        FidelityKind::RealPart => tr.re,
        FidelityKind::PhaseInvariant => tr.norm(),
    };
    f / dim as f64
}

/// `V det(V)^{-1/N}` with the principal `N`-th root.
pub fn su_project_target(v: &UnitaryMatrix) -> UnitaryMatrix {
    let det = v.determinant();
    let dim = v.dim() as f64;
    let root = C64::from_polar(1.0, -principal_arg(det) / dim);
    UnitaryMatrix(v.matrix() * root)
}

/// Among the `N` SU(N) representatives `V ω^k` of the target's projective
/// class, the one closest to `U` under the real-part fidelity.
pub fn nearest_representative(u: &UnitaryMatrix, v: &UnitaryMatrix) -> UnitaryMatrix {
    let dim = v.dim();
    let tr = trace_adjoint_product(u.matrix(), v.matrix());
    let (best, _) = (0..dim)
        .map(|k| {
            let w = C64::from_polar(1.0, 2.0 * PI * k as f64 / dim as f64);
            (w, (w * tr).re)
        })
        .fold((c64(1.0, 0.0), f64::NEG_INFINITY), |acc, cur| {
            if cur.1 > acc.1 {
                cur
            } else {
                acc
            }
        });
    if best == c64(1.0, 0.0) {
        v.clone()
    } else {
        UnitaryMatrix(v.matrix() * best)
    }
}

/// Hermitian generator `Γ` of the geodesic `t ↦ U exp(iΓt)`.
#[derive(Clone, Debug)]
pub struct GeodesicDirection {
    /// Full generator including its identity component.
    pub gamma: CMatrix,
    /// Pauli coordinates of the traceless part of `gamma`.
    pub gamma_vec: LieVector,
    /// `Tr(Γ)/N`.
    pub trace_part: f64,
    /// Some eigenvalue lies within [`BRANCH_CUT_TOL`] of `-1`.
    pub near_branch_cut: bool,
}

/// Pauli-basis context for one qubit count.
#[derive(Clone, Debug)]
pub struct SuManifold {
    basis: PauliBasis,
}

impl SuManifold {
    pub fn new(qubits: usize) -> Result<Self> {
        Ok(Self {
            basis: PauliBasis::new(qubits)?,
        })
    }

    pub fn basis(&self) -> &PauliBasis {
        &self.basis
    }

    pub fn qubits(&self) -> usize {
        self.basis.qubits()
    }

    pub fn dim(&self) -> usize {
        dimension(self.qubits())
    }

    /// `exp(iH(v))` through the eigendecomposition of `H(v)`.
    pub fn unitary_from_params(&self, v: &LieVector) -> Result<UnitaryMatrix> {
        Ok(self.expand_at(v)?.unitary)
    }

    pub fn expand_at(&self, v: &LieVector) -> Result<ExpansionPoint> {
        if v.as_slice().iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("parameter vector"));
        }
        let h = self.basis.hermitian_from_vector(v)?;
        let eigen = HermitianEigen::new(&h);
        let unitary = UnitaryMatrix(eigen.map(|x| C64::from_polar(1.0, x)));
        Ok(ExpansionPoint {
            base: v.clone(),
            eigen,
            unitary,
        })
    }

    /// `Γ = -i log W` on the principal branch.
    pub fn principal_log_unitary(&self, w: &UnitaryMatrix) -> Result<GeodesicDirection> {
        if w.dim() != self.dim() {
            return Err(Error::DimensionMismatch(w.dim(), self.dim()));
        }
        let eig = NormalEigen::new(w.matrix())?;
        let mut near_branch_cut = false;
        let phases: Vec<C64> = eig
            .values
            .iter()
            .map(|&z| {
                if (z + c64(1.0, 0.0)).norm() < BRANCH_CUT_TOL {
                    near_branch_cut = true;
                }
                c64(principal_arg(z), 0.0)
            })
            .collect();
        let raw = spectral_compose(&eig.vectors, &phases);
        let gamma = (&raw + raw.adjoint()) * c64(0.5, 0.0);
        let trace_part = gamma.trace().re / self.dim() as f64;
        let gamma_vec = self.basis.coefficients(&gamma);
        Ok(GeodesicDirection {
            gamma,
            gamma_vec,
            trace_part,
            near_branch_cut,
        })
    }

    pub fn effective_generators(
        &self,
        v: &LieVector,
        mask: &RestrictionMask,
    ) -> Result<EffectiveGeneratorSet> {
        if mask.qubits() != self.qubits() {
            return Err(Error::QubitMismatch {
                expected: self.qubits(),
                actual: mask.qubits(),
            });
        }
        Ok(self.expand_at(v)?.generators(&self.basis, mask))
    }
}

/// `U(v)` together with the spectral data of `H(v)` needed for derivatives.
#[derive(Clone, Debug)]
pub struct ExpansionPoint {
    pub base: LieVector,
    pub eigen: HermitianEigen,
    pub unitary: UnitaryMatrix,
}

impl ExpansionPoint {
    /// Divided-difference kernel of `U† dU` in the eigenbasis of `H`:
    /// `K_ab = e^{-iλ_a} (e^{iλ_a} - e^{iλ_b}) / (λ_a - λ_b)`, written in the
    /// cancellation-free form `i e^{i(λ_b-λ_a)/2} sinc((λ_a-λ_b)/2)`.
    fn kernel(&self) -> CMatrix {
        let lam = &self.eigen.values;
        let dim = lam.len();
        CMatrix::from_fn(dim, dim, |a, b| {
            let gap = lam[a] - lam[b];
            if gap.abs() < DEGENERATE_GAP {
                c64(0.0, 1.0)
            } else {
                let half = 0.5 * gap;
                C64::from_polar(half.sin() / half, -half) * c64(0.0, 1.0)
            }
        })
    }

    /// `Ω_l = U† ∂U/∂θ_l` for every allowed `l`.
    pub fn generators(&self, basis: &PauliBasis, mask: &RestrictionMask) -> EffectiveGeneratorSet {
        let kernel = self.kernel();
        let q = &self.eigen.vectors;
        let q_adj = q.adjoint();
        let generators = mask
            .allowed_indices()
            .iter()
            .map(|&pos| {
                let rotated = &q_adj * basis.action(pos).left_mul(q);
                let weighted = rotated.component_mul(&kernel);
                (pos + 1, q * weighted * &q_adj)
            })
            .collect();
        EffectiveGeneratorSet {
            base: self.base.clone(),
            generators,
        }
    }
}

/// Effective generators `Ω_l` at one base point, keyed by 1-based basis index.
#[derive(Clone, Debug)]
pub struct EffectiveGeneratorSet {
    pub base: LieVector,
    pub generators: Vec<(usize, CMatrix)>,
}

impl EffectiveGeneratorSet {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `Σ_j d_j Ω_j`.
    pub fn combine(&self, d: &LieVector) -> CMatrix {
        let dim = self.generators.first().map_or(0, |(_, m)| m.nrows());
        let mut acc = CMatrix::zeros(dim, dim);
        for (j, omega) in &self.generators {
            let w = d.get(*j);
            if w != 0.0 {
                acc += omega * c64(w, 0.0);
            }
        }
        acc
    }
}

/// `U exp(iΓt)`.
pub fn geodesic_point(u: &UnitaryMatrix, d: &GeodesicDirection, t: f64) -> Result<UnitaryMatrix> {
    if !t.is_finite() {
        return Err(Error::NonFinite("geodesic parameter"));
    }
    if u.dim() != d.gamma.nrows() {
        return Err(Error::DimensionMismatch(u.dim(), d.gamma.nrows()));
    }
    let step = HermitianEigen::new(&d.gamma).map(|x| C64::from_polar(1.0, x * t));
    Ok(UnitaryMatrix(u.matrix() * step))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliWord;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(qubits: usize, scale: f64, rng: &mut ChaCha8Rng) -> LieVector {
        let len = crate::pauli::algebra_dim(qubits);
        LieVector::from_vec(qubits, (0..len).map(|_| rng.random_range(-scale..scale)).collect())
            .unwrap()
    }

    fn word(s: &str) -> CMatrix {
        s.parse::<PauliWord>().unwrap().matrix()
    }

    #[test]
    fn exp_at_zero_is_identity() {
        let m = SuManifold::new(2).unwrap();
        let u = m.unitary_from_params(&LieVector::zeros(2)).unwrap();
        assert!(max_abs(&(u.matrix() - identity(4))) < 1e-15);
    }

    #[test]
    fn exp_of_quarter_turn_x() {
        let m = SuManifold::new(1).unwrap();
        let v = LieVector::from_vec(1, vec![PI / 2.0, 0.0, 0.0]).unwrap();
        let u = m.unitary_from_params(&v).unwrap();
        // exp(iθX) = cos θ I + i sin θ X
        let expect = word("X") * c64(0.0, 1.0);
        assert!(max_abs(&(u.matrix() - expect)) < 1e-14);
    }

    #[test]
    fn exp_is_unitary_with_unit_determinant() {
        let m = SuManifold::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let u = m.unitary_from_params(&random_vec(3, 1.0, &mut rng)).unwrap();
            assert!(unitarity_deviation(u.matrix()) <= 1e-12);
            assert!((u.determinant() - c64(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn log_examples() {
        let m = SuManifold::new(1).unwrap();
        let d = m.principal_log_unitary(&UnitaryMatrix::identity(2)).unwrap();
        assert!(max_abs(&d.gamma) < 1e-15);
        let ix = UnitaryMatrix::new(word("X") * c64(0.0, 1.0)).unwrap();
        let d = m.principal_log_unitary(&ix).unwrap();
        assert!(max_abs(&(&d.gamma - word("X") * c64(PI / 2.0, 0.0))) < 1e-12);
        assert!(d.trace_part.abs() < 1e-14);
        assert!(!d.near_branch_cut);
        assert!((d.gamma_vec.get(1) - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn log_flags_branch_cut() {
        let m = SuManifold::new(1).unwrap();
        let minus_z = UnitaryMatrix::new(word("Z") * c64(-1.0, 0.0)).unwrap();
        let d = m.principal_log_unitary(&minus_z).unwrap();
        assert!(d.near_branch_cut);
        let back = geodesic_point(&UnitaryMatrix::identity(2), &d, 1.0).unwrap();
        assert!(max_abs(&(back.matrix() - minus_z.matrix())) < 1e-12);
    }

    #[test]
    fn log_exp_round_trip_random() {
        let m = SuManifold::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let v = random_vec(2, 2.0, &mut rng);
            let u = m.unitary_from_params(&v).unwrap();
            let d = m.principal_log_unitary(&u).unwrap();
            let back = geodesic_point(&UnitaryMatrix::identity(4), &d, 1.0).unwrap();
            assert!(max_abs(&(back.matrix() - u.matrix())) < 1e-10);
            assert!(max_abs(&(&d.gamma - d.gamma.adjoint())) < 1e-10);
        }
    }

    #[test]
    fn fidelity_examples() {
        let m = SuManifold::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = m.unitary_from_params(&random_vec(2, 1.0, &mut rng)).unwrap();
        let v = m.unitary_from_params(&random_vec(2, 1.0, &mut rng)).unwrap();
        assert!((fidelity(&u, &u).unwrap() - 1.0).abs() < 1e-14);
        assert!((fidelity(&u, &v).unwrap() - fidelity(&v, &u).unwrap()).abs() < 1e-14);
        let ix = UnitaryMatrix::new(word("X") * c64(0.0, 1.0)).unwrap();
        assert_eq!(fidelity(&UnitaryMatrix::identity(2), &ix).unwrap(), 0.0);
        assert!(matches!(
            fidelity(&UnitaryMatrix::identity(2), &u),
            Err(Error::DimensionMismatch(2, 4))
        ));
    }

    #[test]
    fn fidelity_agrees_with_metric() {
        let m = SuManifold::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..5 {
            let u = m.unitary_from_params(&random_vec(2, 1.0, &mut rng)).unwrap();
            let v = m.unitary_from_params(&random_vec(2, 1.0, &mut rng)).unwrap();
            // g(x, y) = Tr(x† y)/N with an explicit product
            let g = (u.matrix().adjoint() * v.matrix()).trace() / c64(4.0, 0.0);
            assert!((fidelity(&u, &v).unwrap() - g.re).abs() < 1e-14);
            let pi = fidelity_with(&u, &v, FidelityKind::PhaseInvariant).unwrap();
            assert!((pi - g.norm()).abs() < 1e-14);
        }
    }

    #[test]
    fn projection_to_su() {
        let m = SuManifold::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = m.unitary_from_params(&random_vec(2, 1.0, &mut rng)).unwrap();
        let p = su_project_target(&u);
        assert!(max_abs(&(p.matrix() - u.matrix())) < 1e-12);

        let mut t = identity(8);
        t[(6, 6)] = c64(0.0, 0.0);
        t[(7, 7)] = c64(0.0, 0.0);
        t[(6, 7)] = c64(1.0, 0.0);
        t[(7, 6)] = c64(1.0, 0.0);
        let toffoli = UnitaryMatrix::new(t.clone()).unwrap();
        let p = su_project_target(&toffoli);
        let expect = t * C64::from_polar(1.0, -PI / 8.0);
        assert!(max_abs(&(p.matrix() - expect)) < 1e-14);
        assert!((p.determinant() - c64(1.0, 0.0)).norm() < 1e-12);
        let twice = su_project_target(&p);
        assert!(max_abs(&(twice.matrix() - p.matrix())) < 1e-14);
    }

    #[test]
    fn nearest_representative_picks_closest_phase() {
        let v = UnitaryMatrix::identity(4);
        let u = UnitaryMatrix::new(identity(4) * c64(0.0, 1.0)).unwrap();
        let r = nearest_representative(&u, &v);
        assert!(max_abs(&(r.matrix() - u.matrix())) < 1e-14);
    }

    #[test]
    fn generators_at_identity() {
        let m = SuManifold::new(2).unwrap();
        let mask = RestrictionMask::all(2).unwrap();
        let set = m.effective_generators(&LieVector::zeros(2), &mask).unwrap();
        assert_eq!(set.len(), 15);
        for (j, omega) in &set.generators {
            let g = PauliWord::from_index(2, *j).unwrap().matrix() * c64(0.0, 1.0);
            assert!(max_abs(&(omega - g)) < 1e-14);
        }
    }

    #[test]
    fn generators_cover_mask() {
        let m = SuManifold::new(3).unwrap();
        let mask = RestrictionMask::two_local(3).unwrap();
        let set = m.effective_generators(&LieVector::zeros(3), &mask).unwrap();
        let idx: Vec<usize> = set.generators.iter().map(|(j, _)| j - 1).collect();
        assert_eq!(idx, mask.allowed_indices());
    }

    /// Central finite differences of the exponential map.
    fn fd_generator(m: &SuManifold, v: &LieVector, j: usize, h: f64) -> CMatrix {
        let e = LieVector::basis(v.qubits(), j).unwrap();
        let up = m.unitary_from_params(&v.add_scaled(h, &e)).unwrap();
        let dn = m.unitary_from_params(&v.add_scaled(-h, &e)).unwrap();
        let du = (up.matrix() - dn.matrix()) * c64(0.5 / h, 0.0);
        m.unitary_from_params(v).unwrap().matrix().adjoint() * du
    }

    #[test]
    fn generators_match_finite_differences() {
        let m = SuManifold::new(2).unwrap();
        let mask = RestrictionMask::two_local(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..3 {
            let v = random_vec(2, 1.0, &mut rng);
            let set = m.effective_generators(&v, &mask).unwrap();
            for (j, omega) in &set.generators {
                let fd = fd_generator(&m, &v, *j, 1e-5);
                assert!(max_abs(&(omega - fd)) <= 1e-8);
            }
        }
    }

    #[test]
    fn generators_with_degenerate_spectrum() {
        // H = a·ZI has doubly degenerate eigenvalues.
        let m = SuManifold::new(2).unwrap();
        let mask = RestrictionMask::all(2).unwrap();
        let v = LieVector::basis(2, 12).unwrap().scaled(0.7);
        let set = m.effective_generators(&v, &mask).unwrap();
        for (j, omega) in &set.generators {
            let fd = fd_generator(&m, &v, *j, 1e-5);
            assert!(max_abs(&(omega - fd)) <= 1e-8, "index {j}");
        }
    }

    #[test]
    fn first_order_expansion_ratio() {
        let m = SuManifold::new(2).unwrap();
        let mask = RestrictionMask::two_local(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let v = random_vec(2, 1.0, &mut rng);
        let d = random_vec(2, 1.0, &mut rng);
        let d = d.scaled(1.0 / d.norm());
        let set = m.effective_generators(&v, &mask).unwrap();
        let u = m.unitary_from_params(&v).unwrap();
        let lin = set.combine(&d);
        let err = |h: f64| {
            let moved = m.unitary_from_params(&v.add_scaled(h, &d)).unwrap();
            let approx = u.matrix() + u.matrix() * &lin * c64(h, 0.0);
            max_abs(&(moved.matrix() - approx))
        };
        let ratio = err(1e-3) / err(1e-4);
        assert!((50.0..=200.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn geodesic_endpoints_and_group_law() {
        let m = SuManifold::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let u = m.unitary_from_params(&random_vec(2, 1.0, &mut rng)).unwrap();
        let v = m.unitary_from_params(&random_vec(2, 1.0, &mut rng)).unwrap();
        let d = m.principal_log_unitary(&u.adjoint().compose(&v)).unwrap();
        let start = geodesic_point(&u, &d, 0.0).unwrap();
        assert!(max_abs(&(start.matrix() - u.matrix())) < 1e-13);
        let end = geodesic_point(&u, &d, 1.0).unwrap();
        assert!(max_abs(&(end.matrix() - v.matrix())) < 1e-10);
        let (s, t) = (0.3, 0.45);
        let direct = geodesic_point(&u, &d, s + t).unwrap();
        let chained = geodesic_point(&geodesic_point(&u, &d, s).unwrap(), &d, t).unwrap();
        assert!(max_abs(&(direct.matrix() - chained.matrix())) < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn generators_are_anti_hermitian(seed in any::<u64>()) {
            let m = SuManifold::new(2).unwrap();
            let mask = RestrictionMask::all(2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let set = m.effective_generators(&random_vec(2, 2.0, &mut rng), &mask).unwrap();
            for (_, omega) in &set.generators {
                prop_assert!(max_abs(&(omega + omega.adjoint())) <= 1e-10);
            }
        }

        #[test]
        fn rejects_non_unitary(scale in 1.01f64..3.0) {
            prop_assert!(UnitaryMatrix::new(identity(2) * c64(scale, 0.0)).is_err());
        }
    }
}
