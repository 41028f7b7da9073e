// Copyright 2026 The geodesic-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Geodesic gate design.
//!
//! Each step pulls the geodesic generator `Γ = -i log(U(φ)†V)` back to the
//! restricted parameters by solving `Σ_j δφ_j Ω_j(φ) ≈ iΓ` in the least-squares
//! sense, then chooses the step length by a golden-section search on the
//! fidelity. When no step length improves the fidelity, a random step
//! orthogonal to the geodesic direction is taken instead.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::commutant::{commutant_basis, CommutantBasis, Subspace};
use crate::error::{Error, Result};
use crate::linalg::{lstsq_min_norm, trace_adjoint_product, RMatrix};
use crate::manifold::{
    fidelity_of_trace, nearest_representative, ExpansionPoint, FidelityKind, GeodesicDirection,
    SuManifold, UnitaryMatrix,
};
use crate::pauli::{LieVector, RestrictionMask};
use crate::run::{random_initial, uniform_vector, MethodConfig, RunResult, StepKind, StepRecord};

/// Singular values below this fraction of the largest are dropped from the
/// least-squares solve.
pub const LSTSQ_REL_CUTOFF: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeodesicConfig {
    /// Stop once the infidelity drops below this.
    pub epsilon: f64,
    /// Length multiplier of the escape step.
    pub eta: f64,
    pub max_steps: usize,
    /// Upper end of the line-search interval `[0, delta_max]`.
    pub delta_max: f64,
    pub ls_tol: f64,
    pub use_ansatz: bool,
    pub seed: u64,
    /// Half-width of the uniform initial distribution.
    pub init_scale: f64,
    pub fidelity: FidelityKind,
}

impl Default for GeodesicConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-3,
            eta: 1.0,
            max_steps: 5000,
            delta_max: 10.0,
            ls_tol: 1e-6,
            use_ansatz: false,
            seed: 0,
            init_scale: 1.0,
            fidelity: FidelityKind::RealPart,
        }
    }
}

impl GeodesicConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidConfig(what.to_string()));
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return bad("epsilon must lie in (0, 1)");
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return bad("eta must be positive");
        }
        if self.max_steps < 1 {
            return bad("max_steps must be at least 1");
        }
        if !(self.delta_max > 0.0 && self.delta_max.is_finite()) {
            return bad("delta_max must be positive");
        }
        if !(self.ls_tol > 0.0) {
            return bad("ls_tol must be positive");
        }
        if !(self.init_scale >= 0.0 && self.init_scale.is_finite()) {
            return bad("init_scale must be non-negative");
        }
        Ok(())
    }
}

/// Least-squares pull-back of the geodesic direction.
#[derive(Clone, Debug)]
pub struct StepDirection {
    /// Update direction in full Lie-vector coordinates, zero outside the mask.
    pub direction: LieVector,
    /// `‖Σ_j x_j ω_j - γ‖`.
    pub residual: f64,
    pub geodesic: GeodesicDirection,
}

/// Solve `min_x ‖Σ_{j∈H} x_j ω_j - γ‖²` at the parameters `v`, where `ω_j`
/// are the Pauli coordinates of `-iΩ_j(v)` and `γ` those of `Γ`.
pub fn geodesic_step_direction(
    manifold: &SuManifold,
    v: &LieVector,
    target: &UnitaryMatrix,
    mask: &RestrictionMask,
) -> Result<StepDirection> {
    let point = manifold.expand_at(v)?;
    direction_at(manifold, &point, target, mask)
}

pub(crate) fn direction_at(
    manifold: &SuManifold,
    point: &ExpansionPoint,
    target: &UnitaryMatrix,
    mask: &RestrictionMask,
) -> Result<StepDirection> {
    let relative = point.unitary.adjoint().compose(target);
    let geodesic = manifold.principal_log_unitary(&relative)?;
    if geodesic.gamma_vec.norm() == 0.0 {
        return Ok(StepDirection {
            direction: LieVector::zeros(manifold.qubits()),
            residual: 0.0,
            geodesic,
        });
    }
    let basis = manifold.basis();
    let generators = point.generators(basis, mask);
    let mut system = RMatrix::zeros(basis.len(), generators.len());
    let minus_i = crate::linalg::c64(0.0, -1.0);
    for (col, (_, omega)) in generators.generators.iter().enumerate() {
        let coeffs = basis.coefficients(&(omega * minus_i));
        system.set_column(col, &DVector::from_column_slice(coeffs.as_slice()));
    }
    let rhs = DVector::from_column_slice(geodesic.gamma_vec.as_slice());
    let (x, residual) = lstsq_min_norm(&system, &rhs, LSTSQ_REL_CUTOFF);
    Ok(StepDirection {
        direction: mask.expand(x.as_slice()),
        residual,
        geodesic,
    })
}

/// Result of a golden-section search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineSearch {
    pub argmax: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Inverse golden ratio, `(√5 - 1)/2`.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximize a unimodal objective on `[lo, hi]` to within `tol`.
pub fn golden_section_search(
    objective: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    golden_section_max(objective, lo, hi, tol).map(|ls| ls.argmax)
}

pub fn golden_section_max(
    mut objective: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<LineSearch> {
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "line search needs lo < hi and tol > 0 (got [{lo}, {hi}], tol {tol})"
        )));
    }
    let mut evaluations = 0;
    let mut eval = |x: f64| -> Result<f64> {
        evaluations += 1;
        let y = objective(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFinite("line-search objective"))
        }
    };
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d)?;
        }
    }
    let (argmax, value) = if fc >= fd { (c, fc) } else { (d, fd) };
    Ok(LineSearch {
        argmax,
        value,
        evaluations,
    })
}

/// Random restricted step orthogonal to the geodesic vector:
/// `η (r_H - (r_H·γ/‖γ‖²) γ)` with `r ~ U(-1, 1)`.
pub fn gram_schmidt_escape(
    gamma_vec: &LieVector,
    mask: &RestrictionMask,
    rng: &mut ChaCha8Rng,
    eta: f64,
) -> Result<LieVector> {
    escape_within(gamma_vec, mask, rng, eta)
}

/// The random vector and `γ` are both projected onto `feasible` first, so
/// the step stays feasible and is orthogonal to `γ` itself.
pub(crate) fn escape_within(
    gamma_vec: &LieVector,
    feasible: &dyn Subspace,
    rng: &mut ChaCha8Rng,
    eta: f64,
) -> Result<LieVector> {
    if gamma_vec.norm() == 0.0 {
        return Err(Error::ZeroGeodesic);
    }
    let r = feasible.project(&uniform_vector(gamma_vec.qubits(), 1.0, rng));
    let g = feasible.project(gamma_vec);
    let gg = g.dot(&g);
    let step = if gg > 0.0 {
        r.add_scaled(-r.dot(&g) / gg, &g)
    } else {
        r
    };
    Ok(step.scaled(eta))
}

enum Feasible<'a> {
    Mask(&'a RestrictionMask),
    Commutant(&'a CommutantBasis),
}

impl Subspace for Feasible<'_> {
    fn project(&self, v: &LieVector) -> LieVector {
        match self {
            Feasible::Mask(m) => m.project(v),
            Feasible::Commutant(c) => c.project(v),
        }
    }
}

/// Optimizer state bound to one target and restriction.
pub struct GeodesicOptimizer<'a> {
    manifold: SuManifold,
    target: &'a UnitaryMatrix,
    mask: &'a RestrictionMask,
    config: GeodesicConfig,
    commutant: Option<CommutantBasis>,
}

impl<'a> GeodesicOptimizer<'a> {
    pub fn new(
        target: &'a UnitaryMatrix,
        mask: &'a RestrictionMask,
        config: GeodesicConfig,
    ) -> Result<Self> {
        config.validate()?;
        let manifold = SuManifold::new(mask.qubits())?;
        if target.dim() != manifold.dim() {
            return Err(Error::DimensionMismatch(target.dim(), manifold.dim()));
        }
        let commutant = if config.use_ansatz {
            match commutant_basis(&manifold, target, mask) {
                Ok(cb) => Some(cb),
                Err(Error::EmptyCommutant) => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        Ok(Self {
            manifold,
            target,
            mask,
            config,
            commutant,
        })
    }

    /// The commuting ansatz in force, if any.
    pub fn commutant(&self) -> Option<&CommutantBasis> {
        self.commutant.as_ref()
    }

    pub fn manifold(&self) -> &SuManifold {
        &self.manifold
    }

    fn feasible(&self) -> Feasible<'_> {
        match &self.commutant {
            Some(cb) => Feasible::Commutant(cb),
            None => Feasible::Mask(self.mask),
        }
    }

    fn fidelity(&self, u: &UnitaryMatrix) -> f64 {
        let tr = trace_adjoint_product(u.matrix(), self.target.matrix());
        fidelity_of_trace(tr, u.dim(), self.config.fidelity)
    }

    fn geodesic_target(&self, u: &UnitaryMatrix) -> UnitaryMatrix {
        match self.config.fidelity {
            FidelityKind::RealPart => self.target.clone(),
            FidelityKind::PhaseInvariant => nearest_representative(u, self.target),
        }
    }

    pub fn run(&self) -> Result<RunResult> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        let init = random_initial(self.mask, self.config.init_scale, &mut rng);
        self.run_from(init, &mut rng)
    }

    /// Run from explicit initial parameters, which are restricted (and
    /// projected onto the ansatz when one is active) first.
    pub fn run_from(&self, init: LieVector, rng: &mut ChaCha8Rng) -> Result<RunResult> {
        let feasible = self.feasible();
        let mut params = feasible.project(&self.mask.apply(&init)?);
        let mut point = self.manifold.expand_at(&params)?;
        let mut fid = self.fidelity(&point.unitary);
        let initial_infidelity = 1.0 - fid;
        let mut trajectory = Vec::new();

        for step in 0..self.config.max_steps {
            if 1.0 - fid < self.config.epsilon {
                break;
            }
            let goal = self.geodesic_target(&point.unitary);
            let sd = direction_at(&self.manifold, &point, &goal, self.mask)?;
            let direction = feasible.project(&sd.direction);
            let norm = direction.norm();

            let mut accepted = None;
            if norm > 0.0 {
                let unit = direction.scaled(1.0 / norm);
                let ls = golden_section_max(
                    |delta| {
                        self.manifold
                            .unitary_from_params(&params.add_scaled(delta, &unit))
                            .map(|u| self.fidelity(&u))
                            .unwrap_or(f64::NAN)
                    },
                    0.0,
                    self.config.delta_max,
                    self.config.ls_tol,
                )?;
                if ls.value > fid {
                    accepted = Some((unit.scaled(ls.argmax), StepKind::LeastSquares));
                }
            }
            let (update, kind) = match accepted {
                Some(found) => found,
                None => {
                    let gamma = &sd.geodesic.gamma_vec;
                    if gamma.norm() == 0.0 {
                        // Already on the target up to a global phase the
                        // convention does not forgive; nothing to escape.
                        break;
                    }
                    let esc = escape_within(gamma, &feasible, rng, self.config.eta)?;
                    (esc, StepKind::Escape)
                }
            };

            params = feasible.project(&params.add_scaled(1.0, &update));
            point = self.manifold.expand_at(&params)?;
            let new_fid = self.fidelity(&point.unitary);
            trajectory.push(StepRecord {
                step,
                fidelity_before: fid,
                fidelity_after: new_fid,
                kind,
                step_size: update.norm(),
                residual: sd.residual,
                trace_part: sd.geodesic.trace_part,
                branch_cut: sd.geodesic.near_branch_cut,
            });
            fid = new_fid;
        }

        let final_infidelity = 1.0 - fid;
        Ok(RunResult {
            final_params: params,
            initial_infidelity,
            final_infidelity,
            stop_statistic: final_infidelity,
            steps: trajectory.len(),
            converged: final_infidelity < self.config.epsilon,
            trajectory,
            config: MethodConfig::Geodesic(self.config.clone()),
            seed: self.config.seed,
        })
    }
}

/// Run the geodesic algorithm from a seeded random start.
pub fn run_geodesic(
    target: &UnitaryMatrix,
    mask: &RestrictionMask,
    config: &GeodesicConfig,
) -> Result<RunResult> {
    GeodesicOptimizer::new(target, mask, config.clone())?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use crate::pauli::PauliWord;
    use proptest::prelude::*;

    fn idx(w: &str) -> usize {
        w.parse::<PauliWord>().unwrap().index()
    }

    #[test]
    fn golden_section_quadratic() {
        let x = golden_section_search(|d| -(d - 1.0).powi(2), 0.0, 10.0, 1e-6).unwrap();
        assert!((x - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn golden_section_sine() {
        let ls = golden_section_max(f64::sin, 0.0, std::f64::consts::PI, 1e-6).unwrap();
        assert!((ls.argmax - std::f64::consts::FRAC_PI_2).abs() <= 1e-6);
        let bound = ((std::f64::consts::PI / 1e-6).ln() / (1.0 / INV_PHI).ln()).ceil() as usize + 2;
        assert!(ls.evaluations <= bound, "{} > {bound}", ls.evaluations);
    }

    #[test]
    fn golden_section_constant_and_errors() {
        let x = golden_section_search(|_| 3.0, -2.0, 5.0, 1e-6).unwrap();
        assert!((-2.0..=5.0).contains(&x));
        assert!(matches!(
            golden_section_search(|_| f64::NAN, 0.0, 1.0, 1e-6),
            Err(Error::NonFinite(_))
        ));
        assert!(golden_section_search(|x| x, 1.0, 0.0, 1e-6).is_err());
    }

    #[test]
    fn escape_is_orthogonal_and_masked() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut allowed = vec![false; 15];
        for i in [0, 3, 4, 14] {
            allowed[i] = true;
        }
        let mask = RestrictionMask::new(2, allowed).unwrap();
        for _ in 0..20 {
            let gamma = uniform_vector(2, 1.0, &mut rng);
            let step = gram_schmidt_escape(&gamma, &mask, &mut rng, 1.0).unwrap();
            assert!(mask.respects(&step));
            assert!(step.dot(&gamma).abs() <= 1e-10 * step.norm() * gamma.norm());
        }
        let gamma = uniform_vector(2, 1.0, &mut rng);
        let zero = gram_schmidt_escape(&gamma, &mask, &mut rng, 0.0).unwrap();
        assert_eq!(zero.norm(), 0.0);
        assert!(matches!(
            gram_schmidt_escape(&LieVector::zeros(2), &mask, &mut rng, 1.0),
            Err(Error::ZeroGeodesic)
        ));
    }

    #[test]
    fn direction_zero_at_target() {
        let m = SuManifold::new(2).unwrap();
        let mask = RestrictionMask::two_local(2).unwrap();
        let v = LieVector::basis(2, idx("XZ")).unwrap().scaled(0.4);
        let target = m.unitary_from_params(&v).unwrap();
        let sd = geodesic_step_direction(&m, &v, &target, &mask).unwrap();
        assert!(sd.direction.norm() < 1e-10);
        assert!(sd.residual < 1e-10);
    }

    #[test]
    fn direction_at_identity_equals_gamma() {
        let m = SuManifold::new(2).unwrap();
        let mask = RestrictionMask::all(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let target = m.unitary_from_params(&uniform_vector(2, 0.5, &mut rng)).unwrap();
        let sd = geodesic_step_direction(&m, &LieVector::zeros(2), &target, &mask).unwrap();
        assert!(sd.residual < 1e-12);
        assert!(sd.direction.max_abs_diff(&sd.geodesic.gamma_vec) < 1e-12);
    }

    /// Brute force: normal equations `(AᵀA) x = Aᵀγ` with `A` assembled from
    /// dense Pauli matrices and finite-difference generators.
    #[test]
    fn direction_matches_normal_equations() {
        let m = SuManifold::new(2).unwrap();
        let mask = RestrictionMask::two_local(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let v = uniform_vector(2, 1.0, &mut rng);
        let target = m.unitary_from_params(&uniform_vector(2, 1.0, &mut rng)).unwrap();
        let sd = geodesic_step_direction(&m, &v, &target, &mask).unwrap();

        let words: Vec<_> = (1..=15).map(|j| PauliWord::from_index(2, j).unwrap().matrix()).collect();
        let set = m.effective_generators(&v, &mask).unwrap();
        let mut a = RMatrix::zeros(15, 15);
        for (col, (_, omega)) in set.generators.iter().enumerate() {
            let h = omega * c64(0.0, -1.0);
            for (row, g) in words.iter().enumerate() {
                a[(row, col)] = (g * &h).trace().re / 4.0;
            }
        }
        let gamma = DVector::from_column_slice(sd.geodesic.gamma_vec.as_slice());
        let x = (a.transpose() * &a).lu().solve(&(a.transpose() * &gamma)).unwrap();
        assert!(sd.residual < 1e-8);
        for (k, &pos) in mask.allowed_indices().iter().enumerate() {
            assert!((sd.direction.as_slice()[pos] - x[k]).abs() < 1e-8);
        }
    }

    #[test]
    fn converges_in_zero_steps_at_target() {
        let m = SuManifold::new(2).unwrap();
        let mask = RestrictionMask::two_local(2).unwrap();
        let star = LieVector::basis(2, idx("ZX")).unwrap().scaled(0.2);
        let target = m.unitary_from_params(&star).unwrap();
        let opt = GeodesicOptimizer::new(&target, &mask, GeodesicConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let res = opt.run_from(star.clone(), &mut rng).unwrap();
        assert!(res.converged);
        assert_eq!(res.steps, 0);
        assert_eq!(res.final_params, star);
    }

    #[test]
    fn two_qubit_smoke() {
        let m = SuManifold::new(2).unwrap();
        let mask = RestrictionMask::two_local(2).unwrap();
        let mut v = LieVector::zeros(2);
        v.as_mut_slice()[idx("XI") - 1] = 0.3;
        v.as_mut_slice()[idx("ZZ") - 1] = 0.7;
        let target = m.unitary_from_params(&v).unwrap();
        let mut ok = 0;
        for seed in 0..10 {
            let cfg = GeodesicConfig {
                seed,
                max_steps: 50,
                ..Default::default()
            };
            let res = run_geodesic(&target, &mask, &cfg).unwrap();
            assert_eq!(res.converged, res.final_infidelity < cfg.epsilon);
            if res.converged {
                ok += 1;
            }
        }
        assert!(ok >= 9, "{ok}/10 converged");
    }

    #[test]
    fn run_is_deterministic() {
        let target = crate::manifold::su_project_target(&crate::gates::toffoli());
        let mask = RestrictionMask::two_local(3).unwrap();
        let cfg = GeodesicConfig {
            seed: 3,
            max_steps: 15,
            use_ansatz: true,
            ..Default::default()
        };
        let a = run_geodesic(&target, &mask, &cfg).unwrap();
        let b = run_geodesic(&target, &mask, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn config_validation() {
        let ok = GeodesicConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            GeodesicConfig { epsilon: 0.0, ..ok.clone() },
            GeodesicConfig { epsilon: 1.0, ..ok.clone() },
            GeodesicConfig { eta: 0.0, ..ok.clone() },
            GeodesicConfig { max_steps: 0, ..ok.clone() },
            GeodesicConfig { delta_max: -1.0, ..ok.clone() },
            GeodesicConfig { ls_tol: 0.0, ..ok.clone() },
        ] {
            assert!(bad.validate().is_err());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]
        #[test]
        fn iterates_respect_mask_and_line_search_improves(seed in 0u64..1000) {
            let target = crate::gates::weight_parity_z(3).unwrap();
            let mask = RestrictionMask::two_local(3).unwrap();
            let cfg = GeodesicConfig { seed, max_steps: 20, ..Default::default() };
            let res = run_geodesic(&target, &mask, &cfg).unwrap();
            prop_assert!(mask.respects(&res.final_params));
            for s in &res.trajectory {
                if s.kind == StepKind::LeastSquares {
                    prop_assert!(s.fidelity_after >= s.fidelity_before);
                }
            }
        }
    }
}
