// Copyright 2026 The geodesic-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Comparison optimizers: adaptive-moment gradient descent on the unitary
//! infidelity, and stochastic gradient descent on the average state
//! infidelity over Haar-random training states.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, trace_adjoint_product, CMatrix, C64};
use crate::manifold::{fidelity_of_trace, FidelityKind, SuManifold, UnitaryMatrix};
use crate::pauli::{LieVector, RestrictionMask};
use crate::run::{random_initial, MethodConfig, RunResult, StepKind, StepRecord};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GdConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub adam_eps: f64,
    pub epsilon: f64,
    pub max_steps: usize,
    pub seed: u64,
    pub init_scale: f64,
    pub fidelity: FidelityKind,
}

impl Default for GdConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            beta1: 0.9,
            beta2: 0.999,
            adam_eps: 1e-8,
            epsilon: 1e-3,
            max_steps: 50_000,
            seed: 0,
            init_scale: 1.0,
            fidelity: FidelityKind::RealPart,
        }
    }
}

impl GdConfig {
    pub fn validate(&self) -> Result<()> {
        let open_unit = |x: f64| x > 0.0 && x < 1.0;
        if !(self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig("learning rate must be positive".into()));
        }
        if !open_unit(self.beta1) || !open_unit(self.beta2) {
            return Err(Error::InvalidConfig("Adam betas must lie in (0, 1)".into()));
        }
        if !open_unit(self.epsilon) {
            return Err(Error::InvalidConfig("epsilon must lie in (0, 1)".into()));
        }
        if self.max_steps < 1 {
            return Err(Error::InvalidConfig("max_steps must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SgdConfig {
    pub d_train: usize,
    pub d_test: usize,
    /// Learning-rate decay `κ`.
    pub decay: f64,
    pub initial_rate: f64,
    pub epsilon: f64,
    pub max_steps: usize,
    pub seed: u64,
    pub init_scale: f64,
    /// Convention for the reported unitary infidelity. State fidelities do
    /// not see the global phase, so the default is phase invariant.
    pub fidelity: FidelityKind,
}

impl Default for SgdConfig {
    fn default() -> Self {
        Self {
            d_train: 200,
            d_test: 100,
            decay: 0.005,
            initial_rate: 1.0,
            epsilon: 1e-3,
            max_steps: 50_000,
            seed: 0,
            init_scale: 1.0,
            fidelity: FidelityKind::PhaseInvariant,
        }
    }
}

impl SgdConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d_train < 1 || self.d_test < 1 {
            return Err(Error::InvalidConfig("state batches must be nonempty".into()));
        }
        if !(self.decay >= 0.0) || !(self.initial_rate > 0.0) {
            return Err(Error::InvalidConfig("need decay >= 0 and a positive rate".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidConfig("epsilon must lie in (0, 1)".into()));
        }
        if self.max_steps < 1 {
            return Err(Error::InvalidConfig("max_steps must be at least 1".into()));
        }
        Ok(())
    }

    /// `λ^(m) = λ⁰ / (1 + κ m)`.
    pub fn learning_rate(&self, step: usize) -> f64 {
        self.initial_rate / (1.0 + self.decay * step as f64)
    }
}

fn check_target(manifold: &SuManifold, target: &UnitaryMatrix, mask: &RestrictionMask) -> Result<()> {
    if mask.qubits() != manifold.qubits() {
        return Err(Error::QubitMismatch {
            expected: manifold.qubits(),
            actual: mask.qubits(),
        });
    }
    if target.dim() != manifold.dim() {
        return Err(Error::DimensionMismatch(target.dim(), manifold.dim()));
    }
    Ok(())
}

/// Exact gradient of `1 - Re Tr(U†V)/N`:
/// component `j` is `-(1/N) Re Tr(Ω_j† U† V)` on the mask, zero elsewhere.
pub fn infidelity_gradient(
    manifold: &SuManifold,
    v: &LieVector,
    target: &UnitaryMatrix,
    mask: &RestrictionMask,
) -> Result<LieVector> {
    infidelity_gradient_with(manifold, v, target, mask, FidelityKind::RealPart).map(|(g, _)| g)
}

/// Gradient and fidelity under either convention.
pub fn infidelity_gradient_with(
    manifold: &SuManifold,
    v: &LieVector,
    target: &UnitaryMatrix,
    mask: &RestrictionMask,
    kind: FidelityKind,
) -> Result<(LieVector, f64)> {
    check_target(manifold, target, mask)?;
    let point = manifold.expand_at(v)?;
    let relative = point.unitary.matrix().adjoint() * target.matrix();
    let dim = manifold.dim() as f64;
    let tr = relative.trace();
    let set = point.generators(manifold.basis(), mask);
    let mut grad = LieVector::zeros(manifold.qubits());
    for (j, omega) in &set.generators {
        let d_tr = trace_adjoint_product(omega, &relative);
        let d_fid = match kind {
            FidelityKind::RealPart => d_tr.re,
            FidelityKind::PhaseInvariant => {
                let mag = tr.norm();
                if mag > 0.0 {
                    (tr.conj() * d_tr).re / mag
                } else {
                    0.0
                }
            }
        };
        grad.as_mut_slice()[j - 1] = -d_fid / dim;
    }
    Ok((grad, fidelity_of_trace(tr, manifold.dim(), kind)))
}

/// First and second moment averages with bias correction.
#[derive(Clone, Debug)]
pub struct Adam {
    rate: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    first: Vec<f64>,
    second: Vec<f64>,
    t: i32,
}

impl Adam {
    pub fn new(len: usize, rate: f64, beta1: f64, beta2: f64, eps: f64) -> Self {
        Self {
            rate,
            beta1,
            beta2,
            eps,
            first: vec![0.0; len],
            second: vec![0.0; len],
            t: 0,
        }
    }

    /// Update for gradient `g`; the caller adds it to the parameters.
    pub fn step(&mut self, g: &[f64]) -> Vec<f64> {
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t);
        let c2 = 1.0 - self.beta2.powi(self.t);
        g.iter()
            .zip(self.first.iter_mut().zip(self.second.iter_mut()))
            .map(|(&gi, (m, v))| {
                *m = self.beta1 * *m + (1.0 - self.beta1) * gi;
                *v = self.beta2 * *v + (1.0 - self.beta2) * gi * gi;
                -self.rate * (*m / c1) / ((*v / c2).sqrt() + self.eps)
            })
            .collect()
    }
}

/// Adaptive-moment descent on the unitary infidelity; no line search and no
/// commuting ansatz.
pub fn run_gd(target: &UnitaryMatrix, mask: &RestrictionMask, config: &GdConfig) -> Result<RunResult> {
    config.validate()?;
    let manifold = SuManifold::new(mask.qubits())?;
    check_target(&manifold, target, mask)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut params = random_initial(mask, config.init_scale, &mut rng);
    let mut adam = Adam::new(
        mask.count(),
        config.learning_rate,
        config.beta1,
        config.beta2,
        config.adam_eps,
    );

    let (mut grad, mut fid) =
        infidelity_gradient_with(&manifold, &params, target, mask, config.fidelity)?;
    let initial_infidelity = 1.0 - fid;
    let mut trajectory = Vec::new();
    for step in 0..config.max_steps {
        if 1.0 - fid < config.epsilon {
            break;
        }
        let update = mask.expand(&adam.step(&mask.compress(&grad)));
        params = params.add_scaled(1.0, &update);
        let (g, f) = infidelity_gradient_with(&manifold, &params, target, mask, config.fidelity)?;
        trajectory.push(StepRecord {
            step,
            fidelity_before: fid,
            fidelity_after: f,
            kind: StepKind::Gradient,
            step_size: update.norm(),
            residual: 0.0,
            trace_part: 0.0,
            branch_cut: false,
        });
        grad = g;
        fid = f;
    }
    let final_infidelity = 1.0 - fid;
    Ok(RunResult {
        final_params: params,
        initial_infidelity,
        final_infidelity,
        stop_statistic: final_infidelity,
        steps: trajectory.len(),
        converged: final_infidelity < config.epsilon,
        trajectory,
        config: MethodConfig::Gd(config.clone()),
        seed: config.seed,
    })
}

/// Unit-norm pure states.
#[derive(Clone, Debug, PartialEq)]
pub struct StateBatch {
    states: Vec<Vec<C64>>,
}

impl StateBatch {
    pub fn new(states: Vec<Vec<C64>>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidConfig("state batch must be nonempty".into()));
        }
        for s in &states {
            let norm: f64 = s.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidConfig(format!("state norm {norm} is not 1")));
            }
        }
        Ok(Self { states })
    }

    /// All computational basis states of dimension `dim`.
    pub fn computational_basis(dim: usize) -> Self {
        let states = (0..dim)
            .map(|b| (0..dim).map(|k| c64(if k == b { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect();
        Self { states }
    }

    pub fn states(&self) -> &[Vec<C64>] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Haar-random pure states as normalized complex Gaussian vectors.
pub fn haar_states(count: usize, dim: usize, rng: &mut ChaCha8Rng) -> Result<StateBatch> {
    if count < 1 || dim < 1 {
        return Err(Error::InvalidConfig("need at least one state of positive dimension".into()));
    }
    let states = (0..count)
        .map(|_| {
            let raw: Vec<C64> = (0..dim)
                .map(|_| c64(StandardNormal.sample(rng), StandardNormal.sample(rng)))
                .collect();
            let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            raw.into_iter().map(|z| z / norm).collect()
        })
        .collect();
    Ok(StateBatch { states })
}

fn mat_vec(m: &CMatrix, v: &[C64]) -> Vec<C64> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)] * v[c]).sum())
        .collect()
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn batch_infidelity(relative: &CMatrix, batch: &StateBatch) -> f64 {
    let total: f64 = batch
        .states
        .iter()
        .map(|psi| inner(psi, &mat_vec(relative, psi)).norm_sqr())
        .sum();
    1.0 - total / batch.len() as f64
}

/// `1 - (1/d) Σ_i |⟨ψ_i|U(v)†V|ψ_i⟩|²`.
pub fn state_infidelity_batch(
    manifold: &SuManifold,
    v: &LieVector,
    target: &UnitaryMatrix,
    batch: &StateBatch,
) -> Result<f64> {
    let u = manifold.unitary_from_params(v)?;
    if target.dim() != u.dim() {
        return Err(Error::DimensionMismatch(target.dim(), u.dim()));
    }
    Ok(batch_infidelity(&(u.matrix().adjoint() * target.matrix()), batch))
}

/// Gradient of the batch state infidelity,
/// `-(2/d) Σ_i Re(⟨ψ_i|Ω_j†U†V|ψ_i⟩ ⟨ψ_i|V†U|ψ_i⟩)`, together with its value.
pub fn state_infidelity_gradient(
    manifold: &SuManifold,
    v: &LieVector,
    target: &UnitaryMatrix,
    mask: &RestrictionMask,
    batch: &StateBatch,
) -> Result<(LieVector, f64)> {
    check_target(manifold, target, mask)?;
    let point = manifold.expand_at(v)?;
    let relative = point.unitary.matrix().adjoint() * target.matrix();
    let dim = manifold.dim();
    // Σ_i conj(a_i) (W ψ_i) ψ_i†, so that each component is Re Tr(Ω_j† M).
    let mut weighted = CMatrix::zeros(dim, dim);
    let mut total = 0.0;
    for psi in &batch.states {
        let w_psi = mat_vec(&relative, psi);
        let a = inner(psi, &w_psi);
        total += a.norm_sqr();
        for r in 0..dim {
            let left = a.conj() * w_psi[r];
            for c in 0..dim {
                weighted[(r, c)] += left * psi[c].conj();
            }
        }
    }
    let d = batch.len() as f64;
    let set = point.generators(manifold.basis(), mask);
    let mut grad = LieVector::zeros(manifold.qubits());
    for (j, omega) in &set.generators {
        grad.as_mut_slice()[j - 1] = -2.0 / d * trace_adjoint_product(omega, &weighted).re;
    }
    Ok((grad, 1.0 - total / d))
}

/// Plain SGD on fresh Haar batches with `λ^(m) = λ⁰/(1 + κm)`; stops on the
/// infidelity of a fixed validation batch.
pub fn run_sgd(target: &UnitaryMatrix, mask: &RestrictionMask, config: &SgdConfig) -> Result<RunResult> {
    config.validate()?;
    let manifold = SuManifold::new(mask.qubits())?;
    check_target(&manifold, target, mask)?;
    let dim = manifold.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut params = random_initial(mask, config.init_scale, &mut rng);
    let validation = haar_states(config.d_test, dim, &mut rng)?;

    let mut val = state_infidelity_batch(&manifold, &params, target, &validation)?;
    let initial_infidelity = val;
    let mut trajectory = Vec::new();
    for step in 0..config.max_steps {
        if val < config.epsilon {
            break;
        }
        let train = haar_states(config.d_train, dim, &mut rng)?;
        let (grad, _) = state_infidelity_gradient(&manifold, &params, target, mask, &train)?;
        let rate = config.learning_rate(step);
        params = params.add_scaled(-rate, &grad);
        let new_val = state_infidelity_batch(&manifold, &params, target, &validation)?;
        trajectory.push(StepRecord {
            step,
            fidelity_before: 1.0 - val,
            fidelity_after: 1.0 - new_val,
            kind: StepKind::Gradient,
            step_size: rate * grad.norm(),
            residual: 0.0,
            trace_part: 0.0,
            branch_cut: false,
        });
        val = new_val;
    }
    let u = manifold.unitary_from_params(&params)?;
    let final_infidelity = 1.0
        - fidelity_of_trace(
            trace_adjoint_product(u.matrix(), target.matrix()),
            dim,
            config.fidelity,
        );
    Ok(RunResult {
        final_params: params,
        initial_infidelity,
        final_infidelity,
        stop_statistic: val,
        steps: trajectory.len(),
        converged: val < config.epsilon,
        trajectory,
        config: MethodConfig::Sgd(config.clone()),
        seed: config.seed,
    })
}
