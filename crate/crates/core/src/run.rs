// Copyright 2026 The geodesic-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Records shared by every optimizer.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::baselines::{GdConfig, SgdConfig};
use crate::geodesic::GeodesicConfig;
use crate::manifold::FidelityKind;
use crate::pauli::{algebra_dim, LieVector, RestrictionMask};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    LeastSquares,
    Escape,
    Gradient,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub fidelity_before: f64,
    pub fidelity_after: f64,
    pub kind: StepKind,
    /// Euclidean norm of the parameter update.
    pub step_size: f64,
    /// Least-squares residual (zero for gradient steps).
    pub residual: f64,
    /// Identity component of `-i log(U†V)`; zero for gradient steps.
    pub trace_part: f64,
    pub branch_cut: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum MethodConfig {
    Geodesic(GeodesicConfig),
    Gd(GdConfig),
    Sgd(SgdConfig),
}

impl MethodConfig {
    pub fn seed(&self) -> u64 {
        match self {
            MethodConfig::Geodesic(c) => c.seed,
            MethodConfig::Gd(c) => c.seed,
            MethodConfig::Sgd(c) => c.seed,
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        match self {
            MethodConfig::Geodesic(c) => c.seed = seed,
            MethodConfig::Gd(c) => c.seed = seed,
            MethodConfig::Sgd(c) => c.seed = seed,
        }
    }

    pub fn fidelity(&self) -> FidelityKind {
        match self {
            MethodConfig::Geodesic(c) => c.fidelity,
            MethodConfig::Gd(c) => c.fidelity,
            MethodConfig::Sgd(c) => c.fidelity,
        }
    }

    pub fn epsilon(&self) -> f64 {
        match self {
            MethodConfig::Geodesic(c) => c.epsilon,
            MethodConfig::Gd(c) => c.epsilon,
            MethodConfig::Sgd(c) => c.epsilon,
        }
    }
}

/// Outcome and trajectory of one optimization run.
///
/// `final_infidelity` is the unitary infidelity of the final parameters under
/// the run's fidelity convention. `stop_statistic` is what the stopping rule
/// compared against `epsilon`: the same number for the geodesic and gradient
/// descent methods, the validation-set state infidelity for SGD.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub final_params: LieVector,
    pub initial_infidelity: f64,
    pub final_infidelity: f64,
    pub stop_statistic: f64,
    pub steps: usize,
    pub converged: bool,
    pub trajectory: Vec<StepRecord>,
    pub config: MethodConfig,
    pub seed: u64,
}

impl RunResult {
    /// Stopping statistic before the first step and after every step.
    pub fn infidelity_trace(&self) -> Vec<f64> {
        std::iter::once(self.trajectory.first().map_or(self.stop_statistic, |s| 1.0 - s.fidelity_before))
            .chain(self.trajectory.iter().map(|s| 1.0 - s.fidelity_after))
            .collect()
    }
}

/// `θ ~ U(-scale, scale)` on every coordinate, then restricted.
pub(crate) fn random_initial(mask: &RestrictionMask, scale: f64, rng: &mut ChaCha8Rng) -> LieVector {
    let qubits = mask.qubits();
    let raw = uniform_vector(qubits, scale, rng);
    mask.apply(&raw).expect("lengths agree")
}

/// `θ ~ U(-scale, scale)` on every coordinate of the full algebra.
pub fn uniform_vector(qubits: usize, scale: f64, rng: &mut ChaCha8Rng) -> LieVector {
    let coeffs = (0..algebra_dim(qubits))
        .map(|_| if scale > 0.0 { rng.random_range(-scale..scale) } else { 0.0 })
        .collect();
    LieVector::from_vec(qubits, coeffs).expect("finite uniform draws")
}
