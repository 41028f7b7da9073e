// Copyright 2026 The geodesic-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Synthesis of time-independent Hamiltonians, restricted to a chosen set of
//! Pauli terms, whose evolution at unit time implements a target gate.

pub mod baselines;
pub mod commutant;
pub mod error;
pub mod gates;
pub mod geodesic;
pub mod harness;
pub mod linalg;
pub mod manifold;
pub mod pauli;
pub mod record;
pub mod run;

pub use baselines::{run_gd, run_sgd, GdConfig, SgdConfig};
pub use commutant::{commutant_basis, CommutantBasis};
pub use error::{Error, Result};
pub use gates::GateSpec;
pub use geodesic::{run_geodesic, GeodesicConfig, GeodesicOptimizer};
pub use manifold::{FidelityKind, GeodesicDirection, SuManifold, UnitaryMatrix};
pub use harness::{AnsatzMode, PreparedRun, RestrictionSpec, RunSpec};
pub use pauli::{LieVector, PauliWord, RestrictionMask};
pub use record::{BatchSummary, BinSpec, Method, RunRecord};
pub use run::{MethodConfig, RunResult, StepKind, StepRecord};
