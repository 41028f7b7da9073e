// Copyright 2026 The geodesic-gate Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Pauli word `{0}`")]
    InvalidWord(String),
    #[error("the all-identity word is not a basis element")]
    IdentityWord,
    #[error("basis index {index} out of range for {qubits} qubits")]
    IndexOutOfRange { index: usize, qubits: usize },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("qubit count mismatch: expected {expected}, got {actual}")]
    QubitMismatch { expected: usize, actual: usize },
    #[error("unsupported qubit count {0} (supported: 1..=6)")]
    UnsupportedQubits(usize),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not traceless (trace magnitude {0:e})")]
    NotTraceless(f64),
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("matrix dimension {0} is not a power of two")]
    BadDimension(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("restriction mask allows no terms")]
    EmptyMask,
    #[error("non-finite value encountered: {0}")]
    NonFinite(&'static str),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("escape direction undefined for a zero geodesic vector")]
    ZeroGeodesic,
    #[error("no commuting ansatz exists for this target and restriction")]
    EmptyCommutant,
    #[error("eigendecomposition failed to converge")]
    NoConvergence,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported record schema version {0}")]
    SchemaVersion(u32),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
