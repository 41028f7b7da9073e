// Copyright 2026 The geodesic-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Target gates: Toffoli, Fredkin, weight-k parity checks and matrices read
//! from disk.
//!
//! # Matrix files
//!
//! JSON documents carry the qubit count and the entries in row-major order,
//! each entry a `[re, im]` pair. `matrix` may be either a flat list of `N²`
//! pairs or a list of `N` rows of `N` pairs:
//!
//! ```json
//! {"n": 1, "matrix": [[0, 0], [1, 0], [1, 0], [0, 0]]}
//! ```
//!
//! Anything not starting with `{` is read as CSV: `N` rows of `2N` numbers,
//! real and imaginary parts interleaved (`re00, im00, re01, im01, ...`).
//! Lines starting with `#` are skipped.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::{c64, identity, CMatrix};
use crate::manifold::{su_project_target, UnitaryMatrix};
use crate::pauli::{Pauli, PauliWord, MAX_QUBITS};

fn permutation(dim: usize, map: impl Fn(usize) -> usize) -> UnitaryMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        m[(map(col), col)] = c64(1.0, 0.0);
    }
    UnitaryMatrix::new(m).expect("permutation matrices are unitary")
}

/// Controlled-controlled-NOT on three qubits (the last is the target).
pub fn toffoli() -> UnitaryMatrix {
    permutation(8, |b| if b >> 1 == 0b11 { b ^ 1 } else { b })
}

/// Controlled swap of the last two qubits, controlled on the first.
pub fn fredkin() -> UnitaryMatrix {
    permutation(8, |b| match b {
        0b101 => 0b110,
        0b110 => 0b101,
        other => other,
    })
}

fn check_weight(k: usize) -> Result<()> {
    if !(2..=MAX_QUBITS).contains(&k) {
        return Err(Error::InvalidConfig(format!(
            "parity-check weight must be in 2..={MAX_QUBITS}, got {k}"
        )));
    }
    Ok(())
}

fn word_matrix(letters: Vec<Pauli>) -> CMatrix {
    PauliWord::new(letters)
        .expect("non-identity word")
        .matrix()
}

/// Four-term parity check `½(I + C⊗I + I⊗X - C⊗X)`, where `C` is the check
/// string on the first `k-1` qubits.
fn parity_check(k: usize, check: Pauli) -> Result<UnitaryMatrix> {
    check_weight(k)?;
    let mut c_i = vec![check; k - 1];
    c_i.push(Pauli::I);
    let mut i_x = vec![Pauli::I; k - 1];
    i_x.push(Pauli::X);
    let mut c_x = vec![check; k - 1];
    c_x.push(Pauli::X);
    let m = (identity(1 << k) + word_matrix(c_i) + word_matrix(i_x) - word_matrix(c_x))
        * c64(0.5, 0.0);
    UnitaryMatrix::new(m)
}

/// `WZ_k`: flips the last qubit iff the Z-parity of the first `k-1` is odd.
pub fn weight_parity_z(k: usize) -> Result<UnitaryMatrix> {
    parity_check(k, Pauli::Z)
}

/// `WX_k = ½(I + X^{⊗(k-1)}I + I^{⊗(k-1)}X - X^{⊗k})`.
pub fn weight_parity_x(k: usize) -> Result<UnitaryMatrix> {
    parity_check(k, Pauli::X)
}

#[derive(Deserialize)]
struct MatrixDoc {
    n: usize,
    matrix: MatrixEntries,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixEntries {
    Flat(Vec<[f64; 2]>),
    Rows(Vec<Vec<[f64; 2]>>),
}

fn qubits_of_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::BadDimension(dim));
    }
    let qubits = dim.trailing_zeros() as usize;
    if qubits > MAX_QUBITS {
        return Err(Error::UnsupportedQubits(qubits));
    }
    Ok(qubits)
}

fn parse_json_matrix(text: &str) -> Result<CMatrix> {
    let doc: MatrixDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let entries: Vec<[f64; 2]> = match doc.matrix {
        MatrixEntries::Flat(v) => v,
        MatrixEntries::Rows(rows) => {
            let width = rows.len();
            if rows.iter().any(|r| r.len() != width) {
                return Err(Error::Parse("matrix rows are ragged".into()));
            }
            rows.into_iter().flatten().collect()
        }
    };
    let dim = (entries.len() as f64).sqrt().round() as usize;
    if dim * dim != entries.len() {
        return Err(Error::Parse(format!("{} entries is not a square", entries.len())));
    }
    if doc.n > MAX_QUBITS || (1usize << doc.n) != dim {
        return Err(Error::BadDimension(dim));
    }
    Ok(CMatrix::from_row_iterator(
        dim,
        dim,
        entries.into_iter().map(|[re, im]| c64(re, im)),
    ))
}

fn parse_csv_matrix(text: &str) -> Result<CMatrix> {
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split(',')
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("`{}`: {e}", f.trim())))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let dim = rows.len();
    if rows.iter().any(|r| r.len() != 2 * dim) {
        return Err(Error::Parse(format!(
            "expected {dim} rows of {} interleaved re/im values",
            2 * dim
        )));
    }
    Ok(CMatrix::from_fn(dim, dim, |r, c| {
        c64(rows[r][2 * c], rows[r][2 * c + 1])
    }))
}

/// Parse a matrix document without validating unitarity.
pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    if text.trim_start().starts_with('{') {
        parse_json_matrix(text)
    } else {
        parse_csv_matrix(text)
    }
}

/// Read, validate and project a target unitary into SU(N).
pub fn load_unitary(path: impl AsRef<Path>) -> Result<UnitaryMatrix> {
    let m = parse_matrix(&std::fs::read_to_string(path)?)?;
    qubits_of_dim(m.nrows())?;
    Ok(su_project_target(&UnitaryMatrix::new(m)?))
}

/// Serialize a matrix in the JSON file format.
pub fn matrix_to_json(m: &CMatrix) -> String {
    let dim = m.nrows();
    let rows: Vec<Vec<[f64; 2]>> = (0..dim)
        .map(|r| (0..dim).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect();
    serde_json::json!({ "n": dim.trailing_zeros(), "matrix": rows }).to_string()
}

/// Named target gate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GateSpec {
    Toffoli,
    Fredkin,
    WeightZ(usize),
    WeightX(usize),
    File(PathBuf),
}

impl GateSpec {
    /// The gate as defined, before projection into SU(N).
    pub fn build(&self) -> Result<UnitaryMatrix> {
        match self {
            GateSpec::Toffoli => Ok(toffoli()),
            GateSpec::Fredkin => Ok(fredkin()),
            GateSpec::WeightZ(k) => weight_parity_z(*k),
            GateSpec::WeightX(k) => weight_parity_x(*k),
            GateSpec::File(path) => {
                let m = parse_matrix(&std::fs::read_to_string(path)?)?;
                qubits_of_dim(m.nrows())?;
                UnitaryMatrix::new(m)
            }
        }
    }

    /// The optimization target: [`build`](Self::build) projected into SU(N).
    pub fn target(&self) -> Result<UnitaryMatrix> {
        Ok(su_project_target(&self.build()?))
    }

    pub fn qubits(&self) -> Result<usize> {
        match self {
            GateSpec::Toffoli | GateSpec::Fredkin => Ok(3),
            GateSpec::WeightZ(k) | GateSpec::WeightX(k) => check_weight(*k).map(|_| *k),
            GateSpec::File(_) => qubits_of_dim(self.build()?.dim()),
        }
    }
}

impl fmt::Display for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateSpec::Toffoli => write!(f, "toffoli"),
            GateSpec::Fredkin => write!(f, "fredkin"),
            GateSpec::WeightZ(k) => write!(f, "wz:{k}"),
            GateSpec::WeightX(k) => write!(f, "wx:{k}"),
            GateSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for GateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let weight = |k: &str| {
            k.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad parity-check weight `{k}`")))
                .and_then(|k| check_weight(k).map(|_| k))
        };
        match s.split_once(':') {
            None if s == "toffoli" => Ok(GateSpec::Toffoli),
            None if s == "fredkin" => Ok(GateSpec::Fredkin),
            Some(("wz", k)) => Ok(GateSpec::WeightZ(weight(k)?)),
            Some(("wx", k)) => Ok(GateSpec::WeightX(weight(k)?)),
            Some(("file", p)) if !p.is_empty() => Ok(GateSpec::File(PathBuf::from(p))),
            _ => Err(Error::Parse(format!("unknown target `{s}`"))),
        }
    }
}
