// Copyright 2026 The geodesic-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Pauli-word basis of su(N).
//!
//! Words are indexed by their base-4 value with `I=0, X=1, Y=2, Z=3` and the
//! leftmost symbol most significant, so index `j` (1-based) runs over
//! `1..=4^n-1` and the identity word is excluded. Coefficient vectors store
//! basis index `j` at position `j - 1`.
//!
//! Qubit ordering: the leftmost tensor factor is the most significant bit of
//! the computational basis index.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix, C64};

pub const MAX_QUBITS: usize = 6;

pub fn dimension(qubits: usize) -> usize {
    1 << qubits
}

/// Number of traceless Pauli words on `qubits` qubits, `4^n - 1`.
pub fn algebra_dim(qubits: usize) -> usize {
    (1usize << (2 * qubits)) - 1
}

fn check_qubits(qubits: usize) -> Result<()> {
    if qubits == 0 || qubits > MAX_QUBITS {
        return Err(Error::UnsupportedQubits(qubits));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl Pauli {
    fn from_digit(d: u8) -> Pauli {
        match d & 3 {
            0 => Pauli::I,
            1 => Pauli::X,
            2 => Pauli::Y,
            _ => Pauli::Z,
        }
    }

    pub fn symbol(self) -> char {
        ['I', 'X', 'Y', 'Z'][self as usize]
    }

    pub fn matrix(self) -> CMatrix {
        let (o, z, i) = (c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 1.0));
        match self {
            Pauli::I => CMatrix::from_row_slice(2, 2, &[o, z, z, o]),
            Pauli::X => CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            Pauli::Y => CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
            Pauli::Z => CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        }
    }
}

/// A tensor product of single-qubit Paulis, excluding the all-identity word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliWord {
    letters: Vec<Pauli>,
}

impl PauliWord {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        check_qubits(letters.len())?;
        if letters.iter().all(|&p| p == Pauli::I) {
            return Err(Error::IdentityWord);
        }
        Ok(Self { letters })
    }

    pub fn from_index(qubits: usize, index: usize) -> Result<Self> {
        check_qubits(qubits)?;
        if index == 0 || index > algebra_dim(qubits) {
            return Err(Error::IndexOutOfRange { index, qubits });
        }
        let letters = (0..qubits)
            .map(|q| Pauli::from_digit((index >> (2 * (qubits - 1 - q))) as u8))
            .collect();
        Ok(Self { letters })
    }

    pub fn qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    /// 1-based position in the lexicographic basis.
    pub fn index(&self) -> usize {
        self.letters.iter().fold(0, |acc, &p| acc * 4 + p as usize)
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// Dense matrix by repeated Kronecker products.
    pub fn matrix(&self) -> CMatrix {
        let mut acc = CMatrix::identity(1, 1);
        for p in &self.letters {
            acc = acc.kronecker(&p.matrix());
        }
        acc
    }

    pub(crate) fn action(&self) -> WordAction {
        WordAction::new(&self.letters)
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(Error::InvalidWord(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::InvalidWord(s.to_string()));
        }
        PauliWord::new(letters)
    }
}

impl Serialize for PauliWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A Pauli word acts as a signed permutation: row `r` has its single nonzero
/// entry in column `r ^ flip` with value `i^{#Y} (-1)^{popcount(col & phase)}`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct WordAction {
    pub flip: usize,
    pub phase_mask: usize,
    pub y_count: u32,
}

impl WordAction {
    fn new(letters: &[Pauli]) -> Self {
        let n = letters.len();
        let (mut flip, mut phase_mask, mut y_count) = (0, 0, 0);
        for (q, &p) in letters.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => flip |= bit,
                Pauli::Y => {
                    flip |= bit;
                    phase_mask |= bit;
                    y_count += 1;
                }
                Pauli::Z => phase_mask |= bit,
            }
        }
        Self {
            flip,
            phase_mask,
            y_count,
        }
    }

    /// Column and value of the nonzero entry in `row`.
    #[inline]
    pub fn entry(&self, row: usize) -> (usize, C64) {
        let col = row ^ self.flip;
        let base = match self.y_count % 4 {
            0 => c64(1.0, 0.0),
            1 => c64(0.0, 1.0),
            2 => c64(-1.0, 0.0),
            _ => c64(0.0, -1.0),
        };
        let value = if (col & self.phase_mask).count_ones() % 2 == 1 {
            -base
        } else {
            base
        };
        (col, value)
    }

    /// `Tr(G A)`.
    pub fn trace_with(&self, a: &CMatrix) -> C64 {
        (0..a.nrows())
            .map(|r| {
                let (c, v) = self.entry(r);
                v * a[(c, r)]
            })
            .sum()
    }

    /// `G A` without forming `G`.
    pub fn left_mul(&self, a: &CMatrix) -> CMatrix {
        let dim = a.nrows();
        let mut out = CMatrix::zeros(dim, a.ncols());
        for r in 0..dim {
            let (c, v) = self.entry(r);
            for k in 0..a.ncols() {
                out[(r, k)] = v * a[(c, k)];
            }
        }
        out
    }

    pub fn add_scaled_to(&self, scale: f64, target: &mut CMatrix) {
        for r in 0..target.nrows() {
            let (c, v) = self.entry(r);
            target[(r, c)] += v * scale;
        }
    }
}

/// Precomputed actions of all basis words for one qubit count.
#[derive(Clone, Debug)]
pub struct PauliBasis {
    qubits: usize,
    actions: Vec<WordAction>,
}

impl PauliBasis {
    pub fn new(qubits: usize) -> Result<Self> {
        check_qubits(qubits)?;
        let actions = (1..=algebra_dim(qubits))
            .map(|j| PauliWord::from_index(qubits, j).map(|w| w.action()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { qubits, actions })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        dimension(self.qubits)
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    /// Action of the word at 0-based position `pos`.
    pub(crate) fn action(&self, pos: usize) -> &WordAction {
        &self.actions[pos]
    }

    pub fn word(&self, pos: usize) -> PauliWord {
        PauliWord::from_index(self.qubits, pos + 1).expect("position within basis")
    }

    /// `H(v) = sum_j v_j G_j`.
    pub fn hermitian_from_vector(&self, v: &LieVector) -> Result<CMatrix> {
        self.check_len(v)?;
        let mut h = CMatrix::zeros(self.dim(), self.dim());
        for (action, &x) in self.actions.iter().zip(v.as_slice()) {
            if x != 0.0 {
                action.add_scaled_to(x, &mut h);
            }
        }
        Ok(h)
    }

    /// Inverse of [`hermitian_from_vector`](Self::hermitian_from_vector);
    /// component `j` is `Tr(G_j A)/N`.
    pub fn vector_from_hermitian(&self, a: &CMatrix) -> Result<LieVector> {
        if a.nrows() != self.dim() || a.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(a.nrows(), self.dim()));
        }
        let scale = a.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        let herm_dev = (a - a.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if herm_dev > 1e-10 * scale {
            return Err(Error::NotHermitian(herm_dev));
        }
        let tr = a.trace().norm();
        if tr > 1e-10 * scale {
            return Err(Error::NotTraceless(tr));
        }
        Ok(self.coefficients(a))
    }

    /// Coefficient extraction without validation; the anti-Hermitian part
    /// and the trace are silently discarded.
    pub fn coefficients(&self, a: &CMatrix) -> LieVector {
        let inv_dim = 1.0 / self.dim() as f64;
        let coeffs = self
            .actions
            .iter()
            .map(|action| action.trace_with(a).re * inv_dim)
            .collect();
        LieVector::from_vec(self.qubits, coeffs).expect("basis-sized vector")
    }

    /// Coefficients restricted to the allowed indices of `mask`, in mask order.
    pub fn masked_coefficients(&self, a: &CMatrix, mask: &RestrictionMask) -> Vec<f64> {
        let inv_dim = 1.0 / self.dim() as f64;
        mask.allowed_indices()
            .iter()
            .map(|&pos| self.actions[pos].trace_with(a).re * inv_dim)
            .collect()
    }

    fn check_len(&self, v: &LieVector) -> Result<()> {
        if v.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: v.len(),
            });
        }
        Ok(())
    }
}

/// Real coordinates over the Pauli basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieVector {
    qubits: usize,
    coeffs: Vec<f64>,
}

impl LieVector {
    pub fn zeros(qubits: usize) -> Self {
        Self {
            qubits,
            coeffs: vec![0.0; algebra_dim(qubits)],
        }
    }

    pub fn from_vec(qubits: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_qubits(qubits)?;
        if coeffs.len() != algebra_dim(qubits) {
            return Err(Error::LengthMismatch {
                expected: algebra_dim(qubits),
                actual: coeffs.len(),
            });
        }
        if coeffs.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("Lie vector coefficient"));
        }
        Ok(Self { qubits, coeffs })
    }

    /// Unit vector along basis index `j` (1-based).
    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        let mut v = Self::zeros(qubits);
        if index == 0 || index > v.len() {
            return Err(Error::IndexOutOfRange { index, qubits });
        }
        v.coeffs[index - 1] = 1.0;
        Ok(v)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coeffs
    }

    /// Coefficient of basis index `j` (1-based).
    pub fn get(&self, index: usize) -> f64 {
        self.coeffs[index - 1]
    }

    pub fn dot(&self, other: &LieVector) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, s: f64) -> LieVector {
        LieVector {
            qubits: self.qubits,
            coeffs: self.coeffs.iter().map(|x| x * s).collect(),
        }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: f64, other: &LieVector) -> LieVector {
        LieVector {
            qubits: self.qubits,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + s * b)
                .collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &LieVector) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Subset of basis words allowed as Hamiltonian terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionMask {
    qubits: usize,
    allowed: Vec<bool>,
    indices: Vec<usize>,
}

impl RestrictionMask {
    pub fn new(qubits: usize, allowed: Vec<bool>) -> Result<Self> {
        check_qubits(qubits)?;
        if allowed.len() != algebra_dim(qubits) {
            return Err(Error::LengthMismatch {
                expected: algebra_dim(qubits),
                actual: allowed.len(),
            });
        }
        let indices: Vec<usize> = (0..allowed.len()).filter(|&i| allowed[i]).collect();
        if indices.is_empty() {
            return Err(Error::EmptyMask);
        }
        Ok(Self {
            qubits,
            allowed,
            indices,
        })
    }

    pub fn all(qubits: usize) -> Result<Self> {
        check_qubits(qubits)?;
        Self::new(qubits, vec![true; algebra_dim(qubits)])
    }

    /// Words with one or two non-identity factors; `3n + 9n(n-1)/2` of them.
    pub fn two_local(qubits: usize) -> Result<Self> {
        Self::by_weight(qubits, 2)
    }

    pub fn by_weight(qubits: usize, max_weight: usize) -> Result<Self> {
        check_qubits(qubits)?;
        let allowed = (1..=algebra_dim(qubits))
            .map(|j| {
                PauliWord::from_index(qubits, j)
                    .map(|w| w.weight() <= max_weight)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(qubits, allowed)
    }

    pub fn from_words(qubits: usize, words: &[PauliWord]) -> Result<Self> {
        check_qubits(qubits)?;
        let mut allowed = vec![false; algebra_dim(qubits)];
        for w in words {
            if w.qubits() != qubits {
                return Err(Error::QubitMismatch {
                    expected: qubits,
                    actual: w.qubits(),
                });
            }
            allowed[w.index() - 1] = true;
        }
        Self::new(qubits, allowed)
    }

    /// One word per line; blank lines and `#` comments are ignored.
    pub fn parse_words(text: &str) -> Result<Self> {
        let words = text
            .lines()
            .map(|line| line.split('#').next().unwrap_or("").trim())
            .filter(|line| !line.is_empty())
            .map(str::parse::<PauliWord>)
            .collect::<Result<Vec<_>>>()?;
        let qubits = words.first().map(PauliWord::qubits).ok_or(Error::EmptyMask)?;
        Self::from_words(qubits, &words)
    }

    pub fn from_words_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_words(&std::fs::read_to_string(path)?)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// Length of the vectors this mask acts on.
    pub fn len(&self) -> usize {
        self.allowed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.allowed.is_empty()
    }

    pub fn allowed(&self) -> &[bool] {
        &self.allowed
    }

    /// 0-based positions of allowed words, ascending.
    pub fn allowed_indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn count(&self) -> usize {
        self.indices.len()
    }

    pub fn words(&self) -> Vec<PauliWord> {
        self.indices
            .iter()
            .map(|&pos| PauliWord::from_index(self.qubits, pos + 1).expect("in range"))
            .collect()
    }

    pub fn contains(&self, word: &PauliWord) -> bool {
        word.qubits() == self.qubits && self.allowed[word.index() - 1]
    }

    /// `R_H v`: zero every coefficient outside the mask.
    pub fn apply(&self, v: &LieVector) -> Result<LieVector> {
        if v.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: v.len(),
            });
        }
        let mut out = v.clone();
        for (x, &keep) in out.coeffs.iter_mut().zip(&self.allowed) {
            if !keep {
                *x = 0.0;
            }
        }
        Ok(out)
    }

    pub fn respects(&self, v: &LieVector) -> bool {
        v.len() == self.len()
            && v
                .coeffs
                .iter()
                .zip(&self.allowed)
                .all(|(&x, &keep)| keep || x == 0.0)
    }

    /// Gather the allowed coordinates of `v`.
    pub fn compress(&self, v: &LieVector) -> Vec<f64> {
        self.indices.iter().map(|&i| v.coeffs[i]).collect()
    }

    /// Scatter masked coordinates back into a full vector.
    pub fn expand(&self, values: &[f64]) -> LieVector {
        let mut out = LieVector::zeros(self.qubits);
        for (&i, &x) in self.indices.iter().zip(values) {
            out.coeffs[i] = x;
        }
        out
    }
}
