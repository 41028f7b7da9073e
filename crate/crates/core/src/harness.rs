// Copyright 2026 The geodesic-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Seeded runs and multi-seed batches producing [`RunRecord`]s.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::mpsc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;

use crate::baselines::{run_gd, run_sgd};
use crate::error::{Error, Result};
use crate::gates::GateSpec;
use crate::geodesic::run_geodesic;
use crate::manifold::{fidelity_with, FidelityKind, SuManifold, UnitaryMatrix};
use crate::pauli::{LieVector, PauliWord, RestrictionMask};
use crate::record::{params_from_labels, BatchSummary, BinSpec, LabeledParam, RunRecord};
use crate::run::{MethodConfig, RunResult};

/// Largest qubit count for which `AnsatzMode::Auto` enables the ansatz.
pub const AUTO_ANSATZ_MAX_QUBITS: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RestrictionSpec {
    TwoLocal,
    All,
    /// One Pauli word per line.
    File(PathBuf),
}

impl RestrictionSpec {
    pub fn build(&self, qubits: usize) -> Result<RestrictionMask> {
        let mask = match self {
            RestrictionSpec::TwoLocal => RestrictionMask::two_local(qubits)?,
            RestrictionSpec::All => RestrictionMask::all(qubits)?,
            RestrictionSpec::File(p) => RestrictionMask::from_words_file(p)?,
        };
        if mask.qubits() != qubits {
            return Err(Error::QubitMismatch {
                expected: qubits,
                actual: mask.qubits(),
            });
        }
        Ok(mask)
    }
}

impl fmt::Display for RestrictionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RestrictionSpec::TwoLocal => f.write_str("two-local"),
            RestrictionSpec::All => f.write_str("all"),
            RestrictionSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for RestrictionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-local" => Ok(RestrictionSpec::TwoLocal),
            "all" => Ok(RestrictionSpec::All),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(RestrictionSpec::File(p.into())),
                _ => Err(Error::Parse(format!("unknown restriction `{s}`"))),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzMode {
    On,
    Off,
    #[default]
    Auto,
}

impl AnsatzMode {
    pub fn enabled(self, qubits: usize) -> bool {
        match self {
            AnsatzMode::On => true,
            AnsatzMode::Off => false,
            AnsatzMode::Auto => qubits <= AUTO_ANSATZ_MAX_QUBITS,
        }
    }
}

impl FromStr for AnsatzMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "on" => Ok(AnsatzMode::On),
            "off" => Ok(AnsatzMode::Off),
            "auto" => Ok(AnsatzMode::Auto),
            _ => Err(Error::Parse(format!("ansatz must be on, off or auto, not `{s}`"))),
        }
    }
}

/// A fully resolved run: what to synthesize, under which restriction, and
/// the complete optimizer configuration (including the seed).
#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub target: GateSpec,
    pub restriction: RestrictionSpec,
    pub config: MethodConfig,
}

/// A [`RunSpec`] with its target and mask built once.
#[derive(Clone, Debug)]
pub struct PreparedRun {
    spec: RunSpec,
    target: UnitaryMatrix,
    mask: RestrictionMask,
}

impl RunSpec {
    pub fn prepare(&self) -> Result<PreparedRun> {
        let target = self.target.target()?;
        let qubits = target.dim().trailing_zeros() as usize;
        let mask = self.restriction.build(qubits)?;
        match &self.config {
            MethodConfig::Geodesic(c) => c.validate()?,
            MethodConfig::Gd(c) => c.validate()?,
            MethodConfig::Sgd(c) => c.validate()?,
        }
        Ok(PreparedRun {
            spec: self.clone(),
            target,
            mask,
        })
    }
}

impl PreparedRun {
    pub fn target(&self) -> &UnitaryMatrix {
        &self.target
    }

    pub fn mask(&self) -> &RestrictionMask {
        &self.mask
    }

    /// Optimizer output for `seed`, bypassing the record format.
    pub fn run_result(&self, seed: u64) -> Result<RunResult> {
        let mut config = self.spec.config.clone();
        config.set_seed(seed);
        match &config {
            MethodConfig::Geodesic(c) => run_geodesic(&self.target, &self.mask, c),
            MethodConfig::Gd(c) => run_gd(&self.target, &self.mask, c),
            MethodConfig::Sgd(c) => run_sgd(&self.target, &self.mask, c),
        }
    }

    /// Run with `seed`; an optimizer error becomes a failed record.
    pub fn run(&self, seed: u64) -> RunRecord {
        let target = self.spec.target.to_string();
        let restriction = self.spec.restriction.to_string();
        let start = Instant::now();
        match self.run_result(seed) {
            Ok(result) => RunRecord::from_result(
                &target,
                &restriction,
                &self.mask,
                &result,
                start.elapsed().as_secs_f64(),
            ),
            Err(e) => {
                let mut config = self.spec.config.clone();
                config.set_seed(seed);
                RunRecord::failed(&target, &restriction, &config, &e)
            }
        }
    }

    /// Seeds `0..seeds` on up to `parallel` threads. Each record is written
    /// to `sink` as one line, in completion order, by a single writer.
    pub fn run_batch<W: Write + Send>(
        &self,
        seeds: u64,
        parallel: usize,
        bins: &BinSpec,
        sink: &mut W,
    ) -> Result<(BatchSummary, Vec<RunRecord>)> {
        if seeds == 0 || parallel == 0 {
            return Err(Error::InvalidConfig("seeds and parallel must be at least 1".into()));
        }
        bins.validate()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallel)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let (tx, rx) = mpsc::channel::<RunRecord>();
        let records = std::thread::scope(|scope| {
            let writer = scope.spawn(move || -> std::io::Result<Vec<RunRecord>> {
                let mut out = Vec::new();
                for rec in rx {
                    writeln!(sink, "{}", rec.to_json_line())?;
                    sink.flush()?;
                    out.push(rec);
                }
                Ok(out)
            });
            pool.install(|| {
                (0..seeds).into_par_iter().for_each_with(tx, |tx, seed| {
                    // A closed channel means the writer failed; its error is
                    // reported below.
                    let _ = tx.send(self.run(seed));
                });
            });
            writer.join().expect("writer thread panicked")
        })?;
        let mut records = records;
        records.sort_by_key(|r| r.seed);
        let summary = BatchSummary::from_records(&records, bins)?;
        Ok((summary, records))
    }
}

/// Parameters read for verification: from a run record or a bare vector.
#[derive(Clone, Debug)]
pub struct VerifyInput {
    pub labels: Vec<LabeledParam>,
    /// Convention recorded with the run, if the input was a record.
    pub fidelity: Option<FidelityKind>,
    /// Final infidelity recorded with the run, if any.
    pub recorded_infidelity: Option<f64>,
}

/// Parse verification parameters.
///
/// Accepted forms: a run record (the last nonblank line is used when the
/// file holds several), a JSON object mapping Pauli words to coefficients,
/// or a JSON list of `{"word": ..., "value": ...}` entries.
pub fn parse_verify_input(text: &str) -> Result<VerifyInput> {
    let line = text
        .lines()
        .rev()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| Error::Parse("empty parameter file".into()))?;
    let whole: serde_json::Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(_) => serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))?,
    };
    if whole.get("schema_version").is_some() {
        let rec = RunRecord::from_json(&whole.to_string())?;
        return Ok(VerifyInput {
            labels: rec.params,
            fidelity: Some(rec.config.fidelity()),
            recorded_infidelity: Some(rec.final_infidelity),
        });
    }
    let labels = match whole {
        serde_json::Value::Object(map) => map
            .into_iter()
            .map(|(k, v)| {
                let word: PauliWord = k.parse()?;
                let value = v
                    .as_f64()
                    .ok_or_else(|| Error::Parse(format!("coefficient of {k} is not a number")))?;
                Ok(LabeledParam { word, value })
            })
            .collect::<Result<Vec<_>>>()?,
        list @ serde_json::Value::Array(_) => {
            serde_json::from_value(list).map_err(|e| Error::Parse(e.to_string()))?
        }
        _ => return Err(Error::Parse("expected a record, object or list".into())),
    };
    Ok(VerifyInput {
        labels,
        fidelity: None,
        recorded_infidelity: None,
    })
}

pub fn read_verify_input(path: impl AsRef<Path>) -> Result<VerifyInput> {
    parse_verify_input(&std::fs::read_to_string(path)?)
}

/// Infidelity of `U(φ)` against the projected target, recomputed from the
/// labeled coefficients alone.
pub fn verify_params(labels: &[LabeledParam], target: &UnitaryMatrix, kind: FidelityKind) -> Result<f64> {
    let qubits = target.dim().trailing_zeros() as usize;
    let params: LieVector = params_from_labels(qubits, labels)?;
    let u = SuManifold::new(qubits)?.unitary_from_params(&params)?;
    Ok(1.0 - fidelity_with(&u, target, kind)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::GeodesicConfig;
    use crate::record::SCHEMA_VERSION;

    fn spec() -> RunSpec {
        RunSpec {
            target: GateSpec::WeightZ(2),
            restriction: RestrictionSpec::TwoLocal,
            config: MethodConfig::Geodesic(GeodesicConfig { use_ansatz: true, ..Default::default() }),
        }
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["two-local", "all", "file:words.txt"] {
            assert_eq!(s.parse::<RestrictionSpec>().unwrap().to_string(), s);
        }
        assert!("three-local".parse::<RestrictionSpec>().is_err());
        assert!("file:".parse::<RestrictionSpec>().is_err());
        assert!(AnsatzMode::Auto.enabled(4));
        assert!(!AnsatzMode::Auto.enabled(5));
    }

    #[test]
    fn single_run_record() {
        let rec = spec().prepare().unwrap().run(4);
        assert_eq!(rec.schema_version, SCHEMA_VERSION);
        assert_eq!(rec.seed, 4);
        assert_eq!(rec.config.seed(), 4);
        assert!(rec.converged);
        assert_eq!(rec.infidelity_trace.len(), rec.steps + 1);
        assert_eq!(*rec.infidelity_trace.last().unwrap(), rec.final_infidelity);
    }

    #[test]
    fn verify_replays_record() {
        let prepared = spec().prepare().unwrap();
        let rec = prepared.run(1);
        let input = parse_verify_input(&rec.to_json_line()).unwrap();
        let inf = verify_params(&input.labels, prepared.target(), input.fidelity.unwrap()).unwrap();
        assert!((inf - rec.final_infidelity).abs() < 1e-9);
    }

    #[test]
    fn verify_bare_vectors() {
        let target = GateSpec::Toffoli.target().unwrap();
        let zero = parse_verify_input("{\"XII\": 0.0}").unwrap();
        let inf = verify_params(&zero.labels, &target, FidelityKind::RealPart).unwrap();
        // Tr(Toffoli) = 6 and the projection phase is e^{-iπ/8}
        let expect = 1.0 - 6.0 * (std::f64::consts::PI / 8.0).cos() / 8.0;
        assert!((inf - expect).abs() < 1e-12);
        let listed = parse_verify_input("[{\"word\": \"ZZ\", \"value\": 0.5}]").unwrap();
        assert!(matches!(
            verify_params(&listed.labels, &target, FidelityKind::RealPart),
            Err(Error::QubitMismatch { .. })
        ));
        assert!(parse_verify_input("{\"XQ\": 1}").is_err());
    }

    #[test]
    fn batch_writes_every_record() {
        let prepared = spec().prepare().unwrap();
        let mut sink = Vec::new();
        let (summary, records) = prepared.run_batch(6, 3, &BinSpec::default(), &mut sink).unwrap();
        let lines: Vec<&str> = std::str::from_utf8(&sink).unwrap().lines().collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(summary.seeds, 6);
        assert_eq!(summary.histogram.total(), 6);
        let seeds: Vec<u64> = records.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, (0..6).collect::<Vec<_>>());
        for line in lines {
            let r = RunRecord::from_json(line).unwrap();
            assert!(records[r.seed as usize].same_outcome(&r));
        }
    }

    #[test]
    fn batch_is_deterministic() {
        let prepared = spec().prepare().unwrap();
        let (a, _) = prepared.run_batch(5, 4, &BinSpec::default(), &mut std::io::sink()).unwrap();
        let (b, _) = prepared.run_batch(5, 1, &BinSpec::default(), &mut std::io::sink()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn failed_runs_do_not_abort_batch() {
        let mut s = spec();
        // Valid for preparation, but a zero-step budget is rejected per run.
        s.config = MethodConfig::Geodesic(GeodesicConfig { max_steps: 0, ..Default::default() });
        let prepared = PreparedRun {
            target: s.target.target().unwrap(),
            mask: RestrictionMask::two_local(2).unwrap(),
            spec: s,
        };
        let (summary, records) = prepared.run_batch(3, 2, &BinSpec::default(), &mut std::io::sink()).unwrap();
        assert_eq!(summary.failed, 3);
        assert_eq!(summary.histogram.total(), 3);
        assert!(records.iter().all(|r| r.error.is_some() && !r.converged));
    }
}
