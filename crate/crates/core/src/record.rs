// Copyright 2026 The geodesic-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Persistent run records and batch summaries.
//!
//! Records are written one JSON object per line. Every record and summary
//! carries `schema_version`; readers reject any version other than
//! [`SCHEMA_VERSION`]. Floats are printed in shortest round-trip form, so a
//! record parses back to bit-identical values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{LieVector, PauliWord, RestrictionMask};
use crate::run::{MethodConfig, RunResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Geodesic,
    Gd,
    Sgd,
}

impl Method {
    pub fn of(config: &MethodConfig) -> Self {
        match config {
            MethodConfig::Geodesic(_) => Method::Geodesic,
            MethodConfig::Gd(_) => Method::Gd,
            MethodConfig::Sgd(_) => Method::Sgd,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Geodesic => "geodesic",
            Method::Gd => "gd",
            Method::Sgd => "sgd",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geodesic" => Ok(Method::Geodesic),
            "gd" => Ok(Method::Gd),
            "sgd" => Ok(Method::Sgd),
            _ => Err(Error::Parse(format!("unknown method `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledParam {
    pub word: PauliWord,
    pub value: f64,
}

/// Coefficients on the restriction set, labeled by Pauli word.
pub fn label_params(params: &LieVector, mask: &RestrictionMask) -> Vec<LabeledParam> {
    mask.words()
        .into_iter()
        .map(|word| LabeledParam {
            value: params.get(word.index()),
            word,
        })
        .collect()
}

/// Inverse of [`label_params`]; every word must act on `qubits` qubits.
pub fn params_from_labels(qubits: usize, labels: &[LabeledParam]) -> Result<LieVector> {
    let mut v = LieVector::zeros(qubits);
    for p in labels {
        if p.word.qubits() != qubits {
            return Err(Error::QubitMismatch {
                expected: qubits,
                actual: p.word.qubits(),
            });
        }
        v.as_mut_slice()[p.word.index() - 1] = p.value;
    }
    Ok(v)
}

/// One optimization run as persisted.
///
/// `error` is set when the run could not be carried out; such records have
/// `converged = false`, zero steps and an infidelity of 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub method: Method,
    pub target: String,
    pub restriction: String,
    pub config: MethodConfig,
    pub seed: u64,
    pub converged: bool,
    pub steps: usize,
    pub initial_infidelity: f64,
    pub final_infidelity: f64,
    /// Quantity compared against `epsilon`; differs from `final_infidelity`
    /// only for SGD, where it is the validation-set state infidelity.
    pub stop_statistic: f64,
    pub wall_time_s: f64,
    pub infidelity_trace: Vec<f64>,
    pub params: Vec<LabeledParam>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunRecord {
    pub fn from_result(
        target: &str,
        restriction: &str,
        mask: &RestrictionMask,
        result: &RunResult,
        wall_time_s: f64,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            method: Method::of(&result.config),
            target: target.to_string(),
            restriction: restriction.to_string(),
            config: result.config.clone(),
            seed: result.seed,
            converged: result.converged,
            steps: result.steps,
            initial_infidelity: result.initial_infidelity,
            final_infidelity: result.final_infidelity,
            stop_statistic: result.stop_statistic,
            wall_time_s,
            infidelity_trace: result.infidelity_trace(),
            params: label_params(&result.final_params, mask),
            error: None,
        }
    }

    pub fn failed(target: &str, restriction: &str, config: &MethodConfig, err: &Error) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            method: Method::of(config),
            target: target.to_string(),
            restriction: restriction.to_string(),
            config: config.clone(),
            seed: config.seed(),
            converged: false,
            steps: 0,
            initial_infidelity: 1.0,
            final_infidelity: 1.0,
            stop_statistic: 1.0,
            wall_time_s: 0.0,
            infidelity_trace: Vec::new(),
            params: Vec::new(),
            error: Some(err.to_string()),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records contain only finite floats")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        from_versioned_json(text)
    }

    /// Equality on everything except wall-clock time.
    pub fn same_outcome(&self, other: &RunRecord) -> bool {
        let mut a = self.clone();
        a.wall_time_s = other.wall_time_s;
        &a == other
    }
}

fn from_versioned_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let version = value
        .get("schema_version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::Parse("missing schema_version".into()))?;
    if version != SCHEMA_VERSION as u64 {
        return Err(Error::SchemaVersion(version.min(u32::MAX as u64) as u32));
    }
    serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))
}

/// Step-count bin edges.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BinSpec {
    /// Edges `0, 10^(1/b), 10^(2/b), ...` for `b` bins per decade.
    Log { per_decade: usize },
    /// Edges `0, w, 2w, ...`.
    Linear { width: f64 },
}

impl Default for BinSpec {
    fn default() -> Self {
        BinSpec::Log { per_decade: 4 }
    }
}

impl BinSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            BinSpec::Log { per_decade } if per_decade >= 1 => Ok(()),
            BinSpec::Linear { width } if width > 0.0 && width.is_finite() => Ok(()),
            _ => Err(Error::InvalidConfig("histogram bins must have positive width".into())),
        }
    }

    /// Edges covering `0..=max`; the last edge is strictly above `max`.
    pub fn edges(&self, max: usize) -> Vec<f64> {
        let mut edges = vec![0.0];
        let mut k = 1;
        loop {
            let e = match *self {
                BinSpec::Log { per_decade } => 10f64.powf(k as f64 / per_decade as f64),
                BinSpec::Linear { width } => width * k as f64,
            };
            edges.push(e);
            if e > max as f64 {
                return edges;
            }
            k += 1;
        }
    }
}

/// Step counts of converged runs in half-open bins `[edges[i], edges[i+1])`,
/// plus the number of runs that did not converge. The two together account
/// for every seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub unconverged: usize,
}

impl Histogram {
    pub fn new(outcomes: &[(bool, usize)], bins: &BinSpec) -> Self {
        let max = outcomes.iter().filter(|o| o.0).map(|o| o.1).max().unwrap_or(0);
        let edges = bins.edges(max);
        let mut counts = vec![0; edges.len() - 1];
        let mut unconverged = 0;
        for &(converged, steps) in outcomes {
            if !converged {
                unconverged += 1;
                continue;
            }
            let s = steps as f64;
            let bin = edges.windows(2).position(|w| s >= w[0] && s < w[1]).expect("edges cover max");
            counts[bin] += 1;
        }
        Self {
            edges,
            counts,
            unconverged,
        }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum::<usize>() + self.unconverged
    }
}

/// Lower median of a nonempty sample.
fn median(sorted: &[usize]) -> Option<usize> {
    (!sorted.is_empty()).then(|| sorted[(sorted.len() - 1) / 2])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub schema_version: u32,
    pub method: Method,
    pub target: String,
    pub restriction: String,
    pub seeds: usize,
    pub converged: usize,
    /// Runs that raised an error instead of finishing.
    pub failed: usize,
    pub success_rate: f64,
    /// Step-count quantiles over converged runs.
    pub steps_min: Option<usize>,
    pub steps_median: Option<usize>,
    pub steps_max: Option<usize>,
    /// Median over every run, counting unconverged runs at their final step.
    pub steps_median_all: Option<usize>,
    pub histogram: Histogram,
}

impl BatchSummary {
    /// Summary of records in any order; statistics depend only on the set.
    pub fn from_records(records: &[RunRecord], bins: &BinSpec) -> Result<Self> {
        let first = records
            .first()
            .ok_or_else(|| Error::InvalidConfig("a batch needs at least one run".into()))?;
        bins.validate()?;
        let mut sorted: Vec<&RunRecord> = records.iter().collect();
        sorted.sort_by_key(|r| r.seed);
        let outcomes: Vec<(bool, usize)> = sorted.iter().map(|r| (r.converged, r.steps)).collect();
        let mut conv_steps: Vec<usize> = outcomes.iter().filter(|o| o.0).map(|o| o.1).collect();
        conv_steps.sort_unstable();
        let mut all_steps: Vec<usize> = outcomes.iter().map(|o| o.1).collect();
        all_steps.sort_unstable();
        let converged = conv_steps.len();
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            method: first.method,
            target: first.target.clone(),
            restriction: first.restriction.clone(),
            seeds: records.len(),
            converged,
            failed: records.iter().filter(|r| r.error.is_some()).count(),
            success_rate: converged as f64 / records.len() as f64,
            steps_min: conv_steps.first().copied(),
            steps_median: median(&conv_steps),
            steps_max: conv_steps.last().copied(),
            steps_median_all: median(&all_steps),
            histogram: Histogram::new(&outcomes, bins),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summaries contain only finite floats")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        from_versioned_json(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::GeodesicConfig;
    use proptest::prelude::*;

    fn record(seed: u64, converged: bool, steps: usize) -> RunRecord {
        let mask = RestrictionMask::two_local(2).unwrap();
        let params = mask.apply(&LieVector::from_vec(2, (0..15).map(|i| i as f64 / 7.0).collect()).unwrap()).unwrap();
        let result = RunResult {
            final_params: params,
            initial_infidelity: 0.5,
            final_infidelity: if converged { 1e-4 } else { 0.1 },
            stop_statistic: if converged { 1e-4 } else { 0.1 },
            steps,
            converged,
            trajectory: Vec::new(),
            config: MethodConfig::Geodesic(GeodesicConfig { seed, ..Default::default() }),
            seed,
        };
        RunRecord::from_result("wz:2", "two-local", &mask, &result, 0.25)
    }

    #[test]
    fn record_round_trip() {
        let r = record(3, true, 12);
        let back = RunRecord::from_json(&r.to_json_line()).unwrap();
        assert_eq!(back, r);
        assert!(!r.to_json_line().contains('\n'));
    }

    #[test]
    fn labels_lie_in_restriction() {
        let r = record(0, true, 1);
        let mask = RestrictionMask::two_local(2).unwrap();
        assert_eq!(r.params.len(), mask.count());
        assert!(r.params.iter().all(|p| mask.contains(&p.word)));
        let v = params_from_labels(2, &r.params).unwrap();
        assert!(mask.respects(&v));
    }

    #[test]
    fn unknown_schema_version_rejected() {
        let text = record(0, true, 1).to_json_line().replacen("\"schema_version\":1", "\"schema_version\":7", 1);
        assert!(matches!(RunRecord::from_json(&text), Err(Error::SchemaVersion(7))));
        let text = record(0, true, 1).to_json_line().replacen("\"schema_version\":1,", "", 1);
        assert!(matches!(RunRecord::from_json(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn log_edges() {
        let e = BinSpec::Log { per_decade: 1 }.edges(150);
        assert_eq!(e, vec![0.0, 10.0, 100.0, 1000.0]);
        let e = BinSpec::Linear { width: 5.0 }.edges(10);
        assert_eq!(e, vec![0.0, 5.0, 10.0, 15.0]);
    }

    #[test]
    fn summary_statistics() {
        let recs = vec![record(2, true, 30), record(0, true, 5), record(1, false, 5000), record(3, true, 9)];
        let s = BatchSummary::from_records(&recs, &BinSpec::Log { per_decade: 1 }).unwrap();
        assert_eq!(s.seeds, 4);
        assert_eq!(s.converged, 3);
        assert_eq!(s.success_rate, 0.75);
        assert_eq!((s.steps_min, s.steps_median, s.steps_max), (Some(5), Some(9), Some(30)));
        assert_eq!(s.steps_median_all, Some(9));
        assert_eq!(s.histogram.counts, vec![2, 1]);
        assert_eq!(s.histogram.unconverged, 1);
        let back = BatchSummary::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }

    proptest! {
        #[test]
        fn histogram_accounts_for_every_seed(
            outcomes in prop::collection::vec((any::<bool>(), 0usize..100_000), 1..60),
            per_decade in 1usize..8,
        ) {
            let recs: Vec<RunRecord> = outcomes
                .iter()
                .enumerate()
                .map(|(i, &(c, s))| record(i as u64, c, s))
                .collect();
            let s = BatchSummary::from_records(&recs, &BinSpec::Log { per_decade }).unwrap();
            prop_assert_eq!(s.histogram.total(), recs.len());
            prop_assert!((0.0..=1.0).contains(&s.success_rate));
        }
    }
}
