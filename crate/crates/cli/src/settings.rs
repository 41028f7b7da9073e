// Copyright 2026 The geodesic-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Run settings from a TOML file and command-line flags. Flags override the
//! file, which overrides the built-in defaults.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

use geodesic_core::{
    AnsatzMode, BinSpec, FidelityKind, GateSpec, GdConfig, GeodesicConfig, Method, MethodConfig,
    RestrictionSpec, RunSpec, SgdConfig,
};

/// Names the environment variable holding the default output directory.
pub const OUT_DIR_ENV: &str = "GEOGATE_OUT_DIR";

#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// toffoli, fredkin, wz:K, wx:K or file:PATH
    #[arg(long)]
    pub target: Option<String>,
    /// two-local, all or file:PATH [default: two-local]
    #[arg(long)]
    pub restriction: Option<String>,
    /// geodesic, gd or sgd [default: geodesic]
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Convergence threshold on the infidelity [default: 0.001]
    #[arg(long)]
    pub eps: Option<f64>,
    /// Escape step length, geodesic only [default: 1]
    #[arg(long)]
    pub eta: Option<f64>,
    /// Step budget [default: 5000 for geodesic, 50000 for gd and sgd]
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// on, off or auto (on for at most 4 qubits), geodesic only [default: auto]
    #[arg(long)]
    pub ansatz: Option<String>,
    /// Initial parameters are uniform in (-s, s) [default: 1]
    #[arg(long)]
    pub init_scale: Option<f64>,
    /// real_part or phase_invariant
    #[arg(long)]
    pub fidelity: Option<String>,
    /// Line-search interval end, geodesic only [default: 10]
    #[arg(long)]
    pub delta_max: Option<f64>,
    /// Line-search tolerance, geodesic only [default: 1e-6]
    #[arg(long)]
    pub ls_tol: Option<f64>,
    /// Adam step size, gd only [default: 0.1]
    #[arg(long)]
    pub learning_rate: Option<f64>,
    /// Training states per step, sgd only [default: 200]
    #[arg(long)]
    pub d_train: Option<usize>,
    /// Validation states, sgd only [default: 100]
    #[arg(long)]
    pub d_test: Option<usize>,
    /// Learning-rate decay, sgd only [default: 0.005]
    #[arg(long)]
    pub decay: Option<f64>,
    /// Initial learning rate, sgd only [default: 1]
    #[arg(long)]
    pub initial_rate: Option<f64>,
    /// Output file for run records (JSON lines, appended)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct SettingsError(pub String);

impl std::fmt::Display for SettingsError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SettingsError {}

fn err<T>(msg: impl Into<String>) -> Result<T, SettingsError> {
    Err(SettingsError(msg.into()))
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T, SettingsError>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| SettingsError(e.to_string()))
}

macro_rules! overlay {
    ($base:ident, $over:ident; $($field:ident),*) => {
        Settings { $($field: $over.$field.or($base.$field)),* }
    };
}

impl Settings {
    pub fn from_toml_file(path: &Path) -> Result<Self, SettingsError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SettingsError(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| SettingsError(format!("{}: {e}", path.display())))
    }

    /// `over` wins wherever it is set.
    pub fn overlay(self, over: Settings) -> Settings {
        let base = self;
        overlay!(base, over; target, restriction, method, seed, eps, eta, max_steps, ansatz,
            init_scale, fidelity, delta_max, ls_tol, learning_rate, d_train, d_test, decay,
            initial_rate, out)
    }

    fn fidelity_kind(&self) -> Result<Option<FidelityKind>, SettingsError> {
        match self.fidelity.as_deref() {
            None => Ok(None),
            Some("real_part") => Ok(Some(FidelityKind::RealPart)),
            Some("phase_invariant") => Ok(Some(FidelityKind::PhaseInvariant)),
            Some(other) => err(format!("fidelity must be real_part or phase_invariant, not `{other}`")),
        }
    }

    fn reject_foreign(&self, method: Method) -> Result<(), SettingsError> {
        let geodesic = [
            ("eta", self.eta.is_some()),
            ("ansatz", self.ansatz.is_some() && self.ansatz.as_deref() != Some("off")),
            ("delta-max", self.delta_max.is_some()),
            ("ls-tol", self.ls_tol.is_some()),
        ];
        let gd = [("learning-rate", self.learning_rate.is_some())];
        let sgd = [
            ("d-train", self.d_train.is_some()),
            ("d-test", self.d_test.is_some()),
            ("decay", self.decay.is_some()),
            ("initial-rate", self.initial_rate.is_some()),
        ];
        let groups: [(Method, &[(&str, bool)]); 3] =
            [(Method::Geodesic, &geodesic), (Method::Gd, &gd), (Method::Sgd, &sgd)];
        for (owner, flags) in groups {
            if owner == method {
                continue;
            }
            if let Some((name, _)) = flags.iter().find(|f| f.1) {
                return err(format!("`{name}` applies only to the {owner} method, not {method}"));
            }
        }
        Ok(())
    }

    /// The fully resolved run; every default is filled in.
    pub fn resolve(&self) -> Result<RunSpec, SettingsError> {
        let target: GateSpec = match &self.target {
            Some(t) => parse(t)?,
            None => return err("a target is required (--target)"),
        };
        let restriction: RestrictionSpec = parse(self.restriction.as_deref().unwrap_or("two-local"))?;
        let method: Method = parse(self.method.as_deref().unwrap_or("geodesic"))?;
        self.reject_foreign(method)?;
        let fidelity = self.fidelity_kind()?;
        let config = match method {
            Method::Geodesic => {
                let d = GeodesicConfig::default();
                let ansatz: AnsatzMode = parse(self.ansatz.as_deref().unwrap_or("auto"))?;
                let qubits = target.qubits().map_err(|e| SettingsError(e.to_string()))?;
                MethodConfig::Geodesic(GeodesicConfig {
                    epsilon: self.eps.unwrap_or(d.epsilon),
                    eta: self.eta.unwrap_or(d.eta),
                    max_steps: self.max_steps.unwrap_or(d.max_steps),
                    delta_max: self.delta_max.unwrap_or(d.delta_max),
                    ls_tol: self.ls_tol.unwrap_or(d.ls_tol),
                    use_ansatz: ansatz.enabled(qubits),
                    seed: self.seed.unwrap_or(d.seed),
                    init_scale: self.init_scale.unwrap_or(d.init_scale),
                    fidelity: fidelity.unwrap_or(d.fidelity),
                })
            }
            Method::Gd => {
                let d = GdConfig::default();
                MethodConfig::Gd(GdConfig {
                    learning_rate: self.learning_rate.unwrap_or(d.learning_rate),
                    epsilon: self.eps.unwrap_or(d.epsilon),
                    max_steps: self.max_steps.unwrap_or(d.max_steps),
                    seed: self.seed.unwrap_or(d.seed),
                    init_scale: self.init_scale.unwrap_or(d.init_scale),
                    fidelity: fidelity.unwrap_or(d.fidelity),
                    ..d
                })
            }
            Method::Sgd => {
                let d = SgdConfig::default();
                MethodConfig::Sgd(SgdConfig {
                    d_train: self.d_train.unwrap_or(d.d_train),
                    d_test: self.d_test.unwrap_or(d.d_test),
                    decay: self.decay.unwrap_or(d.decay),
                    initial_rate: self.initial_rate.unwrap_or(d.initial_rate),
                    epsilon: self.eps.unwrap_or(d.epsilon),
                    max_steps: self.max_steps.unwrap_or(d.max_steps),
                    seed: self.seed.unwrap_or(d.seed),
                    init_scale: self.init_scale.unwrap_or(d.init_scale),
                    fidelity: fidelity.unwrap_or(d.fidelity),
                })
            }
        };
        Ok(RunSpec {
            target,
            restriction,
            config,
        })
    }

    /// `--out`, else `file_name` in the output directory from the
    /// environment, else in the working directory.
    pub fn out_path(&self, file_name: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| match std::env::var_os(OUT_DIR_ENV) {
            Some(dir) => PathBuf::from(dir).join(file_name),
            None => PathBuf::from(file_name),
        })
    }
}

/// `log:B` (B bins per decade) or `linear:W`.
pub fn parse_bins(s: &str) -> Result<BinSpec, SettingsError> {
    let spec = match s.split_once(':') {
        Some(("log", b)) => BinSpec::Log { per_decade: parse(b)? },
        Some(("linear", w)) => BinSpec::Linear { width: parse(w)? },
        _ => return err(format!("bins must be log:B or linear:W, not `{s}`")),
    };
    spec.validate().map_err(|e| SettingsError(e.to_string()))?;
    Ok(spec)
}
