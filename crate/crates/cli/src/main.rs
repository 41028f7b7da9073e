// Copyright 2026 The geodesic-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! `geogate`: synthesize restricted Hamiltonians for multi-qubit gates.
//!
//! Exit codes: 0 on success (a converged run, a completed batch, a verified
//! parameter set), 2 when a run exhausts its budget or a parameter set misses
//! the threshold, 1 on usage or input errors.

mod settings;

use std::fs::{self, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use geodesic_core::harness::{read_verify_input, verify_params};
use geodesic_core::pauli::{algebra_dim, dimension, MAX_QUBITS};
use geodesic_core::{BatchSummary, FidelityKind, GateSpec, RestrictionMask, RunRecord};

use settings::{parse_bins, Settings, SettingsError};

const EXIT_USAGE: u8 = 1;
const EXIT_UNCONVERGED: u8 = 2;

type CliResult = Result<ExitCode, Box<dyn std::error::Error>>;

#[derive(Parser, Debug)]
#[command(name = "geogate", version, about = "Geodesic synthesis of restricted-Hamiltonian gates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one optimization and append its record
    Synth(SynthArgs),
    /// Run seeds 0..S-1 and write records plus a summary
    Batch(BatchArgs),
    /// Recompute the fidelity of a parameter set
    Verify(VerifyArgs),
    /// List targets and restriction sets
    Gates,
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// TOML file with defaults for any of the flags below
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    settings: Settings,
}

#[derive(Args, Debug)]
struct BatchArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    settings: Settings,
    /// Number of seeds
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    /// Concurrent runs
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Histogram bins: log:B or linear:W
    #[arg(long, default_value = "log:4")]
    bins: String,
    /// Summary document [default: next to --out with .summary.json]
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Histogram table as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
    /// One CSV row per run
    #[arg(long)]
    runs_csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// A run record or a JSON map from Pauli words to coefficients
    #[arg(long)]
    params: PathBuf,
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    /// Overrides the convention stored in a record [default: real_part]
    #[arg(long)]
    fidelity: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let outcome = match cli.command {
        Command::Synth(a) => synth(a),
        Command::Batch(a) => batch(a),
        Command::Verify(a) => verify(a),
        Command::Gates => gates(),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_USAGE)
    })
}

fn merged(config: Option<&Path>, flags: Settings) -> Result<Settings, SettingsError> {
    match config {
        Some(path) => Ok(Settings::from_toml_file(path)?.overlay(flags)),
        None => Ok(flags),
    }
}

fn ensure_parent(path: &Path) -> std::io::Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir),
        _ => Ok(()),
    }
}

fn append_file(path: &Path) -> std::io::Result<fs::File> {
    ensure_parent(path)?;
    OpenOptions::new().create(true).append(true).open(path)
}

fn synth(args: SynthArgs) -> CliResult {
    let settings = merged(args.config.as_deref(), args.settings)?;
    let spec = settings.resolve()?;
    let prepared = spec.prepare()?;
    let out = settings.out_path("runs.jsonl");
    let mut file = append_file(&out)?;
    let record = prepared.run(spec.config.seed());
    writeln!(file, "{}", record.to_json_line())?;
    if let Some(e) = &record.error {
        return Err(e.clone().into());
    }
    println!(
        "{} {} seed={} converged={} steps={} infidelity={:.3e} record={}",
        record.method,
        record.target,
        record.seed,
        record.converged,
        record.steps,
        record.final_infidelity,
        out.display()
    );
    Ok(if record.converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_UNCONVERGED)
    })
}

fn batch(args: BatchArgs) -> CliResult {
    let settings = merged(args.config.as_deref(), args.settings)?;
    let bins = parse_bins(&args.bins)?;
    let prepared = settings.resolve()?.prepare()?;
    let out = settings.out_path("batch.jsonl");
    let summary_path = args
        .summary
        .clone()
        .unwrap_or_else(|| out.with_extension("summary.json"));
    let mut sink = BufWriter::new(append_file(&out)?);
    let (summary, records) = prepared.run_batch(args.seeds, args.parallel, &bins, &mut sink)?;
    sink.flush()?;
    ensure_parent(&summary_path)?;
    fs::write(&summary_path, summary.to_json() + "\n")?;
    if let Some(path) = &args.csv {
        write_histogram_csv(path, &summary)?;
    }
    if let Some(path) = &args.runs_csv {
        write_runs_csv(path, &records)?;
    }
    let median = summary
        .steps_median
        .map_or_else(|| "-".to_string(), |m| m.to_string());
    println!(
        "{} {} seeds={} success_rate={:.3} median_steps={} failed={} records={} summary={}",
        summary.method,
        summary.target,
        summary.seeds,
        summary.success_rate,
        median,
        summary.failed,
        out.display(),
        summary_path.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn write_histogram_csv(path: &Path, summary: &BatchSummary) -> Result<(), Box<dyn std::error::Error>> {
    ensure_parent(path)?;
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["bin", "lo", "hi", "count"])?;
    let h = &summary.histogram;
    for (i, count) in h.counts.iter().enumerate() {
        w.write_record([
            i.to_string(),
            h.edges[i].to_string(),
            h.edges[i + 1].to_string(),
            count.to_string(),
        ])?;
    }
    w.write_record(["unconverged", "", "", &h.unconverged.to_string()])?;
    w.flush()?;
    Ok(())
}

fn write_runs_csv(path: &Path, records: &[RunRecord]) -> Result<(), Box<dyn std::error::Error>> {
    ensure_parent(path)?;
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["method", "target", "seed", "converged", "steps", "final_infidelity", "wall_time_s"])?;
    for r in records {
        w.write_record([
            r.method.to_string(),
            r.target.clone(),
            r.seed.to_string(),
            r.converged.to_string(),
            r.steps.to_string(),
            r.final_infidelity.to_string(),
            r.wall_time_s.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn verify(args: VerifyArgs) -> CliResult {
    let target = args.target.parse::<GateSpec>()?.target()?;
    let input = read_verify_input(&args.params)?;
    let kind = match args.fidelity.as_deref() {
        None => input.fidelity.unwrap_or_default(),
        Some("real_part") => FidelityKind::RealPart,
        Some("phase_invariant") => FidelityKind::PhaseInvariant,
        Some(other) => return Err(format!("unknown fidelity `{other}`").into()),
    };
    let infidelity = verify_params(&input.labels, &target, kind)?;
    match input.recorded_infidelity {
        Some(recorded) => println!("infidelity={infidelity:.6e} recorded={recorded:.6e}"),
        None => println!("infidelity={infidelity:.6e}"),
    }
    Ok(if infidelity < args.eps {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_UNCONVERGED)
    })
}

fn gates() -> CliResult {
    use std::fmt::Write as _;
    let two_local = |n: usize| RestrictionMask::two_local(n).map(|m| m.count());
    let mut text = String::from("targets:\n");
    for name in ["toffoli", "fredkin"] {
        writeln!(text, "  {name} n=3 N=8 two-local={}", two_local(3)?)?;
    }
    for family in ["wz", "wx"] {
        for k in 2..=MAX_QUBITS {
            writeln!(text, "  {family}:{k} n={k} N={} two-local={}", dimension(k), two_local(k)?)?;
        }
    }
    writeln!(text, "  file:PATH (JSON or CSV matrix, any n <= {MAX_QUBITS})")?;
    text.push_str("restrictions:\n");
    for n in 1..=MAX_QUBITS {
        writeln!(text, "  n={n} two-local={} all={}", two_local(n)?, algebra_dim(n))?;
    }
    text.push_str("  file:PATH (one Pauli word per line)\n");
    // A closed pipe (e.g. `| head`) is not an error for a listing.
    let _ = std::io::stdout().write_all(text.as_bytes());
    Ok(ExitCode::SUCCESS)
}
