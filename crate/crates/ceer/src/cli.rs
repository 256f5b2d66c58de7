//! Command-line front door: generators, codings, deciders, and the
//! verification harness, bound into reproducible runs.
//!
//! Subcommands: `gen`, `code`, `decide`, `verify`, `export-dot`. Standard
//! output carries data (JSON or text); standard error carries diagnostics.
//! Exit codes: 0 success, 1 verification failures, 2 usage or spec errors,
//! 3 fuel or scale exhaustion. The environment variable `CEER_FUEL`
//! overrides the default per-entry search budget.

use std::fs;
use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::builtins::RelationSpec;
use crate::coding::{fair_enumeration, fuel_from_env, Coding, CodingError, CodingTable};
use crate::derived::{
    f_witness, h_witness, r_witness, s_witness, t_witness, DecideError, Witness,
};
use crate::harness::{run_all, verify_spec, RunManifest, VerificationReport, WindowConfig, DEFAULT_SEED};
use crate::merged::MergedCoding;
use crate::relation::FiniteRelation;

#[derive(Parser)]
#[command(
    name = "ceer",
    version,
    about = "Workbench for equivalence relations presented by enumerations of pairs",
    after_help = "Relation specs are JSON, inline or @file: \
                  {\"kind\":\"mod\",\"modulus\":3}, {\"kind\":\"full\"}, \
                  {\"kind\":\"partition\",\"classes\":[[0,5],[1]],\"modulus\":1}, \
                  {\"kind\":\"prop23\",\"eta\":[2,3,7]}, {\"kind\":\"prop24\",\"a\":[3]}."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Materialize the window [0, N]² of a described relation as JSON.
    Gen {
        /// Relation spec, inline JSON or @file.
        #[arg(long, value_name = "JSON|@FILE")]
        spec: String,
        /// Window bound N (inclusive).
        #[arg(long, value_name = "N")]
        window: u64,
    },
    /// Build a coding-table prefix over the relation's enumeration.
    ///
    /// Uses the relation's native enumeration: the exponent pairing for
    /// the full relation, the diagonal sweep otherwise. Relations with a
    /// finite class exhaust the budget instead of completing — that is
    /// the informative outcome, reported on exit code 3.
    Code {
        #[arg(long, value_name = "JSON|@FILE")]
        spec: String,
        /// Number of table entries to select.
        #[arg(short = 'n', long = "entries", value_name = "N")]
        entries: u64,
        /// Per-entry search budget (default: CEER_FUEL or 1000000).
        #[arg(long)]
        fuel: Option<u64>,
        /// Build the two-sided merged coding over the fair version of the
        /// enumeration instead of a single table.
        #[arg(long)]
        merged: bool,
    },
    /// Decide one of the derived relations at a pair and print a witness.
    ///
    /// R, S, T, H, and F are decided over a coding table of the native
    /// enumeration; J and G over a merged coding of its fair version.
    Decide {
        #[arg(long, value_name = "JSON|@FILE")]
        spec: String,
        /// Which derived relation to decide.
        #[arg(long, value_name = "R|S|T|H|F|J|G")]
        rel: String,
        i: u64,
        j: u64,
        #[arg(long)]
        fuel: Option<u64>,
    },
    /// Run verification suites and print their reports.
    ///
    /// Without --rel, runs the full battery over the built-in relations.
    /// Verification enumerates by the diagonal sweep so windowed searches
    /// stay within quadratic indices.
    Verify {
        /// Relation spec to verify, inline JSON or @file.
        #[arg(long, value_name = "JSON|@FILE")]
        rel: Option<String>,
        #[arg(long, default_value_t = 30, value_name = "N")]
        window: u64,
        #[arg(long)]
        fuel: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Emit the manifest and reports as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Render a materialized relation (JSON from `gen`) as Graphviz DOT.
    ExportDot {
        /// Input file, or '-' for standard input.
        #[arg(long, value_name = "FILE|-")]
        input: String,
        /// Graph name in the DOT output.
        #[arg(long, default_value = "relation")]
        name: String,
    },
}

enum CliError {
    Usage(String),
    Fuel(String),
    Failures(usize),
}

impl From<CodingError> for CliError {
    fn from(e: CodingError) -> Self {
        CliError::Fuel(e.to_string())
    }
}

impl From<DecideError> for CliError {
    fn from(e: DecideError) -> Self {
        match e {
            DecideError::Coding(inner) => CliError::Fuel(inner.to_string()),
            other => CliError::Fuel(other.to_string()),
        }
    }
}

impl From<crate::builtins::SpecError> for CliError {
    fn from(e: crate::builtins::SpecError) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Fuel(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Failures(n)) => {
            eprintln!("error: {n} check(s) failed");
            ExitCode::from(1)
        }
    }
}

fn parse_spec(arg: &str) -> Result<RelationSpec, CliError> {
    let text = if let Some(path) = arg.strip_prefix('@') {
        fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read spec file {path}: {e}")))?
    } else {
        arg.to_string()
    };
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("malformed relation spec: {e}")))
}

fn resolve_fuel(flag: Option<u64>) -> Result<u64, CliError> {
    let fuel = flag.unwrap_or_else(fuel_from_env);
    if fuel == 0 {
        return Err(CliError::Usage("fuel must be at least 1".to_string()));
    }
    Ok(fuel)
}

/// Write a line of data to standard output, treating a closed pipe (for
/// example `ceer ... | head`) as a normal early finish.
fn emit_line(text: impl std::fmt::Display) {
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{text}").is_err() {
        std::process::exit(0);
    }
}

fn emit_json<T: Serialize>(value: &T) {
    emit_line(serde_json::to_string_pretty(value).expect("serializable output"));
}

#[derive(Serialize)]
struct DecideOutput {
    relation: String,
    pair: [u64; 2],
    related: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Witness>,
    enumerator: String,
    fuel: u64,
}

#[derive(Serialize)]
struct VerifyOutput {
    manifest: RunManifest,
    reports: Vec<VerificationReport>,
}

/// Mirror of the `FiniteRelation` JSON shape, for reading back `gen`
/// output.
#[derive(Deserialize)]
struct RelationFile {
    bound: u64,
    pairs: Vec<(u64, u64)>,
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Gen { spec, window } => {
            let spec = parse_spec(&spec)?;
            let gt = spec.ground_truth()?;
            emit_json(&gt.window(window));
            Ok(())
        }
        Command::Code { spec, entries, fuel, merged } => {
            let spec = parse_spec(&spec)?;
            let fuel = resolve_fuel(fuel)?;
            let nu = spec.enumerator()?;
            if merged {
                let mut coding = MergedCoding::with_fuel(fair_enumeration(&nu), fuel);
                coding.extend_to(entries)?;
                emit_json(&coding);
            } else {
                let mut table = CodingTable::with_fuel(nu, fuel);
                table.extend_to(entries)?;
                emit_json(&table);
            }
            Ok(())
        }
        Command::Decide { spec, rel, i, j, fuel } => {
            let spec = parse_spec(&spec)?;
            let fuel = resolve_fuel(fuel)?;
            let nu = spec.enumerator()?;
            let rel = rel.to_uppercase();
            let witness: Option<Witness> = match rel.as_str() {
                "R" | "S" | "T" | "H" | "F" => {
                    let mut table = CodingTable::with_fuel(nu.clone(), fuel);
                    match rel.as_str() {
                        "R" => r_witness(&mut table, i, j)?
                            .map(|n| Witness::TableEntry { n, pair: table.pi_at(n) }),
                        "S" => s_witness(&mut table, i, j)?.map(|(m, n)| {
                            Witness::MirroredSources {
                                m,
                                n,
                                nu_m: nu.pair(m),
                                nu_n: nu.pair(n),
                            }
                        }),
                        "T" => t_witness(&mut table, i, j)?
                            .map(|(m, n)| Witness::EqualSources { m, n, source: nu.pair(m) }),
                        "H" => h_witness(&mut table, i, j)?,
                        _ => f_witness(&mut table, i, j)?,
                    }
                }
                "J" | "G" => {
                    let mut coding = MergedCoding::with_fuel(fair_enumeration(&nu), fuel);
                    if rel == "J" {
                        coding.j_witness(i, j)?
                    } else {
                        coding.g_witness(i, j)?
                    }
                }
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown relation name '{other}' (expected R, S, T, H, F, J, or G)"
                    )))
                }
            };
            emit_json(&DecideOutput {
                relation: rel,
                pair: [i, j],
                related: witness.is_some(),
                witness,
                enumerator: nu.label().to_string(),
                fuel,
            });
            Ok(())
        }
        Command::Verify { rel, window, fuel, seed, json } => {
            let fuel = resolve_fuel(fuel)?;
            let cfg = WindowConfig { window, fuel, seed: seed.unwrap_or(DEFAULT_SEED) };
            let spec = rel.as_deref().map(parse_spec).transpose()?;
            let reports = match &spec {
                Some(spec) => verify_spec(spec, &cfg)?,
                None => run_all(&cfg),
            };
            let failures: usize = reports.iter().map(VerificationReport::failures).sum();
            if json {
                let manifest = RunManifest::new("verify", spec, &cfg);
                emit_json(&VerifyOutput { manifest, reports });
            } else {
                for report in &reports {
                    emit_line(report);
                }
                let inconclusive: usize =
                    reports.iter().map(VerificationReport::inconclusive).sum();
                emit_line(format!(
                    "{} reports: {failures} failures, {inconclusive} inconclusive",
                    reports.len()
                ));
            }
            if failures > 0 {
                return Err(CliError::Failures(failures));
            }
            Ok(())
        }
        Command::ExportDot { input, name } => {
            let text = if input == "-" {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| CliError::Usage(format!("cannot read standard input: {e}")))?;
                buf
            } else {
                fs::read_to_string(&input)
                    .map_err(|e| CliError::Usage(format!("cannot read {input}: {e}")))?
            };
            let parsed: RelationFile = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("malformed relation JSON: {e}")))?;
            let rel = FiniteRelation::from_pairs(parsed.bound, parsed.pairs)
                .map_err(|e| CliError::Usage(format!("invalid relation: {e}")))?;
            emit_line(rel.to_dot(&name).trim_end());
            Ok(())
        }
    }
}
