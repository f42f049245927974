//! `cartan`: run verification scenarios, decide convergence queries and
//! describe the shipped instances.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use cartan_cli::config::{parse_override, ConvergenceQuery, ScenarioConfig, SCHEMA_VERSION};
use cartan_cli::{load_scenario, output, run, BUNDLED};
use cartan_core::dual::converges;
use cartan_core::{build_instance, make_dual_point};
use clap::{Parser, Subcommand};
use serde::Deserialize;

#[derive(Parser)]
#[command(name = "cartan", version, about = "Operator-field verification for Cartan motion groups")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a scenario and write its artifacts.
    Run {
        /// Scenario file, or the name of a bundled scenario.
        scenario: String,
        /// Output directory; overrides the scenario's own.
        #[arg(long, env = "CARTAN_OUTPUT_DIR")]
        out: Option<PathBuf>,
        /// Threshold override, e.g. `--tol mu_decay=1e-4`; repeatable.
        #[arg(long = "tol", value_name = "KEY=VALUE", value_parser = parse_override)]
        tolerances: Vec<(String, f64)>,
    },
    /// Decide convergence queries from a JSON file and print certificates.
    Converge {
        /// `{"instance": ..., "queries": [...]}`.
        queries: PathBuf,
    },
    /// Print the structure of a shipped instance.
    Instance { name: String },
    /// List bundled scenarios.
    Scenarios,
    /// Validate a scenario without running it.
    Check { scenario: String },
}

#[derive(Deserialize)]
struct QueryFile {
    instance: String,
    queries: Vec<ConvergenceQuery>,
}

const EXIT_FAIL: u8 = 1;
const EXIT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(EXIT_ERROR);
        }
    }
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn validated(config: &ScenarioConfig) -> anyhow::Result<cartan_cli::config::Scenario> {
    config.validate().map_err(anyhow::Error::from)
}

fn dispatch(command: Command) -> anyhow::Result<bool> {
    match command {
        Command::Run { scenario, out, tolerances } => {
            let mut config = load_scenario(&scenario)?;
            config.tolerances.extend(tolerances);
            let scenario = validated(&config)?;
            let dir = out
                .or_else(|| config.output_dir.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("cartan-out").join(&config.name));
            let outcome = run::execute(&scenario)?;
            let files = output::write_artifacts(&dir, &outcome)?;
            for r in &outcome.report.reports {
                let note = r.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default();
                println!("condition {} {:<13} {}{note}", r.condition, r.name, if r.passed() { "PASS" } else { "FAIL" });
            }
            for c in &outcome.convergence {
                let flag = if c.as_expected { "" } else { " UNEXPECTED" };
                println!("query {:?}: {:?}{flag}", c.name, c.certificate.verdict);
            }
            println!("{} {} in {} files under {}", config.name, if outcome.passed() { "PASS" } else { "FAIL" }, files.len(), dir.display());
            Ok(outcome.passed())
        }
        Command::Converge { queries } => {
            let text = std::fs::read_to_string(&queries).with_context(|| format!("reading {}", queries.display()))?;
            let file: QueryFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", queries.display()))?;
            let pair = build_instance(&file.instance).context("instance")?;
            let mut all = true;
            let mut certs = Vec::new();
            for (i, q) in file.queries.iter().enumerate() {
                let seq = q
                    .sequence
                    .iter()
                    .enumerate()
                    .map(|(j, r)| make_dual_point(&pair, r).with_context(|| format!("queries[{i}].sequence[{j}]")))
                    .collect::<anyhow::Result<Vec<_>>>()?;
                let limit = make_dual_point(&pair, &q.limit).with_context(|| format!("queries[{i}].limit"))?;
                let cert = converges(&pair, &seq, &limit, &q.options.unwrap_or_default())
                    .with_context(|| format!("queries[{i}]"))?;
                all &= q.expect.is_none_or(|v| v == cert.verdict);
                certs.push(serde_json::json!({ "name": q.name, "limit": limit, "certificate": cert }));
            }
            println!("{}", serde_json::to_string_pretty(&certs)?);
            Ok(all)
        }
        Command::Instance { name } => {
            let pair = build_instance(&name)?;
            println!("instance     {}", pair.name);
            println!("K            {}", pair.k);
            println!("dim p        {}", pair.dim_p);
            println!("rank         {}", pair.rank);
            println!("roots        {:?}", pair.positive_roots);
            println!("Weyl group   {} elements", pair.weyl_group.len());
            let types: Vec<String> = pair.k.irreps(2).iter().map(|l| l.to_string()).collect();
            println!("K-types ≤ 2  {}", types.join(" "));
            Ok(true)
        }
        Command::Scenarios => {
            for (name, text) in BUNDLED {
                let c = ScenarioConfig::from_json(text)?;
                println!("{name:<14} {} (schema {SCHEMA_VERSION})", c.instance);
            }
            Ok(true)
        }
        Command::Check { scenario } => {
            let config = load_scenario(&scenario)?;
            validated(&config)?;
            println!("{}: valid", config.name);
            Ok(true)
        }
    }
}
