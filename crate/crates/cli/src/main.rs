use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gelfand_cli::config::{env_tolerance, read, resolve_triple, VerifyConfig};
use gelfand_cli::report::{verify_config, write_csv, write_file};
use gelfand_cli::suites::{replay, Counterexample};
use gelfand_cli::{commands, exit, CliError};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "gelfand",
    version,
    about = "Verify and explore quasi Gelfand triples"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites from a JSON config.
    Verify {
        config: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Also write a per-suite CSV table.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Pivot, plus, minus, Z₊ and Z₋ norms of a vector.
    Norms {
        /// Catalog name or triple JSON file.
        #[arg(long)]
        triple: String,
        #[arg(long)]
        vector: PathBuf,
    },
    /// Spectral decomposition along a cut on the √λ scale.
    Decompose {
        #[arg(long)]
        triple: String,
        /// Interval list such as `0:1` or `0:0.5,2:3`.
        #[arg(long, default_value = "0:1")]
        cut: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Split a vector into plus and minus parts.
    Split {
        kind: SplitKind,
        #[arg(long)]
        triple: String,
        /// Vector to split (pivot, canonical).
        #[arg(long, required_unless_present = "plus")]
        vector: Option<PathBuf>,
        /// Given plus part (optimal).
        #[arg(long, requires = "minus")]
        plus: Option<PathBuf>,
        /// Given minus part (optimal).
        #[arg(long, requires = "plus")]
        minus: Option<PathBuf>,
    },
    /// Recompute the residual of a counterexample from a report.
    Replay {
        #[arg(long)]
        triple: String,
        counterexample: PathBuf,
    },
    /// Built-in instances.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitKind {
    Pivot,
    Optimal,
    Canonical,
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let env_tol = env_tolerance()?;
    match cli.command {
        Command::Verify {
            config,
            seed,
            report,
            csv,
        } => {
            let cfg = VerifyConfig::load(&config)?;
            let result = verify_config(&cfg, seed, env_tol)?;
            emit(&to_json(&result), report.as_ref())?;
            if let Some(path) = csv {
                let file = std::fs::File::create(&path)
                    .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
                write_csv(&result, file)?;
            }
            for s in result
                .suites
                .iter()
                .filter(|s| s.counterexample.is_some() || s.error.is_some())
            {
                eprintln!("suite {} failed (seed {})", s.name.name(), s.seed);
            }
            Ok(if result.passed {
                exit::PASS
            } else {
                exit::FAIL
            })
        }
        Command::Norms { triple, vector } => {
            let t = resolve_triple(&triple, env_tol)?;
            let v = commands::load_vector(&vector)?;
            emit(&to_json(&commands::norms(&t, &v)?), None)?;
            Ok(exit::PASS)
        }
        Command::Decompose {
            triple,
            cut,
            samples,
            seed,
            report,
        } => {
            let t = resolve_triple(&triple, env_tol)?;
            let r = commands::decomposition(&t, &cut, samples, seed)?;
            emit(&to_json(&r), report.as_ref())?;
            Ok(if r.passed { exit::PASS } else { exit::FAIL })
        }
        Command::Split {
            kind,
            triple,
            vector,
            plus,
            minus,
        } => {
            let t = resolve_triple(&triple, env_tol)?;
            let missing = |what: &str| CliError::Usage(format!("this split needs --{what}"));
            let out = match kind {
                SplitKind::Pivot | SplitKind::Canonical => {
                    let x = commands::load_vector(&vector.ok_or_else(|| missing("vector"))?)?;
                    match kind {
                        SplitKind::Pivot => commands::pivot_split(&t, &x)?,
                        _ => commands::canonical(&t, &x)?,
                    }
                }
                SplitKind::Optimal => {
                    let f = commands::load_vector(&plus.ok_or_else(|| missing("plus"))?)?;
                    let g = commands::load_vector(&minus.ok_or_else(|| missing("minus"))?)?;
                    commands::optimal(&t, &f, &g)?
                }
            };
            emit(&to_json(&out), None)?;
            Ok(exit::PASS)
        }
        Command::Replay {
            triple,
            counterexample,
        } => {
            let t = resolve_triple(&triple, env_tol)?;
            let cx: Counterexample = serde_json::from_str(&read(&counterexample)?)
                .map_err(|e| CliError::Usage(format!("counterexample: {e}")))?;
            let outcome = replay(&t, &cx)?;
            emit(&to_json(&outcome), None)?;
            Ok(if outcome.passed() {
                exit::PASS
            } else {
                exit::FAIL
            })
        }
        Command::Catalog {
            action: CatalogAction::List,
        } => {
            emit(&to_json(&commands::catalog_list()), None)?;
            Ok(exit::PASS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::USAGE)
        }
    }
}
