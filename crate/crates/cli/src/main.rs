mod checks;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use qmonadic::random::DEFAULT_SEED;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use checks::{Entry, Failure, Outcome};

#[derive(Parser, Debug)]
#[command(name = "qmonadic", version, about = "Checks and reproductions for quantum monadic and cylindric algebras")]
struct Cli {
    /// Write the structured report to this file ("-" for standard output).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Element limit for lattices and closures.
    #[arg(long, global = true, default_value_t = qmonadic::lattice::DEFAULT_MAX_ELEMENTS)]
    max_size: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a structure file.
    Check {
        #[command(subcommand)]
        kind: CheckKind,
    },
    /// Run a built-in scenario end to end.
    Repro {
        #[arg(value_parser = qmonadic::scenarios::SCENARIOS)]
        name: String,
    },
    /// Deterministic searches.
    Search {
        #[command(subcommand)]
        target: SearchTarget,
    },
    /// Convert a Greechie diagram to lattice JSON.
    Convert {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum CheckKind {
    /// Lattice JSON or Greechie text.
    Lattice { file: PathBuf },
    Quantifier { file: PathBuf },
    Cylindric {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Full)]
        mode: ModeArg,
    },
    Frame { file: PathBuf },
    Algebra { file: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Weak,
    Full,
}

#[derive(Subcommand, Debug)]
enum SearchTarget {
    /// Orthomodular lattices with a Boolean subalgebra whose quantifier fails Q6.
    Q6 {
        #[arg(long, default_value_t = qmonadic::scenarios::Q6_MAX_BLOCKS)]
        max_blocks: usize,
        /// Search Boolean algebras instead of Greechie pastings.
        #[arg(long)]
        boolean_only: bool,
        #[arg(long, default_value_t = 4)]
        max_atoms: u32,
    },
    /// Random inclusions where ∃_N p and P(E_N p) might differ.
    ExpectationGap {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        inclusions: usize,
        #[arg(long, default_value_t = 5)]
        projections: usize,
    },
}

#[derive(Serialize)]
struct Report {
    command: Vec<String>,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input_sha256: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    checks: Vec<Entry>,
    lines: Vec<String>,
    details: Value,
    /// Not covered by the determinism contract.
    timing: Timing,
}

#[derive(Serialize)]
struct Timing {
    elapsed_ms: f64,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read_input(path: &Path) -> Result<(String, String), Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?;
    let sha = digest(&bytes);
    let text = String::from_utf8(bytes).map_err(|_| Failure(format!("{} is not UTF-8", path.display())))?;
    Ok((text, sha))
}

fn run(cli: &Cli) -> (Option<String>, Result<Outcome, Failure>) {
    match &cli.command {
        Command::Check { kind } => {
            let file = match kind {
                CheckKind::Lattice { file }
                | CheckKind::Quantifier { file }
                | CheckKind::Cylindric { file, .. }
                | CheckKind::Frame { file }
                | CheckKind::Algebra { file } => file,
            };
            let (text, sha) = match read_input(file) {
                Ok(x) => x,
                Err(e) => return (None, Err(e)),
            };
            let base = file.parent();
            let outcome = match kind {
                CheckKind::Lattice { file } => checks::lattice(&text, is_json(file), cli.max_size),
                CheckKind::Quantifier { .. } => checks::quantifier(&text, base, cli.max_size),
                CheckKind::Cylindric { mode, .. } => {
                    let mode = match mode {
                        ModeArg::Weak => qmonadic::cylindric::Mode::Weak,
                        ModeArg::Full => qmonadic::cylindric::Mode::Full,
                    };
                    checks::cylindric(&text, base, mode, cli.max_size)
                }
                CheckKind::Frame { .. } => checks::frame(&text, cli.seed, cli.max_size),
                CheckKind::Algebra { .. } => checks::algebra(&text),
            };
            (Some(sha), outcome)
        }
        Command::Repro { name } => (None, checks::repro(name, cli.seed)),
        Command::Search { target } => match target {
            SearchTarget::Q6 {
                max_blocks,
                boolean_only,
                max_atoms,
            } => (None, checks::search_q6(*max_blocks, *boolean_only, *max_atoms)),
            SearchTarget::ExpectationGap {
                dim,
                inclusions,
                projections,
            } => (
                None,
                checks::search_expectation_gap(*dim, *inclusions, *projections, cli.seed),
            ),
        },
        Command::Convert { input, output } => {
            let (text, sha) = match read_input(input) {
                Ok(x) => x,
                Err(e) => return (None, Err(e)),
            };
            (Some(sha), checks::convert(&text, output.as_deref(), cli.max_size))
        }
    }
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "json")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (input_sha256, result) = run(&cli);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let command: Vec<String> = std::env::args().skip(1).collect();

    let (status, code, report) = match result {
        Ok(outcome) => {
            let (status, code) = if outcome.passed { ("pass", 0) } else { ("fail", 1) };
            let report = Report {
                command,
                status,
                input_sha256,
                error: None,
                checks: outcome.checks,
                lines: outcome.lines,
                details: outcome.details,
                timing: Timing { elapsed_ms },
            };
            (status, code, report)
        }
        Err(Failure(message)) => {
            let report = Report {
                command,
                status: "error",
                input_sha256,
                error: Some(message),
                checks: Vec::new(),
                lines: Vec::new(),
                details: Value::Null,
                timing: Timing { elapsed_ms },
            };
            ("error", 2, report)
        }
    };

    let to_stdout = cli.json.as_deref() == Some(Path::new("-"));
    if !to_stdout {
        print_human(&report, status);
    }
    if let Some(path) = &cli.json {
        let text = serde_json::to_string_pretty(&report).expect("plain data");
        if to_stdout {
            println!("{text}");
        } else if let Err(e) = std::fs::write(path, text + "\n") {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}

fn print_human(report: &Report, status: &str) {
    for line in &report.lines {
        println!("{line}");
    }
    for c in &report.checks {
        let status = match (c.status, c.holds) {
            ("info", true) => "info: holds",
            ("info", false) => "info: fails",
            (s, _) => s,
        };
        match &c.witness {
            w if c.holds || w.is_null() => println!("{:<28} {status}", c.name),
            w => println!("{:<28} {status}  witness: {w}", c.name),
        }
    }
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    println!("status: {status}");
}
