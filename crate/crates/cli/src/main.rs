//! `goi`: check, translate, interpret, execute and normalize MALL proofs.
//!
//! Exit codes: 0 on success, 1 when a checked property fails (the report
//! carries a witness), 2 on usage, input or resource-cap errors.

mod commands;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "goi", version, about = "Geometry of Interaction workbench for MALL")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Parse and rule-check a proof; print its conclusion sequent.
    Check(Inputs),
    /// Translate to a linking set (or read one as JSON) and check P0–P3.
    Net(Inputs),
    /// The matrix interpretation ⟦π⟧.
    Interpret(Inputs),
    /// The measure matrix m_π.
    Measure(Inputs),
    /// Quasi-execution over all cuts, in the chosen mode.
    Exec(Inputs),
    /// Nilpotency index of the cut loop.
    Nilp(Inputs),
    /// Cut elimination.
    Normalize(Inputs),
    /// Check invariance of execution along the reduction trace.
    Invariance(Inputs),
    /// The equational system of the cuts.
    Eq(Inputs),
    /// Solve the equational system.
    Solve(Inputs),
}

#[derive(Args, Debug, Clone)]
struct Inputs {
    /// Proof files (`-` or none for stdin). `net` also reads linking-set JSON.
    files: Vec<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Raw,
    Cplus,
    Cplustimes,
    Paired,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Commute {
    Duplicating,
    Superposed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Redex {
    Leftmost,
    Rightmost,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Invariance {
    External,
    Autonomous,
    Both,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Scalar quotient for `exec` and `nilp`.
    #[arg(long, global = true, value_enum, default_value = "cplustimes")]
    pub mode: Mode,
    /// Largest power of the cut loop computed.
    #[arg(long, global = true, default_value_t = 1024)]
    pub bound: usize,
    /// Print the powers of the cut loop (`exec`) or every step (`normalize`).
    #[arg(long, global = true)]
    pub trace: bool,
    /// Pair execution with the measure (`nilp`); same as `--mode paired`.
    #[arg(long, global = true)]
    pub paired: bool,
    #[arg(long, global = true, default_value_t = 1 << 16)]
    pub cap_switchings: u64,
    #[arg(long, global = true, default_value_t = 12)]
    pub cap_linkings: usize,
    #[arg(long, global = true, value_enum, default_value = "duplicating")]
    pub commute: Commute,
    #[arg(long, global = true, value_enum, default_value = "leftmost")]
    pub redex: Redex,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub step_bound: usize,
    /// Which invariance check `invariance` runs.
    #[arg(long, global = true, value_enum, default_value = "both")]
    pub check: Invariance,
}

/// The report for one input.
pub struct Outcome {
    pub code: u8,
    pub out: String,
}

impl Outcome {
    pub fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome { code: 2, out: format!("error: {msg}\n") }
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<(String, String), String> {
    match path {
        None => read_stdin(),
        Some(p) if p.as_os_str() == "-" => read_stdin(),
        Some(p) => std::fs::read_to_string(p)
            .map(|s| (p.display().to_string(), s))
            .map_err(|e| format!("{}: {e}", p.display())),
    }
}

fn read_stdin() -> Result<(String, String), String> {
    let mut s = String::new();
    std::io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
    Ok(("-".into(), s))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, inputs) = match &cli.command {
        Command::Check(i) => ("check", i),
        Command::Net(i) => ("net", i),
        Command::Interpret(i) => ("interpret", i),
        Command::Measure(i) => ("measure", i),
        Command::Exec(i) => ("exec", i),
        Command::Nilp(i) => ("nilp", i),
        Command::Normalize(i) => ("normalize", i),
        Command::Invariance(i) => ("invariance", i),
        Command::Eq(i) => ("eq", i),
        Command::Solve(i) => ("solve", i),
    };
    let paths: Vec<Option<&PathBuf>> =
        if inputs.files.is_empty() { vec![None] } else { inputs.files.iter().map(Some).collect() };
    let many = paths.len() > 1;
    let mut code = 0;
    let stdout = std::io::stdout();
    for path in paths {
        let outcome = match read_input(path) {
            Err(e) => Outcome::usage(e),
            Ok((label, src)) => commands::run(name, &label, &src, &cli.opts),
        };
        code = code.max(outcome.code);
        let mut lock = stdout.lock();
        if many && cli.opts.format == Format::Text {
            let label = path.map_or("-".to_string(), |p| p.display().to_string());
            let _ = writeln!(lock, "== {label}");
        }
        if outcome.code == 2 {
            eprint!("{}", outcome.out);
        } else {
            let _ = lock.write_all(outcome.out.as_bytes());
        }
    }
    ExitCode::from(code)
}
