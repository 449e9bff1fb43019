//! `wallcross`: run completions, factorizations and gluings on JSON inputs.
//!
//! Exit status: 0 on success or a match, 1 on a mismatch or an inconsistent
//! structure, 2 on bad input.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use commands::{Options, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("SchemaError at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("InvariantError({invariant}): {detail}")]
    Invariant { invariant: String, detail: String },
    #[error("{0}")]
    Core(wallcross::Error),
    #[error("bad argument: {0}")]
    Argument(String),
}

impl From<wallcross::Error> for CliError {
    fn from(e: wallcross::Error) -> Self {
        match e {
            wallcross::Error::InvariantViolation { invariant, detail } => CliError::Invariant { invariant, detail },
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "IoError",
            CliError::Schema { .. } => "SchemaError",
            CliError::Invariant { .. } => "InvariantError",
            CliError::Core(e) => e.kind(),
            CliError::Argument(_) => "ArgumentError",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(wallcross::Error::InconsistentStructure(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "wallcross", version, about = "Exact wall-crossing computations")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Complete a rank-2 scattering diagram.
    Complete(Args),
    /// Factorize the product `lhs` into phase-ordered KS factors.
    Factorize(Args),
    /// Check that the words `lhs` and `rhs` compose to the same automorphism.
    VerifyWcf(Args),
    /// Factorize `lhs` by the phases of the lattice's central charges.
    SpectrumGenerator(Args),
    /// Iterate the Y-system recursion; `--order` overrides the step count.
    Ysystem(Args),
    /// Assemble the degeneration ideal of a marked structure.
    Glue(Args),
    /// Compare the fiber of the degeneration with the FG relations.
    CompareFiber(Args),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args, Debug)]
struct Args {
    input: PathBuf,
    #[arg(long)]
    order: Option<u32>,
    #[arg(long, default_value = "1")]
    t: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

type Command = fn(&input::Document, &Options) -> Result<Report, CliError>;

fn run(verb: &Verb) -> Result<(Report, &Args), CliError> {
    let (args, f): (&Args, Command) = match verb {
        Verb::Complete(a) => (a, commands::complete_cmd),
        Verb::Factorize(a) => (a, commands::factorize),
        Verb::VerifyWcf(a) => (a, commands::verify_wcf),
        Verb::SpectrumGenerator(a) => (a, commands::spectrum_generator),
        Verb::Ysystem(a) => (a, commands::ysystem),
        Verb::Glue(a) => (a, commands::glue),
        Verb::CompareFiber(a) => (a, commands::compare_fiber),
    };
    let text = std::fs::read_to_string(&args.input)
        .map_err(|source| CliError::Io { path: args.input.display().to_string(), source })?;
    let doc = input::parse_document(&text)?;
    let t = wallcross::rat::parse(&args.t).ok_or_else(|| CliError::Argument(format!("--t {} is not rational", args.t)))?;
    if args.threads == 0 {
        return Err(CliError::Argument("--threads must be at least 1".into()));
    }
    let opts = Options { order: args.order, t, threads: args.threads };
    Ok((f(&doc, &opts)?, args))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.verb) {
        Ok((report, args)) => {
            let body = match args.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report.json).expect("reports serialize");
                    s.push('\n');
                    s
                }
                Format::Text => report.text,
            };
            match &args.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, body) {
                        eprintln!("IoError: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{body}"),
            }
            ExitCode::from(if report.success { 0 } else { 1 })
        }
        Err(e) => {
            let err = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{err}");
            ExitCode::from(e.exit_code())
        }
    }
}
