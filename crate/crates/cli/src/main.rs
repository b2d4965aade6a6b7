use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use gateforge_cli::{
    input_error, run_document, Command, FieldError, Overrides, SpecError, EXIT_INPUT,
};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Synth,
    Evolve,
    Fit,
    Audit,
    Verify,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Synth => Command::Synth,
            Cmd::Evolve => Command::Evolve,
            Cmd::Fit => Command::Fit,
            Cmd::Audit => Command::Audit,
            Cmd::Verify => Command::Verify,
        }
    }
}

/// Synthesize, evolve, fit and audit two-spin NOT gates from a JSON job spec.
#[derive(Debug, Parser)]
#[command(name = "gateforge", version)]
struct Cli {
    /// What to run; replaces the spec's `command` field.
    #[arg(value_enum)]
    command: Cmd,

    /// Job spec (JSON).
    #[arg(long)]
    spec: PathBuf,

    /// Report destination; defaults to the spec's `output_path`, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Time steps for ordered evolution.
    #[arg(long)]
    steps: Option<usize>,

    /// Verification tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match std::fs::read_to_string(&cli.spec) {
        Ok(text) => run_document(
            &text,
            &Overrides {
                command: Some(cli.command.into()),
                steps: cli.steps,
                tolerance: cli.tolerance,
                output_path: cli.out.as_ref().map(|p| p.display().to_string()),
            },
        ),
        Err(e) => input_error(&SpecError::Fields(vec![FieldError {
            path: "--spec".into(),
            message: format!("cannot read {}: {e}", cli.spec.display()),
        }])),
    };

    let text = outcome.report_text();
    let destination = outcome
        .report
        .pointer("/spec/output_path")
        .and_then(|v| v.as_str())
        .map(PathBuf::from);
    match destination {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &text) {
                eprintln!("gateforge: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
        None => print!("{text}"),
    }
    if outcome.exit_code != 0 {
        if let Some(msg) = outcome.report.get("message").and_then(|v| v.as_str()) {
            eprintln!("gateforge: {msg}");
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
