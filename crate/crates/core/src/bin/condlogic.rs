use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use condlogic::logic::MAX_ATOMS;
use condlogic::script::{self, RunOptions};

/// Run a condlogic script and print one result per query.
#[derive(Parser, Debug)]
#[command(name = "condlogic", version)]
struct Args {
    /// Script file; reads standard input when absent or `-`.
    script: Option<PathBuf>,
    /// Emit the JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Largest number of atoms a script may declare.
    #[arg(long, default_value_t = MAX_ATOMS, value_parser = clap::value_parser!(usize))]
    max_atoms: usize,
    /// Skip confirming p-entailment verdicts with the incoherence check.
    #[arg(long)]
    no_cross_oracle: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let source = match &args.script {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map(|_| s).map_err(|e| format!("stdin: {e}"))
        }
    };
    let source = match source {
        Ok(s) => s,
        Err(e) => {
            eprintln!("condlogic: {e}");
            return ExitCode::from(2);
        }
    };
    if args.max_atoms > MAX_ATOMS {
        eprintln!("condlogic: --max-atoms cannot exceed {MAX_ATOMS}");
        return ExitCode::from(2);
    }
    let parsed = match script::parse(&source) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("condlogic: parse error at {e}");
            if !e.expected.is_empty() {
                eprintln!("  expected one of: {}", e.expected.join(", "));
            }
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions { max_atoms: args.max_atoms, cross_oracle: !args.no_cross_oracle };
    let report = script::run(&parsed, &opts);
    if args.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if report.has_errors() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
