//! satkit: compute, verify, construct, and audit graph saturation numbers.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 precondition refusal,
//! 4 structural-guarantee violation during an audit.

mod commands;
mod output;

use clap::{Parser, Subcommand};
use satkit_core::Error;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "satkit", version, about = "graph saturation number toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact sat(n, F) by canonical enumeration over an n range.
    Exact(commands::ExactArgs),
    /// Check a graph for F-saturation and emit a certificate.
    Verify(commands::VerifyArgs),
    /// Emit known saturated constructions as graph6.
    Construct(commands::ConstructArgs),
    /// Run the even-cycle discharging pipeline and write the ledger.
    Audit(commands::AuditArgs),
    /// Run the cycle structural checkers on a graph.
    Lemmas(commands::LemmasArgs),
    /// Formula / bound / greedy / exact comparison table over an n range.
    Table(commands::TableArgs),
    /// Low-degree structure audit for complete multipartite patterns.
    Mpartite(commands::MpartiteArgs),
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("SATKIT_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
        }
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Exact(args) => commands::run_exact(args),
        Command::Verify(args) => commands::run_verify(args),
        Command::Construct(args) => commands::run_construct(args),
        Command::Audit(args) => commands::run_audit(args),
        Command::Lemmas(args) => commands::run_lemmas(args),
        Command::Table(args) => commands::run_table(args),
        Command::Mpartite(args) => commands::run_mpartite(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Refused(_) => ExitCode::from(3),
                Error::TheoremViolation(_) => ExitCode::from(4),
                _ => ExitCode::from(2),
            }
        }
    }
}
