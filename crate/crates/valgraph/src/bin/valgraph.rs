//! Batch driver: parse a model spec, run named analyses, emit JSON reports
//! and DOT graphs.  Exit codes: 0 = all assertions certified-pass,
//! 1 = assertion failure, 2 = inconclusive results only, 3 = spec or usage
//! error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

#[derive(Parser)]
#[command(
    name = "valgraph",
    about = "V-graphs, ordered quotients and valuations on exactly computable division-ring models"
)]
struct Cli {
    /// analysis to run: graph, axioms, order, classify, theorems, eth, valuation, all
    analysis: String,
    /// model spec file (key = value lines)
    #[arg(long)]
    spec: PathBuf,
    /// output directory for report.json and DOT files
    #[arg(long)]
    out: Option<PathBuf>,
    /// valuation window bound for infinite models
    #[arg(long)]
    window: Option<i64>,
    /// bound for single-place openness refutation
    #[arg(long = "delta-bound")]
    delta_bound: Option<i64>,
    /// base element y (model-specific syntax)
    #[arg(long)]
    y: Option<String>,
    /// partner element x for the diameter theorems
    #[arg(long)]
    x: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let req = match valgraph::report::request_from_file(
        &cli.spec,
        &cli.analysis,
        cli.out,
        cli.window,
        cli.delta_bound,
        cli.y,
        cli.x,
    ) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    match valgraph::report::run(&req) {
        Ok((report, code)) => {
            for a in &report.analyses {
                for c in &a.claims {
                    println!(
                        "[{}] {} = {} (expected {}) [{}]{}",
                        if c.pass { "pass" } else { "FAIL" },
                        c.key,
                        c.observed,
                        c.expected,
                        c.tag,
                        c.witness.as_deref().map(|w| format!(" witness: {w}")).unwrap_or_default()
                    );
                }
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
