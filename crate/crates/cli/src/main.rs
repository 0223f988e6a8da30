use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ringstab::report::render;
use ringstab::{parse_ring_spec_file, run_suite, Format, SuiteOptions};

/// Exit status for bad input (unknown suite, unreadable or invalid spec).
const USAGE_ERROR: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "ringstab", version, about = "Verifies stability properties of linear groups over finite rings")]
struct Cli {
    /// axioms, identities, lemma1, corollary1, lemma6, lemma7, theorem2,
    /// stable-rank, predicates, commutator, normality-probe, lemma-suite,
    /// classify or all.
    suite: String,
    /// Ring specification file.
    #[arg(long)]
    spec: PathBuf,
    /// Matrix size (default 3, or the ring section's `n`).
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated generators of the ideal to restrict to.
    #[arg(long, value_delimiter = ',')]
    ideal: Option<Vec<usize>>,
    /// Closure cap in elements.
    #[arg(long, env = "RINGSTAB_CAP")]
    cap: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample count for randomized checks.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Only run on this declared ring.
    #[arg(long)]
    ring: Option<String>,
    /// Include wall-clock timings (makes reports non-reproducible).
    #[arg(long)]
    timings: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = match parse_ring_spec_file(&cli.spec) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE_ERROR);
        }
    };
    let opts = SuiteOptions {
        n: cli.n,
        cap: cli.cap,
        ideal: cli.ideal,
        seed: cli.seed,
        samples: cli.samples,
        ring: cli.ring,
        timings: cli.timings,
    };
    let report = match run_suite(&spec, &cli.suite, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE_ERROR);
        }
    };
    let text = render(&report, cli.format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(USAGE_ERROR);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
