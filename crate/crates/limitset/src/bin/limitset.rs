//! Command-line driver for the limit-set toolkit.

use clap::{Args, Parser, Subcommand};
use limitset::cli::{parse_config, run_command, CliError, Command, RunParams};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "limitset",
    version,
    about = "Exact-arithmetic samplers for limit sets of subgroups of irreducible arithmetic groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Configuration file
    #[arg(long)]
    config: PathBuf,
    /// Maximum word length for enumeration
    #[arg(long, default_value_t = 8)]
    max_word_length: usize,
    /// Orbit iterations for boundary estimates
    #[arg(long, default_value_t = 20)]
    iterations: u32,
    /// Power bound for the Schottky search
    #[arg(long, default_value_t = 5)]
    maxpow: u32,
    /// Output directory for CSV/SVG files
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Cache directory (LIMITSET_CACHE overrides)
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify each generator tuple
    Classify(Common),
    /// Enumerate elements and populate the cache
    Enumerate(Common),
    /// Sample the projective limit set to CSV
    Plimit(Common),
    /// Sample the Furstenberg limit set to CSV
    Flimit(Common),
    /// Trace-field degrees and the block size k
    Tracefield(Common),
    /// Per-place discreteness verdicts
    Discreteness(Common),
    /// Predicted limit-set structure
    Predict(Common),
    /// Run the invariant suite
    Verify(Common),
    /// Render the samples to SVG
    Render(Common),
}

fn split(cmd: Cmd) -> (Command, Common) {
    match cmd {
        Cmd::Classify(c) => (Command::Classify, c),
        Cmd::Enumerate(c) => (Command::Enumerate, c),
        Cmd::Plimit(c) => (Command::Plimit, c),
        Cmd::Flimit(c) => (Command::Flimit, c),
        Cmd::Tracefield(c) => (Command::Tracefield, c),
        Cmd::Discreteness(c) => (Command::Discreteness, c),
        Cmd::Predict(c) => (Command::Predict, c),
        Cmd::Verify(c) => (Command::Verify, c),
        Cmd::Render(c) => (Command::Render, c),
    }
}

fn run(cmd: Command, common: Common) -> Result<String, CliError> {
    let text = std::fs::read_to_string(&common.config)?;
    let cfg = parse_config(&text)?;
    let cache_dir = std::env::var_os("LIMITSET_CACHE")
        .map(PathBuf::from)
        .or(common.cache);
    let params = RunParams {
        max_word_length: common.max_word_length,
        iterations: common.iterations,
        maxpow: common.maxpow,
        out_dir: common.out,
        cache_dir,
    };
    run_command(cmd, &cfg, &params).map(|o| o.stdout)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, common) = split(cli.command);
    match run(cmd, common) {
        Ok(stdout) => {
            print!("{}", stdout);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.error_record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
