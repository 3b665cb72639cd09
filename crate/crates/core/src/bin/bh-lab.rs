use bh_lab::harness::{self, Command, RunOptions, EXIT_CONFIG};
use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

/// Numerical checks of weighted Bohnenblust-Hille type inequalities.
#[derive(Parser, Debug)]
#[command(name = "bh-lab", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: the config's `out`, else ./bh-lab-out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit 0 only if at least one violation is found.
    #[arg(long)]
    expect_violations: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { 0 });
        }
    };
    if let Err(e) = harness::init_thread_pool() {
        eprintln!("bh-lab: {e}");
        return ExitCode::from(e.exit_code());
    }
    let opts = RunOptions {
        command: cli.command,
        config: cli.config,
        seed: cli.seed,
        out: cli.out,
        expect_violations: cli.expect_violations,
    };
    match harness::run(&opts) {
        Ok(summary) => {
            println!(
                "{}: {} records, {} violations",
                cli.command.as_str(),
                summary.records,
                summary.violations
            );
            for (verdict, n) in &summary.verdicts {
                println!("  {verdict}: {n}");
            }
            for f in &summary.files {
                println!("  wrote {}", f.display());
            }
            ExitCode::from(summary.exit_code(opts.expect_violations))
        }
        Err(e) => {
            eprintln!("bh-lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
