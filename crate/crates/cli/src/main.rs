use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use specsemi::commands::{self, Command};
use specsemi::suites::Suite;

/// Kernel tables, evolutions, maximal-function probes and verification
/// reports for discrete diffusion semigroups.
#[derive(Parser, Debug)]
#[command(name = "specsemi", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON run config (see configs/schema.json).
    #[arg(long)]
    config: PathBuf,
    /// Suite for `verify`.
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(specsemi::exit::CONFIG as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let result = specsemi::init_threads()
        .and_then(|()| commands::run(cli.command, &cli.config, cli.suite, cli.out.as_deref()));
    match result {
        Ok(outcome) => {
            for f in &outcome.files {
                eprintln!("wrote {}", f.display());
            }
            println!("{}", outcome.message);
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("specsemi: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
