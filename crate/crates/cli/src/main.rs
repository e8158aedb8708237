mod args;
mod commands;
mod config;
mod error;

use std::io::Write;

use clap::Parser;

use args::{Cli, Command};
use commands::Ctx;
use config::FileConfig;
use error::{CliError, CliResult};

fn run(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let deg = cli.deg || file.deg == Some(true);
    let ctx = Ctx { file, deg };
    let text = match &cli.command {
        Command::Correlate(a) => commands::correlate(&ctx, a)?,
        Command::Ubi(a) => commands::ubi(&ctx, a)?,
        Command::Scan(a) => commands::scan(&ctx, a)?,
        Command::MaxViolation(a) => commands::max_violation(&ctx, a)?,
        Command::Lhv(a) => commands::lhv(&ctx, a)?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            // a closed pipe is not worth an error exit
            let _ = out.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("bellcat: {e}");
        std::process::exit(e.exit_code());
    }
}
