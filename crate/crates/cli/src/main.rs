use std::process::ExitCode;

use clap::Parser;
use copent::cli::Cli;
use copent::config::SEED_ENV;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match copent::commands::run(cli.command, env_seed.as_deref(), &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("copent: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
