use betadet::cli::Cli;
use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    betadet::mc::init_threads();
    match betadet::dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("betadet: {e}");
            e.to_exit()
        }
    }
}
