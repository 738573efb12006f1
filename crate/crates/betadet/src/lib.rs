//! Command-line driver for `betadet-core`: file formats, parallel Monte
//! Carlo and the verification suite.

pub mod cli;
pub mod commands;
pub mod error;
pub mod io;
pub mod mc;
pub mod verify;

use cli::{Cli, Command};
use error::CliResult;

pub fn dispatch(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Sample(a) => commands::cmd_sample(a),
        Command::Moments(a) => commands::cmd_moments(a),
        Command::Rate(a) => commands::cmd_rate(a),
        Command::Spectral(a) => commands::cmd_spectral(a),
        Command::Verify(a) => commands::cmd_verify(a),
    }
}
