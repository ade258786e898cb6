// SPDX-License-Identifier: MIT OR Apache-2.0

//! `agehopf` command-line tool.

mod args;
mod commands;
mod config;
mod exit;
mod output;
mod validate;

use clap::Parser;

use args::{Cli, Command};

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Hopf(a) => commands::hopf(a),
        Command::NormalForm(a) => commands::normal_form(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::ReproduceFigure1(a) => commands::reproduce_figure1(a),
        Command::Validate(a) => validate::validate(a),
    };
    if let Err(err) = outcome {
        eprintln!("error: {err:#}");
        std::process::exit(exit::code_of_any(&err));
    }
}
