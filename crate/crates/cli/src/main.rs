mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = match cli.command {
        Command::ExpandSymbolic(a) => commands::expand_symbolic(a),
        Command::Expand(a) => commands::expand(a),
        Command::ExponentialDemo(a) => commands::exponential_demo(a),
        Command::BinomialDemo(a) => commands::binomial_demo(a),
        Command::OuDemo(a) => commands::ou_demo(a),
        Command::KsFigure(a) => commands::ks_figure(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
