mod commands;
mod config;

use clap::Parser;
use std::io::Write;
use std::process::ExitCode;

use config::{Cli, CliConfig};
use fock_sharp::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match CliConfig::resolve(cli.command, cli.flags) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let out = match commands::run(&cfg) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Domain(_) | Error::InvalidConfig(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            };
            return ExitCode::from(code);
        }
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &out.document),
        None => std::io::stdout().write_all(out.document.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_FAILURE);
    }
    eprintln!("{}", out.summary);
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILURE)
    }
}
