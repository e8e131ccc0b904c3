mod args;
mod commands;
mod input;
mod output;

use std::io::ErrorKind;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// A usage, input or I/O error; reported on stderr with exit status 2.
/// A closed output pipe ends the program quietly instead.
#[derive(Debug)]
pub struct Failure {
    msg: String,
    broken_pipe: bool,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self {
            msg: msg.into(),
            broken_pipe: false,
        }
    }
}

impl From<kcenter::Error> for Failure {
    fn from(e: kcenter::Error) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            broken_pipe: e.kind() == ErrorKind::BrokenPipe,
            msg: e.to_string(),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        let broken_pipe = matches!(e.kind(), csv::ErrorKind::Io(io) if io.kind() == ErrorKind::BrokenPipe);
        Self {
            msg: e.to_string(),
            broken_pipe,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eigen(a) => commands::eigen(a),
        Command::Verify(a) => commands::verify(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Kpca(a) => commands::kpca(a),
        Command::Keca(a) => commands::keca(a),
        Command::Mds(a) => commands::mds(a),
        Command::BananaGen(a) => commands::banana_gen(a),
    };
    result.unwrap_or_else(|f| {
        if f.broken_pipe {
            return ExitCode::SUCCESS;
        }
        eprintln!("error: {}", f.msg);
        ExitCode::from(2)
    })
}
