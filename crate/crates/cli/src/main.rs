mod commands;
mod config;
mod failure;
mod render;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use config::{parse_config, Cli, RunConfig};
use failure::Failure;

fn execute(cfg: &RunConfig) -> Result<(), Failure> {
    let rendered = commands::run(cfg)?;
    match &cfg.output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::io(format!("cannot create {}: {e}", path.display())))?;
            let mut out = BufWriter::new(file);
            rendered.write(cfg.format, &mut out)?;
            out.flush()
                .map_err(|e| Failure::io(format!("write failed: {e}")))
        }
        None => {
            let mut out = io::stdout().lock();
            rendered.write(cfg.format, &mut out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match parse_config(cli).and_then(|cfg| execute(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{failure}");
            ExitCode::from(failure.code())
        }
    }
}
