use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

mod commands;
mod config;

use commands::{run, Report};
use config::{OutputFormat, RunConfig};

fn emit(config: &RunConfig, report: &Report) -> std::io::Result<()> {
    let body = match config.format {
        OutputFormat::Text => report.text.clone(),
        OutputFormat::Json => format!("{}\n", report.json),
    };
    match &config.output {
        Some(path) => std::fs::write(path, body),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match run(&config) {
        Ok(report) => match emit(&config, &report) {
            Ok(()) => ExitCode::from(report.status.exit_code()),
            Err(e) => {
                eprintln!("penner: cannot write output: {e}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("penner: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
