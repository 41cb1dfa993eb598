mod args;
mod commands;
mod manifest;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use manifest::RunManifest;

const EXIT_VERIFICATION: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_BAD_FLAGS: u8 = 4;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_BAD_FLAGS),
            };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFICATION),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    use spinelab::Error;
    match e.downcast_ref::<Error>() {
        Some(Error::Budget { .. }) => EXIT_BUDGET,
        Some(Error::Unsupported(_) | Error::Invalid(_) | Error::Graph(_) | Error::Gamma(_)) => EXIT_BAD_FLAGS,
        _ => 1,
    }
}

/// Returns whether every check in the output passed.
fn run(cli: &Cli) -> Result<bool> {
    if let Some(t) = cli.global.threads {
        if t == 0 {
            return Err(spinelab::Error::Invalid("--threads must be positive".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Enumerate(a) => commands::enumerate(&cli.global, a)?,
        Command::Homology(a) => commands::homology(&cli.global, a)?,
        Command::StabMap(a) => commands::stab_map(&cli.global, a)?,
        Command::Verify(a) => commands::verify(a)?,
        Command::DeltaCheck(a) => commands::delta_check(a)?,
    };
    let mut output = Vec::new();
    for r in &outcome.records {
        serde_json::to_writer(&mut output, r)?;
        output.push(b'\n');
    }
    match &cli.global.out {
        Some(path) => std::fs::write(path, &output).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(&output)?,
    }
    let manifest = RunManifest {
        command: cli.command.name().to_string(),
        parameters: serde_json::json!({ "global": &cli.global, "command": &cli.command }),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cli.command.seed(),
        elapsed_ms: start.elapsed().as_millis(),
        cache_hits: outcome.cache_hits,
        records: outcome.records.len(),
        result_digest: manifest::digest(&output),
    };
    eprintln!("{}", serde_json::to_string(&manifest)?);
    Ok(!outcome.failed)
}
