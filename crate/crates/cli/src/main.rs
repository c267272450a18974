mod args;
mod commands;
mod config;
mod output;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::Params;
use config::parse_config;

enum Failure {
    Usage(String),
    Domain(collapse_core::Error),
    Io(String),
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = parse_config(cli).map_err(Failure::Usage)?;
    let params = Params::parse(cfg.command, cfg.params).map_err(Failure::Usage)?;
    let work = || params.run(cfg.seed);
    let report = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
    .map_err(Failure::Domain)?;
    let bytes = output::render(cfg.command, cfg.seed, params.echo(), report, cfg.format).map_err(Failure::Io)?;
    match &cfg.output {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": { "kind": kind, "message": message } }).to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("{}", error_json(e.kind(), &e.to_string()));
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("{}", error_json("io", &msg));
            ExitCode::from(1)
        }
    }
}
