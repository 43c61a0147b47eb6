mod commands;
mod config;
mod error;

use std::io::Write as _;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use commands::Session;
use config::{Cli, Command, Format, RunConfig};
use error::CliError;

pub const SCHEMA: &str = "latcoh/v1";

fn run(cli: Cli) -> Result<(RunConfig, commands::Output), CliError> {
    let (name, common, center) = match &cli.command {
        Command::Invariants(c) => ("invariants", c, None),
        Command::Homology(c) => ("homology", c, None),
        Command::Root(c) => ("root", c, None),
        Command::Specseq(c) => ("specseq", c, None),
        Command::Series(c) => ("series", c, None),
        Command::Reduce(c) => ("reduce", c, None),
        Command::Blowup(b) => ("blowup", &b.common, Some(b.center.as_str())),
        Command::Verify(c) => ("verify", c, None),
    };
    let mut cfg = RunConfig::resolve(name, common, center)?;
    if cfg.jobs > 0 {
        // fails only if a pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build_global();
    }
    if let Some(c) = center {
        let out = commands::blowup(&cfg, c)?;
        return Ok((cfg, out));
    }
    let session = Session::load(&mut cfg)?;
    let out = match name {
        "invariants" => commands::invariants(&cfg, &session)?,
        "homology" => commands::homology(&cfg, &session)?,
        "root" => commands::root(&cfg, &session)?,
        "specseq" => commands::specseq(&cfg, &session)?,
        "series" => commands::series(&cfg, &session)?,
        "reduce" => commands::reduce(&cfg, &session)?,
        "verify" => commands::verify_cmd(&cfg, &session)?,
        _ => unreachable!("every subcommand is dispatched"),
    };
    Ok((cfg, out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((cfg, out)) => {
            let body = match cfg.format {
                Format::Json => {
                    let doc = json!({
                        "schema": SCHEMA,
                        "command": cfg.command,
                        "config": cfg,
                        "result": out.result,
                    });
                    let mut t = serde_json::to_string_pretty(&doc).expect("output serializes");
                    t.push('\n');
                    t
                }
                Format::Dot => match out.dot {
                    Some(d) => d,
                    None => {
                        eprintln!("error: {} has no DOT output", cfg.command);
                        return ExitCode::from(2);
                    }
                },
                Format::Text => out.text,
            };
            // a closed pipe downstream is not an error
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
