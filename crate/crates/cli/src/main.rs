//! `linv`: p-adic L-invariants and exceptional-zero checks from the shell.

mod cache;
mod commands;
mod config;
mod curves;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use linv_core::parallel::Exec;

use cache::Cache;
use commands::{Command, Runner};
use config::{Format, RunConfig};
use output::{envelope, error_report, render, Provenance};

#[derive(Debug, Parser)]
#[command(name = "linv", version, about = "p-adic L-invariants, Mazur-Tate measures and exceptional-zero checks")]
struct Cli {
    /// Directory for the versioned caches and the imported curve table.
    #[arg(long, global = true, env = "LINV_CACHE_DIR", default_value = ".linv-cache")]
    cache_dir: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Omit the version and timestamp block.
    #[arg(long, global = true)]
    no_meta: bool,
    /// Use the dual convention sigma_a <-> a^-1.
    #[arg(long, global = true)]
    dual: bool,
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 3,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let parallel = !cli.sequential && Exec::is_parallel_available();
    let base = RunConfig::new(cli.command.name(), cli.cache_dir.clone(), cli.format, cli.dual, parallel);
    let mut cache = Cache::new(&cli.cache_dir);
    let outcome = Runner { cache: &mut cache, base }.run(&cli.command);
    match outcome {
        Ok(out) => {
            let provenance = Provenance {
                precision: out.config.precision,
                precision_achieved: out.achieved,
                depth: out.config.depth,
                cache: cache.stats.clone(),
                parallel,
            };
            let report = envelope(&out.config, out.result, out.conventions, provenance, !cli.no_meta);
            emit(&render(&report, cli.format));
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("linv: {err}");
            if cli.format == Format::Json {
                emit(&render(&error_report(cli.command.name(), &err), Format::Json));
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

/// A closed pipe (`linv ... | head`) is not an error worth a panic.
fn emit(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}
