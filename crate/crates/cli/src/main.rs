//! `alphastab`: stability analyses of alpha-Euler steady states from a TOML config.
//!
//! ```text
//! alphastab example funstable > funstable.toml
//! alphastab validate funstable.toml
//! alphastab analyze funstable.toml --out results --jobs 4
//! ```
//!
//! Exit status: 0 on success, 1 when an analysis failed (details as JSON on
//! stderr and in `report.json`), 2 for an unreadable or invalid config.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use alphastab_cli::examples::{example, NAMES};
use alphastab_cli::{run, AnalysisConfig, RunOptions};
use clap::{Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "alphastab", version, about = "Stability analysis of 2D alpha-Euler steady states")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the analyses of a config and write reports.
    Analyze {
        config: PathBuf,
        /// Output directory (overrides `output.directory`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for the modal scans.
        #[arg(long)]
        jobs: Option<usize>,
        /// Random seed (overrides `seed`).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Parse and check a config without running it.
    Validate { config: PathBuf },
    /// Print a built-in example config.
    Example {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(NAMES))]
        name: String,
    },
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("{}", json!({ "error": { "kind": "config", "message": msg.to_string() } }));
    ExitCode::from(2)
}

fn load(path: &Path) -> Result<AnalysisConfig, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
    AnalysisConfig::parse(&text).map_err(config_error)
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Example { name } => {
            print!("{}", example(&name).expect("name checked by clap"));
            ExitCode::SUCCESS
        }
        Cmd::Validate { config } => match load(&config) {
            Ok(_) => {
                println!("{}: ok", config.display());
                ExitCode::SUCCESS
            }
            Err(code) => code,
        },
        Cmd::Analyze { config, out, jobs, seed } => {
            let cfg = match load(&config) {
                Ok(c) => c,
                Err(code) => return code,
            };
            if let Some(n) = jobs {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    eprintln!("{}", json!({ "error": { "kind": "threads", "message": e.to_string() } }));
                    return ExitCode::from(1);
                }
            }
            let base_dir = config.parent().map(Path::to_path_buf).unwrap_or_default();
            let opts = RunOptions { out, seed, base_dir };
            match run(&cfg, &opts) {
                Ok(report) => {
                    let root = alphastab_cli::run::output_root(&cfg, &opts);
                    println!("wrote {} artifact(s) to {}", report.artifacts.len(), root.display());
                    if report.ok() {
                        ExitCode::SUCCESS
                    } else {
                        eprintln!("{}", json!({ "errors": report.errors }));
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("{}", json!({ "error": { "kind": "run", "message": e.to_string() } }));
                    ExitCode::from(1)
                }
            }
        }
    }
}
