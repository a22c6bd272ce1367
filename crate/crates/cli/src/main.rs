//! `dgc`: validate and compute with `.dgc` model files.

mod commands;
mod output;

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "dgc", version, about = "Twisted complexes over DGAs, computed exactly")]
struct Cli {
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Z,
    Q,
    /// Integer kernels closed under division (criterion only).
    Saturated,
}

fn parse_degrees(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got `{s}`"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad lower bound `{a}`"))?;
    let b = b.trim().trim_start_matches('=');
    let b: i64 = b.parse().map_err(|_| format!("bad upper bound `{b}`"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every validator on every object in the file.
    Validate {
        /// Model file (.dgc).
        file: PathBuf,
    },
    /// Homology of a complex over a degree window.
    Homology {
        file: PathBuf,
        #[arg(long)]
        complex: String,
        #[arg(long, value_parser = parse_degrees)]
        degrees: RangeInclusive<i64>,
        #[arg(long, value_enum, default_value = "z")]
        mode: Mode,
    },
    /// A page of the spectral sequence of the generator-degree filtration.
    Ss {
        file: PathBuf,
        #[arg(long)]
        complex: String,
        #[arg(long)]
        page: usize,
        /// Total degrees; defaults to the full window the complex spans.
        #[arg(long, value_parser = parse_degrees)]
        degrees: Option<RangeInclusive<i64>>,
    },
    /// Check, apply or push a continuation map to homology.
    #[command(group(ArgGroup::new("action").required(true).args(["check", "apply", "induced"])))]
    Map {
        file: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long)]
        check: bool,
        /// Chain in the source, e.g. `t@m - 1@M`.
        #[arg(long, value_name = "CHAIN")]
        apply: Option<String>,
        #[arg(long)]
        induced: bool,
        #[arg(long, value_parser = parse_degrees, required_if_eq("induced", "true"))]
        degrees: Option<RangeInclusive<i64>>,
    },
    /// Check a homotopy between two continuation maps.
    Homotopy {
        file: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long, required = true)]
        check: bool,
    },
    /// Decide `ker A ⊄ ker B` for the maps two continuations induce on homology.
    Criterion {
        file: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, value_parser = parse_degrees)]
        degrees: RangeInclusive<i64>,
        #[arg(long, value_enum, default_value = "z")]
        mode: Mode,
    },
    /// Level at which a cycle below `--level` first becomes a boundary.
    SpectralInvariant {
        file: PathBuf,
        #[arg(long)]
        complex: String,
        #[arg(long, value_name = "CHAIN")]
        class: String,
        #[arg(long)]
        level: String,
        #[arg(long, value_enum, default_value = "z")]
        mode: Mode,
    },
}

impl Command {
    fn file(&self) -> &PathBuf {
        match self {
            Command::Validate { file }
            | Command::Homology { file, .. }
            | Command::Ss { file, .. }
            | Command::Map { file, .. }
            | Command::Homotopy { file, .. }
            | Command::Criterion { file, .. }
            | Command::SpectralInvariant { file, .. } => file,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command.file(), &cli.command) {
        Ok((tables, ok)) => {
            print!("{}", output::render(&tables, cli.format));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("dgc: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Computation(msg)) => {
            eprintln!("dgc: {msg}");
            ExitCode::from(1)
        }
    }
}
