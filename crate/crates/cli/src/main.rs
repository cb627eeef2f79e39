//! `fadecap`: batch front-end. Reads a TOML experiment config, writes a CSV table.

mod commands;
mod config;
mod error;
mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use config::{CurveConfig, OffsetsConfig, PallocConfig, PrecodeConfig, RunSpec, StcodeConfig};
use error::{CliError, Result, EXIT_FLAGGED, EXIT_OK};
use output::Output;

#[derive(Debug, Parser)]
#[command(name = "fadecap", version, about = "Finite-constellation capacity, MMSE and error probability of MIMO fading channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo curve with averaged bounds and high-snr expansions.
    Curve(RunArgs),
    /// SNR offsets of the bound expansions per system.
    Offsets(RunArgs),
    /// Power allocation over parallel subchannels.
    Palloc(RunArgs),
    /// Linear precoder design.
    Precode(RunArgs),
    /// Space-time code ranking.
    Stcode(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// RNG seed; mandatory for Monte Carlo commands.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker cap. Results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Curve(_) => "curve",
            Command::Offsets(_) => "offsets",
            Command::Palloc(_) => "palloc",
            Command::Precode(_) => "precode",
            Command::Stcode(_) => "stcode",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Curve(a) | Command::Offsets(a) | Command::Palloc(a) | Command::Precode(a) | Command::Stcode(a) => a,
        }
    }
}

fn set_threads(threads: Option<usize>) -> Result<()> {
    match threads {
        None => Ok(()),
        Some(0) => Err(CliError::config("threads", "must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::config("threads", e)),
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn write_output(out: &Output, path: Option<&Path>, meta: &[(&str, String)]) -> Result<()> {
    let mut buf = Vec::new();
    out.write_csv(&mut buf, meta).expect("writing to memory");
    let (name, res) = match path {
        Some(p) => (p.display().to_string(), std::fs::write(p, &buf)),
        None => ("stdout".to_string(), std::io::stdout().lock().write_all(&buf)),
    };
    res.map_err(|source| CliError::Io { path: name, source })
}

fn run(cmd: &Command) -> Result<i32> {
    let args = cmd.args();
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::config("--config", format!("cannot read {}: {e}", args.config.display())))?;
    let digest = hex(&Sha256::digest(text.as_bytes()));

    // Parse first so that config errors surface before any computation.
    enum Parsed {
        Curve(CurveConfig),
        Offsets(OffsetsConfig),
        Palloc(PallocConfig),
        Precode(PrecodeConfig),
        Stcode(StcodeConfig),
    }
    let parsed = match cmd {
        Command::Curve(_) => Parsed::Curve(config::parse(&text)?),
        Command::Offsets(_) => Parsed::Offsets(config::parse(&text)?),
        Command::Palloc(_) => Parsed::Palloc(config::parse(&text)?),
        Command::Precode(_) => Parsed::Precode(config::parse(&text)?),
        Command::Stcode(_) => Parsed::Stcode(config::parse(&text)?),
    };
    let run_spec: &RunSpec = match &parsed {
        Parsed::Curve(c) => &c.run,
        Parsed::Offsets(c) => &c.run,
        Parsed::Palloc(c) => &c.run,
        Parsed::Precode(c) => &c.run,
        Parsed::Stcode(c) => &c.run,
    };
    let out_path = args.out.clone().or_else(|| run_spec.out.clone());
    set_threads(args.threads.or(run_spec.threads))?;

    let name = cmd.name();
    let output = match &parsed {
        Parsed::Curve(c) => commands::curve::run(c, config::seed_for(args.seed, name)?)?,
        Parsed::Offsets(c) => commands::offsets::run(c, config::seed_for(args.seed, name)?)?,
        Parsed::Palloc(c) => commands::palloc::run(c, config::seed_for(args.seed, name)?)?,
        Parsed::Precode(c) => commands::precode::run(c, config::seed_for(args.seed, name)?)?,
        Parsed::Stcode(c) => commands::stcode::run(c, args.seed)?,
    };

    let seed = args.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
    let meta = [
        ("tool", format!("fadecap {}", env!("CARGO_PKG_VERSION"))),
        ("command", name.to_string()),
        ("seed", seed),
        ("config_sha256", digest),
    ];
    write_output(&output, out_path.as_deref(), &meta)?;
    for line in &output.report {
        eprintln!("{line}");
    }
    Ok(if output.flagged { EXIT_FLAGGED } else { EXIT_OK })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("fadecap {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
