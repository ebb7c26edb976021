//! `mukai-kit`: command-line front end for the Mukai lattice toolkit.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use config::{Format, JobConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0:#}")]
    BadInput(anyhow::Error),
    /// A typed failure from the core library; the variant name is kept for the message.
    #[error("{message}")]
    Core { variant: String, message: String },
    #[error("{0}")]
    Verification(String),
    #[error("{0:#}")]
    Io(anyhow::Error),
}

impl CliError {
    pub fn core(e: mukai_core::Error) -> Self {
        CliError::Core {
            variant: format!("{e:?}"),
            message: e.to_string(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            _ => 2,
        }
    }

    fn tag(&self) -> String {
        match self {
            CliError::BadInput(_) => "BadInput".into(),
            CliError::Core { variant, .. } => variant.clone(),
            CliError::Verification(_) => "Verification".into(),
            CliError::Io(_) => "Io".into(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "mukai-kit",
    version,
    about = "Walls, periods, cusps and charges for Mukai lattices"
)]
struct Cli {
    /// JSON job file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    job: JobConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Signature, determinant and discriminant group.
    Lattice,
    /// Roots (δ² = -2) in a coordinate box.
    Roots,
    /// Walls meeting a box in the tube chart.
    Walls,
    /// Census of isotropic classes up to the generated group.
    Cusps,
    /// Geodesic sampling with a built-in ODE cross-check.
    Geodesic,
    /// Factor a rotating charge path through the lifted GL2 action.
    Factor,
    /// Large-volume threshold n0 with brute-force confirmation.
    Threshold,
    /// Linear degeneration ray toward the cusp, with wall events.
    Degenerate,
    /// Boundary β for a root C and level k.
    BetaSearch,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Lattice => "lattice",
            Command::Roots => "roots",
            Command::Walls => "walls",
            Command::Cusps => "cusps",
            Command::Geodesic => "geodesic",
            Command::Factor => "factor",
            Command::Threshold => "threshold",
            Command::Degenerate => "degenerate",
            Command::BetaSearch => "beta-search",
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Ok(n) = std::env::var("MUKAI_KIT_THREADS") {
        let n: usize = n.parse().map_err(|_| {
            CliError::BadInput(anyhow::anyhow!(
                "MUKAI_KIT_THREADS must be a positive integer, got `{n}`"
            ))
        })?;
        // a second initialization only happens in tests; ignore it
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cfg = JobConfig::merged(cli.config.as_deref(), &cli.job)?;
    let name = cli.command.name();
    let outcome = match cli.command {
        Command::Lattice => commands::lattice(&cfg),
        Command::Roots => commands::roots(&cfg),
        Command::Walls => commands::walls(&cfg),
        Command::Cusps => commands::cusps(&cfg),
        Command::Geodesic => commands::geodesic(&cfg),
        Command::Factor => commands::factor(&cfg),
        Command::Threshold => commands::threshold(&cfg),
        Command::Degenerate => commands::degenerate(&cfg),
        Command::BetaSearch => commands::beta_search(&cfg),
    }?;
    let text = outcome
        .artifact
        .render(cfg.format.unwrap_or(Format::Json), &cfg.canonical(name), name)?;
    match &cfg.out {
        Some(p) => output::write_atomic(p.as_ref(), &text)?,
        None => print!("{text}"),
    }
    eprintln!("{name}: {}", outcome.summary);
    if outcome.verified {
        Ok(())
    } else {
        Err(CliError::Verification(format!("{name}: built-in verification failed")))
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.tag());
            ExitCode::from(e.exit_code())
        }
    }
}
