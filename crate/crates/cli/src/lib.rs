//! Command-line front end: argument model, instance loading and report output.

use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use crich::counterexample::SnotcrError;
use crich::jcr::{self, JcrError};
use crich::largeness;
use crich::product::ProductError;
use crich::ramsey::RamseyError;
use crich::PsgError;
use thiserror::Error;

mod commands;
pub mod instance;
pub mod report;

pub use instance::{load_instance_file, parse_instance, InstanceError, InstanceFile};
pub use report::Record;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "crich",
    version,
    about = "Bounded searches and certificates for partial semigroups"
)]
pub struct Cli {
    /// Emit one `key=value` record per line.
    #[arg(long, global = true)]
    pub machine: bool,
    /// Instance description file.
    #[arg(long, global = true)]
    pub instance: Option<PathBuf>,
    /// Worker threads (0 or unset: one per core).
    #[arg(long, global = true, env = "CRICH_JOBS")]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Largeness checks (thick, syndetic, ps, cps, ipr, iprstar).
    Check(CheckArgs),
    /// k-CR radius of a pool.
    Cr(CrArgs),
    /// Uniform-index radius and the witnesses built from it.
    Dagger(DaggerArgs),
    /// Single common index for the whole pool.
    Ddagger(DdaggerArgs),
    /// Finite-unions Ramsey number with a good-coloring certificate.
    Ramsey(RamseyArgs),
    /// Truncated ordered-union instance that is not 1-CR.
    Counterexample(CounterexampleArgs),
    /// CR witness assembly in a product of two instances.
    Product(ProductArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotionArg {
    Thick,
    Syndetic,
    Ps,
    Cps,
    Ipr,
    Iprstar,
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    pub notion: Vec<NotionArg>,
    #[arg(long)]
    pub set: String,
    #[arg(long, default_value_t = largeness::DEFAULT_B)]
    pub b: usize,
    #[arg(long, default_value_t = largeness::DEFAULT_G)]
    pub g: usize,
    #[arg(long, default_value_t = largeness::DEFAULT_H)]
    pub h: usize,
    /// Bound on `|T|` for cps.
    #[arg(long, default_value_t = largeness::DEFAULT_T)]
    pub t: usize,
    #[arg(long, default_value_t = 3)]
    pub r: usize,
}

#[derive(Args, Debug, Clone)]
pub struct CrArgs {
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long = "L")]
    pub l: String,
    #[arg(long)]
    pub pool: String,
    /// Target set `A`; the whole universe when omitted.
    #[arg(long)]
    pub set: Option<String>,
    #[arg(long, default_value_t = jcr::DEFAULT_M_MAX)]
    pub mmax: usize,
    #[arg(long, default_value_t = jcr::DEFAULT_R_MAX)]
    pub rmax: usize,
}

#[derive(Args, Debug, Clone)]
pub struct DaggerArgs {
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long = "L")]
    pub l: String,
    #[arg(long)]
    pub pool: String,
    #[arg(long, default_value_t = jcr::DEFAULT_R_MAX)]
    pub rmax: usize,
}

#[derive(Args, Debug, Clone)]
pub struct DdaggerArgs {
    #[arg(long = "L")]
    pub l: String,
    #[arg(long)]
    pub pool: String,
    #[arg(long, default_value_t = jcr::DEFAULT_R_MAX)]
    pub rmax: usize,
}

#[derive(Args, Debug, Clone)]
pub struct RamseyArgs {
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub k: u8,
    #[arg(long, default_value_t = 6)]
    pub rmax: usize,
    /// Writes the largest good coloring found, one `subset:color` line per cell.
    #[arg(long)]
    pub emit_certificate: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CounterexampleArgs {
    #[arg(long = "T", default_value_t = 6)]
    pub t: usize,
    #[arg(long, default_value_t = jcr::DEFAULT_M_MAX)]
    pub mmax: usize,
}

#[derive(Args, Debug, Clone)]
pub struct ProductArgs {
    #[arg(long)]
    pub left: PathBuf,
    #[arg(long)]
    pub right: PathBuf,
    #[arg(long = "A")]
    pub a: String,
    #[arg(long = "B")]
    pub b: String,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Set name declared in both files; the product uses `L_left × L_right`.
    #[arg(long = "L")]
    pub l: String,
    /// Pool name declared in both files; members are paired by position.
    #[arg(long)]
    pub pool: String,
    #[arg(long, default_value_t = jcr::DEFAULT_M_MAX)]
    pub mmax: usize,
    #[arg(long, default_value_t = jcr::DEFAULT_R_MAX)]
    pub rmax: usize,
    #[arg(long, default_value_t = 6)]
    pub qmax: usize,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("--instance is required for `{0}`")]
    MissingInstance(&'static str),
    #[error("unknown set `{0}`")]
    UnknownSet(String),
    #[error("unknown pool `{0}`")]
    UnknownPool(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Psg(#[from] PsgError),
    #[error(transparent)]
    Jcr(#[from] JcrError),
    #[error(transparent)]
    Ramsey(#[from] RamseyError),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Counterexample(#[from] SnotcrError),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Runs `cli` on a worker pool of the configured size and writes its records to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))?;
    let mut buf = Vec::new();
    let res = pool.install(|| commands::dispatch(cli, &mut buf));
    out.write_all(&buf)?;
    res
}

/// Parses `args` (program name first) and runs them.
pub fn run_args<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run(&cli, out)
}
