use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use commands::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "rsdmap",
    version,
    about = "Optimize fermion-to-qubit mappings by randomized subsystem descent"
)]
struct Cli {
    /// Cap on worker threads (defaults to all cores).
    #[arg(long, global = true, env = "RSDMAP_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a benchmark fermionic Hamiltonian as an interchange file.
    Build(BuildArgs),
    /// Map a fermionic interchange file to a qubit Hamiltonian.
    Map(MapArgs),
    /// Run randomized subsystem descent on a qubit Hamiltonian.
    Optimize(OptimizeArgs),
    /// Report PW, wPW, term count and average PW of a qubit Hamiltonian.
    Metrics(MetricsArgs),
    /// Percentage reduction of one qubit Hamiltonian against a reference.
    Compare(CompareArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Chain,
    Alltoall,
    Grid,
    Hubbard,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Open,
    Periodic,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MapperArg {
    Jw,
    Bk,
    Ternary,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CostArg {
    Pw,
    Wpw,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    Hamming,
    Uniform,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    /// Chain length, or grid side length.
    #[arg(long)]
    pub sites: usize,
    /// Hopping range (chain only).
    #[arg(long, default_value_t = 1)]
    pub range: usize,
    /// Hubbard hopping amplitude.
    #[arg(long = "t", default_value_t = 1.0)]
    pub t_hop: f64,
    /// Hubbard on-site interaction.
    #[arg(long = "u", default_value_t = 4.0)]
    pub u_int: f64,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Open)]
    pub boundary: BoundaryArg,
    /// Output path; stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MapArgs {
    /// Fermionic interchange file.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = MapperArg::Jw)]
    pub mapper: MapperArg,
    /// Output path; stdout when omitted (metrics then go to stderr).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    /// Qubit Hamiltonian file.
    pub input: PathBuf,
    /// Optimized Hamiltonian path. Sibling files `<stem>.gates.txt`,
    /// `<stem>.trajectory.csv` and `<stem>.manifest.json` are written too.
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long)]
    pub gates: Option<PathBuf>,
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Subsystem width k.
    #[arg(long, default_value_t = 4)]
    pub width: usize,
    /// Maximum gates per subsystem solve.
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    /// Number of iterations T.
    #[arg(long, default_value_t = 2000)]
    pub iters: usize,
    #[arg(long, value_enum, default_value_t = CostArg::Pw)]
    pub cost: CostArg,
    #[arg(long, value_enum, default_value_t = SamplerArg::Hamming)]
    pub sampler: SamplerArg,
    /// Smoothing constant of the Hamming sampler.
    #[arg(long, default_value_t = rsd_core::rsd::DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// RNG seed; drawn from the OS and recorded when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Stop after this many consecutive rejected iterations.
    #[arg(long)]
    pub patience: Option<usize>,
    /// Enable the solver's transposition table.
    #[arg(long)]
    pub transposition_table: bool,
    /// Disable reuse of solver results across identical subsystem views.
    #[arg(long)]
    pub no_solve_cache: bool,
}

#[derive(Args, Debug)]
pub struct MetricsArgs {
    pub input: PathBuf,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Candidate (e.g. optimized) Hamiltonian.
    pub candidate: PathBuf,
    /// Reference Hamiltonian.
    pub reference: PathBuf,
    #[arg(long)]
    pub json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Build(a) => commands::build(&a),
        Command::Map(a) => commands::map(&a),
        Command::Optimize(a) => commands::optimize(&a),
        Command::Metrics(a) => commands::metrics(&a),
        Command::Compare(a) => commands::compare(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl From<rsd_core::Error> for CliError {
    fn from(e: rsd_core::Error) -> Self {
        CliError::Core(e)
    }
}
