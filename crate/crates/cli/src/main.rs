use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod output;
mod setup;

use output::Format;
use setup::{KeepArgs, SystemArgs, TensorArgs};

/// Exact polyhedral computations for boxworld-type probabilistic theories.
///
/// Rational arguments are written exactly (`1/2`, `-3/8`, `1`); decimals are
/// rejected. Exit status 0 means the headline result of a command holds, 3
/// means it does not, 1 reports an error.
#[derive(Parser, Debug)]
#[command(name = "boxworld", version, about)]
struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    /// Write the report to this file instead of standard output
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for parallel searches (defaults to all cores)
    #[arg(long, env = "BOXWORLD_THREADS", global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Joint states and effect rays of a tensor product
    Vertices(TensorArgs),
    /// Maximal CHSH value by exhaustive search, compared with the closed form
    Chsh(TensorArgs),
    /// Maximal CHSH value over a rational grid of transition parameters
    Surface(SurfaceArgs),
    /// Entanglement swapping on the restricted tensor product
    Swap(SwapArgs),
    /// Search for a weak self-duality certificate
    Selfdual(SelfdualArgs),
    /// Behavior of a joint state under binary fiducial measurements
    Behavior(BehaviorArgs),
    /// Check a behavior file for signalling
    CheckNosignalling(FileArgs),
    /// Check whether a behavior file admits a local model
    CheckLocal(FileArgs),
}

#[derive(Args, Debug)]
struct SurfaceArgs {
    /// Grid resolution N; x runs over i/N and y over the admissible j/N
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(2..))]
    grid: u32,
}

#[derive(Args, Debug)]
struct SwapArgs {
    #[command(flatten)]
    system: SystemArgs,

    #[command(flatten)]
    keep: KeepArgs,

    /// Collapse every combination of kept states and entangled effects
    #[arg(long, conflicts_with_all = ["ab", "cd", "effect"])]
    scan: bool,

    /// Label of the AB state for a single collapse
    #[arg(long, requires_all = ["cd", "effect"])]
    ab: Option<usize>,

    /// Label of the CD state for a single collapse
    #[arg(long)]
    cd: Option<usize>,

    /// Label of the entangled BD effect for a single collapse
    #[arg(long)]
    effect: Option<usize>,
}

#[derive(Args, Debug)]
struct SelfdualArgs {
    /// Cone to test: a local system or one of its tensor products
    #[arg(long, value_enum, default_value_t = setup::SelfdualTarget::Square)]
    system: setup::SelfdualTarget,

    #[command(flatten)]
    params: setup::ParamArgs,

    #[command(flatten)]
    keep: KeepArgs,

    /// Stop after this many certificates
    #[arg(long, default_value_t = 8)]
    limit: usize,
}

#[derive(Args, Debug)]
struct BehaviorArgs {
    #[command(flatten)]
    tensor: TensorArgs,

    /// Joint state label
    #[arg(long)]
    state: usize,

    /// Alice's effect indices for inputs 0 and 1
    #[arg(long, value_delimiter = ',', num_args = 1, required = true)]
    meas_a: Vec<usize>,

    /// Bob's effect indices for inputs 0 and 1
    #[arg(long, value_delimiter = ',', num_args = 1, required = true)]
    meas_b: Vec<usize>,
}

#[derive(Args, Debug)]
struct FileArgs {
    /// Behavior JSON with a `p` table keyed by input pair
    input: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let out = output::Sink::new(cli.format, cli.output.clone());
    match &cli.command {
        Command::Vertices(args) => commands::vertices::run(args, &out),
        Command::Chsh(args) => commands::chsh::run(args, &out),
        Command::Surface(args) => commands::chsh::surface(args.grid, &out),
        Command::Swap(args) => commands::swap::run(args, &out),
        Command::Selfdual(args) => commands::selfdual::run(args, &out),
        Command::Behavior(args) => commands::behavior::run(args, &out),
        Command::CheckNosignalling(args) => commands::behavior::check_nosignalling(&args.input, &out),
        Command::CheckLocal(args) => commands::behavior::check_local(&args.input, &out),
    }
}
