//! `rhg`: lattice inspection, circuit verification and overhead estimates.
//!
//! Exit codes: 0 on success, 1 when a target is rejected or a schedule is
//! infeasible, 2 on input errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "rhg", version, about = "Verify RHG cluster-state circuits and estimate their overhead")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the cell complex of a cuboid lattice.
    Lattice {
        #[command(subcommand)]
        action: LatticeAction,
    },
    /// Check every logical target of a circuit.
    Verify(VerifyArgs),
    /// List or export the bundled circuits.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Price one gate, either at a given schedule or at the optimum.
    Overhead(OverheadArgs),
    /// Optimized overhead over a log-spaced range of circuit sizes, as CSV.
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum LatticeAction {
    /// Cell counts and boundary matrix dimensions.
    Info {
        #[arg(long, num_args = 3, value_names = ["S1", "S2", "S3"], required = true)]
        shape: Vec<usize>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Names of the bundled circuits.
    List,
    /// Print a bundled circuit file.
    Export { name: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Args)]
struct VerifyArgs {
    /// Circuit file to check.
    #[arg(required_unless_present = "catalog", conflicts_with = "catalog")]
    file: Option<PathBuf>,
    /// Check a bundled circuit instead of a file.
    #[arg(long)]
    catalog: Option<String>,
    /// Print the cells of a surface for every accepted target.
    #[arg(long)]
    witness: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Test hook: un-measure the N-th measured cell (1-based) before checking.
    #[arg(long, value_name = "N")]
    corrupt: Option<usize>,
}

#[derive(Args, Clone, Copy)]
struct BoundsArgs {
    #[arg(long, default_value_t = 60)]
    lambda_max: u32,
    #[arg(long, default_value_t = 15)]
    d_max: u32,
    #[arg(long, default_value_t = 3)]
    l_max: usize,
}

#[derive(Args)]
struct ModelArgs {
    /// Use the rebit-encoded T circuit.
    #[arg(long)]
    rebit: bool,
    /// Cost-parameter and budget overrides in `key = value` form.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    bounds: BoundsArgs,
}

#[derive(Args)]
struct OverheadArgs {
    /// cnot, h, s, t, t-rebit or s-magic.
    gate: String,
    /// Number of gates in the computation.
    #[arg(long)]
    omega: f64,
    /// Search for the cheapest schedule.
    #[arg(long, conflicts_with = "schedule", required_unless_present = "schedule")]
    optimize: bool,
    /// Fixed schedule `λ:d,λ:d,...`, one pair per distillation level.
    #[arg(long)]
    schedule: Option<String>,
    /// naive, compact or a `key = value` budget file.
    #[arg(long, default_value = "naive")]
    budgets: String,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
struct SweepArgs {
    gate: String,
    #[arg(long, default_value_t = 1e2)]
    omega_min: f64,
    #[arg(long, default_value_t = 1e12)]
    omega_max: f64,
    #[arg(long, default_value_t = 20)]
    points: usize,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// naive, compact, both or a `key = value` budget file.
    #[arg(long, default_value = "naive")]
    budgets: String,
    #[command(flatten)]
    model: ModelArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::configure_threads().and_then(|()| match cli.command {
        Command::Lattice { action: LatticeAction::Info { shape } } => commands::lattice_info(&shape),
        Command::Verify(args) => commands::verify(&args),
        Command::Catalog { action: CatalogAction::List } => commands::catalog_list(),
        Command::Catalog { action: CatalogAction::Export { name } } => commands::catalog_export(&name),
        Command::Overhead(args) => commands::overhead(&args),
        Command::Sweep(args) => commands::sweep(&args),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
