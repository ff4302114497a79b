use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use perfect_forms_cli::config::{OutputFormat, RunConfig};
use perfect_forms_cli::pipeline;

/// Perfect Hermitian forms over imaginary quadratic fields: enumeration,
/// Voronoi cell complexes, and integral homology, in exact arithmetic.
#[derive(Parser)]
#[command(name = "pfv", version, about)]
struct Cli {
    /// Fundamental discriminant D < 0 of the imaginary quadratic field
    #[arg(long, global = true, allow_hyphen_values = true, default_value_t = -4)]
    disc: i64,
    /// Rank N of the forms (GL_N over the ring of integers)
    #[arg(long, global = true, default_value_t = 3)]
    rank: usize,
    /// Output directory for documents, checkpoints and databases
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Checkpoint file for the perfect-form walk (resumable)
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,
    /// Worker threads for post-processing (0 = library default)
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Output format on stdout
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    #[value(alias = "json-like")]
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate perfect forms up to equivalence (resumable census)
    PerfectForms,
    /// Build the cell complex and persist the cell database
    Cells,
    /// Full pipeline: census, cells, differentials, homology, verification
    Homology,
    /// Run the consistency checks (chain identity, mass formula, top cycle)
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = RunConfig {
        disc: cli.disc,
        rank: cli.rank,
        out: cli.out,
        checkpoint: cli.checkpoint,
        workers: cli.workers,
        format: match cli.format {
            FormatArg::Table => OutputFormat::Table,
            FormatArg::Json => OutputFormat::Json,
        },
        caps: Default::default(),
    };
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let run = || match cli.command {
        Command::PerfectForms => pipeline::cmd_perfect_forms(&cfg),
        Command::Cells => pipeline::cmd_cells(&cfg),
        Command::Homology => pipeline::cmd_homology(&cfg),
        Command::Verify => pipeline::cmd_verify(&cfg),
    };
    match pipeline::with_workers(cfg.workers, run) {
        Ok(Ok(text)) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Err(e)) | Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
