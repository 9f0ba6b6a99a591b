use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use planar_reductions_cli::{self as cli, Format, Result};

#[derive(Parser)]
#[command(name = "planred", about = "Planar SAT reconfiguration reductions and CMAPF compilation")]
struct Args {
    /// Seed for commands that generate random instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Sat(SatCommand),
    #[command(subcommand)]
    Reduce(ReduceCommand),
    #[command(subcommand)]
    CycleAugment(CycleAugmentCommand),
    #[command(subcommand)]
    Ncl(NclCommand),
    #[command(subcommand)]
    Reconfig(ReconfigCommand),
    #[command(subcommand)]
    Cmapf(CmapfCommand),
    #[command(subcommand)]
    Pipeline(PipelineCommand),
}

#[derive(Subcommand)]
enum SatCommand {
    /// Report the structural properties of a formula.
    Check { path: PathBuf },
    /// Decide satisfiability by enumeration.
    Solve { path: PathBuf },
    /// Random monotone planar formula with a separating variable cycle.
    Random {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        clauses: usize,
    },
}

#[derive(Subcommand)]
enum ReduceCommand {
    Mp3satToLlp {
        path: PathBuf,
        /// Use one chain length for every variable.
        #[arg(long)]
        global_chains: bool,
    },
    LlpToMlp {
        path: PathBuf,
    },
    /// Lift an LLP flip sequence to the MLP instance.
    LiftFlips {
        path: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        flips: String,
    },
}

#[derive(Subcommand)]
enum CycleAugmentCommand {
    Solve {
        path: PathBuf,
        /// Vertices the cycle must pass through.
        #[arg(long, value_delimiter = ',', required = true)]
        vprime: Vec<usize>,
        /// Use this matching instead of searching for one.
        #[arg(long, value_delimiter = ',')]
        matching: Option<Vec<usize>>,
    },
}

#[derive(Subcommand)]
enum NclCommand {
    Solve {
        graph: PathBuf,
        from: PathBuf,
        to: PathBuf,
    },
    Reduce {
        graph: PathBuf,
        from: PathBuf,
        to: PathBuf,
    },
    Random {
        #[arg(long)]
        handles: usize,
        #[arg(long)]
        cycles: usize,
    },
}

#[derive(Subcommand)]
enum ReconfigCommand {
    Solve {
        path: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
}

#[derive(Subcommand)]
enum CmapfCommand {
    CompileBounded {
        path: PathBuf,
        /// Write `<out>.map` and `<out>.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    CompileUnbounded {
        path: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for an execution; the sidecar sits next to the grid with a `.json` extension.
    Solve {
        grid: PathBuf,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, default_value_t = planar_reductions::cmapf::JOINT_STATE_CAP)]
        cap: u128,
    },
    Validate {
        grid: PathBuf,
        execution: PathBuf,
    },
}

#[derive(Subcommand)]
enum PipelineCommand {
    Run { spec: PathBuf },
}

fn run(args: Args) -> Result<String> {
    let f = args.format;
    match args.command {
        Command::Sat(c) => match c {
            SatCommand::Check { path } => cli::sat_check(&path),
            SatCommand::Solve { path } => cli::sat_solve(&path),
            SatCommand::Random { vars, clauses } => cli::sat_random(vars, clauses, args.seed, f),
        },
        Command::Reduce(c) => match c {
            ReduceCommand::Mp3satToLlp { path, global_chains } => cli::reduce_mp3sat_to_llp(&path, global_chains, f),
            ReduceCommand::LlpToMlp { path } => cli::reduce_llp_to_mlp(&path, f),
            ReduceCommand::LiftFlips { path, from, flips } => cli::reduce_lift_flips(&path, &from, &flips),
        },
        Command::CycleAugment(CycleAugmentCommand::Solve { path, vprime, matching }) => {
            cli::cycle_augment_solve(&path, &vprime, matching.as_deref(), f)
        }
        Command::Ncl(c) => match c {
            NclCommand::Solve { graph, from, to } => cli::ncl_solve(&graph, &from, &to),
            NclCommand::Reduce { graph, from, to } => cli::ncl_reduce(&graph, &from, &to, f),
            NclCommand::Random { handles, cycles } => cli::ncl_random(handles, cycles, args.seed),
        },
        Command::Reconfig(ReconfigCommand::Solve { path, from, to }) => cli::reconfig_solve(&path, &from, &to),
        Command::Cmapf(c) => match c {
            CmapfCommand::CompileBounded { path, out } => cli::cmapf_compile_bounded(&path, out.as_deref(), f),
            CmapfCommand::CompileUnbounded { path, from, to, out } => {
                cli::cmapf_compile_unbounded(&path, &from, &to, out.as_deref(), f)
            }
            CmapfCommand::Solve { grid, bound, cap } => cli::cmapf_solve(&grid, bound, cap),
            CmapfCommand::Validate { grid, execution } => cli::cmapf_validate(&grid, &execution),
        },
        Command::Pipeline(PipelineCommand::Run { spec }) => cli::pipeline_run(&spec),
    }
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(out) => {
            println!("{}", out.trim_end());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
