use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use simax_cli::commands::save_model;
use simax_cli::report::summary_table;
use simax_cli::{
    load_model, read_rows, run_trials, train_model, verify_trial, write_report, write_rows,
    CliError, RunPlan, TrainPlan,
};
use simax_core::{SeededRng, TrainingConfig};

#[derive(Parser, Debug)]
#[command(
    name = "simax",
    version,
    about = "Train and benchmark the self-improving maxima algorithm"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the learning phase and write a model artifact.
    Train(TrainArgs),
    /// Replay limiting-phase trials against the baselines and write CSV rows.
    Run(RunArgs),
    /// Summarize CSV files into a table and SVG charts.
    Report(ReportArgs),
    /// Run a single trial with the frontier invariant checked at every Update.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct TrainArgs {
    /// Built-in scenario (uniform_square, staircase_line, two_level) or a
    /// JSON scenario config file.
    #[arg(long)]
    scenario: String,
    /// Number of points; required for built-in scenarios.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// Multiplier on the number of tree-training rounds.
    #[arg(long, default_value_t = 1.0)]
    c_rounds: f64,
    /// Hard cap on tree-training rounds.
    #[arg(long, default_value_t = 10_000)]
    rounds_cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    trials: usize,
    /// Trial j uses seed + j.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Record wall-clock times (makes the output machine-dependent).
    #[arg(long)]
    wall_time: bool,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long = "in", num_args = 1.., required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn train(args: TrainArgs) -> Result<(), CliError> {
    let config = TrainingConfig {
        epsilon: args.eps,
        delta: args.delta,
        c_rounds: args.c_rounds,
        rounds_cap: args.rounds_cap,
    };
    let plan = TrainPlan {
        scenario: args.scenario,
        n: args.n,
        config,
        seed: args.seed,
    };
    let model = train_model(&plan)?.model;
    save_model(&model, &args.out)?;
    let meta = &model.meta;
    let n = model.n();
    println!("scenario        {} (n = {n})", model.scenario.name);
    println!(
        "rng             {} seed {}",
        SeededRng::ALGORITHM,
        meta.seed
    );
    println!("slab rounds     {}", meta.slab_rounds);
    println!(
        "tree rounds     {} (cap {}{})",
        meta.tree_rounds,
        meta.config.rounds_cap,
        if meta.rounds_capped {
            ", capped"
        } else {
            ", within cap"
        }
    );
    println!("leaf slabs      {}", model.slabs.num_slabs());
    println!(
        "tree nodes      {} ({:.1} per point)",
        model.storage_nodes(),
        model.storage_nodes() as f64 / n as f64
    );
    println!("entropy         {:.3} bits total", model.entropy.total);
    println!("wrote           {}", args.out.display());
    Ok(())
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let plan = RunPlan {
        trials: args.trials,
        seed: args.seed,
        wall_time: args.wall_time,
    };
    plan.validate()?;
    let model = load_model(&args.model)?;
    let rows = run_trials(&model, &plan)?;
    let file = File::create(&args.out).map_err(|e| CliError::Io {
        path: args.out.clone(),
        source: e,
    })?;
    write_rows(&rows, BufWriter::new(file))?;
    println!(
        "wrote {} rows ({} trials) to {}",
        rows.len(),
        plan.trials,
        args.out.display()
    );
    Ok(())
}

fn report(args: ReportArgs) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for path in &args.inputs {
        let file = File::open(path).map_err(|e| CliError::Io {
            path: path.clone(),
            source: e,
        })?;
        rows.extend(read_rows(path, file)?);
    }
    let (summary, written) = write_report(&rows, &args.out)?;
    print!("{}", summary_table(&summary));
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<(), CliError> {
    let model = load_model(&args.model)?;
    let outcome = verify_trial(&model, args.seed)?;
    println!(
        "{} n = {} seed {}: {} maxima",
        model.scenario.name,
        model.n(),
        args.seed,
        outcome.maxima
    );
    for row in &outcome.rows {
        match row.cost_per_point() {
            Some(cost) => println!(
                "  {:<15} verified, {cost:.3} comparisons per point",
                row.algorithm.name()
            ),
            None => println!("  {:<15} skipped", row.algorithm.name()),
        }
    }
    println!("frontier invariant held at every Update");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train(args) => train(args),
        Command::Run(args) => run(args),
        Command::Report(args) => report(args),
        Command::Verify(args) => verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
