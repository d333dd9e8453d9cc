//! `mrmodel` — model MapReduce CPU cost from configuration parameters.
//!
//! Subcommands cover the whole pipeline: simulate synthetic runs, fit the
//! quadratic cost model, predict, evaluate, test cross-application
//! transfer, score trace similarity, and emit SVG plots.
//!
//! Exit codes are a stable contract: 0 success, 2 input or usage error,
//! 3 numerical or model error (insufficient data, rank deficiency, and
//! friends). Identical arguments always produce byte-identical outputs.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mrmodel::error::Error;
use mrmodel::experiment::sample_configs;
use mrmodel::io;
use mrmodel::model::{evaluate, RegressionModel};
use mrmodel::plot::{render_plot, PlotKind};
use mrmodel::similarity::{similarity_score, transfer_error};
use mrmodel::simulator::batch_simulate;
use mrmodel::types::ConfigPoint;

const EXIT_INPUT: u8 = 2;
const EXIT_MODEL: u8 = 3;

/// Runs sampled from the ranges file when checking that a profile's cost
/// surface stays positive.
const POSITIVITY_CHECK_SAMPLES: usize = 200;

#[derive(Parser)]
#[command(name = "mrmodel", version, about = "MapReduce CPU-cost modeling toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate application runs over a random experiment design
    Simulate(SimulateArgs),
    /// Fit the nine-coefficient cost model to a run table
    Fit(FitArgs),
    /// Predict CPU cost at one configuration
    Predict(PredictArgs),
    /// Score a model against observed runs
    Evaluate(EvaluateArgs),
    /// Score a model against another application's runs
    Transfer(EvaluateArgs),
    /// Similarity of two CPU-utilization traces
    Similarity(SimilarityArgs),
    /// Render an SVG chart of model vs observations
    Plot(PlotArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Application profile JSON
    #[arg(long)]
    profile: PathBuf,
    /// Parameter ranges JSON
    #[arg(long)]
    ranges: PathBuf,
    /// Number of runs to simulate
    #[arg(long)]
    n: usize,
    /// Random seed
    #[arg(long)]
    seed: u64,
    /// Output run table CSV (traces land in a sibling `<name>_traces/` dir)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FitArgs {
    /// Input run table CSV
    #[arg(long)]
    runs: PathBuf,
    /// Output model JSON
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    /// Model JSON
    #[arg(long)]
    model: PathBuf,
    /// Number of map tasks
    #[arg(long)]
    map: u32,
    /// Number of reduce tasks
    #[arg(long)]
    reduce: u32,
    /// File-system block size, MB
    #[arg(long)]
    fs_size: f64,
    /// Input data size, MB
    #[arg(long)]
    in_size: f64,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Model JSON
    #[arg(long)]
    model: PathBuf,
    /// Run table CSV to score against
    #[arg(long)]
    runs: PathBuf,
    /// Output report JSON
    #[arg(long)]
    out: PathBuf,
    /// Optional per-run residual CSV
    #[arg(long)]
    residuals: Option<PathBuf>,
}

#[derive(Args)]
struct SimilarityArgs {
    /// First trace CSV
    trace_a: PathBuf,
    /// Second trace CSV
    trace_b: PathBuf,
    /// Weight of the correlation term in the combined score
    #[arg(long, default_value_t = 0.5)]
    weight: f64,
    /// Sakoe-Chiba band half-width for DTW (unbounded if omitted)
    #[arg(long)]
    band: Option<usize>,
}

#[derive(Args)]
struct PlotArgs {
    /// Run table CSV
    #[arg(long)]
    runs: PathBuf,
    /// Model JSON
    #[arg(long)]
    model: PathBuf,
    /// Output SVG path
    #[arg(long)]
    out: PathBuf,
    /// Chart kind: "actual-vs-model" or "residual"
    #[arg(long)]
    kind: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(error: &Error) -> u8 {
    match error {
        Error::InsufficientData { .. }
        | Error::RankDeficient { .. }
        | Error::NonPositiveGroundTruth { .. }
        | Error::ZeroVariance { .. }
        | Error::EmptyInput
        | Error::AllZeroActuals => EXIT_MODEL,
        Error::AtIndex { source, .. } => exit_code(source),
        _ => EXIT_INPUT,
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Simulate(args) => simulate(args),
        Command::Fit(args) => fit(args),
        Command::Predict(args) => predict(args),
        Command::Evaluate(args) => evaluate_cmd(args, false),
        Command::Transfer(args) => evaluate_cmd(args, true),
        Command::Similarity(args) => similarity(args),
        Command::Plot(args) => plot(args),
    }
}

fn simulate(args: SimulateArgs) -> Result<(), Error> {
    if args.n < 1 {
        return Err(Error::InvalidValue { what: "--n", why: "must be >= 1".into() });
    }
    let profile = io::load_profile(&args.profile)?;
    let ranges = io::load_ranges(&args.ranges)?;
    profile.check_positive_over(&ranges, POSITIVITY_CHECK_SAMPLES)?;

    let configs = sample_configs(args.n, &ranges, args.seed)?;
    let runs = batch_simulate(&profile, &configs, args.seed)?;
    io::write_run_table(&args.out, &runs)?;
    println!("simulated {} runs of {} into {}", runs.len(), profile.app_name, args.out.display());
    Ok(())
}

fn fit(args: FitArgs) -> Result<(), Error> {
    let runs = io::load_run_table(&args.runs)?;
    let model = RegressionModel::fit(&runs)?;
    io::save_model(&args.out, &model)?;
    println!(
        "fitted {} on {} runs; training MAPE {}%",
        model.app_name,
        model.training_summary.n_runs,
        sig6(model.training_summary.mape_percent)
    );
    Ok(())
}

fn predict(args: PredictArgs) -> Result<(), Error> {
    let model = io::load_model(&args.model)?;
    let config = ConfigPoint::new(args.map, args.reduce, args.fs_size, args.in_size)?;
    let prediction = model.predict(&config);
    if prediction.clamped {
        eprintln!("note: raw polynomial was negative; prediction clamped to 0");
    }
    println!("{}", sig6(prediction.cpu_ticks));
    Ok(())
}

fn evaluate_cmd(args: EvaluateArgs, transfer: bool) -> Result<(), Error> {
    let model = io::load_model(&args.model)?;
    let runs = io::load_run_table(&args.runs)?;

    let report = if transfer {
        let report = transfer_error(&model, &runs)?;
        io::save_report(&args.out, &report)?;
        println!("transfer: model {} -> runs {}", report.model_app, report.runs_app);
        report.error
    } else {
        let report = evaluate(&model, &runs)?;
        io::save_report(&args.out, &report)?;
        report
    };

    if let Some(path) = &args.residuals {
        io::write_residuals_csv(path, &report.residuals)?;
    }
    println!(
        "MAPE {}%  max APE {}%  R^2 {}  excluded {}",
        sig6(report.mape_percent),
        sig6(report.max_ape_percent),
        sig6(report.r_squared),
        report.excluded_zero_actuals
    );
    Ok(())
}

fn similarity(args: SimilarityArgs) -> Result<(), Error> {
    let a = io::load_trace_csv(&args.trace_a)?;
    let b = io::load_trace_csv(&args.trace_b)?;
    let score = similarity_score(&a, &b, args.weight, args.band)?;
    print!("{}", io::to_sorted_json(&score));
    Ok(())
}

fn plot(args: PlotArgs) -> Result<(), Error> {
    let kind: PlotKind = args.kind.parse()?;
    let model = io::load_model(&args.model)?;
    let runs = io::load_run_table(&args.runs)?;
    let svg = render_plot(&model, &runs, kind)?;
    std::fs::write(&args.out, svg)
        .map_err(|source| Error::Io { path: args.out.display().to_string(), source })?;
    println!("wrote {} plot to {}", args.kind, args.out.display());
    Ok(())
}

/// Format with six significant digits, plain decimal notation.
fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor();
    let factor = 10f64.powf(5.0 - magnitude);
    let rounded = (x * factor).round() / factor;
    format!("{rounded}")
}
