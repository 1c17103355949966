//! Command-line front end: `solve`, `sweep`, `figure`, `validate`.
//!
//! Exit codes: 0 on success, 1 on numerical failure or a failed validation,
//! 2 on usage errors. Settings come from flags, then an optional flat JSON
//! file given with `--config`, then built-in defaults.

// `!(a < b)` is deliberate: NaN has to fail these checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use rabi_var::exact::TruncationPolicy;
use rabi_var::sweep::{
    describe, sweep_to_file, sweep_to_string, threads_from_env, Axis, FigureId, Range, SolveMethod,
    SolverOptions, SweepSpec,
};
use rabi_var::validate::{validate, Preset};
use rabi_var::{classify_regime, ground_state, Error, MinimizerOptions, ModelParams};

#[derive(Parser)]
#[command(
    name = "rabi-var",
    version,
    about = "Ground states of the biased quantum Rabi model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one parameter point and print a JSON report.
    Solve(SolveArgs),
    /// Sweep one parameter and write a CSV.
    Sweep(SweepArgs),
    /// Write the dataset of one figure as CSV.
    Figure(FigureArgs),
    /// Run the property suite.
    Validate(ValidateArgs),
}

#[derive(Args, Default)]
struct ParamArgs {
    /// Oscillator frequency (default 1).
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
    /// Qubit splitting (default 0).
    #[arg(long = "Omega", allow_hyphen_values = true)]
    big_omega: Option<f64>,
    /// Static bias (default 0).
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<f64>,
    /// Coupling strength (default 0).
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
}

#[derive(Args, Default)]
struct SolverArgs {
    /// Gradient tolerance of the variational minimizer.
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<f64>,
    /// Largest Fock cutoff of the exact solver.
    #[arg(long = "n-max")]
    n_max: Option<usize>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// variational, fixed-point, grwa or exact (default variational).
    #[arg(long)]
    method: Option<String>,
    /// Flat JSON file with default settings.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct RangeArgs {
    #[arg(long = "range-start", allow_hyphen_values = true)]
    range_start: Option<f64>,
    #[arg(long = "range-stop", allow_hyphen_values = true)]
    range_stop: Option<f64>,
    /// Number of sweep points.
    #[arg(long)]
    points: Option<usize>,
    /// Output CSV path (standard output when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    range: RangeArgs,
    /// Swept parameter: g, Omega or epsilon (default g).
    #[arg(long)]
    axis: Option<String>,
    /// Comma-separated methods (default variational,grwa,exact).
    #[arg(long)]
    method: Option<String>,
    /// Comma-separated outputs (default energy).
    #[arg(long)]
    outputs: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// fig1a..fig1d, fig2a..fig2f, fig3a..fig3d, fig4a, fig4b
    figure: String,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    range: RangeArgs,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// quick or full (default quick).
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Contents of a `--config` file; keys are the flag names.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Config {
    omega: Option<f64>,
    #[serde(rename = "Omega")]
    big_omega: Option<f64>,
    epsilon: Option<f64>,
    g: Option<f64>,
    method: Option<String>,
    tol: Option<f64>,
    #[serde(rename = "n-max")]
    n_max: Option<usize>,
    points: Option<usize>,
    #[serde(rename = "range-start")]
    range_start: Option<f64>,
    #[serde(rename = "range-stop")]
    range_stop: Option<f64>,
    axis: Option<String>,
    outputs: Option<String>,
    out: Option<PathBuf>,
    preset: Option<String>,
}

enum Failure {
    Usage(String),
    Numerical(Value),
    Validation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            return Failure::Usage(e.to_string());
        }
        let mut diag = Map::new();
        diag.insert("error".into(), json!(e.kind()));
        diag.insert("message".into(), json!(e.to_string()));
        let mut inner = &e;
        if let Error::SweepRow {
            row,
            axis,
            value,
            source,
        } = &e
        {
            diag.insert("row".into(), json!(row));
            diag.insert("axis".into(), json!(axis));
            diag.insert("value".into(), json!(value));
            inner = source;
        }
        match inner {
            Error::MinimizerNotConverged {
                iterations,
                best_lambda,
                best_energy,
                gradient_residual,
            } => {
                diag.insert("iterations".into(), json!(iterations));
                diag.insert("best_lambda".into(), json!(best_lambda));
                diag.insert("best_energy".into(), json!(best_energy));
                diag.insert("gradient_residual".into(), json!(gradient_residual));
            }
            Error::ExactNotConverged { n_max, history, .. } => {
                diag.insert("n_max".into(), json!(n_max));
                diag.insert("convergence_history".into(), json!(history));
            }
            _ => {}
        }
        Failure::Numerical(Value::Object(diag))
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn load_config(path: Option<&Path>) -> CliResult<Config> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn model_params(args: &ParamArgs, cfg: &Config) -> CliResult<ModelParams> {
    Ok(ModelParams::new(
        args.omega.or(cfg.omega).unwrap_or(1.0),
        args.big_omega.or(cfg.big_omega).unwrap_or(0.0),
        args.epsilon.or(cfg.epsilon).unwrap_or(0.0),
        args.g.or(cfg.g).unwrap_or(0.0),
    )?)
}

fn solver_options(args: &SolverArgs, cfg: &Config) -> CliResult<SolverOptions> {
    let mut opts = SolverOptions::default();
    if let Some(tol) = args.tol.or(cfg.tol) {
        if !(tol > 0.0) {
            return Err(Failure::Usage(format!("--tol must be > 0, got {tol}")));
        }
        opts.minimizer = MinimizerOptions {
            tol,
            ..opts.minimizer
        };
    }
    if let Some(n_max) = args.n_max.or(cfg.n_max) {
        opts.truncation = TruncationPolicy {
            n_start: opts.truncation.n_start.min(n_max),
            n_max,
            ..opts.truncation
        };
        opts.truncation.validate()?;
    }
    Ok(opts)
}

fn parse_list<T: std::str::FromStr<Err = Error>>(text: &str) -> CliResult<Vec<T>> {
    text.split(',')
        .map(|s| s.trim().parse::<T>().map_err(Failure::from))
        .collect()
}

fn emit_csv(spec: &SweepSpec, comments: &[String], out: Option<&Path>) -> CliResult<()> {
    let threads = threads_from_env();
    match out {
        Some(path) => sweep_to_file(spec, comments, path, threads)?,
        None => {
            let text = sweep_to_string(spec, comments, threads)?;
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| {
                Failure::from(Error::Io {
                    path: "<stdout>".into(),
                    source: e,
                })
            })?;
        }
    }
    Ok(())
}

fn solve(args: SolveArgs) -> CliResult<()> {
    let cfg = load_config(args.config.as_deref())?;
    let p = model_params(&args.params, &cfg)?;
    let opts = solver_options(&args.solver, &cfg)?;
    let method: SolveMethod = args
        .method
        .or(cfg.method)
        .as_deref()
        .unwrap_or("variational")
        .parse()?;

    let mut report = Map::new();
    report.insert("params".into(), json!(p));
    report.insert("method".into(), json!(method));
    if method == SolveMethod::Exact {
        let ex = ground_state(&p, &opts.truncation)?;
        report.insert("energy".into(), json!(ex.energy));
        report.insert("observables".into(), json!(ex.observables));
        report.insert("sigma_z".into(), json!(ex.sigma_z));
        report.insert("n_used".into(), json!(ex.n_used));
        report.insert("tail_mass".into(), json!(ex.tail_mass));
    } else {
        let res = rabi_var::sweep::solve_point(&p, method, &opts)?;
        report.insert("energy".into(), json!(res.energy));
        report.insert("lambda".into(), json!(res.lambda));
        report.insert("observables".into(), json!(res.observables));
        report.insert("gradient_residual".into(), json!(res.gradient_residual));
    }
    report.insert("regime".into(), json!(classify_regime(&p)));
    let text =
        serde_json::to_string_pretty(&Value::Object(report)).expect("JSON of finite numbers");
    println!("{text}");
    Ok(())
}

fn sweep(args: SweepArgs) -> CliResult<()> {
    let cfg = load_config(args.config.as_deref())?;
    let fixed = model_params(&args.params, &cfg)?;
    let solver = solver_options(&args.solver, &cfg)?;
    let axis: Axis = args.axis.or(cfg.axis).as_deref().unwrap_or("g").parse()?;
    let (default_start, default_stop) = axis.default_range();
    let spec = SweepSpec {
        axis,
        range: Range {
            start: args
                .range
                .range_start
                .or(cfg.range_start)
                .unwrap_or(default_start),
            stop: args
                .range
                .range_stop
                .or(cfg.range_stop)
                .unwrap_or(default_stop),
            points: args.range.points.or(cfg.points).unwrap_or(201),
        },
        fixed,
        methods: parse_list(
            args.method
                .or(cfg.method)
                .as_deref()
                .unwrap_or("variational,grwa,exact"),
        )?,
        outputs: parse_list(args.outputs.or(cfg.outputs).as_deref().unwrap_or("energy"))?,
        solver,
    };
    spec.validate()?;
    let out = args.range.out.or(cfg.out);
    emit_csv(&spec, &[describe(&spec)], out.as_deref())
}

fn figure(args: FigureArgs) -> CliResult<()> {
    let cfg = load_config(args.config.as_deref())?;
    let id: FigureId = args.figure.parse()?;
    let solver = solver_options(&args.solver, &cfg)?;
    let (default_start, default_stop) = id.axis().default_range();
    let start = args
        .range
        .range_start
        .or(cfg.range_start)
        .unwrap_or(default_start);
    let stop = args
        .range
        .range_stop
        .or(cfg.range_stop)
        .unwrap_or(default_stop);
    let spec = id.spec(
        Some((start, stop)),
        args.range.points.or(cfg.points),
        solver,
    )?;
    let out = args.range.out.or(cfg.out);
    emit_csv(&spec, &id.comments(&spec), out.as_deref())
}

fn run_validate(args: ValidateArgs) -> CliResult<()> {
    let cfg = load_config(args.config.as_deref())?;
    let preset: Preset = args
        .preset
        .or(cfg.preset)
        .as_deref()
        .unwrap_or("quick")
        .parse()?;
    let report = validate(preset)?;
    println!("{report}");
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Validation)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Sweep(a) => sweep(a),
        Command::Figure(a) => figure(a),
        Command::Validate(a) => run_validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(diag)) => {
            eprintln!(
                "{}",
                serde_json::to_string_pretty(&diag).expect("diagnostic JSON")
            );
            ExitCode::from(1)
        }
        Err(Failure::Validation) => ExitCode::from(1),
    }
}
