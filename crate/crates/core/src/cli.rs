//! Command-line front end. `rinar <subcommand> --help` lists the flags.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{invalid, Result, RinarError};
use crate::estimator::{fit, FitOptions, FitResult};
use crate::experiments::{monte_carlo, parameter_names, McConfig, McSummary, Parallelism};
use crate::forecast::rolling_forecast;
use crate::identifiability::{identify, RationalParams};
use crate::io::{format_series, parse_fraction, parse_fraction_list, read_series_csv, RunManifest};
use crate::model::{simulate, InnovationSpec, LagWindow, RinarParams, SimulateOptions};
use crate::stats::{sample_acf, sample_mean, sample_pacf, sample_variance, CountSeries};

/// Environment variable capping `experiment` worker threads.
pub const THREADS_ENV: &str = "RINAR_THREADS";

#[derive(Debug, Parser)]
#[command(name = "rinar", version, about = "Rounded integer-valued autoregression")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a series and write it as CSV.
    Simulate(SimulateArgs),
    /// Least-squares fit; prints JSON.
    Fit(FitArgs),
    /// Rolling one-step forecasts over the tail of a series.
    Forecast(ForecastArgs),
    /// Exact identifiability analysis for rational coefficients.
    Identify(IdentifyArgs),
    /// Monte Carlo replications of simulate-then-fit.
    Experiment(ExperimentArgs),
    /// Sample ACF and PACF; prints JSON.
    Acf(AcfArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
enum Noise {
    /// Difference of two independent Poisson(mu) draws.
    Poisson,
    /// No noise.
    Zero,
}

#[derive(Debug, Args, serde::Serialize)]
struct SimulateArgs {
    /// Model order; must match the number of coefficients when given.
    #[arg(long)]
    p: Option<usize>,
    /// Coefficients alpha_1..alpha_p, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    alphas: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = crate::model::DEFAULT_BURN_IN)]
    burn_in: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Poisson rate of each component of the noise.
    #[arg(long, default_value_t = crate::model::DEFAULT_RATE)]
    mu: f64,
    #[arg(long, value_enum, default_value_t = Noise::Poisson)]
    noise: Noise,
    /// Starting window, most recent value first (default: zeros).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    init: Option<Vec<i64>>,
    #[arg(long)]
    allow_nonstationary: bool,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, serde::Serialize)]
struct FitTuning {
    /// Scalar-search bracket width tolerance.
    #[arg(long, default_value_t = 0.001)]
    range_tol: f64,
    /// Sweep-to-sweep stopping tolerance.
    #[arg(long, default_value_t = 0.001)]
    tol: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
}

impl FitTuning {
    fn options(&self) -> FitOptions {
        FitOptions {
            scalar_range_tol: self.range_tol,
            outer_tol: self.tol,
            max_outer_iterations: self.max_iter,
            ..FitOptions::default()
        }
    }
}

#[derive(Debug, Args, serde::Serialize)]
struct FitArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    p: usize,
    /// Fit only the first N observations.
    #[arg(long)]
    head: Option<usize>,
    #[command(flatten)]
    tuning: FitTuning,
}

#[derive(Debug, Args, serde::Serialize)]
struct ForecastArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Number of leading training observations; forecasts start at the
    /// next observation (1-based index split + 1).
    #[arg(long)]
    split: usize,
    /// Coefficients to forecast with; fitted on the training part when omitted.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "lambda")]
    alphas: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true, requires = "alphas")]
    lambda: Option<f64>,
    /// Order used when fitting.
    #[arg(long, default_value_t = 2)]
    p: usize,
    #[command(flatten)]
    tuning: FitTuning,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, serde::Serialize)]
struct IdentifyArgs {
    /// Fraction literals, e.g. 3/25,3/8,1/5,-1/4.
    #[arg(long, allow_hyphen_values = true)]
    alphas: String,
    /// Fraction literal, e.g. 5/2.
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
}

#[derive(Debug, Args, serde::Serialize)]
struct ExperimentArgs {
    #[arg(long, default_value_t = 500)]
    reps: usize,
    #[arg(long, default_value_t = 500)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = crate::model::DEFAULT_RATE)]
    mu: f64,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true,
          default_values_t = [0.12, 0.375, 0.2, -0.25])]
    alphas: Vec<f64>,
    #[arg(long, allow_negative_numbers = true, default_value_t = 2.5)]
    lambda: f64,
    #[arg(long, default_value_t = crate::model::DEFAULT_BURN_IN)]
    burn_in: usize,
    /// Worker threads; overrides RINAR_THREADS. 1 runs serially.
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    tuning: FitTuning,
    /// CSV of per-replication estimates (alpha_1..alpha_p, lambda).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the summary as JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args, serde::Serialize)]
struct AcfArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 10)]
    max_lag: usize,
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code: 0 on success, 1 on a runtime error,
/// 2 on a usage error.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch_to(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`dispatch`] with explicit output streams.
pub fn dispatch_to<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match run(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn io_err(e: std::io::Error) -> RinarError {
    RinarError::Io(e.to_string())
}

fn options_json<T: serde::Serialize>(args: &T) -> Value {
    serde_json::to_value(args).unwrap_or(Value::Null)
}

fn print_json(out: &mut dyn Write, value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| RinarError::Io(e.to_string()))?;
    writeln!(out, "{text}").map_err(io_err)
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn run(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match command {
        Command::Simulate(a) => run_simulate(a, out, err),
        Command::Fit(a) => run_fit(a, out),
        Command::Forecast(a) => run_forecast(a, out, err),
        Command::Identify(a) => run_identify(a, out),
        Command::Experiment(a) => run_experiment(a, out),
        Command::Acf(a) => run_acf(a, out),
    }
}

fn run_simulate(a: SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    if let Some(p) = a.p {
        if p != a.alphas.len() {
            return Err(invalid(format!(
                "--p {p} does not match {} coefficients",
                a.alphas.len()
            )));
        }
    }
    let params = RinarParams::new(a.alphas.clone(), a.lambda)?;
    let innovation = match a.noise {
        Noise::Poisson => InnovationSpec::poisson_difference(a.mu)?,
        Noise::Zero => InnovationSpec::DegenerateZero,
    };
    if !params.is_stationary() && a.allow_nonstationary {
        writeln!(
            err,
            "warning: sum |alpha_j| = {} >= 1; the process is not stationary",
            params.abs_sum()
        )
        .map_err(io_err)?;
    }
    let opts = SimulateOptions {
        n: a.n,
        burn_in: a.burn_in,
        seed: a.seed,
        initial: a.init.clone().map(LagWindow::new),
        allow_nonstationary: a.allow_nonstationary,
    };
    let series = simulate(&params, &innovation, &opts)?;
    let text = format_series(&series, None);
    match &a.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(io_err)?;
            RunManifest::new("simulate", options_json(&a))
                .with_seed(a.seed)
                .write(manifest_path(path))?;
        }
        None => out.write_all(text.as_bytes()).map_err(io_err)?,
    }
    Ok(())
}

fn load(path: &Path, head: Option<usize>) -> Result<CountSeries> {
    let s = read_series_csv(path)?;
    match head {
        Some(n) => s.head(n),
        None => Ok(s),
    }
}

fn fit_json(r: &FitResult) -> Value {
    json!({
        "alphas": r.theta_hat.alphas(),
        "lambda": r.theta_hat.lambda(),
        "objective": r.objective,
        "outer_iterations": r.outer_iterations,
        "converged": r.converged,
        "objective_trace": r.objective_trace,
        "initial_objective": r.initial_objective,
        "yw_alphas": r.yule_walker.alphas,
        "yw_lambda0": r.yule_walker.lambda0,
        "lambda_bracket": [r.lambda_bracket.0, r.lambda_bracket.1],
    })
}

fn run_fit(a: FitArgs, out: &mut dyn Write) -> Result<()> {
    let series = load(&a.input, a.head)?;
    let r = fit(&series, a.p, &a.tuning.options())?;
    let manifest = RunManifest::new("fit", options_json(&a)).with_input(&a.input)?;
    let mut v = fit_json(&r);
    v["n"] = json!(series.len());
    v["manifest"] = serde_json::to_value(&manifest).unwrap_or(Value::Null);
    print_json(out, &v)
}

fn run_forecast(a: ForecastArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let series = read_series_csv(&a.input)?;
    let (theta, fitted) = match (&a.alphas, a.lambda) {
        (Some(alphas), Some(lambda)) => (RinarParams::new(alphas.clone(), lambda)?, None),
        _ => {
            let train = series.head(a.split)?;
            let r = fit(&train, a.p, &a.tuning.options())?;
            (r.theta_hat.clone(), Some(r))
        }
    };
    let report = rolling_forecast(&theta, &series, a.split)?;
    let mut csv = String::from("index,actual,prediction,error\n");
    for k in 0..report.targets.len() {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            report.targets[k] + 1,
            report.actuals[k],
            report.predictions[k],
            report.errors[k]
        ));
    }
    let manifest = RunManifest::new("forecast", options_json(&a)).with_input(&a.input)?;
    let summary = json!({
        "mae": report.mae,
        "forecasts": report.targets.len(),
        "split": a.split,
        "alphas": theta.alphas(),
        "lambda": theta.lambda(),
        "fit": fitted.as_ref().map(fit_json),
        "manifest": manifest,
    });
    match &a.out {
        Some(path) => {
            std::fs::write(path, csv).map_err(io_err)?;
            manifest.write(manifest_path(path))?;
            print_json(out, &summary)
        }
        None => {
            out.write_all(csv.as_bytes()).map_err(io_err)?;
            writeln!(err, "mae = {:.6} over {} forecasts", report.mae, report.targets.len())
                .map_err(io_err)
        }
    }
}

fn run_identify(a: IdentifyArgs, out: &mut dyn Write) -> Result<()> {
    let alphas = parse_fraction_list(&a.alphas)?;
    let lambda = parse_fraction(&a.lambda)?;
    let report = identify(&RationalParams::new(alphas, lambda)?)?;
    let mut v = serde_json::to_value(&report).map_err(|e| RinarError::Io(e.to_string()))?;
    v["nu0_decimal"] = json!(report.nu0.to_f64());
    v["i0_text"] = json!(report.i0.to_string());
    v["e0"] = json!(report.e0_description());
    // i128 values serialize as JSON numbers; keep them as strings for
    // consumers without big-integer support.
    v["a_coeffs"] = json!(report.a_coeffs.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    v["d"] = json!(report.d.to_string());
    v["denominator_product"] = json!(report.denominator_product.to_string());
    v["manifest"] = serde_json::to_value(RunManifest::new("identify", options_json(&a)))
        .unwrap_or(Value::Null);
    print_json(out, &v)
}

fn parallelism(threads: Option<usize>) -> Result<Parallelism> {
    let requested = match threads {
        Some(t) => Some(t),
        None => match std::env::var(THREADS_ENV) {
            Ok(s) if !s.trim().is_empty() => Some(
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| invalid(format!("{THREADS_ENV}={s:?} is not a thread count")))?,
            ),
            _ => None,
        },
    };
    Ok(match requested {
        None | Some(0) => Parallelism::Max,
        Some(1) => Parallelism::Serial,
        Some(n) => Parallelism::Threads(n),
    })
}

pub(crate) fn estimates_csv(summary: &McSummary, p: usize) -> String {
    let mut csv = String::from("rep,");
    csv.push_str(&parameter_names(p).join(","));
    csv.push('\n');
    for e in &summary.estimates {
        let cells: Vec<String> = e.values.iter().map(|v| format!("{v:?}")).collect();
        csv.push_str(&format!("{},{}\n", e.rep, cells.join(",")));
    }
    csv
}

fn run_experiment(a: ExperimentArgs, out: &mut dyn Write) -> Result<()> {
    let config = McConfig {
        theta0: RinarParams::new(a.alphas.clone(), a.lambda)?,
        innovation: InnovationSpec::poisson_difference(a.mu)?,
        n: a.n,
        reps: a.reps,
        burn_in: a.burn_in,
        master_seed: a.seed,
        initial: None,
        fit_options: a.tuning.options(),
    };
    let summary = monte_carlo(&config, parallelism(a.threads)?)?;
    let manifest = RunManifest::new("experiment", options_json(&a)).with_seed(a.seed);
    if let Some(path) = &a.out {
        std::fs::write(path, estimates_csv(&summary, config.theta0.order())).map_err(io_err)?;
        manifest.write(manifest_path(path))?;
    }
    if a.json {
        let v = json!({
            "per_parameter": summary.per_parameter,
            "reps_completed": summary.reps_completed,
            "failures": summary.failures,
            "non_converged": summary.non_converged,
            "manifest": manifest,
        });
        return print_json(out, &v);
    }
    writeln!(out, "{:<10} {:>10} {:>10} {:>10}", "parameter", "truth", "mean", "sd").map_err(io_err)?;
    for s in &summary.per_parameter {
        let sd = s.sd.map_or("-".to_string(), |v| format!("{v:.4}"));
        writeln!(out, "{:<10} {:>10.4} {:>10.4} {:>10}", s.name, s.truth, s.mean, sd)
            .map_err(io_err)?;
    }
    writeln!(
        out,
        "replications: {} completed, {} failed, {} not converged",
        summary.reps_completed, summary.failures, summary.non_converged
    )
    .map_err(io_err)
}

fn run_acf(a: AcfArgs, out: &mut dyn Write) -> Result<()> {
    let series = read_series_csv(&a.input)?;
    let acf = sample_acf(&series, a.max_lag)?;
    let pacf = sample_pacf(&series, a.max_lag)?;
    let manifest = RunManifest::new("acf", options_json(&a)).with_input(&a.input)?;
    let v = json!({
        "n": series.len(),
        "mean": sample_mean(&series),
        "variance": sample_variance(&series),
        "acf": acf.rho,
        "pacf": pacf,
        "band": 2.0 / (series.len() as f64).sqrt(),
        "manifest": manifest,
    });
    print_json(out, &v)
}
