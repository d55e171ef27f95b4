//! `polariton-ring <command> --config <path> --out <path> [--workers N]`
//!
//! Writes the data CSV to `--out` and a run summary next to it
//! (`<out stem>.summary.json`). Exit codes: 0 success, 1 solver or
//! validation failure, 2 configuration error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use polariton_ring::config::{Command, Job, RunConfig};
use polariton_ring::experiments::{
    check_regime, count_interior_peaks, effective_spec, optimize_concurrence,
    run_sweep, thermal_map, validate_effective, SweepResult,
};
use polariton_ring::{Error, Result};
use serde_json::{json, Value};

const THREADS_ENV: &str = "POLARITON_RING_THREADS";

#[derive(Parser, Debug)]
#[command(name = "polariton-ring", version, about = "Steady states of driven-dissipative cavity arrays")]
struct Args {
    /// solve, sweep, optimize, thermal or validate
    command: String,
    #[arg(long)]
    config: PathBuf,
    /// CSV output path (defaults to `output_path` from the config)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn config_error(e: impl std::fmt::Display) -> Failure {
    Failure { code: 2, message: format!("config error: {e}") }
}

fn run_error(e: Error) -> Failure {
    match e {
        Error::Config(_) | Error::Json(_) | Error::Path { .. } => config_error(e),
        other => Failure { code: 1, message: format!("run failed: {other}") },
    }
}

struct Setup {
    command: Command,
    job: Job,
    config: RunConfig,
    out: PathBuf,
    workers: usize,
}

fn setup(args: &Args) -> Result<Setup, Failure> {
    let command: Command = args.command.parse().map_err(config_error)?;
    let text = fs::read_to_string(&args.config)
        .map_err(|e| config_error(format!("{}: {e}", args.config.display())))?;
    let config = RunConfig::from_json(&text).map_err(config_error)?;
    let (command, job) = config.job(Some(command)).map_err(config_error)?;
    precheck(&job).map_err(config_error)?;

    let out = args
        .out
        .clone()
        .or_else(|| config.output_path.clone())
        .ok_or_else(|| config_error("no output path (use --out)"))?;
    let dir = out.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    if !dir.is_dir() {
        return Err(config_error(format!("output directory {} does not exist", dir.display())));
    }

    let env_workers = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(
            v.parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| config_error(format!("{THREADS_ENV}={v} is not a positive integer")))?,
        ),
        Err(_) => None,
    };
    if args.workers == Some(0) {
        return Err(config_error("--workers must be positive"));
    }
    let workers = env_workers
        .or(args.workers)
        .or(config.workers)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));

    // echo exactly what ran, so the summary can be fed back in
    let echoed = RunConfig { command: Some(command), output_path: None, workers: None, ..config };
    Ok(Setup { command, job, config: echoed, out, workers })
}

/// Input checks that do not need a solve.
fn precheck(job: &Job) -> Result<()> {
    match job {
        Job::Solve(model) | Job::Optimize { model, .. } => model.build().map(|_| ()),
        Job::Sweep(plan) => plan.validate(),
        Job::Thermal(_) => Ok(()),
        Job::Validate(micro) => {
            check_regime(micro)?;
            effective_spec(micro).map(|_| ())
        }
    }
}

struct Output {
    csv: String,
    max_residual: Option<f64>,
    results: Value,
}

fn csv_from(header: &[String], rows: &[Vec<f64>]) -> Result<String> {
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(SweepResult { header: header.to_vec(), rows: rows.to_vec(), residuals: Vec::new() }.to_csv())
}

fn column_maxima(res: &SweepResult) -> Value {
    let mut out = serde_json::Map::new();
    for (i, name) in res.header.iter().enumerate() {
        let max = res.rows.iter().map(|r| r[i]).fold(f64::NEG_INFINITY, f64::max);
        out.insert(name.clone(), json!(max));
    }
    Value::Object(out)
}

fn execute(job: &Job) -> Result<Output> {
    match job {
        Job::Solve(spec) => {
            let model = spec.build()?;
            let rep = model.steady_state()?;
            if !rep.unique {
                return Err(Error::NonUnique);
            }
            let pops = rep.rho.populations();
            let rows: Vec<Vec<f64>> = pops.iter().enumerate().map(|(i, &p)| vec![i as f64, p]).collect();
            Ok(Output {
                csv: csv_from(&["index".into(), "population".into()], &rows)?,
                max_residual: Some(rep.residual),
                results: json!({
                    "populations": pops,
                    "purity": rep.rho.purity(),
                    "min_eigenvalue": rep.min_eigenvalue,
                    "unique": rep.unique,
                }),
            })
        }
        Job::Sweep(plan) => {
            let res = run_sweep(plan)?;
            Ok(Output {
                csv: csv_from(&res.header, &res.rows)?,
                max_residual: Some(res.max_residual()),
                results: json!({ "points": res.rows.len(), "column_max": column_maxima(&res) }),
            })
        }
        Job::Optimize { model, settings } => {
            let rep = optimize_concurrence(model, settings)?;
            let mut header = rep.names.clone();
            header.push("concurrence".into());
            let rows: Vec<Vec<f64>> = rep
                .trace
                .iter()
                .map(|t| t.params.iter().copied().chain([t.value]).collect())
                .collect();
            Ok(Output {
                csv: csv_from(&header, &rows)?,
                max_residual: None,
                results: json!({
                    "names": rep.names,
                    "best_params": rep.best_params,
                    "best_value": rep.best_value,
                    "evaluations": rep.evaluations,
                }),
            })
        }
        Job::Thermal(t) => {
            let (xs, ts) = (t.x.values(), t.t.values());
            let res = thermal_map(&xs, &ts, t.y, t.z)?;
            let peaks: Vec<usize> = (0..ts.len())
                .map(|k| {
                    let block: Vec<f64> = res.rows[k * xs.len()..(k + 1) * xs.len()].iter().map(|r| r[3]).collect();
                    count_interior_peaks(&block)
                })
                .collect();
            Ok(Output {
                csv: csv_from(&res.header, &res.rows)?,
                max_residual: Some(res.max_residual()),
                results: json!({ "interior_peaks_per_T": peaks, "column_max": column_maxima(&res) }),
            })
        }
        Job::Validate(micro) => {
            let d = validate_effective(micro)?;
            Ok(Output {
                csv: csv_from(&["trace_distance".into()], &[vec![d]])?,
                max_residual: None,
                results: json!({ "trace_distance": d, "effective_model": effective_spec(micro)? }),
            })
        }
    }
}

/// Writes via a temporary file in the same directory and renames it into
/// place, so readers never see a partial file.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp-{}", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

fn summary_path(out: &Path) -> PathBuf {
    out.with_extension("summary.json")
}

fn run(args: &Args) -> Result<(), Failure> {
    let s = setup(args)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(s.workers)
        .build()
        .map_err(|e| Failure { code: 1, message: format!("thread pool: {e}") })?;
    let start = Instant::now();
    let output = pool.install(|| execute(&s.job)).map_err(run_error)?;
    let wall = start.elapsed().as_secs_f64();

    let summary = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": s.command.name(),
        "config": s.config,
        "workers": s.workers,
        "wall_time_s": wall,
        "max_residual": output.max_residual,
        "results": output.results,
    });
    let io = |e: std::io::Error| Failure { code: 1, message: format!("writing output: {e}") };
    write_atomic(&s.out, &output.csv).map_err(io)?;
    let text = serde_json::to_string_pretty(&summary).map_err(|e| Failure { code: 1, message: e.to_string() })?;
    write_atomic(&summary_path(&s.out), &text).map_err(io)?;
    log::info!("{} done in {wall:.2} s", s.command.name());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("polariton-ring: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
