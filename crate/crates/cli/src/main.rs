//! `cgp`: coherence generating power from the command line.

mod names;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cgp_core::cgp::{self, cgp_max, mean_cgp};
use cgp_core::channels::Channel;
use cgp_core::experiments::suites::{run_suite, Suite};
use cgp_core::experiments::{self, figure_data, mc_cgp, quadrature_cgp_n2, Figure, MIN_SAMPLES};
use cgp_core::sampling::RngStream;
use cgp_core::ComplexMatrix;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

/// Unitarity tolerance for matrices read from files.
const FILE_UNITARY_TOL: f64 = 1e-8;
const DEFAULT_SAMPLES: usize = 100_000;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] cgp_core::Error),
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("writing output: {0}")]
    Write(#[from] io::Error),
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// The reader of our stdout went away, as with `cgp figure fig1 | head`.
    fn is_broken_pipe(&self) -> bool {
        let io = match self {
            CliError::Write(e) => Some(e),
            CliError::Csv(e) => match e.kind() {
                csv::ErrorKind::Io(e) => Some(e),
                _ => None,
            },
            _ => None,
        };
        io.is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Write(e.into())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cgp",
    version,
    about = "Skew-information coherence generating power of quantum channels"
)]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct RunConfig {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; JSON for single results and CSV for figures by default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads; changes wall time only, never results.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Grid points for figures, quadrature nodes for `mc` on qubits.
    #[arg(long, global = true)]
    points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form CGP of a unitary channel.
    Unitary(UnitaryArgs),
    /// Monte Carlo CGP estimate of a channel.
    Mc(McArgs),
    /// Data series for the CGP figures.
    Figure(FigureArgs),
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: SuiteName,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct UnitaryArgs {
    /// Named gate: hadamard, rotation:THETA, sqrt_swap, partial_swap:T, fourier:N, identity:N.
    #[arg(long)]
    gate: Option<String>,
    /// JSON matrix file: {"rows", "cols", "data": [[re, im], ...]}.
    #[arg(long)]
    matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct McArgs {
    /// Named gate or noise channel, such as `hadamard` or `pauli:0.7,0.1,0.1,0.1`.
    #[arg(long)]
    channel: Option<String>,
    /// JSON channel file: {"type", "matrices", "weights"}.
    #[arg(long)]
    channel_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FigureArgs {
    #[arg(value_enum)]
    which: FigureName,
    /// Largest exponent m for fig1 (N = 2^m).
    #[arg(long, default_value_t = 10)]
    max_exponent: u32,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FigureName {
    /// cgp_max(N) for N = 2^m.
    Fig1,
    /// CGP of the rotation gate over theta in [0, pi].
    Fig2,
    /// CGP of the partial swap over t in [0, 1].
    Fig3,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteName {
    Constants,
    Oracles,
    Mean,
    Typicality,
    Mixed,
}

impl From<SuiteName> for Suite {
    fn from(s: SuiteName) -> Self {
        match s {
            SuiteName::Constants => Suite::Constants,
            SuiteName::Oracles => Suite::Oracles,
            SuiteName::Mean => Suite::Mean,
            SuiteName::Typicality => Suite::Typicality,
            SuiteName::Mixed => Suite::Mixed,
        }
    }
}

#[derive(Debug, Serialize)]
struct UnitaryReport {
    source: String,
    seed: u64,
    dimension: usize,
    purity_sum: f64,
    cgp: f64,
    cgp_max: f64,
    normalized_cgp: f64,
    mean_cgp: f64,
}

#[derive(Debug, Serialize)]
struct McReport {
    channel: String,
    kind: &'static str,
    dimension: usize,
    seed: u64,
    stream_id: u64,
    samples: usize,
    mean: f64,
    std_error: f64,
    min: f64,
    max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    analytic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    z_score: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mixed_unitary_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quadrature: Option<f64>,
}

/// What a command produced, before formatting.
enum Output {
    Record(Value),
    Table { header: Vec<String>, rows: Vec<Vec<Value>> },
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let file = File::open(path).map_err(|source| CliError::Read {
        path: path.into(),
        source,
    })?;
    serde_json::from_reader(io::BufReader::new(file)).map_err(|source| CliError::Json {
        path: path.into(),
        source,
    })
}

fn cmd_unitary(args: &UnitaryArgs, run: &RunConfig) -> Result<Output, CliError> {
    let (source, u) = match (&args.gate, &args.matrix) {
        (Some(g), _) => (g.clone(), names::gate(g)?),
        (None, Some(path)) => (path.display().to_string(), read_json::<ComplexMatrix>(path)?),
        (None, None) => unreachable!("clap enforces one source"),
    };
    let n = u.square_dim()?;
    if n < 2 {
        return Err(CliError::Usage("unitary must have dimension at least 2".into()));
    }
    let cgp = cgp::cgp_unitary_with_tolerance(&u, FILE_UNITARY_TOL)?;
    let max = cgp_max(n)?;
    let report = UnitaryReport {
        source,
        seed: run.seed,
        dimension: n,
        purity_sum: u.squared_moduli().iter().map(|w| w * w).sum(),
        cgp,
        cgp_max: max,
        normalized_cgp: cgp / max,
        mean_cgp: mean_cgp(n)?,
    };
    Ok(Output::Record(serde_json::to_value(report)?))
}

fn cmd_mc(args: &McArgs, run: &RunConfig) -> Result<Output, CliError> {
    if run.samples < MIN_SAMPLES {
        return Err(CliError::Usage(format!(
            "--samples must be at least {MIN_SAMPLES}, got {}",
            run.samples
        )));
    }
    let (name, phi) = match (&args.channel, &args.channel_file) {
        (Some(spec), _) => (spec.clone(), names::channel(spec)?),
        (None, Some(path)) => (path.display().to_string(), read_json::<Channel>(path)?),
        (None, None) => unreachable!("clap enforces one source"),
    };
    let stream = RngStream::new(run.seed, 0);
    let est = mc_cgp(&phi, run.samples, stream)?;
    log::info!("{} samples in {:.3} s", est.n_samples, est.wall_time);
    let analytic = match &phi {
        Channel::Unitary(u) => Some(cgp::cgp_unitary(u)?),
        _ => None,
    };
    let mixed_unitary_bound = match &phi {
        Channel::MixedUnitary { .. } => Some(cgp::mixed_unitary_bound(&phi)?),
        _ => None,
    };
    let quadrature = if phi.dim() == 2 {
        let points = run.points.unwrap_or(experiments::DEFAULT_QUADRATURE_POINTS);
        Some(quadrature_cgp_n2(&phi, points)?)
    } else {
        None
    };
    let report = McReport {
        channel: name,
        kind: phi.kind(),
        dimension: phi.dim(),
        seed: est.seed,
        stream_id: est.stream_id,
        samples: est.n_samples,
        mean: est.mean,
        std_error: est.std_error,
        min: est.min,
        max: est.max,
        analytic,
        z_score: analytic.map(|a| est.z_score(a)),
        mixed_unitary_bound,
        quadrature,
    };
    Ok(Output::Record(serde_json::to_value(report)?))
}

fn cmd_figure(args: &FigureArgs, run: &RunConfig) -> Result<Output, CliError> {
    let which = match args.which {
        FigureName::Fig1 => Figure::UpperBound {
            max_exponent: args.max_exponent,
        },
        FigureName::Fig2 => Figure::Rotation {
            points: run.points.unwrap_or(181),
        },
        FigureName::Fig3 => Figure::PartialSwap {
            points: run.points.unwrap_or(101),
        },
    };
    let rows = figure_data(which)?
        .into_iter()
        .map(|(x, y)| {
            let x = match which {
                Figure::UpperBound { .. } => Value::from(x as u64),
                _ => Value::from(x),
            };
            vec![x, Value::from(y)]
        })
        .collect();
    Ok(Output::Table {
        header: which.header().map(String::from).to_vec(),
        rows,
    })
}

fn cmd_verify(suite: SuiteName, run: &RunConfig) -> Result<(Output, bool), CliError> {
    let report = run_suite(suite.into(), run.seed)?;
    let passed = report.passed;
    for c in report.checks.iter().filter(|c| !c.passed) {
        log::warn!(
            "check failed: {} = {} (expected {} ± {})",
            c.name,
            c.value,
            c.expected,
            c.tolerance
        );
    }
    Ok((Output::Record(serde_json::to_value(report)?), passed))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Flattens a JSON record into one CSV row; a nested `checks` array becomes one row per check.
fn record_to_table(v: Value) -> (Vec<String>, Vec<Vec<Value>>) {
    let Value::Object(map) = v else {
        return (vec!["value".into()], vec![vec![v]]);
    };
    if let Some(Value::Array(checks)) = map.get("checks") {
        let mut header: Vec<String> = vec!["suite".into(), "seed".into()];
        let mut rows = Vec::new();
        for c in checks {
            if let Value::Object(c) = c {
                if header.len() == 2 {
                    header.extend(c.keys().cloned());
                }
                let mut row = vec![map["suite"].clone(), map["seed"].clone()];
                row.extend(c.values().cloned());
                rows.push(row);
            }
        }
        return (header, rows);
    }
    let header = map.keys().cloned().collect();
    let row = map.into_iter().map(|(_, v)| v).collect();
    (header, vec![row])
}

fn emit(output: Output, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    match (output, format) {
        (Output::Record(v), Format::Json) => {
            serde_json::to_writer_pretty(&mut *out, &v)?;
            writeln!(out)?;
        }
        (Output::Table { header, rows }, Format::Json) => {
            let objects: Vec<Value> = rows
                .into_iter()
                .map(|r| Value::Object(header.iter().cloned().zip(r).collect()))
                .collect();
            serde_json::to_writer_pretty(&mut *out, &objects)?;
            writeln!(out)?;
        }
        (output, Format::Csv) => {
            let (header, rows) = match output {
                Output::Table { header, rows } => (header, rows),
                Output::Record(v) => record_to_table(v),
            };
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&header)?;
            for r in rows {
                w.write_record(r.iter().map(scalar))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let config = &cli.run;
    if let Some(threads) = config.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    }
    let (output, passed, default_format) = match &cli.command {
        Command::Unitary(a) => (cmd_unitary(a, config)?, true, Format::Json),
        Command::Mc(a) => (cmd_mc(a, config)?, true, Format::Json),
        Command::Figure(a) => (cmd_figure(a, config)?, true, Format::Csv),
        Command::Verify { suite } => {
            let (o, passed) = cmd_verify(*suite, config)?;
            (o, passed, Format::Json)
        }
    };
    let format = config.format.unwrap_or(default_format);
    match &config.out {
        Some(path) => {
            let file = File::create(path).map_err(|source| CliError::Read {
                path: path.clone(),
                source,
            })?;
            let mut w = BufWriter::new(file);
            emit(output, format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            emit(output, format, &mut lock)?;
        }
    }
    Ok(passed)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CGP_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is_broken_pipe() => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
