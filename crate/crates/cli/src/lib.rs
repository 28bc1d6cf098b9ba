//! `idealrank` command-line interface.

use std::fmt;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use idealrank_core::analysis::{
    explain_report, monte_carlo_stability, weight_sweep, DisplayRounding, NoiseModel,
};
use idealrank_core::ingestion::{
    aggregate, alternatives_in_sheets, parse_document, parse_problem, parse_scoresheets,
    AggregationMethod, IngestError, ProblemFormat, SCORE_SCALE,
};
use idealrank_core::{
    evaluate_validated, validate_problem_with, DecisionProblem, Distance, EvalOptions, IdealMode,
    TopsisError, ValidatedProblem, ValidationError, ValidationPolicy,
};

pub mod render;

#[derive(Debug, Parser)]
#[command(
    name = "idealrank",
    version,
    about = "Rank alternatives by closeness to the ideal solution (TOPSIS)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank the alternatives of a problem file.
    Rank(EvalArgs),
    /// Print every intermediate table of the ranking.
    Explain(EvalArgs),
    /// Re-rank while sweeping one criterion's weight from 0 to 1.
    Sweep {
        #[command(flatten)]
        eval: EvalArgs,
        #[arg(long, env = "IDEALRANK_CRITERION")]
        criterion: String,
        #[arg(long, env = "IDEALRANK_STEPS", default_value_t = 101, value_parser = clap::value_parser!(u64).range(2..))]
        steps: u64,
    },
    /// Rank repeatedly under random score jitter and report rank frequencies.
    Stability {
        #[command(flatten)]
        eval: EvalArgs,
        #[arg(long, env = "IDEALRANK_TRIALS", default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, env = "IDEALRANK_SEED", default_value_t = 0)]
        seed: u64,
        /// Largest absolute score change per cell.
        #[arg(long, env = "IDEALRANK_MAGNITUDE", default_value_t = 1)]
        magnitude: u32,
    },
    /// Check a problem file without ranking it.
    Validate(EvalArgs),
    /// Start the HTTP service.
    Serve {
        #[arg(long, env = "IDEALRANK_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "IDEALRANK_HOST", default_value = "127.0.0.1")]
        host: IpAddr,
    },
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// Problem document (JSON object or comma-separated table).
    pub input: PathBuf,
    #[arg(long, env = "IDEALRANK_IDEAL_MODE", value_enum, default_value_t = IdealModeArg::HonorKinds)]
    pub ideal_mode: IdealModeArg,
    #[arg(long, env = "IDEALRANK_DISTANCE", value_enum, default_value_t = DistanceArg::Euclidean)]
    pub distance: DistanceArg,
    #[arg(long, env = "IDEALRANK_FORMAT", value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    /// Input layout; detected from the extension or content when omitted.
    #[arg(long, env = "IDEALRANK_INPUT_FORMAT", value_enum)]
    pub input_format: Option<InputFormat>,
    /// Respondent scoresheets to aggregate into the score matrix. The input
    /// file then only supplies criteria and alternatives.
    #[arg(long, env = "IDEALRANK_SCORESHEETS")]
    pub scoresheets: Option<PathBuf>,
    #[arg(long, env = "IDEALRANK_AGGREGATE", value_enum, default_value_t = AggregateArg::Mean)]
    pub aggregate: AggregateArg,
    /// Rescale weights that do not sum to 1 instead of rejecting them.
    #[arg(long, env = "IDEALRANK_AUTO_NORMALIZE")]
    pub auto_normalize: bool,
    /// Rounding used for 4-decimal display.
    #[arg(long, env = "IDEALRANK_ROUNDING", value_enum, default_value_t = RoundingArg::Nearest)]
    pub rounding: RoundingArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdealModeArg {
    HonorKinds,
    AllBenefit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistanceArg {
    Euclidean,
    Squared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Object,
    Delimited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Object,
    Delimited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AggregateArg {
    Mean,
    Median,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RoundingArg {
    Nearest,
    Up,
}

impl EvalArgs {
    pub fn options(&self) -> EvalOptions {
        EvalOptions {
            ideal_mode: match self.ideal_mode {
                IdealModeArg::HonorKinds => IdealMode::HonorKinds,
                IdealModeArg::AllBenefit => IdealMode::AllBenefit,
            },
            distance: match self.distance {
                DistanceArg::Euclidean => Distance::Euclidean,
                DistanceArg::Squared => Distance::Squared,
            },
            auto_normalize_weights: self.auto_normalize,
        }
    }

    pub fn rounding(&self) -> DisplayRounding {
        match self.rounding {
            RoundingArg::Nearest => DisplayRounding::Nearest,
            RoundingArg::Up => DisplayRounding::Up,
        }
    }
}

/// Exit status and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout: stdout.into_bytes(),
            stderr: Vec::new(),
        }
    }

    fn failed(err: CliError) -> Self {
        Outcome {
            code: 1,
            stdout: Vec::new(),
            stderr: format!("{err}").into_bytes(),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Io { path: PathBuf, message: String },
    Ingest { path: PathBuf, error: IngestError },
    Invalid(ValidationError),
    Engine(TopsisError),
    Serve(String),
}

impl From<TopsisError> for CliError {
    fn from(e: TopsisError) -> Self {
        match e {
            TopsisError::Invalid(v) => CliError::Invalid(v),
            other => CliError::Engine(other),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, message } => {
                writeln!(f, "error: cannot read {}: {message}", path.display())
            }
            CliError::Ingest { path, error } => {
                writeln!(f, "error: {}: {}: {error}", path.display(), error.code())
            }
            CliError::Invalid(v) => {
                writeln!(f, "error: invalid problem")?;
                for violation in &v.violations {
                    writeln!(f, "  {violation}")?;
                }
                Ok(())
            }
            CliError::Engine(e) => {
                let code = e.violations().first().map(|v| v.code);
                match code {
                    Some(code) => writeln!(f, "error: {code}: {e}"),
                    None => writeln!(f, "error: {e}"),
                }
            }
            CliError::Serve(msg) => writeln!(f, "error: {msg}"),
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

/// Loads the problem named by `args`, aggregating scoresheets when given,
/// and validates it.
pub fn load_problem(args: &EvalArgs) -> Result<ValidatedProblem, CliError> {
    let bytes = read(&args.input)?;
    let format = match args.input_format {
        Some(InputFormat::Object) => ProblemFormat::Object,
        Some(InputFormat::Delimited) => ProblemFormat::Delimited,
        None => ProblemFormat::detect(Some(&args.input), &bytes),
    };
    let ingest = |path: &Path| {
        let path = path.to_owned();
        move |error| CliError::Ingest { path, error }
    };

    let mut policy = ValidationPolicy {
        auto_normalize_weights: args.auto_normalize,
        score_range: None,
    };
    let problem: DecisionProblem = match &args.scoresheets {
        None => parse_problem(&bytes, format).map_err(ingest(&args.input))?,
        Some(sheet_path) => {
            let doc = parse_document(&bytes, format).map_err(ingest(&args.input))?;
            let sheets = parse_scoresheets(&read(sheet_path)?).map_err(ingest(sheet_path))?;
            let alternatives = if doc.alternatives.is_empty() {
                alternatives_in_sheets(&sheets)
            } else {
                doc.alternatives
            };
            let method = match args.aggregate {
                AggregateArg::Mean => AggregationMethod::ArithmeticMean,
                AggregateArg::Median => AggregationMethod::Median,
            };
            policy.score_range = Some((f64::from(SCORE_SCALE.0), f64::from(SCORE_SCALE.1)));
            aggregate(&sheets, method, &doc.criteria, &alternatives).map_err(ingest(sheet_path))?
        }
    };
    validate_problem_with(problem, &policy).map_err(CliError::Invalid)
}

fn execute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Validate(args) => {
            let v = load_problem(args)?;
            Ok(render::validation(&v, args.format))
        }
        Command::Rank(args) => {
            let report = evaluate_validated(&load_problem(args)?, &args.options())?;
            Ok(render::rank(&report, args.format, args.rounding()))
        }
        Command::Explain(args) => {
            let report = evaluate_validated(&load_problem(args)?, &args.options())?;
            Ok(render::explain(
                &explain_report(&report, args.rounding()),
                args.format,
            ))
        }
        Command::Sweep {
            eval,
            criterion,
            steps,
        } => {
            let problem = load_problem(eval)?.into_problem();
            let steps = usize::try_from(*steps).unwrap_or(usize::MAX);
            let result = weight_sweep(&problem, criterion, steps, &eval.options())?;
            Ok(render::sweep(&result, eval.format, eval.rounding()))
        }
        Command::Stability {
            eval,
            trials,
            seed,
            magnitude,
        } => {
            let problem = load_problem(eval)?.into_problem();
            let report = monte_carlo_stability(
                &problem,
                NoiseModel::jitter(*magnitude),
                *trials,
                *seed,
                &eval.options(),
            )?;
            Ok(render::stability(&report, eval.format))
        }
        Command::Serve { port, host } => {
            let addr = SocketAddr::new(*host, *port);
            let runtime = tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()
                .map_err(|e| CliError::Serve(e.to_string()))?;
            println!("listening on http://{addr}");
            runtime
                .block_on(idealrank_service::serve(addr))
                .map_err(|e| CliError::Serve(format!("cannot serve on {addr}: {e}")))?;
            Ok(String::new())
        }
    }
}

/// Runs one parsed invocation, capturing its output.
pub fn run(cli: &Cli) -> Outcome {
    match execute(&cli.command) {
        Ok(out) => Outcome::ok(out),
        Err(e) => Outcome::failed(e),
    }
}

/// Parses `args` (including the program name) and runs. Usage errors exit
/// with status 2; `--help` and `--version` exit 0.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let text = e.render().to_string().into_bytes();
            if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: Vec::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: Vec::new(),
                }
            }
        }
    }
}
