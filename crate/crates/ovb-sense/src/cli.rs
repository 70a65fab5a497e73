//! The `ovb-sense` command line.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ovb_core::{
    coef_summary, contour_grid, fit_ols, run_analysis, AnalysisOptions, BenchmarkMode, BenchmarkSpec, GridSpec,
    ModelSpec, RobustnessQuery, SignCase,
};

use crate::io::{expand_columns, load_csv};
use crate::render::{render_json, render_text, write_contour};
use crate::{fixtures, SenseError};

/// Sensitivity of OLS treatment estimates to omitted variable bias.
#[derive(Debug, Parser)]
#[command(name = "ovb-sense", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Robustness values, benchmark bounds and verdicts.
    Analyze(AnalyzeArgs),
    /// Bias-adjusted estimate and t statistic over a grid of confounder strengths.
    Contour(ContourArgs),
    /// Export synthetic oracle fixtures.
    Fixtures(FixturesArgs),
}

#[derive(Debug, clap::Args)]
struct ModelArgs {
    /// Input CSV.
    #[arg(long)]
    data: PathBuf,
    /// Outcome column.
    #[arg(long)]
    outcome: String,
    /// Treatment column.
    #[arg(long)]
    treatment: String,
    /// Covariate columns; `prefix*` selects every column with that prefix.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    covariates: Vec<String>,
    /// Drop rows with missing or unparseable cells instead of failing.
    #[arg(long)]
    drop_na: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Total,
    Partial,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignCaseArg {
    Increase,
    ReduceOpposite,
    ReduceSame,
}

impl From<SignCaseArg> for SignCase {
    fn from(a: SignCaseArg) -> Self {
        match a {
            SignCaseArg::Increase => SignCase::Increase,
            SignCaseArg::ReduceOpposite => SignCase::ReduceOppositeSign,
            SignCaseArg::ReduceSame => SignCase::ReduceSameSign,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, clap::Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Benchmark covariates; must be among the covariates.
    #[arg(long, value_delimiter = ',', required = true)]
    benchmark: Vec<String>,
    /// Confounder strength with the treatment, relative to the benchmark.
    #[arg(long, default_value_t = 1.0)]
    kd: f64,
    /// Confounder strength with the outcome, relative to the benchmark.
    #[arg(long, default_value_t = 1.0)]
    ky: f64,
    /// Fraction of the estimate to explain away.
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    /// Significance level.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = SignCaseArg::Increase)]
    sign_case: SignCaseArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Fail when the sign case only yields a lower bound.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, clap::Args)]
struct ContourArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Grid points per axis.
    #[arg(long, default_value_t = 50)]
    steps: usize,
    /// Largest R²(D~Z|X).
    #[arg(long)]
    max_r2d: f64,
    /// Largest R²(Y~Z|D,X).
    #[arg(long)]
    max_r2y: f64,
    /// Output CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, clap::Args)]
struct FixturesArgs {
    #[arg(long)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

fn load_model(args: &ModelArgs) -> Result<(ovb_core::Dataset, ModelSpec), SenseError> {
    let data = load_csv(&args.data, args.drop_na)?;
    let covariates = expand_columns(&data, &args.covariates)?;
    let spec = ModelSpec::new(args.outcome.clone(), args.treatment.clone(), covariates);
    spec.validate(&data)?;
    Ok((data, spec))
}

fn analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<(), SenseError> {
    let (data, spec) = load_model(&args.model)?;
    let benchmark = expand_columns(&data, &args.benchmark)?;
    let query = RobustnessQuery::new(args.q, args.alpha, true)?;
    let opts = AnalysisOptions {
        query,
        sign_case: args.sign_case.into(),
        strict: args.strict,
    };
    let mut notes = Vec::new();
    let want_total = match args.mode {
        ModeArg::Total => true,
        ModeArg::Partial => false,
        ModeArg::Both if benchmark.len() > 1 => {
            notes.push(format!(
                "total mode skipped: it takes a single benchmark covariate, got {}",
                benchmark.len()
            ));
            false
        }
        ModeArg::Both => true,
    };
    let want_partial = args.mode != ModeArg::Total;
    let total = want_total.then(|| BenchmarkSpec::new(benchmark.clone(), args.kd, args.ky, BenchmarkMode::Total));
    let partial = want_partial.then(|| BenchmarkSpec::new(benchmark.clone(), args.kd, args.ky, BenchmarkMode::Partial));
    let mut report = run_analysis(&data, &spec, total.as_ref(), partial.as_ref(), &opts)?;
    report.warnings.extend(notes);
    let rendered = match args.format {
        Format::Text => render_text(&report),
        Format::Json => render_json(&report)? + "\n",
    };
    out.write_all(rendered.as_bytes()).map_err(|e| SenseError::io("<stdout>", e))
}

fn contour(args: &ContourArgs) -> Result<(), SenseError> {
    let (data, spec) = load_model(&args.model)?;
    let fit = fit_ols(&data, &spec)?;
    let summary = coef_summary(&fit, &spec.treatment)?;
    let grid = GridSpec {
        steps_x: args.steps,
        steps_y: args.steps,
        max_x: args.max_r2d,
        max_y: args.max_r2y,
    };
    let cells = contour_grid(&summary, &grid, &RobustnessQuery::default())?;
    let file = std::fs::File::create(&args.out).map_err(|e| SenseError::io(&args.out, e))?;
    write_contour(&cells, std::io::BufWriter::new(file))
}

/// Runs a parsed command, writing reports to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), SenseError> {
    match &cli.command {
        Command::Analyze(a) => analyze(a, out),
        Command::Contour(c) => contour(c),
        Command::Fixtures(f) => {
            for path in fixtures::export(f.seed, &f.out)? {
                writeln!(out, "{}", path.display()).map_err(|e| SenseError::io("<stdout>", e))?;
            }
            Ok(())
        }
    }
}

/// Entry point of the binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match run(&cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
