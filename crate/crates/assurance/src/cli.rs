//! The `assurance` command.
//!
//! Exit codes: 0 success, 2 usage error, 3 domain error (for example
//! `f > n` or confidence exactly 1), 4 verification failure. Data goes to
//! stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::io::Write;

use assurance_core::tabulate::{
    assurance_crossing_series, assurance_table, confidence_series, reliability_series, Column,
    InfiniteMethod, PlotSeries, StepAxis,
};
use assurance_core::{
    assurance_finite, assurance_infinite, confidence_finite, confidence_infinite,
    reliability_finite, reliability_infinite, step_grid, FinitePlan, Probability, TestEvidence,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::format;
use crate::oracle::{default_probes, run_probes, PROBE_BAND};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "assurance",
    version,
    about = "Reliability, confidence, and assurance for pass/fail test campaigns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Confidence that reliability is at least R.
    Confidence(ConfidenceArgs),
    /// Minimum reliability demonstrated at confidence C.
    Reliability(ReliabilityArgs),
    /// Level at which reliability and confidence balance.
    Assurance(AssuranceArgs),
    /// Assurance table over ranges of n and m.
    Table(TableArgs),
    /// Discrete reliability steps of a finite plan.
    Grid(GridArgs),
    /// Plot-ready data series.
    #[command(subcommand)]
    Series(SeriesCommand),
    /// Monte Carlo check of the binomial tail.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct EvidenceArgs {
    /// Tested samples.
    #[arg(short = 'n', long = "samples")]
    n: u64,
    /// Failures among the tested samples.
    #[arg(short = 'f', long = "failures", default_value_t = 0)]
    f: u64,
}

impl EvidenceArgs {
    fn evidence(&self) -> Result<TestEvidence, Error> {
        Ok(TestEvidence::new(self.n, self.f)?)
    }
}

#[derive(Debug, Args)]
struct PopulationArgs {
    /// Additional samples still to be built (finite population).
    #[arg(short = 'm', long = "additional", conflicts_with = "infinite")]
    m: Option<u64>,
    /// Unlimited further production (the default).
    #[arg(long)]
    infinite: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextOrJson {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CsvOrJson {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct ConfidenceArgs {
    #[command(flatten)]
    evidence: EvidenceArgs,
    /// Reliability, as a fraction or a percentage such as `90%`.
    #[arg(short = 'r', long = "reliability", value_parser = parse_probability)]
    r: f64,
    #[command(flatten)]
    population: PopulationArgs,
    #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
    format: TextOrJson,
}

#[derive(Debug, Args)]
struct ReliabilityArgs {
    #[command(flatten)]
    evidence: EvidenceArgs,
    /// Confidence, as a fraction or a percentage.
    #[arg(short = 'c', long = "confidence", value_parser = parse_probability)]
    c: f64,
    #[command(flatten)]
    population: PopulationArgs,
    #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
    format: TextOrJson,
}

#[derive(Debug, Args)]
struct AssuranceArgs {
    #[command(flatten)]
    evidence: EvidenceArgs,
    #[command(flatten)]
    population: PopulationArgs,
    #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
    format: TextOrJson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InfMethodArg {
    /// Brent's method stopped at 1e-3, as behind the published table.
    Published,
    /// Bisection to 1e-10.
    Converged,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, default_value_t = 3)]
    n_min: u64,
    #[arg(long, default_value_t = 22)]
    n_max: u64,
    #[arg(long, default_value_t = 1)]
    m_min: u64,
    #[arg(long, default_value_t = 10)]
    m_max: u64,
    #[arg(short = 'f', long = "failures", default_value_t = 0)]
    f: u64,
    /// Leave out the infinite-population column.
    #[arg(long)]
    no_inf: bool,
    #[arg(long, value_enum, default_value_t = InfMethodArg::Published)]
    inf_method: InfMethodArg,
    /// JSON cells as fractions instead of percentages.
    #[arg(long)]
    fraction: bool,
    #[arg(long, value_enum, default_value_t = CsvOrJson::Csv)]
    format: CsvOrJson,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[command(flatten)]
    evidence: EvidenceArgs,
    #[arg(short = 'm', long = "additional")]
    m: u64,
    #[arg(long, value_enum, default_value_t = CsvOrJson::Csv)]
    format: CsvOrJson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AxisArg {
    Step,
    Overall,
}

#[derive(Debug, Subcommand)]
enum SeriesCommand {
    /// Confidence against reliability.
    Confidence {
        #[command(flatten)]
        evidence: EvidenceArgs,
        #[command(flatten)]
        columns: ColumnArgs,
        /// Reliability plotted for finite steps.
        #[arg(long, value_enum, default_value_t = AxisArg::Step)]
        axis: AxisArg,
        #[arg(long, default_value_t = 100)]
        resolution: usize,
        #[arg(long, value_enum, default_value_t = CsvOrJson::Csv)]
        format: CsvOrJson,
    },
    /// Reliability against confidence.
    Reliability {
        #[command(flatten)]
        evidence: EvidenceArgs,
        #[command(flatten)]
        columns: ColumnArgs,
        #[arg(long, default_value_t = 100)]
        resolution: usize,
        #[arg(long, value_enum, default_value_t = CsvOrJson::Csv)]
        format: CsvOrJson,
    },
    /// Reliability, confidence, and their minimum over failure probability.
    AssuranceCrossing {
        #[command(flatten)]
        evidence: EvidenceArgs,
        #[arg(long, default_value_t = 1000)]
        resolution: usize,
        #[arg(long, value_enum, default_value_t = CsvOrJson::Csv)]
        format: CsvOrJson,
    },
}

#[derive(Debug, Args)]
struct ColumnArgs {
    /// Additional-sample counts, one finite series each.
    #[arg(long, value_delimiter = ',', default_values_t = [10u64, 20, 30])]
    m_values: Vec<u64>,
    /// Leave out the infinite-population curve.
    #[arg(long)]
    no_inf: bool,
}

impl ColumnArgs {
    fn columns(&self) -> Vec<Column> {
        let mut columns: Vec<Column> = self.m_values.iter().copied().map(Column::Finite).collect();
        if !self.no_inf {
            columns.push(Column::Infinite);
        }
        columns
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
    format: TextOrJson,
}

/// Accepts `0.9`, `90%`, or `90 %`. Range checks happen later so that
/// `-r 1.5` is a domain error rather than a usage error.
fn parse_probability(text: &str) -> Result<f64, String> {
    let trimmed = text.trim();
    let (number, scale) = match trimmed.strip_suffix('%') {
        Some(rest) => (rest.trim_end(), 100.0),
        None => (trimmed, 1.0),
    };
    number
        .parse::<f64>()
        .map(|v| v / scale)
        .map_err(|_| format!("`{text}` is not a probability (try 0.9 or 90%)"))
}

/// Four significant digits.
fn significant(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (3 - magnitude).max(0) as usize;
    format!("{value:.decimals$}")
}

fn describe(p: f64) -> String {
    format!("{} = {:.1}%", significant(p), p * 100.0)
}

#[derive(Debug, Serialize)]
struct Report {
    measure: &'static str,
    n: u64,
    f: u64,
    /// `null` for the infinite population.
    m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reliability: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    confidence: Option<f64>,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    achieved_at_d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reliability_at: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    confidence_at: Option<f64>,
}

impl Report {
    fn new(
        measure: &'static str,
        evidence: &EvidenceArgs,
        m: Option<u64>,
        value: Probability,
    ) -> Self {
        Report {
            measure,
            n: evidence.n,
            f: evidence.f,
            m,
            reliability: None,
            confidence: None,
            value: value.value(),
            achieved_at_d: None,
            reliability_at: None,
            confidence_at: None,
        }
    }

    fn text(&self) -> String {
        let mut out = format!("{}: {}", self.measure, describe(self.value));
        if let Some(d) = self.achieved_at_d {
            out.push_str(&format!(" (achieved at d={d})"));
        }
        out.push('\n');
        if let (Some(r), Some(c)) = (self.reliability_at, self.confidence_at) {
            out.push_str(&format!(
                "reliability: {}\nconfidence: {}\n",
                describe(r),
                describe(c)
            ));
        }
        out
    }

    fn render(&self, format: TextOrJson) -> Result<String, Error> {
        Ok(match format {
            TextOrJson::Text => self.text(),
            TextOrJson::Json => format::to_json_line(&serde_json::to_value(self)?),
        })
    }
}

fn probability(value: f64) -> Result<Probability, Error> {
    Ok(Probability::new(value)?)
}

/// Parses `args` (including the program name), runs the command, and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Error::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Error> {
    let text = match command {
        Command::Confidence(args) => {
            let evidence = args.evidence.evidence()?;
            let r = probability(args.r)?;
            let (m, c) = match args.population.m {
                Some(m) => (Some(m), confidence_finite(&FinitePlan::new(evidence, m), r)),
                None => (None, confidence_infinite(evidence, r)),
            };
            let mut report = Report::new("confidence", &args.evidence, m, c);
            report.reliability = Some(r.value());
            report.render(args.format)?
        }
        Command::Reliability(args) => {
            let evidence = args.evidence.evidence()?;
            let c = probability(args.c)?;
            let (m, r) = match args.population.m {
                Some(m) => (
                    Some(m),
                    reliability_finite(&FinitePlan::new(evidence, m), c)?,
                ),
                None => (None, reliability_infinite(evidence, c)?),
            };
            let mut report = Report::new("reliability", &args.evidence, m, r);
            report.confidence = Some(c.value());
            report.render(args.format)?
        }
        Command::Assurance(args) => {
            let evidence = args.evidence.evidence()?;
            let report = match args.population.m {
                Some(m) => {
                    let result = assurance_finite(&FinitePlan::new(evidence, m));
                    let mut report =
                        Report::new("assurance", &args.evidence, Some(m), result.assurance);
                    report.achieved_at_d = Some(result.achieved_at_d);
                    report.reliability_at = Some(result.reliability_at.value());
                    report.confidence_at = Some(result.confidence_at.value());
                    report
                }
                None => Report::new(
                    "assurance",
                    &args.evidence,
                    None,
                    assurance_infinite(evidence)?,
                ),
            };
            report.render(args.format)?
        }
        Command::Table(args) => {
            let method = match args.inf_method {
                InfMethodArg::Published => InfiniteMethod::PUBLISHED,
                InfMethodArg::Converged => InfiniteMethod::Converged,
            };
            let table = assurance_table(
                args.n_min..=args.n_max,
                args.m_min..=args.m_max,
                (!args.no_inf).then_some(method),
                args.f,
            )?;
            match args.format {
                CsvOrJson::Csv => format::table_csv(&table),
                CsvOrJson::Json => {
                    format::to_json_line(&format::table_json(&table, !args.fraction)?)
                }
            }
        }
        Command::Grid(args) => {
            let plan = FinitePlan::new(args.evidence.evidence()?, args.m);
            let steps = step_grid(&plan)?;
            match args.format {
                CsvOrJson::Csv => format::grid_csv(&steps),
                CsvOrJson::Json => format::to_json_line(&format::grid_json(&plan, &steps)?),
            }
        }
        Command::Series(series) => {
            let (data, format) = build_series(series)?;
            render_series(&data, format)?
        }
        Command::Verify(args) => {
            let outcomes = run_probes(&default_probes(), args.trials, args.seed)?;
            let all_passed = outcomes.iter().all(|o| o.passed);
            let text = match args.format {
                TextOrJson::Json => format::to_json_line(&serde_json::json!({
                    "trials": args.trials,
                    "seed": args.seed,
                    "band": PROBE_BAND,
                    "passed": all_passed,
                    "probes": serde_json::to_value(&outcomes)?,
                })),
                TextOrJson::Text => {
                    let mut text = String::new();
                    for o in &outcomes {
                        text.push_str(&format!(
                            "{} n={} f={} r={}: estimate {:.6} +/- {:.6}, analytic {:.6}\n",
                            if o.passed { "PASS" } else { "FAIL" },
                            o.probe.n,
                            o.probe.f,
                            o.probe.reliability,
                            o.estimate.estimate,
                            o.estimate.standard_error,
                            o.expected
                        ));
                    }
                    text
                }
            };
            out.write_all(text.as_bytes())?;
            return Ok(if all_passed { EXIT_OK } else { EXIT_VERIFY });
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(EXIT_OK)
}

fn build_series(command: SeriesCommand) -> Result<(Vec<PlotSeries>, CsvOrJson), Error> {
    Ok(match command {
        SeriesCommand::Confidence {
            evidence,
            columns,
            axis,
            resolution,
            format,
        } => {
            let axis = match axis {
                AxisArg::Step => StepAxis::Step,
                AxisArg::Overall => StepAxis::Overall,
            };
            (
                confidence_series(evidence.evidence()?, &columns.columns(), resolution, axis)?,
                format,
            )
        }
        SeriesCommand::Reliability {
            evidence,
            columns,
            resolution,
            format,
        } => (
            reliability_series(evidence.evidence()?, &columns.columns(), resolution)?,
            format,
        ),
        SeriesCommand::AssuranceCrossing {
            evidence,
            resolution,
            format,
        } => (
            assurance_crossing_series(evidence.evidence()?, resolution)?,
            format,
        ),
    })
}

fn render_series(series: &[PlotSeries], format: CsvOrJson) -> Result<String, Error> {
    Ok(match format {
        CsvOrJson::Csv => format::series_csv(series),
        CsvOrJson::Json => format::to_json_line(&format::series_json(series)?),
    })
}
