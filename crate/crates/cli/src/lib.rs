//! Command-line front end: distribution queries, the critical-point table,
//! Monte-Carlo validation runs and paired-comparison reports with plots.

pub mod error;
pub mod input;
pub mod report;
pub mod svg;
mod validate;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use skewtail_core::paired::analyze;
use skewtail_core::rmtdist::{
    largest_sv_cdf, largest_sv_upper, standardized_sv_upper, CRITICAL_POINT, VALIDITY_SLACK,
};

pub use error::{CliError, CliResult};
use report::JsonReport;

/// Environment variable capping the worker threads of `validate`.
pub const THREADS_ENV: &str = "SKEWTAIL_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "skewtail",
    version,
    about = "Largest singular values of skew-symmetric Gaussian matrices and paired-comparison tests"
)]
pub struct Cli {
    /// Seed for Monte-Carlo runs.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// P(σ1 < x)
    Cdf,
    /// P(σ1 > x)
    Tail,
    /// P(σ1/‖σ‖ > x), exact for x >= 1/√2
    Standardized,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one of the distribution functions.
    Dist {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Matrix order.
        #[arg(long)]
        p: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// Upper probabilities of σ1/‖σ‖ at the critical point 1/√2.
    Table1 {
        #[arg(long, default_value_t = 4)]
        pmin: usize,
        #[arg(long, default_value_t = 18)]
        pmax: usize,
    },
    /// Compare Monte-Carlo samples with the exact laws.
    Validate {
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 200_000)]
        samples: usize,
    },
    /// Fit Scheffé's model to a score sheet and test subtractivity.
    Analyze {
        #[command(flatten)]
        data: DataArgs,
        /// Also write the residual plot (SVG) here.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Write only the residual plot (SVG).
    Plot {
        #[command(flatten)]
        data: DataArgs,
    },
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Score-sheet CSV, or a whitespace-separated matrix with --raw.
    #[arg(long)]
    pub input: PathBuf,
    /// Games per pair (required for score sheets).
    #[arg(long)]
    pub n_games: Option<u32>,
    /// Error variance of the stabilized scores.
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    /// Input is an already stabilized skew-symmetric matrix.
    #[arg(long)]
    pub raw: bool,
}

/// Result of a command: the main output plus any diagnostics for stderr.
#[derive(Debug, Default)]
pub struct Output {
    pub body: String,
    pub warnings: Vec<String>,
}

fn threads_from_env() -> CliResult<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(1),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got '{v}'"
            ))),
        },
    }
}

#[derive(Serialize)]
struct DistOut {
    kind: Kind,
    p: usize,
    x: f64,
    value: f64,
}

pub fn dist(kind: Kind, p: usize, x: f64, format: Format) -> CliResult<String> {
    if !x.is_finite() {
        return Err(CliError::Usage(format!("x must be finite, got {x}")));
    }
    let value = match kind {
        Kind::Cdf => largest_sv_cdf(p, x)?,
        Kind::Tail => largest_sv_upper(p, x)?,
        Kind::Standardized => {
            if p < 4 {
                return Err(CliError::Usage(format!(
                    "the standardized law needs p >= 4, got {p}"
                )));
            }
            if x < CRITICAL_POINT * (1.0 - VALIDITY_SLACK) {
                return Err(CliError::Validity(format!(
                    "x = {x} is outside exact-validity range: the tube formula is exact only for x >= 1/sqrt(2) = {CRITICAL_POINT:.8}"
                )));
            }
            standardized_sv_upper(p, x)?
        }
    }
    .value();
    Ok(match format {
        Format::Text => {
            let what = match kind {
                Kind::Cdf => format!("P(sigma1 < {x})"),
                Kind::Tail => format!("P(sigma1 > {x})"),
                Kind::Standardized => format!("P(sigma1/||sigma|| > {x})"),
            };
            format!("{what}, p = {p}: {value}  ({value:.4})\n")
        }
        Format::Json => json_line(&DistOut { kind, p, x, value }),
    })
}

/// Four decimals, with values that would round to zero shown as `<0.0001`.
pub fn four_places(v: f64) -> String {
    if v < 5e-5 {
        "<0.0001".into()
    } else {
        format!("{v:.4}")
    }
}

#[derive(Serialize)]
struct TableRow {
    p: usize,
    value: f64,
    display: String,
}

pub fn table1(pmin: usize, pmax: usize, format: Format) -> CliResult<String> {
    if !(4 <= pmin && pmin <= pmax && pmax <= 18) {
        return Err(CliError::Usage(format!(
            "need 4 <= pmin <= pmax <= 18, got pmin = {pmin}, pmax = {pmax}"
        )));
    }
    let mut rows = Vec::new();
    for p in pmin..=pmax {
        let value = standardized_sv_upper(p, CRITICAL_POINT)?.value();
        rows.push(TableRow {
            p,
            value,
            display: four_places(value),
        });
    }
    Ok(match format {
        Format::Text => {
            let mut s = String::from("   p  P(sigma1/||sigma|| > 1/sqrt(2))\n");
            for r in &rows {
                s.push_str(&format!("{:>4}  {}\n", r.p, r.display));
            }
            s
        }
        Format::Json => json_line(&rows),
    })
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

fn analysis(data: &DataArgs) -> CliResult<(input::Dataset, JsonReport, Vec<String>)> {
    if !(data.sigma2.is_finite() && data.sigma2 > 0.0) {
        return Err(CliError::Usage(format!(
            "--sigma2 must be positive, got {}",
            data.sigma2
        )));
    }
    if data.n_games == Some(0) {
        return Err(CliError::Usage("--n-games must be at least 1".into()));
    }
    let dataset = input::load(&data.input, data.n_games, data.raw)?;
    let mut warnings = Vec::new();
    if let Some(sheet) = &dataset.sheet {
        for (i, j) in sheet.boundary_cells() {
            warnings.push(format!(
                "warning: {} vs {} is a clean sweep; the normal approximation of the stabilized score is poor there",
                sheet.names()[i],
                sheet.names()[j]
            ));
        }
    }
    let report = analyze(&dataset.obs, data.sigma2).map_err(CliError::from_data)?;
    let json = JsonReport::new(&report, &dataset.names);
    Ok((dataset, json, warnings))
}

fn plot_of(names: &[String], json: &JsonReport) -> String {
    let points: Vec<(f64, f64)> = json.embedding.iter().map(|p| (p.x, p.y)).collect();
    let [i, j, k] = json.deadlock.triple;
    svg::residual_plot(names, &points, [i - 1, j - 1, k - 1])
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Dist { kind, p, x } => Ok(Output {
            body: dist(*kind, *p, *x, cli.format)?,
            ..Default::default()
        }),
        Command::Table1 { pmin, pmax } => Ok(Output {
            body: table1(*pmin, *pmax, cli.format)?,
            ..Default::default()
        }),
        Command::Validate { p, samples } => {
            let threads = threads_from_env()?;
            Ok(Output {
                body: validate::run(*p, *samples, cli.seed, threads, cli.format)?,
                ..Default::default()
            })
        }
        Command::Analyze { data, plot } => {
            let (dataset, json, warnings) = analysis(data)?;
            if let Some(path) = plot {
                write_file(path, &plot_of(&dataset.names, &json))?;
            }
            let body = match cli.format {
                Format::Text => json.to_text(),
                Format::Json => json.to_json(),
            };
            Ok(Output { body, warnings })
        }
        Command::Plot { data } => {
            let (dataset, json, warnings) = analysis(data)?;
            Ok(Output {
                body: plot_of(&dataset.names, &json),
                warnings,
            })
        }
    }
}

/// Parses `args`, runs the command and delivers its output; returns the
/// process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = run(&cli).and_then(|out| {
        for w in &out.warnings {
            eprintln!("{w}");
        }
        match &cli.out {
            Some(path) => write_file(path, &out.body),
            None => {
                print!("{}", out.body);
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
