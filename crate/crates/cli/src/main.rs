mod app;
mod cache;
mod commands;
mod config;
mod error;
mod fetcher;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use chrono::{DateTime, Utc};
use clap::{Parser, Subcommand, ValueEnum};

use crate::app::App;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

/// Classify shared links, predict their decay, and search for replacements
/// of missing ones using the social context around them.
#[derive(Debug, Parser)]
#[command(name = "relink", version)]
struct Cli {
    /// Configuration file (default: ./relink.toml when present).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Fail if anything outside the configured fixtures would be fetched.
    #[arg(long, global = true)]
    offline: bool,
    /// Use this timestamp instead of the system clock (RFC 3339).
    #[arg(long, global = true, value_name = "ISO8601")]
    fixed_clock: Option<String>,
    /// Maximum number of social posts gathered per target.
    #[arg(long, global = true, value_name = "N")]
    limit: Option<usize>,
    /// Similarity threshold for evaluation summaries.
    #[arg(long, global = true, value_name = "F")]
    threshold: Option<f64>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Probe URIs and classify them as Replicated, Vulnerable, Endangered or Unrecoverable.
    Check {
        #[arg(required = true)]
        uris: Vec<String>,
    },
    /// Predict the percentage affected at a given age in days.
    Predict {
        model: String,
        age_days: f64,
        /// CSV of fitted models (label,slope,intercept) consulted before the built-ins.
        #[arg(long, value_name = "PATH")]
        models: Option<PathBuf>,
    },
    /// Search for a replacement of a missing resource.
    Recommend {
        uri: String,
        /// Also write the JSON report here.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run the replacement pipeline over a dataset of URIs and summarize it.
    Evaluate {
        dataset: PathBuf,
        /// Directory for summary.json, records.csv and cdf.csv.
        #[arg(long, value_name = "DIR")]
        out_dir: Option<PathBuf>,
    },
    /// Fetch a TimeMap and compare it with the previously cached one.
    Timemap {
        uri: String,
        /// Parse this link-format file instead of asking the aggregator.
        #[arg(long, value_name = "PATH")]
        from: Option<PathBuf>,
        /// Print the TimeMap in link format.
        #[arg(long)]
        raw: bool,
    },
    /// Fit linear decay models to observations (CSV: event,age_days,percentage).
    Fit {
        observations: PathBuf,
        /// One model per event instead of a pooled fit.
        #[arg(long)]
        per_event: bool,
        /// Write the fitted models as CSV.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Summarize the social context of a URI.
    Mine { uri: String },
    /// Print the lexical signature built from the posts about a URI.
    Signature { uri: String },
}

fn parse_clock(raw: &str) -> CliResult<DateTime<Utc>> {
    DateTime::parse_from_rfc3339(raw)
        .map(|t| t.with_timezone(&Utc))
        .map_err(|e| CliError::Config(format!("--fixed-clock {raw:?}: {e}")))
}

fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    let fixed = cli.fixed_clock.as_deref().map(parse_clock).transpose()?;
    let mut config = config::Config::load(cli.config.as_deref())?;
    if let Some(limit) = cli.limit {
        config.set_limit(limit)?;
    }
    if let Some(threshold) = cli.threshold {
        config.set_threshold(threshold)?;
    }
    let app = App::new(config, cli.offline, fixed, cli.format);

    match cli.command {
        Command::Check { uris } => commands::check::run(&app, &uris, out),
        Command::Predict {
            model,
            age_days,
            models,
        } => commands::predict::run(&app, &model, age_days, models.as_deref(), out),
        Command::Recommend { uri, out: path } => {
            commands::recommend::run(&app, &uri, path.as_deref(), out)
        }
        Command::Evaluate { dataset, out_dir } => {
            commands::evaluate::run(&app, &dataset, out_dir.as_deref(), out)
        }
        Command::Timemap { uri, from, raw } => {
            commands::timemap::run(&app, &uri, from.as_deref(), raw, out)
        }
        Command::Fit {
            observations,
            per_event,
            out: path,
        } => commands::fit::run(&app, &observations, per_event, path.as_deref(), out),
        Command::Mine { uri } => commands::mine::run(&app, &uri, out),
        Command::Signature { uri } => commands::signature::run(&app, &uri, out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(cli, &mut out).and_then(|()| out.flush().map_err(CliError::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Output(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("relink: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
