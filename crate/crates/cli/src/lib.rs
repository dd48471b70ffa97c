//! Command-line front end: argument and config resolution, the expansion
//! cache, job files and report envelopes.

pub mod cache;
pub mod cli;
pub mod commands;
pub mod config;
pub mod inputs;
pub mod jobs;
pub mod report;

use std::ffi::OsString;

use clap::Parser;

use crate::cache::ExpansionCache;
use crate::cli::{Cli, Command, Opts};
use crate::commands::{HarnessJob, Output};
use crate::config::JobConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, files or values. Exit code 1.
    #[error("{0}")]
    Input(String),
    /// A certified decision stayed open at the precision cap. Exit code 2.
    #[error("{0}")]
    Undecided(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Undecided(_) => 2,
        }
    }
}

impl From<cfspectra::Error> for CliError {
    fn from(e: cfspectra::Error) -> Self {
        match e {
            cfspectra::Error::PrecisionCap { .. } => CliError::Undecided(e.to_string()),
            e => CliError::Input(e.to_string()),
        }
    }
}

fn dispatch(command: &Command, cfg: &JobConfig, opts: &Opts) -> Result<Output, CliError> {
    let cache = ExpansionCache::new(!opts.no_cache);
    if cfg.job.is_some() && !matches!(command, Command::Harness { .. } | Command::Orbit { .. }) {
        return Err(CliError::Input("--job is accepted only by harness and orbit".into()));
    }
    match command {
        Command::Expand(_) => commands::expand(cfg, &cache),
        Command::Convergents(_) => commands::convergents(cfg, &cache),
        Command::Period(_) => commands::period(cfg, &cache),
        Command::Complexity(_) => commands::complexity(cfg, &cache),
        Command::Verify(_) => commands::verify(cfg, &cache),
        Command::Detect { kind, .. } => commands::detect(*kind, cfg, &cache),
        Command::Harness { check, .. } => match &cfg.job {
            Some(path) => jobs::run_harness_jobs(path, *check, cfg, &cache),
            None => HarnessJob::from_config(*check, cfg)?.run(&cache),
        },
        Command::Orbit { task, .. } => match &cfg.job {
            Some(path) if *task == cli::OrbitTask::Scan => jobs::run_orbit_jobs(path, cfg, &cache),
            Some(_) => Err(CliError::Input("--job is accepted only by orbit scan".into())),
            None => commands::orbit(*task, cfg, &cache),
        },
    }
}

fn split(command: &Command) -> (String, &Opts) {
    fn name<T: serde::Serialize>(v: &T) -> String {
        serde_json::to_value(v).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
    }
    match command {
        Command::Expand(o) => ("expand".into(), o),
        Command::Convergents(o) => ("convergents".into(), o),
        Command::Period(o) => ("period".into(), o),
        Command::Complexity(o) => ("complexity".into(), o),
        Command::Verify(o) => ("verify".into(), o),
        Command::Detect { kind, opts } => (format!("detect {}", name(kind)), opts),
        Command::Harness { check, opts } => (format!("harness {}", name(check)), opts),
        Command::Orbit { task, opts } => (format!("orbit {}", name(task)), opts),
    }
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let (name, opts) = split(&cli.command);
    let cfg = JobConfig::resolve(name, opts)?;
    let out = dispatch(&cli.command, &cfg, opts)?;
    let undecided = out.undecided;
    let report = report::Report::new(&cfg, out);
    report.write(&cfg)?;
    Ok(undecided)
}

/// Runs the tool and returns the process exit code: 0 success, 1 input
/// error, 2 undecided at the precision cap.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(true) => {
            eprintln!("warning: some decisions are undecided at the precision cap");
            2
        }
        Ok(false) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
