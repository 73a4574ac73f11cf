mod args;
mod commands;
mod manifest;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use shatterkit::calibration::Calibration;
use shatterkit::exec;
use shatterkit::Seed;

use args::{Cli, Command};
use manifest::Replay;
use report::{render, to_json, FixtureInfo, Report, ReportProvenance, VERSION};

const EXIT_USAGE: u8 = 1;
const EXIT_COMPUTATION: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(shatterkit::Error),
    Verify(String),
}

impl From<shatterkit::Error> for CliError {
    fn from(e: shatterkit::Error) -> Self {
        match e {
            shatterkit::Error::Calibration(msg) => CliError::Verify(format!("calibration drift: {msg}")),
            shatterkit::Error::InvalidParameter(msg) => CliError::Usage(format!("invalid parameter: {msg}")),
            other => CliError::Compute(other),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Compute(_) => EXIT_COMPUTATION,
            CliError::Verify(_) => EXIT_VERIFICATION,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Verify(m) => f.write_str(m),
            CliError::Compute(shatterkit::Error::Io { path, source }) if source.kind() == std::io::ErrorKind::NotFound => {
                write!(f, "file not found: {}", path.display())
            }
            CliError::Compute(e) => write!(f, "{e}"),
        }
    }
}

/// A parsed invocation with its calibration resolved.
pub struct Session {
    command: Command,
    seed: u64,
    calibration: Calibration,
    fixture_source: String,
}

impl Session {
    fn from_cli(cli: &Cli) -> Result<Session, CliError> {
        let (calibration, fixture_source) = match &cli.fixture {
            None => (Calibration::pinned(), "pinned".to_string()),
            Some(path) => {
                let c = Calibration::load(path)?;
                c.check()?;
                (c, path.display().to_string())
            }
        };
        Ok(Session {
            command: cli.command.clone(),
            seed: cli.seed,
            calibration,
            fixture_source,
        })
    }

    fn provenance(&self) -> ReportProvenance {
        ReportProvenance {
            seed: self.seed,
            version: VERSION,
            fixture: FixtureInfo {
                version: self.calibration.version,
                source: self.fixture_source.clone(),
            },
        }
    }
}

fn build_report(s: &Session) -> Result<(Report, bool), CliError> {
    let outcome = commands::execute(&s.command, Seed(s.seed), &s.calibration)?;
    let report = Report {
        command: s.command.name().to_string(),
        inputs: to_json(&s.command),
        outputs: outcome.outputs.into_map(),
        provenance: s.provenance(),
    };
    Ok((report, outcome.passed))
}

fn run(cli: Cli) -> Result<(String, bool), CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        exec::init_threads(t);
    }
    match &cli.command {
        Command::Run(a) => match manifest::replay(&a.manifest)? {
            (Replay::Single(r), passed) => Ok((render(&r), passed)),
            (Replay::Sweep(r), passed) => Ok((render(&r), passed)),
        },
        _ => {
            let (r, passed) = build_report(&Session::from_cli(&cli)?)?;
            Ok((render(&r), passed))
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text).map_err(|source| {
            CliError::Compute(shatterkit::Error::Io {
                path: path.clone(),
                source,
            })
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let out = cli.out.clone();
    let result = run(cli).and_then(|(text, passed)| {
        emit(&text, out.as_ref())?;
        Ok(passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: verification failed");
            ExitCode::from(EXIT_VERIFICATION)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
