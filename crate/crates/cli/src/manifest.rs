use std::path::Path;

use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::{Cli, Command};
use crate::report::{to_json, Report, ReportProvenance};
use crate::{build_report, CliError, Session};

/// A saved experiment. `parameters` are the subcommand's arguments as on the
/// command line; relative paths resolve against the working directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub command: String,
    #[serde(default)]
    pub parameters: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    /// Calibration fixture path; the pinned constants when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
}

/// Runs the command once per value, passing `--<parameter> <value>`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub command: &'static str,
    pub inputs: Value,
    pub runs: Vec<Report>,
    pub provenance: ReportProvenance,
}

pub enum Replay {
    Single(Report),
    Sweep(SweepReport),
}

fn argv(m: &Manifest, extra: &[String]) -> Vec<String> {
    let mut v = vec!["shatterkit".to_string()];
    v.extend(m.command.split_whitespace().map(str::to_string));
    v.extend(m.parameters.iter().cloned());
    v.extend(extra.iter().cloned());
    v.extend(["--seed".to_string(), m.seed.to_string()]);
    if let Some(f) = &m.fixture {
        v.extend(["--fixture".to_string(), f.clone()]);
    }
    v
}

fn parse(args: Vec<String>) -> Result<Cli, CliError> {
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(format!("manifest: {}", e.render().to_string().trim_end())))?;
    if matches!(cli.command, Command::Run(_)) {
        return Err(CliError::Usage("manifest: a manifest cannot run another manifest".into()));
    }
    Ok(cli)
}

/// Returns the report and whether every run passed.
pub fn replay(path: &Path) -> Result<(Replay, bool), CliError> {
    let text = crate::commands::read(path)?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    match &m.sweep {
        None => {
            let session = Session::from_cli(&parse(argv(&m, &[]))?)?;
            let (report, passed) = build_report(&session)?;
            Ok((Replay::Single(report), passed))
        }
        Some(sweep) => {
            let mut runs = Vec::new();
            let mut all = true;
            let mut provenance = None;
            for v in &sweep.values {
                let extra = [format!("--{}", sweep.parameter), format!("{v:?}")];
                let session = Session::from_cli(&parse(argv(&m, &extra))?)?;
                let (report, passed) = build_report(&session)?;
                all &= passed;
                provenance.get_or_insert_with(|| report.provenance.clone());
                runs.push(report);
            }
            let provenance = match provenance {
                Some(p) => p,
                None => Session::from_cli(&parse(argv(&m, &[]))?)?.provenance(),
            };
            Ok((
                Replay::Sweep(SweepReport {
                    command: "run",
                    inputs: to_json(&m),
                    runs,
                    provenance,
                }),
                all,
            ))
        }
    }
}
