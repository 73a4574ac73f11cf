use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use shatterkit::calibration::Calibration;
use shatterkit::dimension::fat_dimension;
use shatterkit::lattice::{cell_content, CellContentOptions};
use shatterkit::lorentz::{comparison_function, lorentz_norm, GeneratingFunction};
use shatterkit::packing::{covering_number, kp_entropy_lower, packing_number, BodySpec, CoverMode, PackingMode};
use shatterkit::processes::{
    build_nosudakov_class_with, comb_integral, dudley_integral, process_supremum, selection_experiment, Grid,
    IntegralReport, Noise, Selection,
};
use shatterkit::sections::{m_estimate, search_section, SearchMode, VPolytope};
use shatterkit::suites::{run_suite, SUITES};
use shatterkit::trees::{build_separating_tree, verify_separating_tree, Strategy};
use shatterkit::{load_class, Format, FunctionClass, Measure, Seed};

use crate::args::*;
use crate::report::{num, to_json, Outputs, Provenance};
use crate::CliError;

/// Result of one subcommand: its outputs and whether verification passed.
pub struct Outcome {
    pub outputs: Outputs,
    pub passed: bool,
}

impl From<Outputs> for Outcome {
    fn from(outputs: Outputs) -> Self {
        Outcome { outputs, passed: true }
    }
}

pub fn execute(command: &Command, seed: Seed, cal: &Calibration) -> Result<Outcome, CliError> {
    let mut out = Outputs::default();
    match command {
        Command::Dim(a) => {
            let f = class(&a.class)?;
            let d = fat_dimension(&f, a.t)?;
            out.exact("v", json!(d.v)).exact("witness", to_json(&d.witness));
        }
        Command::Entropy(a) => {
            let f = class(&a.class)?;
            let body = BodySpec::parse(&a.body, f.domain_size(), f.measure().cloned())?;
            match a.mode {
                PackingKind::Exact | PackingKind::Greedy => {
                    let (mode, prov) = match a.mode {
                        PackingKind::Exact => (PackingMode::Exact, Provenance::Exact),
                        _ => (PackingMode::Greedy, Provenance::GreedyBound),
                    };
                    let p = packing_number(&f, &body, a.t, mode)?;
                    out.put("entropy", num((p.number as f64).ln()), prov)
                        .put("packing_number", json!(p.number), prov)
                        .exact("certificate", to_json(&p.certificate.indices));
                }
                PackingKind::Kp => {
                    let kp = kp_entropy_lower(&f, a.t, a.budget, seed)?;
                    out.put("entropy", num(kp.value), Provenance::GreedyBound)
                        .exact("measure", to_json(&kp.measure))
                        .exact("evaluations", json!(kp.evaluations));
                }
            }
        }
        Command::Cover(a) => {
            let f = class(&a.class)?;
            let body = BodySpec::parse(&a.body, f.domain_size(), f.measure().cloned())?.with_radius(a.radius)?;
            let mode = match a.mode {
                CoverKind::Greedy => CoverMode::Greedy,
                CoverKind::Sandwich => CoverMode::Sandwich,
            };
            let c = covering_number(&f, &body, mode)?;
            out.put("lower", json!(c.lower), exactness(c.lower_exact))
                .put("upper", json!(c.upper), exactness(c.upper_exact))
                .exact("lower_witness", to_json(&c.lower_witness))
                .exact("centers", to_json(&c.centers));
        }
        Command::Cellcontent(a) => {
            let f = class(&a.class)?;
            let bounds = match &a.bounds {
                None => None,
                Some(s) => match list::<i64>(s, "bounds")?[..] {
                    [lo, hi] => Some((lo, hi)),
                    _ => return Err(CliError::Usage("--bounds takes two integers lo,hi".into())),
                },
            };
            let c = cell_content(&f, &CellContentOptions { bounds, ..Default::default() })?;
            out.exact("sigma", json!(c.total))
                .exact("per_rank", to_json(&c.per_rank))
                .exact("sigma_count", json!(c.sigma_count));
        }
        Command::Tree(a) => {
            let f = class(&a.class)?;
            let strategy: Strategy = a.strategy.parse()?;
            let t = build_separating_tree(&f, a.gap, a.alpha, strategy)?;
            let prov = exactness(strategy == Strategy::Exhaustive);
            out.put("leaves", json!(t.leaves()), prov)
                .exact("depth", json!(t.depth()))
                .exact("verified", json!(verify_separating_tree(&t, &f, a.gap)?))
                .exact("tree", to_json(&t));
        }
        Command::Lorentz(LorentzCommand::Norm(a)) => {
            let x = list::<f64>(&a.vector, "vector")?;
            let mu = measure(a.measure.as_deref(), x.len())?;
            let phi = GeneratingFunction::parse(&a.phi)?;
            out.exact("norm", num(lorentz_norm(&x, &mu, &phi)?));
        }
        Command::Lorentz(LorentzCommand::Compare(a)) => {
            let phi = GeneratingFunction::parse(&a.phi)?;
            let psi = GeneratingFunction::parse(&a.psi)?;
            out.exact("value", num(comparison_function(&phi, &psi, a.t)?));
        }
        Command::Gauss(a) | Command::Rad(a) => {
            let f = class(&a.class)?;
            let noise = if matches!(command, Command::Gauss(_)) { Noise::Gaussian } else { Noise::Rademacher };
            let e = process_supremum(&f, noise, a.samples, seed)?;
            out.monte_carlo("supremum", e.mean, e.stderr).exact("samples", json!(e.samples));
        }
        Command::Integral(which) => {
            let (a, dudley) = match which {
                IntegralCommand::Comb(a) => (a, false),
                IntegralCommand::Dudley(a) => (a, true),
            };
            let f = class(&a.class)?;
            let grid = match &a.grid {
                None => Grid::Auto,
                Some(s) => Grid::Explicit(list::<f64>(s, "grid")?),
            };
            let r = if dudley {
                let mu = match &a.measure {
                    Some(s) => measure(Some(s), f.domain_size())?,
                    None => f.measure_or_uniform(),
                };
                dudley_integral(&f, &mu, &grid, seed)?
            } else {
                if a.measure.is_some() {
                    return Err(CliError::Usage("--measure applies to the dudley integral only".into()));
                }
                comb_integral(&f, &grid)?
            };
            integral_outputs(&mut out, &r);
        }
        Command::Nosudakov(a) => {
            let c = build_nosudakov_class_with(a.n, a.alpha_cap, seed, a.cap_log2)?;
            let e = c.rademacher_supremum(a.samples, seed.derive(1))?;
            let bound = c.sup_t_sqrt_v_bound();
            out.monte_carlo("rademacher_supremum", e.mean, e.stderr)
                .exact("sup_t_sqrt_v_bound", num(bound))
                .monte_carlo("ratio", e.mean / bound, e.stderr / bound)
                .exact("k1", json!(c.k1))
                .exact("subsampled", json!(c.is_subsampled()))
                .exact(
                    "nominal_size_log2",
                    json!(c.summands.iter().map(|s| s.nominal_log2).sum::<u64>()),
                );
        }
        Command::Select(a) => {
            let text = if a.experiment.trim_start().starts_with('{') {
                a.experiment.clone()
            } else {
                read(Path::new(&a.experiment))?
            };
            let sel: Selection = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("experiment: {e}")))?;
            let r = selection_experiment(&sel, a.trials, seed)?;
            let p = r.success_rate;
            out.monte_carlo("success_rate", p, (p * (1.0 - p) / r.trials as f64).sqrt())
                .exact("successes", json!(r.successes))
                .exact("trials", json!(r.trials));
        }
        Command::Section(a) => {
            let k = VPolytope::load(&a.polytope)?;
            let mode: SearchMode = a.mode.parse()?;
            let m = match a.m {
                Some(m) => {
                    out.exact("M", num(m));
                    m
                }
                None => {
                    let e = m_estimate(&k, a.samples, seed)?;
                    out.monte_carlo("M", e.mean, e.stderr);
                    e.mean
                }
            };
            let s = search_section(&k, m, a.min_size, mode)?;
            let prov = exactness(mode == SearchMode::Exhaustive);
            let holds = s.best.as_ref().is_some_and(|b| b.holds);
            out.put("holds", json!(holds), prov)
                .exact("certificate", to_json(&s.best))
                .exact("checked", json!(s.checked))
                .put("s", s.s.map_or(Value::Null, num), prov)
                .put("t", s.t.map_or(Value::Null, num), prov);
        }
        Command::Verify(a) => {
            let names: Vec<&str> = if a.suites.is_empty() {
                SUITES.to_vec()
            } else {
                a.suites.iter().map(String::as_str).collect()
            };
            if let Some(bad) = names.iter().find(|n| !SUITES.contains(n)) {
                return Err(CliError::Usage(format!("unknown suite '{bad}'; known: {}", SUITES.join(", "))));
            }
            let mut passed = true;
            for name in names {
                let r = run_suite(name, seed, cal)?;
                passed &= r.passed;
                eprintln!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.suite, r.summary);
                let prov = if MONTE_CARLO_SUITES.contains(&name) { Provenance::MonteCarlo } else { Provenance::Exact };
                let metrics: serde_json::Map<String, Value> = r.metrics.iter().map(|(k, v)| (k.clone(), num(*v))).collect();
                out.put(
                    name,
                    json!({
                        "criterion": r.criterion,
                        "passed": r.passed,
                        "instances": r.instances,
                        "failures": r.failures,
                        "summary": r.summary,
                        "metrics": metrics,
                    }),
                    prov,
                );
            }
            return Ok(Outcome { outputs: out, passed });
        }
        Command::Run(_) => unreachable!("manifests are expanded before execution"),
    }
    Ok(out.into())
}

const MONTE_CARLO_SUITES: [&str; 5] = ["gaussian-analytic", "supremum-integral", "no-sudakov", "discrepancy", "sections-lp"];

fn exactness(exact: bool) -> Provenance {
    if exact {
        Provenance::Exact
    } else {
        Provenance::GreedyBound
    }
}

fn integral_outputs(out: &mut Outputs, r: &IntegralReport) {
    let prov = exactness(r.exact.iter().all(|&e| e));
    out.put("value", num(r.value), prov)
        .put("lower", num(r.lower), prov)
        .exact("grid", r.grid.iter().map(|&x| num(x)).collect())
        .put("samples", r.samples.iter().map(|&x| num(x)).collect(), prov)
        .exact("exact", to_json(&r.exact));
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Compute(shatterkit::Error::Io { path: path.to_path_buf(), source: e }))
}

fn class(path: &Path) -> Result<FunctionClass, CliError> {
    Ok(load_class(path, Format::from_path(path))?)
}

fn list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<T>())
        .collect::<Result<Vec<T>, _>>()
        .map_err(|_| CliError::Usage(format!("--{what}: expected a comma-separated list of numbers, got '{s}'")))
}

fn measure(s: Option<&str>, n: usize) -> Result<Measure, CliError> {
    match s {
        None => Ok(Measure::uniform(n)),
        Some(s) => {
            let w = list::<f64>(s, "measure")?;
            if w.len() != n {
                return Err(CliError::Usage(format!("--measure has {} weights for {n} points", w.len())));
            }
            Ok(Measure::new(w)?)
        }
    }
}
