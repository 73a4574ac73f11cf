//! Seeded acceptance suites. Every suite compares the library against an
//! exact identity, an independent brute-force oracle or a pinned constant,
//! and returns one pass/fail report.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::calibration::Calibration;
use crate::class::{scaled, FunctionClass, Measure, Seed};
use crate::combin::combinations;
use crate::dimension::{breakpoints, dimension_profile, fat_dimension};
use crate::error::{Error, Result};
use crate::exec;
use crate::lattice::{
    cconv_contains_cell, cconv_membership, cell_content, comb_dimension_geometric, integer_box_grid,
    integer_box_sample, CellContentOptions, CoordinateSubset, IntegerCell,
};
use crate::lorentz::{comparison_function, lorentz_norm, GeneratingFunction};
use crate::packing::{covering_number, entropy, BodySpec, CoverMode};
use crate::processes::{
    build_nosudakov_class_with, comb_integral, dudley_integral, process_supremum, selection_experiment, Grid, Noise,
    Selection,
};
use crate::sections::{m_estimate, VPolytope};
use crate::trees::{build_separating_tree, verify_separating_tree, Strategy};

/// Suite names in criterion order.
pub const SUITES: [&str; 13] = [
    "box-identities",
    "lemma-cell",
    "lemma-many-cells",
    "lemma-to-rn",
    "singleton-class",
    "tower-cover",
    "lorentz-oracle",
    "comparison-power-law",
    "gaussian-analytic",
    "supremum-integral",
    "no-sudakov",
    "discrepancy",
    "sections-lp",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub criterion: usize,
    pub passed: bool,
    pub instances: u64,
    pub failures: u64,
    pub summary: String,
    pub metrics: BTreeMap<String, f64>,
}

impl SuiteReport {
    fn new(suite: &str, instances: u64, failures: u64, summary: String) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            criterion: SUITES.iter().position(|s| *s == suite).map_or(0, |i| i + 1),
            passed: failures == 0,
            instances,
            failures,
            summary,
            metrics: BTreeMap::new(),
        }
    }

    fn metric(mut self, key: &str, value: f64) -> Self {
        self.metrics.insert(key.to_string(), value);
        self
    }
}

pub fn run_suite(name: &str, seed: Seed, cal: &Calibration) -> Result<SuiteReport> {
    match name {
        "box-identities" => box_identities(),
        "lemma-cell" => lemma_cell(seed),
        "lemma-many-cells" => lemma_many_cells(seed),
        "lemma-to-rn" => lemma_to_rn(seed),
        "singleton-class" => singleton_class(),
        "tower-cover" => tower_cover(seed, cal),
        "lorentz-oracle" => lorentz_oracle(seed, cal),
        "comparison-power-law" => comparison_power_law(cal),
        "gaussian-analytic" => gaussian_analytic(seed),
        "supremum-integral" => supremum_integral(seed, cal),
        "no-sudakov" => no_sudakov(seed, cal),
        "discrepancy" => discrepancy(seed, cal),
        "sections-lp" => sections_lp(seed, cal),
        other => Err(Error::invalid(format!("unknown suite {other:?}; known: {}", SUITES.join(", ")))),
    }
}

pub fn run_all(seed: Seed, cal: &Calibration) -> Result<Vec<SuiteReport>> {
    SUITES.iter().map(|s| run_suite(s, seed, cal)).collect()
}

fn random_int_class(rng: &mut impl Rng, n_max: usize, m_max: usize, hi: i64) -> FunctionClass {
    let n = rng.random_range(1..=n_max);
    let m = rng.random_range(1..=m_max);
    let rows = (0..m)
        .map(|_| (0..n).map(|_| rng.random_range(0..=hi) as f64).collect())
        .collect();
    FunctionClass::new(rows).expect("generated class is rectangular")
}

fn count_failures(outcomes: Vec<Result<bool>>) -> Result<u64> {
    let mut failures = 0;
    for o in outcomes {
        failures += (!o?) as u64;
    }
    Ok(failures)
}

fn box_identities() -> Result<SuiteReport> {
    let mut shapes = Vec::new();
    for n in 1..=4u32 {
        for code in 0..4u32.pow(n) {
            shapes.push((0..n).map(|i| code / 4u32.pow(i) % 4).collect::<Vec<u32>>());
        }
    }
    let outcomes = shapes
        .iter()
        .map(|sides| {
            let cover = covering_number(&integer_box_sample(sides)?, &BodySpec::cube(), CoverMode::Sandwich)?;
            let want_cover: usize = sides.iter().map(|&a| a.max(1) as usize).product();
            let sigma = cell_content(&integer_box_grid(sides)?, &CellContentOptions::default())?.total;
            let want_sigma: u64 = sides.iter().map(|&a| a as u64 + 1).product();
            Ok(cover.lower == want_cover && cover.upper == want_cover && sigma == want_sigma)
        })
        .collect();
    let failures = count_failures(outcomes)?;
    Ok(SuiteReport::new(
        "box-identities",
        shapes.len() as u64,
        failures,
        format!("{} boxes, covering bounds and cell content against the products", shapes.len()),
    ))
}

fn lemma_cell(seed: Seed) -> Result<SuiteReport> {
    let instances = 200;
    let checks = exec::map_range(instances, |i| -> Result<(u64, u64)> {
        let mut rng = seed.derive(2).rng(i as u64);
        let a = random_int_class(&mut rng, 4, 10, 4);
        let n = a.domain_size();
        let (mut total, mut bad) = (0, 0);
        for mask in 1u64..1 << n {
            let sigma = CoordinateSubset::from_mask(mask);
            let projected = a.restrict(sigma.coords())?;
            let k = sigma.len() as u32;
            for code in 0..4u64.pow(k) {
                let anchor: Vec<i64> = (0..k).map(|j| (code / 4u64.pow(j) % 4) as i64).collect();
                let cell = IntegerCell::new(sigma.clone(), anchor)?;
                let fast = cconv_contains_cell(&a, &sigma, &cell)?;
                let mut brute = true;
                for p in 0..1u64 << k {
                    if !cconv_membership(&projected, &cell.vertex(p))? {
                        brute = false;
                        break;
                    }
                }
                total += 1;
                bad += (fast != brute) as u64;
            }
        }
        Ok((total, bad))
    });
    let (mut cells, mut failures) = (0, 0);
    for c in checks {
        let (t, b) = c?;
        cells += t;
        failures += b;
    }
    Ok(
        SuiteReport::new("lemma-cell", instances as u64, failures, format!("{cells} candidate cells compared"))
            .metric("cells", cells as f64),
    )
}

fn lemma_many_cells(seed: Seed) -> Result<SuiteReport> {
    let instances = 1000;
    let strategies = [Strategy::Exhaustive, Strategy::Median, Strategy::GreedyPotential];
    let outcomes = exec::map_range(instances, |i| -> Result<bool> {
        let mut rng = seed.derive(3).rng(i as u64);
        let a = random_int_class(&mut rng, 4, 12, 6);
        let sigma = cell_content(&a, &CellContentOptions::default())?.total;
        for s in strategies {
            let tree = build_separating_tree(&a, 2.0, 2.0, s)?;
            if !verify_separating_tree(&tree, &a, 2.0)? || tree.leaves() as u64 > sigma {
                return Ok(false);
            }
        }
        Ok(true)
    });
    let failures = count_failures(outcomes)?;
    Ok(SuiteReport::new(
        "lemma-many-cells",
        instances as u64,
        failures,
        format!("{}/{instances} instances with leaves <= cell content under every strategy", instances as u64 - failures),
    ))
}

fn lemma_to_rn(seed: Seed) -> Result<SuiteReport> {
    let instances = 500;
    let outcomes = exec::map_range(instances, |i| -> Result<bool> {
        let mut rng = seed.derive(4).rng(i as u64);
        let f = random_int_class(&mut rng, 4, 10, 4);
        Ok(fat_dimension(&f, 1.0)?.v == comb_dimension_geometric(&f, 16)?.v)
    });
    let failures = count_failures(outcomes)?;
    Ok(SuiteReport::new(
        "lemma-to-rn",
        instances as u64,
        failures,
        "fat dimension at t = 1 against the geometric dimension".into(),
    ))
}

fn singleton_class() -> Result<SuiteReport> {
    let mut failures = 0;
    let mut instances = 0;
    for n in 3..=8usize {
        let rows = (0..n).map(|i| (0..n).map(|j| (i == j) as u8 as f64).collect()).collect();
        let f = FunctionClass::new(rows)?;
        let body = BodySpec::lp(2.0, Measure::uniform(n))?;
        let d = (2.0 / n as f64).sqrt();
        for t in [0.5 * d, d] {
            instances += 1;
            failures += (entropy(&f, &body, t)? != (n as f64).ln()) as u64;
        }
        let mut ts = vec![0.01, 0.1, 0.25, 0.5, 0.75, 1.0];
        ts.extend(breakpoints(&f));
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        for (_, v) in dimension_profile(&f, &ts)? {
            instances += 1;
            failures += (v != 1) as u64;
        }
    }
    Ok(SuiteReport::new(
        "singleton-class",
        instances,
        failures,
        "entropy = log n and fat dimension = 1 for n = 3..8".into(),
    ))
}

fn tower_cover(seed: Seed, cal: &Calibration) -> Result<SuiteReport> {
    let cfg = &cal.tower_cover;
    let instances = 200;
    let rows = exec::map_range(instances, |i| -> Result<Vec<bool>> {
        let mut rng = seed.derive(6).rng(i as u64);
        let f = random_int_class(&mut rng, 5, 16, 2);
        let n = f.domain_size();
        let body = BodySpec::parse(&format!("tower:{}", cfg.alpha), n, None)?;
        let cover = covering_number(&f, &body, CoverMode::Greedy)?.upper as f64;
        let mut cs = cfg.sweep.clone();
        cs.push(cfg.c);
        cs.into_iter()
            .map(|c| {
                let sigma = cell_content(&scaled(&f, c)?, &CellContentOptions::default())?.total as f64;
                Ok(cover <= sigma.powf(cfg.alpha))
            })
            .collect()
    });
    let rows: Vec<Vec<bool>> = rows.into_iter().collect::<Result<_>>()?;
    let failures = rows.iter().filter(|r| !r[cfg.sweep.len()]).count() as u64;
    let minimal = cfg
        .sweep
        .iter()
        .enumerate()
        .find(|&(j, _)| rows.iter().all(|r| r[j]))
        .map(|(_, &c)| c);
    let report = SuiteReport::new(
        "tower-cover",
        instances as u64,
        failures,
        format!(
            "greedy tower cover <= cell content(C F)^{} at pinned C = {}; smallest C in the sweep that holds everywhere: {}",
            cfg.alpha,
            cfg.c,
            minimal.map_or("none".to_string(), |c| c.to_string())
        ),
    );
    Ok(match minimal {
        Some(c) => report.metric("minimal_c", c),
        None => report,
    })
}

/// `‖f‖_{Λ_φ}` by bisection on the definition: `λ` is admissible when
/// `m_k φ(v_k / λ) <= 1` at every level `v_k` of `|f|`.
fn lorentz_by_bisection(f: &[f64], mu: &Measure, phi: &GeneratingFunction) -> f64 {
    let mut levels: Vec<(f64, f64)> = f
        .iter()
        .zip(mu.weights())
        .filter(|(v, w)| **v != 0.0 && **w > 0.0)
        .map(|(v, w)| (v.abs(), *w))
        .collect();
    if levels.is_empty() {
        return 0.0;
    }
    levels.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut steps: Vec<(f64, f64)> = Vec::new();
    let mut mass = 0.0;
    for (v, w) in levels {
        mass += w;
        match steps.last_mut() {
            Some(last) if last.0 == v => last.1 = mass,
            _ => steps.push((v, mass)),
        }
    }
    let admissible = |lambda: f64| steps.iter().all(|&(v, m)| m.ln() + phi.ln_eval(v / lambda) <= 0.0);
    let mut hi = steps[0].0;
    while !admissible(hi) {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if admissible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn lorentz_oracle(seed: Seed, cal: &Calibration) -> Result<SuiteReport> {
    let tol = cal.tolerances.lorentz_relative;
    let instances = 10_000;
    let errors = exec::map_range(instances, |i| -> Result<f64> {
        let mut rng = seed.derive(7).rng(i as u64);
        let n = rng.random_range(1..=8);
        let mu = if rng.random_bool(0.3) {
            Measure::uniform(n)
        } else {
            Measure::normalized((0..n).map(|_| Exp1.sample(&mut rng)).collect())?
        };
        let scale = 10f64.powf(rng.random_range(-2.0..2.0));
        let f: Vec<f64> = (0..n)
            .map(|_| match rng.random_range(0..4) {
                0 => 0.0,
                1 => scale * rng.random_range(1..=3) as f64,
                _ => scale * Distribution::<f64>::sample(&StandardNormal, &mut rng),
            })
            .collect();
        let phi = if rng.random_bool(0.5) {
            GeneratingFunction::power(rng.random_range(1.0..6.0))?
        } else {
            GeneratingFunction::tower(rng.random_range(2.0..6.0))?
        };
        let closed = lorentz_norm(&f, &mu, &phi)?;
        let oracle = lorentz_by_bisection(&f, &mu, &phi);
        Ok(if oracle == 0.0 { closed.abs() } else { (closed - oracle).abs() / oracle })
    });
    let errors: Vec<f64> = errors.into_iter().collect::<Result<_>>()?;
    let worst = errors.iter().copied().fold(0.0, f64::max);
    let failures = errors.iter().filter(|&&e| e > tol).count() as u64;
    Ok(SuiteReport::new(
        "lorentz-oracle",
        instances as u64,
        failures,
        format!("closed form against bisection, worst relative error {worst:.3e}"),
    )
    .metric("worst_relative_error", worst))
}

fn comparison_power_law(cal: &Calibration) -> Result<SuiteReport> {
    let tol = cal.tolerances.power_law_relative;
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    let mut instances = 0;
    for (p, q) in [(1.0, 2.0), (2.0, 4.0), (2.0, 64.0)] {
        let phi = GeneratingFunction::power(p)?;
        let psi = GeneratingFunction::power(q)?;
        for t in [0.5f64, 0.25, 0.1] {
            let got = comparison_function(&phi, &psi, t)?;
            let want = t.powf(p * q / (p - q));
            let err = (got - want).abs() / want;
            worst = worst.max(err);
            failures += (err > tol || !err.is_finite()) as u64;
            instances += 1;
        }
    }
    Ok(SuiteReport::new(
        "comparison-power-law",
        instances,
        failures,
        format!("(φ|ψ)(t) against t^(pq/(p-q)), worst relative error {worst:.3e}"),
    )
    .metric("worst_relative_error", worst))
}

fn gaussian_analytic(seed: Seed) -> Result<SuiteReport> {
    let pm = FunctionClass::new(vec![vec![1.0], vec![-1.0]])?;
    let g = process_supremum(&pm, Noise::Gaussian, 100_000, seed.derive(9))?;
    let exact = (2.0 / std::f64::consts::PI).sqrt();
    let r = process_supremum(&pm, Noise::Rademacher, 1000, seed.derive(10))?;
    let gauss_ok = (g.mean - exact).abs() <= 3.0 * g.stderr;
    let rad_ok = r.mean == 1.0 && r.stderr == 0.0;
    Ok(SuiteReport::new(
        "gaussian-analytic",
        2,
        (!gauss_ok) as u64 + (!rad_ok) as u64,
        format!(
            "E(±e_1) = {:.5} ± {:.5} against {exact:.5}; Rademacher {}",
            g.mean, g.stderr, r.mean
        ),
    )
    .metric("gaussian_mean", g.mean)
    .metric("gaussian_stderr", g.stderr)
    .metric("rademacher_mean", r.mean))
}

fn supremum_integral(seed: Seed, cal: &Calibration) -> Result<SuiteReport> {
    let c = cal.integral_equivalence.c;
    let instances = 100;
    let ratios = exec::map_range(instances, |i| -> Result<(f64, f64)> {
        let mut rng = seed.derive(11).rng(i as u64);
        let n = rng.random_range(1..=5);
        let m = rng.random_range(2..=12);
        let mut rows: Vec<Vec<f64>> = Vec::new();
        while rows.len() < m {
            let row: Vec<f64> = (0..n).map(|_| rng.random_range(0..=8) as f64 / 2.0).collect();
            if rows.len() < 2 && rows.contains(&row) {
                continue;
            }
            rows.push(row);
        }
        let f = FunctionClass::new(rows)?;
        let comb = comb_integral(&f, &Grid::Auto)?.value;
        let e = process_supremum(&f, Noise::Gaussian, 4000, seed.derive(12).derive(i as u64))?.mean;
        let dudley = dudley_integral(&f, &Measure::uniform(n), &Grid::Auto, seed)?.value;
        Ok((e / comb, dudley / comb))
    });
    let ratios: Vec<(f64, f64)> = ratios.into_iter().collect::<Result<_>>()?;
    let worst_e = ratios.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    let worst_d = ratios.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let failures = ratios.iter().filter(|r| r.0 > c || r.1 > c).count() as u64;
    Ok(SuiteReport::new(
        "supremum-integral",
        instances as u64,
        failures,
        format!("E/comb at most {worst_e:.3}, dudley/comb at most {worst_d:.3}, against C = {c}"),
    )
    .metric("max_e_over_comb", worst_e)
    .metric("max_dudley_over_comb", worst_d))
}

fn no_sudakov(seed: Seed, cal: &Calibration) -> Result<SuiteReport> {
    let cfg = &cal.no_sudakov;
    let [small, large] = cfg.sizes;
    let lo = build_nosudakov_class_with(small, cfg.alpha_cap, seed.derive(13), cfg.summand_cap_log2)?;
    let f = lo.materialize()?;
    let sup_small = dimension_profile(&f, &breakpoints(&f))?
        .into_iter()
        .map(|(t, v)| t * (v as f64).sqrt())
        .fold(0.0, f64::max);
    let e_small = lo.rademacher_supremum(cfg.samples, seed.derive(14))?;
    let hi = build_nosudakov_class_with(large, cfg.alpha_cap, seed.derive(15), cfg.summand_cap_log2)?;
    let bound_large = hi.sup_t_sqrt_v_bound();
    let e_large = hi.rademacher_supremum(cfg.samples, seed.derive(16))?;
    let ratio_small = e_small.mean / sup_small;
    let ratio_large = e_large.mean / bound_large;
    let growth = ratio_large / ratio_small;
    let checks = [growth >= cfg.growth, sup_small <= cfg.sup_bound, bound_large <= cfg.sup_bound];
    Ok(SuiteReport::new(
        "no-sudakov",
        checks.len() as u64,
        checks.iter().filter(|c| !**c).count() as u64,
        format!(
            "n = {small}: E_rad {:.4}, sup t√v {sup_small:.4}; n = {large}: E_rad {:.4}, sup t√v <= {bound_large:.4}; ratio growth {growth:.3} (needs {})",
            e_small.mean, e_large.mean, cfg.growth
        ),
    )
    .metric("e_rad_small", e_small.mean)
    .metric("e_rad_large", e_large.mean)
    .metric("sup_small", sup_small)
    .metric("sup_bound_large", bound_large)
    .metric("growth", growth))
}

fn discrepancy(seed: Seed, cal: &Calibration) -> Result<SuiteReport> {
    let sel = Selection::Discrepancy {
        n: 1000,
        gamma: 0.2,
        k: 400.0,
        q: 10,
        c: cal.discrepancy.c,
    };
    let r = selection_experiment(&sel, 1000, seed.derive(17))?;
    Ok(SuiteReport::new(
        "discrepancy",
        r.trials,
        (r.success_rate < 0.95) as u64,
        format!("success rate {:.3} over {} trials (needs 0.95)", r.success_rate, r.trials),
    )
    .metric("success_rate", r.success_rate))
}

/// Solves `A_S λ = b` for the columns `S`; `None` if singular or inconsistent.
fn solve_columns(a: &[Vec<f64>], b: &[f64], cols: &[usize]) -> Option<Vec<f64>> {
    let k = cols.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| cols.iter().map(|&c| r[c]).chain([bi]).collect())
        .collect();
    for col in 0..k {
        let p = (col..m.len()).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[p][col].abs() < 1e-10 {
            return None;
        }
        m.swap(col, p);
        for i in 0..m.len() {
            if i != col {
                let f = m[i][col] / m[col][col];
                for j in col..=k {
                    m[i][j] -= f * m[col][j];
                }
            }
        }
    }
    if m[k..].iter().any(|r| r[k].abs() > 1e-9) {
        return None;
    }
    Some((0..k).map(|i| m[i][k] / m[i][i]).collect())
}

/// `max { ‖x‖_1 : x ∈ K ∩ R^σ }` by enumerating the basic feasible weight
/// vectors of `{λ >= 0, Σλ = 1, (Σ λ_v v)_j = 0 for j ∉ σ}`.
pub fn section_max_l1_by_vertices(k: &VPolytope, sigma: &CoordinateSubset) -> f64 {
    let verts = k.vertices();
    let mut a: Vec<Vec<f64>> = (0..k.dim())
        .filter(|j| !sigma.contains(*j))
        .map(|j| verts.iter().map(|v| v[j]).collect())
        .collect();
    a.push(vec![1.0; verts.len()]);
    let mut b = vec![0.0; a.len() - 1];
    b.push(1.0);
    let idx: Vec<usize> = (0..verts.len()).collect();
    let mut best: f64 = 0.0;
    for size in 1..=a.len().min(verts.len()) {
        for cols in combinations(&idx, size) {
            if let Some(lam) = solve_columns(&a, &b, &cols) {
                if lam.iter().all(|&l| l >= -1e-12) {
                    let l1: f64 = sigma
                        .coords()
                        .iter()
                        .map(|&i| cols.iter().zip(&lam).map(|(&c, l)| l * verts[c][i]).sum::<f64>().abs())
                        .sum();
                    best = best.max(l1);
                }
            }
        }
    }
    best
}

fn sections_lp(seed: Seed, cal: &Calibration) -> Result<SuiteReport> {
    let tol = cal.tolerances.section_lp;
    let instances = 50;
    let errors = exec::map_range(instances, |i| -> Result<f64> {
        let mut rng = seed.derive(18).rng(i as u64);
        let k = if i % 2 == 0 {
            let n = rng.random_range(2..=6);
            VPolytope::cross_polytope(n, rng.random_range(0.5..3.0) * (n as f64).sqrt())?
        } else {
            let n = rng.random_range(2..=5);
            let m = rng.random_range(2..=5);
            let pts = (0..m)
                .map(|_| (0..n).map(|_| rng.random_range(-3..=3) as f64).collect())
                .collect();
            VPolytope::symmetric_hull(pts)?
        };
        let n = k.dim();
        let mask = rng.random_range(1u64..1 << n);
        let sigma = CoordinateSubset::from_mask(mask);
        let lp = k.section_max_l1(&sigma)?;
        let oracle = section_max_l1_by_vertices(&k, &sigma);
        Ok((lp - oracle).abs() / oracle.max(1.0))
    });
    let errors: Vec<f64> = errors.into_iter().collect::<Result<_>>()?;
    let worst = errors.iter().copied().fold(0.0, f64::max);
    let mut failures = errors.iter().filter(|&&e| e > tol).count() as u64;

    let sides = 64;
    let half: Vec<Vec<f64>> = (0..sides / 2)
        .map(|j| {
            let a = 2.0 * std::f64::consts::PI * j as f64 / sides as f64;
            vec![a.cos(), a.sin()]
        })
        .collect();
    let disc = VPolytope::symmetric_hull(half)?;
    let m = m_estimate(&disc, 2000, seed.derive(19))?;
    let slack = 1.0 / (std::f64::consts::PI / sides as f64).cos() - 1.0;
    let m_ok = (m.mean - 1.0).abs() <= 3.0 * m.stderr + slack;
    failures += (!m_ok) as u64;
    Ok(SuiteReport::new(
        "sections-lp",
        instances as u64 + 1,
        failures,
        format!(
            "LP against vertex enumeration, worst error {worst:.3e}; M of the {sides}-gon {:.6} ± {:.6}",
            m.mean, m.stderr
        ),
    )
    .metric("worst_error", worst)
    .metric("m_estimate", m.mean))
}
