//! Fat-shattering dimension `v(F, t)`.
//!
//! `σ` is t-shattered when some level function `h` on `σ` admits, for every
//! split `σ = σ_- ∪ σ_+`, an `f ∈ F` with `f <= h` on `σ_-` and `f >= h + t`
//! on `σ_+`. Levels are searched over data values only: lowering `h(i)` to the
//! largest data value below it keeps every witness valid.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::class::FunctionClass;
use crate::combin::{combinations, floor_log2};
use crate::error::{Error, Result};
use crate::exec;
use crate::lattice::CoordinateSubset;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShatterWitness {
    pub sigma: CoordinateSubset,
    pub levels: Vec<f64>,
    pub t: f64,
}

impl ShatterWitness {
    /// Re-checks all `2^|σ|` splits directly against `F`.
    pub fn verify(&self, f: &FunctionClass) -> bool {
        let k = self.sigma.len();
        if k != self.levels.len() || k >= 32 || !(self.t > 0.0) {
            return false;
        }
        if self.sigma.coords().iter().any(|&i| i >= f.domain_size()) {
            return false;
        }
        (0..1u64 << k).all(|split| {
            f.rows().any(|row| {
                self.sigma.coords().iter().zip(&self.levels).enumerate().all(|(j, (&i, &h))| {
                    if split >> j & 1 == 1 {
                        row[i] >= h + self.t
                    } else {
                        row[i] <= h
                    }
                })
            })
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionOptions {
    /// Cap on level refinements over the whole search.
    pub node_budget: u64,
}

impl Default for DimensionOptions {
    fn default() -> Self {
        DimensionOptions {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FatDimension {
    pub v: usize,
    pub witness: Option<ShatterWitness>,
}

struct Budget {
    used: AtomicU64,
    limit: u64,
    blown: AtomicBool,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Budget {
            used: AtomicU64::new(0),
            limit,
            blown: AtomicBool::new(false),
        }
    }

    fn spend(&self) -> bool {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.limit {
            self.blown.store(true, Ordering::Relaxed);
            false
        } else {
            true
        }
    }

    fn check(&self) -> Result<()> {
        if self.blown.load(Ordering::Relaxed) {
            Err(Error::ResourceLimit {
                what: "fat-shattering search nodes",
                limit: self.limit,
                actual: self.used.load(Ordering::Relaxed),
            })
        } else {
            Ok(())
        }
    }
}

struct LevelSearch<'a> {
    f: &'a FunctionClass,
    coords: &'a [usize],
    levels: Vec<Vec<f64>>,
    t: f64,
    budget: &'a Budget,
}

impl<'a> LevelSearch<'a> {
    fn new(f: &'a FunctionClass, coords: &'a [usize], t: f64, budget: &'a Budget) -> Self {
        let levels = coords
            .iter()
            .map(|&i| {
                let mut vals = f.column_values(i);
                vals.sort_by(f64::total_cmp);
                vals.dedup();
                let top = *vals.last().unwrap_or(&f64::NEG_INFINITY);
                vals.retain(|&h| h + t <= top);
                vals
            })
            .collect();
        LevelSearch {
            f,
            coords,
            levels,
            t,
            budget,
        }
    }

    fn refine(&self, live: &[(u32, u64)], depth: usize, h: f64) -> Option<Vec<(u32, u64)>> {
        let need = 1usize << (depth + 1);
        if live.len() < need || !self.budget.spend() {
            return None;
        }
        let col = self.coords[depth];
        let mut next = Vec::with_capacity(live.len());
        let mut seen = vec![false; need];
        let mut missing = need;
        for &(p, code) in live {
            let v = self.f.value(p as usize, col);
            let code = if v >= h + self.t {
                code | 1 << depth
            } else if v <= h {
                code
            } else {
                continue;
            };
            next.push((p, code));
            if !seen[code as usize] {
                seen[code as usize] = true;
                missing -= 1;
            }
        }
        (missing == 0).then_some(next)
    }

    fn find(&self, live: &[(u32, u64)], depth: usize, chosen: &mut Vec<f64>) -> bool {
        if depth == self.coords.len() {
            return true;
        }
        for &h in &self.levels[depth] {
            if let Some(next) = self.refine(live, depth, h) {
                chosen.push(h);
                if self.find(&next, depth + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    fn run(&self) -> Option<Vec<f64>> {
        if self.levels.iter().any(Vec::is_empty) {
            return None;
        }
        let live: Vec<(u32, u64)> = (0..self.f.len() as u32).map(|p| (p, 0)).collect();
        let mut chosen = Vec::with_capacity(self.coords.len());
        self.find(&live, 0, &mut chosen).then_some(chosen)
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("t must be positive and finite, got {t}")));
    }
    Ok(())
}

/// Witness that `σ` is t-shattered by `F`, if any; the smallest levels in
/// lexicographic order are returned.
pub fn is_shattered(f: &FunctionClass, sigma: &CoordinateSubset, t: f64) -> Result<Option<ShatterWitness>> {
    is_shattered_with(f, sigma, t, &DimensionOptions::default())
}

pub fn is_shattered_with(
    f: &FunctionClass,
    sigma: &CoordinateSubset,
    t: f64,
    opts: &DimensionOptions,
) -> Result<Option<ShatterWitness>> {
    check_t(t)?;
    if sigma.is_empty() {
        return Err(Error::invalid("sigma must be nonempty"));
    }
    if sigma.coords().iter().any(|&i| i >= f.domain_size()) {
        return Err(Error::invalid("sigma out of range"));
    }
    if sigma.len() >= 63 {
        return Ok(None);
    }
    let budget = Budget::new(opts.node_budget);
    let levels = LevelSearch::new(f, sigma.coords(), t, &budget).run();
    budget.check()?;
    Ok(levels.map(|levels| ShatterWitness {
        sigma: sigma.clone(),
        levels,
        t,
    }))
}

/// `v(F, t)` with a witness of maximal size (lexicographically first `σ`).
pub fn fat_dimension(f: &FunctionClass, t: f64) -> Result<FatDimension> {
    fat_dimension_with(f, t, &DimensionOptions::default())
}

pub fn fat_dimension_with(f: &FunctionClass, t: f64, opts: &DimensionOptions) -> Result<FatDimension> {
    check_t(t)?;
    let budget = Budget::new(opts.node_budget);
    search_below(f, t, usize::MAX, &budget)
}

fn search_below(f: &FunctionClass, t: f64, cap: usize, budget: &Budget) -> Result<FatDimension> {
    let eligible: Vec<usize> = (0..f.domain_size())
        .filter(|&i| {
            let (lo, hi) = f.column_range(i);
            hi - lo >= t
        })
        .collect();
    let top = eligible.len().min(floor_log2(f.distinct_len())).min(cap).min(62);
    for size in (1..=top).rev() {
        let subsets = combinations(&eligible, size);
        let hit = exec::find_first(subsets.len(), |k| {
            if budget.blown.load(Ordering::Relaxed) {
                return None;
            }
            LevelSearch::new(f, &subsets[k], t, budget).run().map(|levels| (k, levels))
        });
        budget.check()?;
        if let Some((k, levels)) = hit {
            return Ok(FatDimension {
                v: size,
                witness: Some(ShatterWitness {
                    sigma: CoordinateSubset::new(subsets[k].clone(), f.domain_size())?,
                    levels,
                    t,
                }),
            });
        }
    }
    Ok(FatDimension { v: 0, witness: None })
}

/// `v(F, t)` over a strictly increasing grid. Each step only searches sizes up
/// to the previous value, since `v` is nonincreasing in `t`.
pub fn dimension_profile(f: &FunctionClass, ts: &[f64]) -> Result<Vec<(f64, usize)>> {
    dimension_profile_with(f, ts, &DimensionOptions::default())
}

pub fn dimension_profile_with(f: &FunctionClass, ts: &[f64], opts: &DimensionOptions) -> Result<Vec<(f64, usize)>> {
    for &t in ts {
        check_t(t)?;
    }
    if ts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("t grid must be strictly increasing"));
    }
    let budget = Budget::new(opts.node_budget);
    let mut cap = usize::MAX;
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts {
        let v = search_below(f, t, cap, &budget)?.v;
        cap = v;
        out.push((t, v));
    }
    Ok(out)
}

/// Distinct positive differences `f(i) - g(i)` over pairs and coordinates, in
/// increasing order. `t ↦ v(F, t)` is constant on each interval `(b_{j-1}, b_j]`
/// between consecutive breakpoints and vanishes beyond the last one.
pub fn breakpoints(f: &FunctionClass) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..f.domain_size() {
        let mut col = f.column_values(i);
        col.sort_by(f64::total_cmp);
        col.dedup();
        for (a, &x) in col.iter().enumerate() {
            for &y in &col[a + 1..] {
                out.push(y - x);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}
