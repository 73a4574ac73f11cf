//! Packing and covering numbers of finite sets, and the entropies built on
//! them.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::class::{lp_norm_unchecked, FunctionClass, Measure, Seed};
use crate::clique::{greedy_clique, max_clique, Graph};
use crate::error::{Error, Result};
use crate::exec;
use crate::lorentz::{lorentz_norm, GeneratingFunction};

/// Default cap on the number of points for exact packing.
pub const DEFAULT_EXACT_CAP: usize = 40;
/// Default cap on the number of points for the exact covering refinement.
pub const DEFAULT_COVER_CAP: usize = 256;
const COVER_NODE_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BodyKind {
    /// Unit ball of `L_p(μ)`; `p = ∞` is the sup over the support of `μ`.
    LpBall { p: f64, measure: Measure },
    /// Unit ball of `Λ_φ(μ)`.
    LorentzBall { generator: GeneratingFunction, measure: Measure },
    /// `{x : xᵀ M x <= 1}` for a symmetric positive definite `M`.
    Ellipsoid { matrix: Vec<Vec<f64>> },
    /// The unit cube `[-1/2, 1/2]^n`.
    Cube,
}

/// `radius` times a symmetric convex body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodySpec {
    pub kind: BodyKind,
    pub radius: f64,
}

impl BodySpec {
    pub fn new(kind: BodyKind, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid(format!("body radius must be positive, got {radius}")));
        }
        match &kind {
            BodyKind::LpBall { p, .. } if !(*p >= 1.0) => {
                return Err(Error::invalid(format!("lp body needs p >= 1, got {p}")));
            }
            BodyKind::Ellipsoid { matrix } => check_spd(matrix)?,
            _ => {}
        }
        Ok(BodySpec { kind, radius })
    }

    pub fn lp(p: f64, measure: Measure) -> Result<Self> {
        Self::new(BodyKind::LpBall { p, measure }, 1.0)
    }

    pub fn linf(n: usize) -> Self {
        BodySpec {
            kind: BodyKind::LpBall {
                p: f64::INFINITY,
                measure: Measure::uniform(n),
            },
            radius: 1.0,
        }
    }

    pub fn cube() -> Self {
        BodySpec {
            kind: BodyKind::Cube,
            radius: 1.0,
        }
    }

    pub fn ellipsoid_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { diag[i] } else { 0.0 }).collect())
            .collect();
        Self::new(BodyKind::Ellipsoid { matrix }, 1.0)
    }

    pub fn with_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid(format!("body radius must be positive, got {radius}")));
        }
        self.radius = radius;
        Ok(self)
    }

    /// Parses `lp:<p>`, `linf`, `lorentz:<generator>`, `ellipsoid:<d1,d2,...>`
    /// or `cube` for dimension `n`; `measure` defaults to uniform.
    pub fn parse(spec: &str, n: usize, measure: Option<Measure>) -> Result<Self> {
        let mu = || measure.clone().unwrap_or_else(|| Measure::uniform(n));
        let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
        match head {
            "lp" => {
                let p = match rest {
                    "inf" | "infinity" => f64::INFINITY,
                    _ => rest
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad exponent in body '{spec}'")))?,
                };
                Self::lp(p, mu())
            }
            "linf" => Self::lp(f64::INFINITY, mu()),
            "lorentz" => Self::new(
                BodyKind::LorentzBall {
                    generator: GeneratingFunction::parse(rest)?,
                    measure: mu(),
                },
                1.0,
            ),
            "tower" => Self::new(
                BodyKind::LorentzBall {
                    generator: GeneratingFunction::parse(spec)?,
                    measure: mu(),
                },
                1.0,
            ),
            "ellipsoid" => {
                let diag = rest
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::invalid(format!("bad diagonal in body '{spec}'")))?;
                if diag.len() != n {
                    return Err(Error::invalid("ellipsoid diagonal length differs from n"));
                }
                Self::ellipsoid_diagonal(&diag)
            }
            "cube" => Ok(Self::cube()),
            _ => Err(Error::invalid(format!("unknown body '{spec}'"))),
        }
    }

    /// Gauge of the unit body (radius ignored).
    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        match &self.kind {
            BodyKind::LpBall { p, measure } => {
                if measure.len() != x.len() {
                    return Err(Error::invalid("body measure length differs from n"));
                }
                Ok(lp_norm_unchecked(x, measure.weights(), *p))
            }
            BodyKind::LorentzBall { generator, measure } => lorentz_norm(x, measure, generator),
            BodyKind::Ellipsoid { matrix } => {
                if matrix.len() != x.len() {
                    return Err(Error::invalid("ellipsoid size differs from n"));
                }
                let q: f64 = matrix
                    .iter()
                    .zip(x)
                    .map(|(row, &xi)| xi * row.iter().zip(x).map(|(m, xj)| m * xj).sum::<f64>())
                    .sum();
                Ok(q.max(0.0).sqrt())
            }
            BodyKind::Cube => Ok(2.0 * x.iter().fold(0.0f64, |m, v| m.max(v.abs()))),
        }
    }

    pub fn distance(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.norm(&d)
    }
}

fn check_spd(m: &[Vec<f64>]) -> Result<()> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::invalid("ellipsoid matrix must be square"));
    }
    for i in 0..n {
        for j in 0..i {
            if (m[i][j] - m[j][i]).abs() > 1e-12 * (m[i][j].abs() + m[j][i].abs()).max(1.0) {
                return Err(Error::invalid("ellipsoid matrix must be symmetric"));
            }
        }
    }
    // Cholesky
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = m[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            if i == j {
                if !(s > 0.0) {
                    return Err(Error::invalid("ellipsoid matrix must be positive definite"));
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Ok(())
}

/// Pairwise distances between rows of `f` in the body's norm.
pub fn distance_matrix(f: &FunctionClass, body: &BodySpec) -> Result<Vec<Vec<f64>>> {
    let m = f.len();
    let rows = exec::map_range(m, |i| {
        (0..m)
            .map(|j| if i == j { Ok(0.0) } else { body.distance(f.row(i), f.row(j)) })
            .collect::<Result<Vec<f64>>>()
    });
    rows.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PackingMode {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingCertificate {
    pub indices: Vec<usize>,
    /// Distances between the chosen rows, indexed like `indices`.
    pub distances: Vec<Vec<f64>>,
}

impl PackingCertificate {
    fn from_matrix(indices: Vec<usize>, d: &[Vec<f64>]) -> Self {
        let distances = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| d[i][j]).collect())
            .collect();
        PackingCertificate { indices, distances }
    }

    /// All recorded pairwise distances are at least `t`.
    pub fn is_separated(&self, t: f64) -> bool {
        let k = self.indices.len();
        (0..k).all(|a| (a + 1..k).all(|b| self.distances[a][b] >= t))
    }

    /// Recomputes the distances from `f` and checks separation.
    pub fn verify(&self, f: &FunctionClass, body: &BodySpec, t: f64) -> Result<bool> {
        if self.indices.iter().any(|&i| i >= f.len()) {
            return Err(Error::Structure("certificate refers to a missing row".into()));
        }
        for (a, &i) in self.indices.iter().enumerate() {
            for &j in &self.indices[a + 1..] {
                if body.distance(f.row(i), f.row(j))? < t {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Packing {
    pub number: usize,
    pub certificate: PackingCertificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingOptions {
    pub exact_cap: usize,
}

impl Default for PackingOptions {
    fn default() -> Self {
        PackingOptions {
            exact_cap: DEFAULT_EXACT_CAP,
        }
    }
}

/// Farthest-point greedy: repeatedly add the row farthest from the chosen
/// ones while that distance passes `keep`.
fn farthest_point(d: &[Vec<f64>], keep: impl Fn(f64) -> bool) -> Vec<usize> {
    let m = d.len();
    if m == 0 {
        return Vec::new();
    }
    let mut chosen = vec![0];
    let mut gap: Vec<f64> = d[0].clone();
    loop {
        let next = (0..m)
            .filter(|&j| keep(gap[j]))
            .fold(None, |best: Option<usize>, j| match best {
                Some(b) if gap[b] >= gap[j] => Some(b),
                _ => Some(j),
            });
        let Some(j) = next else { break };
        chosen.push(j);
        for k in 0..m {
            gap[k] = gap[k].min(d[j][k]);
        }
    }
    chosen.sort_unstable();
    chosen
}

fn packing_from_matrix(d: &[Vec<f64>], t: f64, mode: PackingMode, opts: &PackingOptions) -> Result<Vec<usize>> {
    let m = d.len();
    match mode {
        PackingMode::Exact => {
            if m > opts.exact_cap {
                return Err(Error::ResourceLimit {
                    what: "points for exact packing",
                    limit: opts.exact_cap as u64,
                    actual: m as u64,
                });
            }
            Ok(max_clique(&Graph::from_fn(m, |i, j| d[i][j] >= t)))
        }
        PackingMode::Greedy => Ok(farthest_point(d, |g| g >= t)),
    }
}

/// Largest set of rows with pairwise body distance at least `t`.
pub fn packing_number(f: &FunctionClass, body: &BodySpec, t: f64, mode: PackingMode) -> Result<Packing> {
    packing_number_with(f, body, t, mode, &PackingOptions::default())
}

pub fn packing_number_with(
    f: &FunctionClass,
    body: &BodySpec,
    t: f64,
    mode: PackingMode,
    opts: &PackingOptions,
) -> Result<Packing> {
    if !(t > 0.0) {
        return Err(Error::invalid(format!("separation must be positive, got {t}")));
    }
    if mode == PackingMode::Exact && f.len() > opts.exact_cap {
        return Err(Error::ResourceLimit {
            what: "points for exact packing",
            limit: opts.exact_cap as u64,
            actual: f.len() as u64,
        });
    }
    let d = distance_matrix(f, body)?;
    let indices = packing_from_matrix(&d, t, mode, opts)?;
    Ok(Packing {
        number: indices.len(),
        certificate: PackingCertificate::from_matrix(indices, &d),
    })
}

/// `D(F, X, t)`: natural log of the exact packing number.
pub fn entropy(f: &FunctionClass, body: &BodySpec, t: f64) -> Result<f64> {
    Ok((packing_number(f, body, t, PackingMode::Exact)?.number as f64).ln())
}

/// `D_∞(F, t)`: entropy in the sup metric over all coordinates.
pub fn entropy_linfty(f: &FunctionClass, t: f64) -> Result<f64> {
    entropy(f, &BodySpec::linf(f.domain_size()), t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KpEntropy {
    pub value: f64,
    pub measure: Measure,
    pub evaluations: u64,
}

/// Lower bound on `D(F, t) = sup_μ D(F, L_2(μ), t)` by seeded random restarts
/// and coordinate ascent over `μ`. `budget` counts entropy evaluations.
pub fn kp_entropy_lower(f: &FunctionClass, t: f64, budget: u64, seed: Seed) -> Result<KpEntropy> {
    if !(t > 0.0) {
        return Err(Error::invalid(format!("separation must be positive, got {t}")));
    }
    if budget == 0 {
        return Err(Error::invalid("budget must be at least 1"));
    }
    let n = f.domain_size();
    let m = f.len();
    // squared coordinate differences per pair
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let sq: Vec<Vec<f64>> = pairs
        .iter()
        .map(|&(i, j)| f.row(i).iter().zip(f.row(j)).map(|(a, b)| (a - b) * (a - b)).collect())
        .collect();
    let t2 = t * t;
    let opts = PackingOptions::default();
    let evals = std::cell::Cell::new(0u64);
    let eval = |w: &[f64]| -> f64 {
        evals.set(evals.get() + 1);
        let sep: Vec<bool> = sq
            .iter()
            .map(|s| s.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() >= t2)
            .collect();
        let mut edge = vec![vec![false; m]; m];
        for (&(i, j), &s) in pairs.iter().zip(&sep) {
            edge[i][j] = s;
            edge[j][i] = s;
        }
        let g = Graph::from_fn(m, |i, j| edge[i][j]);
        let size = if m <= opts.exact_cap {
            max_clique(&g).len()
        } else {
            greedy_clique(&g).len()
        };
        (size as f64).ln()
    };

    let uniform = vec![1.0 / n as f64; n];
    let mut best_w = uniform.clone();
    let mut best = eval(&uniform);
    let mut rng = seed.rng(0);
    let mut restart = 0u64;
    'outer: while evals.get() < budget {
        let mut w: Vec<f64> = if restart == 0 {
            uniform.clone()
        } else {
            let raw: Vec<f64> = (0..n).map(|_| Exp1.sample(&mut rng)).collect();
            let s: f64 = raw.iter().sum();
            raw.into_iter().map(|x: f64| x / s).collect()
        };
        restart += 1;
        let mut cur = if restart == 1 { best } else { eval(&w) };
        if cur > best {
            best = cur;
            best_w = w.clone();
        }
        let mut improved = true;
        while improved {
            improved = false;
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            for &i in &order {
                for factor in [0.0, 0.5, 2.0, 4.0 + rng.random::<f64>()] {
                    if evals.get() >= budget {
                        break 'outer;
                    }
                    let mut cand = w.clone();
                    cand[i] *= factor;
                    let s: f64 = cand.iter().sum();
                    if s <= 0.0 {
                        continue;
                    }
                    cand.iter_mut().for_each(|x| *x /= s);
                    let v = eval(&cand);
                    if v > cur {
                        cur = v;
                        w = cand;
                        improved = true;
                        if v > best {
                            best = v;
                            best_w = w.clone();
                        }
                    }
                }
            }
        }
    }
    Ok(KpEntropy {
        value: best,
        measure: Measure::new(best_w)?,
        evaluations: evals.get(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverMode {
    Greedy,
    Sandwich,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Covering {
    /// Rows pairwise farther than `2r` apart; no translate holds two of them.
    pub lower: usize,
    /// Number of translates centred at rows of `A` that cover `A`.
    pub upper: usize,
    pub lower_witness: Vec<usize>,
    pub centers: Vec<usize>,
    /// Whether `upper` is the minimum over covers centred in `A`.
    pub upper_exact: bool,
    pub lower_exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverOptions {
    pub exact_cap: usize,
    pub cover_cap: usize,
    pub node_budget: u64,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions {
            exact_cap: DEFAULT_EXACT_CAP,
            cover_cap: DEFAULT_COVER_CAP,
            node_budget: COVER_NODE_BUDGET,
        }
    }
}

/// Bounds on `N(A, rB)`, the least number of translates of `radius · B`
/// covering `A`.
pub fn covering_number(a: &FunctionClass, body: &BodySpec, mode: CoverMode) -> Result<Covering> {
    covering_number_with(a, body, mode, &CoverOptions::default())
}

pub fn covering_number_with(a: &FunctionClass, body: &BodySpec, mode: CoverMode, opts: &CoverOptions) -> Result<Covering> {
    let r = body.radius;
    let d = distance_matrix(a, body)?;
    let m = d.len();

    let far = |x: f64| x > 2.0 * r;
    let first_fit = greedy_clique(&Graph::from_fn(m, |i, j| far(d[i][j])));
    let spread = farthest_point(&d, far);
    let mut lower_witness = if spread.len() > first_fit.len() { spread } else { first_fit };
    let mut lower_exact = false;
    if mode == CoverMode::Sandwich && m <= opts.exact_cap {
        lower_witness = max_clique(&Graph::from_fn(m, |i, j| far(d[i][j])));
        lower_exact = true;
    }

    let words = m.div_ceil(64).max(1);
    let sets: Vec<Vec<u64>> = exec::map_range(m, |c| {
        let mut s = vec![0u64; words];
        for y in 0..m {
            if d[c][y] <= r {
                s[y / 64] |= 1 << (y % 64);
            }
        }
        s
    });
    let mut centers = greedy_cover(&sets, m);
    let anchored = corner_first_cover(&sets, m);
    if anchored.len() < centers.len() {
        centers = anchored;
    }
    let mut upper_exact = false;
    if mode == CoverMode::Sandwich && centers.len() > lower_witness.len() && m <= opts.cover_cap {
        if let Some(best) = exact_cover(&sets, m, centers.len(), lower_witness.len(), opts.node_budget) {
            centers = best;
            upper_exact = true;
        }
    } else if centers.len() == lower_witness.len() {
        upper_exact = true;
    }
    Ok(Covering {
        lower: lower_witness.len(),
        upper: centers.len(),
        lower_witness,
        centers,
        upper_exact,
        lower_exact: lower_exact || upper_exact,
    })
}

fn popcount_and(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

fn greedy_cover(sets: &[Vec<u64>], m: usize) -> Vec<usize> {
    let words = m.div_ceil(64).max(1);
    let mut uncovered = vec![0u64; words];
    for y in 0..m {
        uncovered[y / 64] |= 1 << (y % 64);
    }
    let mut centers = Vec::new();
    while uncovered.iter().any(|&w| w != 0) {
        let (c, _) = sets
            .iter()
            .enumerate()
            .map(|(c, s)| (c, popcount_and(s, &uncovered)))
            .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
        for (u, s) in uncovered.iter_mut().zip(&sets[c]) {
            *u &= !s;
        }
        centers.push(c);
    }
    centers.sort_unstable();
    centers
}

/// Covers the first uncovered point in index order by the set through it
/// that covers most uncovered points.
fn corner_first_cover(sets: &[Vec<u64>], m: usize) -> Vec<usize> {
    let words = m.div_ceil(64).max(1);
    let mut uncovered = vec![0u64; words];
    for y in 0..m {
        uncovered[y / 64] |= 1 << (y % 64);
    }
    let mut centers = Vec::new();
    while let Some(w) = uncovered.iter().position(|&w| w != 0) {
        let y = w * 64 + uncovered[w].trailing_zeros() as usize;
        let (c, _) = sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s[y / 64] >> (y % 64) & 1 == 1)
            .map(|(c, s)| (c, popcount_and(s, &uncovered)))
            .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
        for (u, s) in uncovered.iter_mut().zip(&sets[c]) {
            *u &= !s;
        }
        centers.push(c);
    }
    centers.sort_unstable();
    centers.dedup();
    centers
}

/// Minimum cover by the given sets, or `None` when the node budget runs out
/// first. Starts from an incumbent of size `upper` and stops at `floor`.
fn exact_cover(sets: &[Vec<u64>], m: usize, upper: usize, floor: usize, budget: u64) -> Option<Vec<usize>> {
    struct State<'a> {
        sets: &'a [Vec<u64>],
        covering: Vec<Vec<usize>>,
        max_set: usize,
        best: Option<Vec<usize>>,
        best_len: usize,
        floor: usize,
        nodes: u64,
        budget: u64,
    }
    impl State<'_> {
        fn go(&mut self, uncovered: &[u64], chosen: &mut Vec<usize>) -> bool {
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            let left: usize = uncovered.iter().map(|w| w.count_ones() as usize).sum();
            if left == 0 {
                if chosen.len() < self.best_len {
                    self.best_len = chosen.len();
                    let mut c = chosen.clone();
                    c.sort_unstable();
                    self.best = Some(c);
                }
                return true;
            }
            if chosen.len() + left.div_ceil(self.max_set) >= self.best_len || self.best_len <= self.floor {
                return true;
            }
            // uncovered element with fewest covering sets
            let mut pick = usize::MAX;
            let mut pick_deg = usize::MAX;
            for (w, &bits) in uncovered.iter().enumerate() {
                let mut b = bits;
                while b != 0 {
                    let y = w * 64 + b.trailing_zeros() as usize;
                    b &= b - 1;
                    if self.covering[y].len() < pick_deg {
                        pick_deg = self.covering[y].len();
                        pick = y;
                    }
                }
            }
            let mut options = self.covering[pick].clone();
            options.sort_by_key(|&c| std::cmp::Reverse(popcount_and(&self.sets[c], uncovered)));
            for c in options {
                let next: Vec<u64> = uncovered.iter().zip(&self.sets[c]).map(|(u, s)| u & !s).collect();
                chosen.push(c);
                let ok = self.go(&next, chosen);
                chosen.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
    }
    let words = m.div_ceil(64).max(1);
    let mut covering = vec![Vec::new(); m];
    for (c, s) in sets.iter().enumerate() {
        for (y, cov) in covering.iter_mut().enumerate() {
            if s[y / 64] >> (y % 64) & 1 == 1 {
                cov.push(c);
            }
        }
    }
    let mut state = State {
        sets,
        covering,
        max_set: sets.iter().map(|s| s.iter().map(|w| w.count_ones() as usize).sum()).max().unwrap_or(1).max(1),
        best: None,
        best_len: upper + 1,
        floor,
        nodes: 0,
        budget,
    };
    let mut all = vec![0u64; words];
    for y in 0..m {
        all[y / 64] |= 1 << (y % 64);
    }
    if state.go(&all, &mut Vec::new()) {
        state.best
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::integer_box_sample;

    fn class(rows: &[&[f64]]) -> FunctionClass {
        FunctionClass::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn identity(n: usize) -> FunctionClass {
        FunctionClass::new(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn packing_examples() {
        let two = class(&[&[0.0, 0.0], &[1.0, 1.0]]);
        let l2 = BodySpec::lp(2.0, Measure::uniform(2)).unwrap();
        assert_eq!(packing_number(&two, &l2, 1.0, PackingMode::Exact).unwrap().number, 2);
        assert_eq!(packing_number(&two, &l2, 1.5, PackingMode::Exact).unwrap().number, 1);

        let n = 6;
        let l2n = BodySpec::lp(2.0, Measure::uniform(n)).unwrap();
        let t = (2.0 / n as f64).sqrt() * (1.0 - 1e-12);
        let p = packing_number(&identity(n), &l2n, t, PackingMode::Exact).unwrap();
        assert_eq!(p.number, n);
        assert!(p.certificate.is_separated(t));
        assert!(p.certificate.verify(&identity(n), &l2n, t).unwrap());
        assert_eq!(packing_number(&identity(n), &l2n, 1.0, PackingMode::Greedy).unwrap().number, 1);
    }

    #[test]
    fn exact_cap() {
        let big = FunctionClass::new((0..41).map(|i| vec![i as f64]).collect()).unwrap();
        assert!(matches!(
            packing_number(&big, &BodySpec::linf(1), 1.0, PackingMode::Exact),
            Err(Error::ResourceLimit { .. })
        ));
        assert_eq!(packing_number(&big, &BodySpec::linf(1), 1.0, PackingMode::Greedy).unwrap().number, 41);
    }

    #[test]
    fn entropy_examples() {
        let l2 = BodySpec::lp(2.0, Measure::uniform(4)).unwrap();
        assert!((entropy(&identity(4), &l2, 0.5).unwrap() - 4f64.ln()).abs() < 1e-15);
        assert_eq!(entropy(&class(&[&[1.0, 2.0, 3.0, 4.0]]), &l2, 0.5).unwrap(), 0.0);
        assert!((entropy_linfty(&identity(5), 0.5).unwrap() - 5f64.ln()).abs() < 1e-15);
        assert_eq!(entropy_linfty(&identity(5), 2.5).unwrap(), 0.0);
    }

    #[test]
    fn kp_lower_bound() {
        let r = kp_entropy_lower(&identity(4), 0.5, 200, Seed(3)).unwrap();
        assert!((r.value - 4f64.ln()).abs() < 1e-15);
        let two = class(&[&[0.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]);
        // uniform gives distance sqrt(1/3); the ascent must move mass to the last atom
        let r = kp_entropy_lower(&two, 0.9, 500, Seed(1)).unwrap();
        assert!((r.value - 2f64.ln()).abs() < 1e-15, "{r:?}");
    }

    #[test]
    fn covering_examples() {
        let line = class(&[&[0.0], &[2.0], &[4.0]]);
        let c = covering_number(&line, &BodySpec::cube(), CoverMode::Sandwich).unwrap();
        assert_eq!((c.lower, c.upper), (3, 3));

        let tight = class(&[&[0.0, 0.1], &[0.2, -0.3]]);
        let c = covering_number(&tight, &BodySpec::cube(), CoverMode::Greedy).unwrap();
        assert_eq!((c.lower, c.upper), (1, 1));

        let b = integer_box_sample(&[3, 2]).unwrap();
        let c = covering_number(&b, &BodySpec::cube(), CoverMode::Sandwich).unwrap();
        assert_eq!((c.lower, c.upper), (6, 6));
    }

    #[test]
    fn body_parsing() {
        assert!(matches!(BodySpec::parse("lp:2", 3, None).unwrap().kind, BodyKind::LpBall { p, .. } if p == 2.0));
        assert!(matches!(BodySpec::parse("lp:inf", 3, None).unwrap().kind, BodyKind::LpBall { p, .. } if p.is_infinite()));
        assert!(matches!(BodySpec::parse("tower:2", 3, None).unwrap().kind, BodyKind::LorentzBall { .. }));
        assert!(matches!(BodySpec::parse("lorentz:power:2", 3, None).unwrap().kind, BodyKind::LorentzBall { .. }));
        assert!(BodySpec::parse("ellipsoid:1,2", 3, None).is_err());
        assert!(BodySpec::parse("ellipsoid:1,2,-1", 3, None).is_err());
        let e = BodySpec::parse("ellipsoid:1,4,9", 3, None).unwrap();
        assert!((e.norm(&[1.0, 1.0, 1.0]).unwrap() - 14f64.sqrt()).abs() < 1e-15);
        assert!(BodySpec::parse("blob", 3, None).is_err());
        assert!(BodySpec::cube().with_radius(0.0).is_err());
    }

    #[test]
    fn full_ellipsoid_checks() {
        let ok = BodySpec::new(
            BodyKind::Ellipsoid {
                matrix: vec![vec![2.0, 1.0], vec![1.0, 2.0]],
            },
            1.0,
        )
        .unwrap();
        assert!((ok.norm(&[1.0, -1.0]).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(BodySpec::new(
            BodyKind::Ellipsoid {
                matrix: vec![vec![1.0, 2.0], vec![2.0, 1.0]]
            },
            1.0
        )
        .is_err());
    }
}
