//! Gaussian and Rademacher suprema, entropy and dimension integrals, the
//! iteration bound, the no-Sudakov construction and random-selection
//! experiments.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::class::{FunctionClass, Measure, Seed};
use crate::clique::{greedy_clique, max_clique, Graph};
use crate::dimension::{breakpoints, dimension_profile, fat_dimension};
use crate::error::{Error, Result};
use crate::exec;
use crate::lorentz::{comparison_function, lorentz_norm, GeneratingFunction};
use crate::packing::{distance_matrix, BodySpec, DEFAULT_EXACT_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Noise {
    Gaussian,
    Rademacher,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupremumEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub noise: Noise,
}

impl SupremumEstimate {
    fn from_values(values: &[f64], noise: Noise) -> Self {
        let k = values.len() as f64;
        let mean = values.iter().sum::<f64>() / k;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1.0);
        SupremumEstimate {
            mean,
            stderr: (var / k).sqrt(),
            samples: values.len() as u64,
            noise,
        }
    }
}

fn check_samples(samples: u64) -> Result<()> {
    if samples < 2 {
        return Err(Error::invalid(format!("need at least 2 samples, got {samples}")));
    }
    Ok(())
}

fn draw_noise(noise: Noise, n: usize, rng: &mut impl Rng) -> Vec<f64> {
    match noise {
        Noise::Gaussian => (0..n).map(|_| StandardNormal.sample(rng)).collect(),
        Noise::Rademacher => (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect(),
    }
}

/// `n^{-1/2} E sup_f Σ_i ξ_i f(i)` by Monte Carlo; sample `s` uses the RNG
/// stream `s` of `seed`.
pub fn process_supremum(f: &FunctionClass, noise: Noise, samples: u64, seed: Seed) -> Result<SupremumEstimate> {
    check_samples(samples)?;
    let n = f.domain_size();
    let scale = (n as f64).sqrt().recip();
    let values = exec::map_range(samples as usize, |s| {
        let xi = draw_noise(noise, n, &mut seed.rng(s as u64));
        scale
            * f.rows()
                .map(|row| row.iter().zip(&xi).map(|(a, b)| a * b).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max)
    });
    Ok(SupremumEstimate::from_values(&values, noise))
}

/// Where an integrand is sampled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grid {
    /// Step-function breakpoints of the integrand; the integral is exact.
    Auto,
    /// Strictly increasing positive points; trapezoid rule over them.
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralReport {
    /// Trapezoid sum of `samples` over `grid`.
    pub value: f64,
    pub lower: f64,
    pub grid: Vec<f64>,
    pub samples: Vec<f64>,
    /// Per grid point, whether the integrand was computed exactly.
    pub exact: Vec<bool>,
}

fn trapezoid(grid: &[f64], samples: &[f64]) -> f64 {
    grid.windows(2)
        .zip(samples.windows(2))
        .map(|(t, y)| 0.5 * (t[1] - t[0]) * (y[0] + y[1]))
        .sum()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::invalid("grid needs at least two points"));
    }
    if grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("grid must be positive and strictly increasing"));
    }
    Ok(())
}

/// Integral of a left-continuous step function that equals `values[j]` on
/// `(cuts[j-1], cuts[j]]` (with `cuts[-1] = lower`) and 0 after the last cut.
fn step_report(lower: f64, cuts: &[f64], values: &[f64], exact: &[bool]) -> IntegralReport {
    let mut grid = Vec::new();
    let mut samples = Vec::new();
    let mut flags = Vec::new();
    let mut left = lower;
    for ((&c, &v), &e) in cuts.iter().zip(values).zip(exact) {
        if c <= lower {
            continue;
        }
        grid.extend([left, c]);
        samples.extend([v, v]);
        flags.extend([e, e]);
        left = c;
    }
    if grid.is_empty() {
        grid.push(lower);
        samples.push(0.0);
        flags.push(true);
    }
    IntegralReport {
        value: trapezoid(&grid, &samples),
        lower,
        grid,
        samples,
        exact: flags,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralOptions {
    /// Multiplier `c` of the lower limit `c n^{-1/2} E(F)`; 0 integrates from 0.
    pub lower_factor: f64,
    /// Samples for the estimate of `E(F)` behind the lower limit.
    pub lower_samples: u64,
    pub exact_cap: usize,
}

impl Default for IntegralOptions {
    fn default() -> Self {
        IntegralOptions {
            lower_factor: 0.0,
            lower_samples: 2000,
            exact_cap: DEFAULT_EXACT_CAP,
        }
    }
}

fn lower_limit(f: &FunctionClass, opts: &IntegralOptions, seed: Seed) -> Result<f64> {
    if opts.lower_factor < 0.0 {
        return Err(Error::invalid("lower-limit factor must be nonnegative"));
    }
    if opts.lower_factor == 0.0 {
        return Ok(0.0);
    }
    let e = process_supremum(f, Noise::Gaussian, opts.lower_samples, seed.derive(0x10e7))?.mean;
    Ok(opts.lower_factor * e.max(0.0) / (f.domain_size() as f64).sqrt())
}

/// `∫ sqrt(D(F, L_2(μ), t)) dt` with `D` the log of the packing number at
/// separation `t`.
pub fn dudley_integral(f: &FunctionClass, mu: &Measure, grid: &Grid, seed: Seed) -> Result<IntegralReport> {
    dudley_integral_with(f, mu, grid, seed, &IntegralOptions::default())
}

pub fn dudley_integral_with(
    f: &FunctionClass,
    mu: &Measure,
    grid: &Grid,
    seed: Seed,
    opts: &IntegralOptions,
) -> Result<IntegralReport> {
    let body = BodySpec::lp(2.0, mu.clone())?;
    let d = distance_matrix(f, &body)?;
    let m = d.len();
    let exact = m <= opts.exact_cap;
    let entropy_at = |t: f64| {
        let g = Graph::from_fn(m, |i, j| d[i][j] >= t);
        let size = if exact { max_clique(&g).len() } else { greedy_clique(&g).len() };
        (size as f64).ln().sqrt()
    };
    let lower = lower_limit(f, opts, seed)?;
    match grid {
        Grid::Auto => {
            let mut cuts: Vec<f64> = d.iter().flatten().copied().filter(|&x| x > 0.0).collect();
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            let values = exec::map_slice(&cuts, |&t| entropy_at(t));
            Ok(step_report(lower, &cuts, &values, &vec![exact; cuts.len()]))
        }
        Grid::Explicit(ts) => {
            check_grid(ts)?;
            let samples = exec::map_slice(ts, |&t| entropy_at(t));
            Ok(IntegralReport {
                value: trapezoid(ts, &samples),
                lower: ts[0],
                grid: ts.clone(),
                samples,
                exact: vec![exact; ts.len()],
            })
        }
    }
}

/// `∫ sqrt(v(F, t)) dt`.
pub fn comb_integral(f: &FunctionClass, grid: &Grid) -> Result<IntegralReport> {
    comb_integral_with(f, grid, Seed(0), &IntegralOptions::default())
}

pub fn comb_integral_with(f: &FunctionClass, grid: &Grid, seed: Seed, opts: &IntegralOptions) -> Result<IntegralReport> {
    let lower = lower_limit(f, opts, seed)?;
    match grid {
        Grid::Auto => {
            let cuts = breakpoints(f);
            if cuts.is_empty() {
                return Ok(step_report(lower, &[], &[], &[]));
            }
            let profile = dimension_profile(f, &cuts)?;
            let values: Vec<f64> = profile.iter().map(|&(_, v)| (v as f64).sqrt()).collect();
            Ok(step_report(lower, &cuts, &values, &vec![true; cuts.len()]))
        }
        Grid::Explicit(ts) => {
            check_grid(ts)?;
            let samples: Vec<f64> = dimension_profile(f, ts)?
                .into_iter()
                .map(|(_, v)| (v as f64).sqrt())
                .collect();
            Ok(IntegralReport {
                value: trapezoid(ts, &samples),
                lower: ts[0],
                grid: ts.clone(),
                exact: vec![true; ts.len()],
                samples,
            })
        }
    }
}

/// `log a · Σ_{j <= jmax} 4^j v(F, c a^j t)`. Without `jmax` the sum runs
/// until the first vanishing term, which exists for every finite class.
pub fn iteration_bound(f: &FunctionClass, t: f64, a: f64, c: f64, jmax: Option<u32>) -> Result<f64> {
    if !(a > 2.0 && a.is_finite()) {
        return Err(Error::invalid(format!("a must exceed 2, got {a}")));
    }
    if !(t > 0.0 && c > 0.0) {
        return Err(Error::invalid("t and c must be positive"));
    }
    let mut sum = 0.0;
    let mut j = 0u32;
    loop {
        let v = fat_dimension(f, c * a.powi(j as i32) * t)?.v;
        sum += 4f64.powi(j as i32) * v as f64;
        match jmax {
            Some(last) if j == last => {
                if v != 0 {
                    return Err(Error::invalid(format!("term {last} of the iteration sum does not vanish")));
                }
                break;
            }
            None if v == 0 => break,
            _ => {}
        }
        j += 1;
    }
    Ok(a.ln() * sum)
}

/// Default cap on rows kept per summand `A_k`.
pub const NOSUDAKOV_SUMMAND_CAP_LOG2: u32 = 16;
/// Cap on rows of a materialized Minkowski sum.
pub const MATERIALIZE_CAP: u64 = 1 << 20;

/// One summand `2^{-k} A_k` with `A_k` random vertices of `{-1, 1}^n`,
/// stored as bit rows (bit set means `+1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summand {
    pub k: u32,
    /// `log2 N(k) = 4^k`.
    pub nominal_log2: u64,
    pub subsampled: bool,
    words: usize,
    bits: Vec<u64>,
}

impl Summand {
    pub fn len(&self) -> usize {
        self.bits.len() / self.words
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn scale(&self) -> f64 {
        0.5f64.powi(self.k as i32)
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words..(r + 1) * self.words]
    }

    fn value(&self, r: usize, i: usize) -> f64 {
        if self.row(r)[i / 64] >> (i % 64) & 1 == 1 {
            self.scale()
        } else {
            -self.scale()
        }
    }

    /// `max_a <ε, a>` for `ε` in bit form.
    fn max_inner(&self, eps: &[u64], n: usize) -> i64 {
        (0..self.len())
            .map(|r| {
                let diff: u32 = self.row(r).iter().zip(eps).map(|(a, b)| (a ^ b).count_ones()).sum();
                n as i64 - 2 * diff as i64
            })
            .max()
            .unwrap_or(0)
    }
}

/// `F = Σ_{k=1}^{k_1} 2^{-k} A_k`, kept as its summands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoSudakovClass {
    pub n: usize,
    pub alpha_cap: f64,
    pub k1: u32,
    pub summands: Vec<Summand>,
}

/// Builds the summands with at most `2^cap_log2` rows each; `k_1` is the
/// largest `k` with `2^{4^k} <= exp(alpha_cap · n)`.
pub fn build_nosudakov_class(n: usize, alpha_cap: f64, seed: Seed) -> Result<NoSudakovClass> {
    build_nosudakov_class_with(n, alpha_cap, seed, NOSUDAKOV_SUMMAND_CAP_LOG2)
}

pub fn build_nosudakov_class_with(n: usize, alpha_cap: f64, seed: Seed, cap_log2: u32) -> Result<NoSudakovClass> {
    if n < 16 {
        return Err(Error::invalid(format!("n must be at least 16, got {n}")));
    }
    if !(alpha_cap > 0.0 && alpha_cap <= 1.0) {
        return Err(Error::invalid(format!("alpha_cap must lie in (0, 1], got {alpha_cap}")));
    }
    if cap_log2 > 24 {
        return Err(Error::ResourceLimit {
            what: "log2 of rows per summand",
            limit: 24,
            actual: cap_log2 as u64,
        });
    }
    let budget = alpha_cap * n as f64;
    let mut k1 = 0u32;
    while 4f64.powi(k1 as i32 + 1) * std::f64::consts::LN_2 <= budget {
        k1 += 1;
    }
    if k1 == 0 {
        return Err(Error::invalid("alpha_cap * n is too small for a single summand"));
    }
    let words = n.div_ceil(64);
    let tail_mask = if n.is_multiple_of(64) { u64::MAX } else { (1u64 << (n % 64)) - 1 };
    let summands = (1..=k1)
        .map(|k| {
            let nominal_log2 = 4u64.pow(k);
            let kept_log2 = nominal_log2.min(cap_log2 as u64);
            let rows = 1usize << kept_log2;
            let mut rng = seed.rng(k as u64);
            let mut bits = vec![0u64; rows * words];
            for (idx, w) in bits.iter_mut().enumerate() {
                *w = rng.random::<u64>();
                if idx % words == words - 1 {
                    *w &= tail_mask;
                }
            }
            Summand {
                k,
                nominal_log2,
                subsampled: kept_log2 < nominal_log2,
                words,
                bits,
            }
        })
        .collect();
    Ok(NoSudakovClass {
        n,
        alpha_cap,
        k1,
        summands,
    })
}

impl NoSudakovClass {
    /// `log2 |F|` for the kept summands (duplicates counted).
    pub fn size_log2(&self) -> f64 {
        self.summands.iter().map(|s| (s.len() as f64).log2()).sum()
    }

    pub fn is_subsampled(&self) -> bool {
        self.summands.iter().any(|s| s.subsampled)
    }

    /// The Minkowski sum as an explicit class, if it has at most `2^20` rows.
    pub fn materialize(&self) -> Result<FunctionClass> {
        let total: u128 = self.summands.iter().map(|s| s.len() as u128).product();
        if total > MATERIALIZE_CAP as u128 {
            return Err(Error::ResourceLimit {
                what: "rows of the Minkowski sum (lower n or alpha_cap, or use the summands directly)",
                limit: MATERIALIZE_CAP,
                actual: total.min(u64::MAX as u128) as u64,
            });
        }
        let mut rows: Vec<Vec<f64>> = vec![vec![0.0; self.n]];
        for s in &self.summands {
            let mut next = Vec::with_capacity(rows.len() * s.len());
            for base in &rows {
                for r in 0..s.len() {
                    next.push((0..self.n).map(|i| base[i] + s.value(r, i)).collect());
                }
            }
            rows = next;
        }
        FunctionClass::new(rows)
    }

    /// `E_rad(F)` by Monte Carlo over the stored rows. The supremum over a
    /// Minkowski sum splits into the sum of the suprema over the summands
    /// under the same signs.
    pub fn rademacher_supremum_stored(&self, samples: u64, seed: Seed) -> Result<SupremumEstimate> {
        check_samples(samples)?;
        let words = self.n.div_ceil(64);
        let scale = (self.n as f64).sqrt().recip();
        let values = exec::map_range(samples as usize, |s| {
            let mut rng = seed.rng(s as u64);
            let eps: Vec<u64> = (0..words).map(|_| rng.random::<u64>()).collect();
            scale * self.sup_at(&eps)
        });
        Ok(SupremumEstimate::from_values(&values, Noise::Rademacher))
    }

    /// `E_rad` of the class with every summand at its nominal size
    /// `2^{4^k}`. Stored rows are used where nothing was dropped; for a
    /// subsampled summand the maximum of `<ε, a>` over `N(k)` independent
    /// uniform vertices is drawn from its exact law, which does not depend
    /// on `ε`.
    pub fn rademacher_supremum(&self, samples: u64, seed: Seed) -> Result<SupremumEstimate> {
        check_samples(samples)?;
        let words = self.n.div_ceil(64);
        let scale = (self.n as f64).sqrt().recip();
        let laws: Vec<Option<MaxLaw>> = self
            .summands
            .iter()
            .map(|sm| sm.subsampled.then(|| MaxLaw::new(self.n, sm.nominal_log2 as f64 * std::f64::consts::LN_2)))
            .collect();
        let values = exec::map_range(samples as usize, |s| {
            let mut rng = seed.rng(s as u64);
            let eps: Vec<u64> = (0..words).map(|_| rng.random::<u64>()).collect();
            let mut eps_masked = eps.clone();
            if !self.n.is_multiple_of(64) {
                eps_masked[words - 1] &= (1u64 << (self.n % 64)) - 1;
            }
            scale
                * self
                    .summands
                    .iter()
                    .zip(&laws)
                    .map(|(sm, law)| {
                        let top = match law {
                            None => sm.max_inner(&eps_masked, self.n),
                            Some(law) => law.sample(&mut rng),
                        };
                        sm.scale() * top as f64
                    })
                    .sum::<f64>()
        });
        Ok(SupremumEstimate::from_values(&values, Noise::Rademacher))
    }

    /// `sup_{x in F} <ε, x>` for signs `ε` in bit form (bit set means `+1`).
    /// Bits beyond `n` are ignored.
    pub fn sup_at(&self, eps: &[u64]) -> f64 {
        let mut eps = eps[..self.n.div_ceil(64)].to_vec();
        if !self.n.is_multiple_of(64) {
            *eps.last_mut().unwrap() &= (1u64 << (self.n % 64)) - 1;
        }
        let eps = &eps;
        self.summands
            .iter()
            .map(|sm| sm.scale() * sm.max_inner(eps, self.n) as f64)
            .sum()
    }

    /// Upper bound on `sup_t t sqrt(v(F, t))`, valid for the stored rows and
    /// for the class at nominal size alike. With `w_L` the oscillation width
    /// `2 Σ_{l > L} 2^{-l}` of the tail summands, any set `t`-shattered by `F`
    /// with `t > w_L` is shattered by the first `L` summands, so
    /// `v(F, t) <= min(n, Σ_{l <= L} 4^l)` there.
    pub fn sup_t_sqrt_v_bound(&self) -> f64 {
        let widths: Vec<f64> = (0..=self.summands.len())
            .map(|l| 2.0 * self.summands[l..].iter().map(Summand::scale).sum::<f64>())
            .collect();
        let mut bits = 0.0;
        let mut best: f64 = 0.0;
        for (l, s) in self.summands.iter().enumerate() {
            bits += s.nominal_log2 as f64;
            best = best.max(widths[l] * bits.min(self.n as f64).sqrt());
        }
        best
    }
}

/// Law of `max_{j <= N} <ε, a_j>` for independent uniform `a_j ∈ {-1, 1}^n`.
/// Each inner product is `n - 2D` with `D ~ Bin(n, 1/2)`, so the maximum is
/// `n - 2 min_j D_j`, sampled by inverting `P{min D <= d} = 1 - (1 - F(d))^N`.
struct MaxLaw {
    n: usize,
    /// `ln N + ln(-ln(1 - F(d)))`, nondecreasing in `d`.
    thresholds: Vec<f64>,
}

impl MaxLaw {
    fn new(n: usize, ln_count: f64) -> Self {
        let ln2n = n as f64 * std::f64::consts::LN_2;
        let mut ln_pmf = Vec::with_capacity(n + 1);
        let mut ln_binom = 0.0;
        for j in 0..=n {
            if j > 0 {
                ln_binom += ((n - j + 1) as f64 / j as f64).ln();
            }
            ln_pmf.push(ln_binom - ln2n);
        }
        let log_sum = |xs: &[f64]| {
            let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
        };
        let thresholds = (0..=n)
            .map(|d| {
                if d == n {
                    return f64::INFINITY;
                }
                let ln_cdf = log_sum(&ln_pmf[..=d]);
                let ln_tail = log_sum(&ln_pmf[d + 1..]);
                // -ln(1 - F) = -ln(tail), or about F when F is tiny
                let neg_ln_survival = if ln_cdf < -30.0 { ln_cdf } else { (-ln_tail).ln() };
                ln_count + neg_ln_survival
            })
            .collect();
        MaxLaw { n, thresholds }
    }

    fn sample(&self, rng: &mut impl Rng) -> i64 {
        let u: f64 = rng.random::<f64>();
        // smallest d with 1 - (1 - F(d))^N >= u
        let x = (-(-u).ln_1p()).ln();
        let d = self.thresholds.partition_point(|&t| t < x);
        self.n as i64 - 2 * d as i64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Selection {
    /// `P{|Σ_{i<=m} (δ_i - δ)| <= t}` for `t >= ε δ m`.
    Binomial { m: usize, delta: f64, epsilon: f64, t: f64 },
    /// `|Q|` random sets of size `ceil(γ n)`; success when
    /// `|S ∩ σ| / |σ| >= 0.99 |S| / n` for every `S`.
    Discrepancy {
        n: usize,
        gamma: f64,
        k: f64,
        q: usize,
        /// Constant in the hypothesis `|Q| <= 0.001 exp(c γ k)`.
        c: f64,
    },
    /// Success when `‖f‖_{Λ_ψ(σ)} <= bound`; needs `‖f‖_{Λ_ψ(I)} <= 1`.
    OneFunction {
        f: Vec<f64>,
        psi: GeneratingFunction,
        k: f64,
        bound: f64,
    },
    /// Success when `‖x‖_{Λ_φ(σ)} >= 0.99 ‖x‖_{Λ_φ(I)}` for all rows.
    Reduction {
        class: FunctionClass,
        phi: GeneratingFunction,
        psi: GeneratingFunction,
        t: f64,
        k: f64,
        c: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub success_rate: f64,
    pub successes: u64,
    pub trials: u64,
    pub params: Selection,
}

/// Relative slack in norm comparisons of selection experiments.
pub const NORM_TOLERANCE: f64 = 1e-12;

fn random_subset(n: usize, delta: f64, rng: &mut impl Rng) -> Vec<usize> {
    (0..n).filter(|_| rng.random::<f64>() < delta).collect()
}

fn restrict_norm(x: &[f64], sigma: &[usize], g: &GeneratingFunction) -> Result<f64> {
    let sub: Vec<f64> = sigma.iter().map(|&i| x[i]).collect();
    lorentz_norm(&sub, &Measure::uniform(sub.len()), g)
}

fn check_k(k: f64, n: usize) -> Result<f64> {
    if !(k > 0.0 && k <= n as f64) {
        return Err(Error::invalid(format!("expected cardinality k must lie in (0, {n}], got {k}")));
    }
    Ok(k / n as f64)
}

/// Runs `trials` seeded trials of the independent-selector model; trial `r`
/// uses RNG stream `r + 1`, stream 0 is reserved for fixed inputs.
pub fn selection_experiment(sel: &Selection, trials: u64, seed: Seed) -> Result<SelectionReport> {
    if trials == 0 {
        return Err(Error::invalid("trials must be positive"));
    }
    let outcome: Vec<Result<bool>> = match sel {
        Selection::Binomial { m, delta, epsilon, t } => {
            if !(*delta > 0.0 && *delta < 1.0) || !(*epsilon > 0.0 && *epsilon <= 1.0) {
                return Err(Error::invalid("binomial needs 0 < delta < 1 and 0 < epsilon <= 1"));
            }
            if *t < epsilon * delta * *m as f64 {
                return Err(Error::invalid("hypothesis t >= epsilon * delta * m fails"));
            }
            exec::map_range(trials as usize, |r| {
                let mut rng = seed.rng(r as u64 + 1);
                let hits = (0..*m).filter(|_| rng.random::<f64>() < *delta).count() as f64;
                Ok((hits - delta * *m as f64).abs() <= *t)
            })
        }
        Selection::Discrepancy { n, gamma, k, q, c } => {
            let delta = check_k(*k, *n)?;
            if !(*gamma > 0.0 && *gamma <= 1.0) {
                return Err(Error::invalid("gamma must lie in (0, 1]"));
            }
            if *q == 0 || (*q as f64) > 0.001 * (c * gamma * k).exp() {
                return Err(Error::invalid("hypothesis |Q| <= 0.001 exp(c gamma k) fails"));
            }
            let size = ((gamma * *n as f64).ceil() as usize).min(*n);
            let mut rng = seed.rng(0);
            let system: Vec<Vec<usize>> = (0..*q)
                .map(|_| rand::seq::index::sample(&mut rng, *n, size).into_vec())
                .collect();
            exec::map_range(trials as usize, |r| {
                let mut rng = seed.rng(r as u64 + 1);
                let mut chosen = vec![false; *n];
                let mut card = 0usize;
                for slot in chosen.iter_mut() {
                    if rng.random::<f64>() < delta {
                        *slot = true;
                        card += 1;
                    }
                }
                if card == 0 {
                    return Ok(false);
                }
                Ok(system.iter().all(|s| {
                    let hit = s.iter().filter(|&&i| chosen[i]).count() as f64;
                    hit / card as f64 >= 0.99 * s.len() as f64 / *n as f64
                }))
            })
        }
        Selection::OneFunction { f, psi, k, bound } => {
            let n = f.len();
            let delta = check_k(*k, n)?;
            if lorentz_norm(f, &Measure::uniform(n), psi)? > 1.0 + NORM_TOLERANCE {
                return Err(Error::invalid("hypothesis ‖f‖ <= 1 in Λ_ψ(I) fails"));
            }
            exec::map_range(trials as usize, |r| {
                let sigma = random_subset(n, delta, &mut seed.rng(r as u64 + 1));
                if sigma.is_empty() {
                    return Ok(false);
                }
                Ok(restrict_norm(f, &sigma, psi)? <= *bound * (1.0 + NORM_TOLERANCE))
            })
        }
        Selection::Reduction { class, phi, psi, t, k, c } => {
            let n = class.domain_size();
            let delta = check_k(*k, n)?;
            let mu = Measure::uniform(n);
            let mut full = Vec::with_capacity(class.len());
            for row in class.rows() {
                if lorentz_norm(row, &mu, psi)? > 1.0 + NORM_TOLERANCE {
                    return Err(Error::invalid("hypothesis: class is not 1-bounded in Λ_ψ(I)"));
                }
                let norm = lorentz_norm(row, &mu, phi)?;
                if norm < *t {
                    return Err(Error::invalid("hypothesis ‖x‖_{Λ_φ(I)} >= t fails"));
                }
                full.push(norm);
            }
            let cmp = comparison_function(phi, psi, *t)?;
            if class.len() as f64 > 0.001 * (c * k / cmp).exp() {
                return Err(Error::invalid("hypothesis |F| <= 0.001 exp(c k / (φ|ψ)(t)) fails"));
            }
            exec::map_range(trials as usize, |r| {
                let sigma = random_subset(n, delta, &mut seed.rng(r as u64 + 1));
                if sigma.is_empty() {
                    return Ok(false);
                }
                for (row, &norm) in class.rows().zip(&full) {
                    if restrict_norm(row, &sigma, phi)? < 0.99 * norm * (1.0 - NORM_TOLERANCE) {
                        return Ok(false);
                    }
                }
                Ok(true)
            })
        }
    };
    let mut successes = 0u64;
    for o in outcome {
        successes += o? as u64;
    }
    Ok(SelectionReport {
        success_rate: successes as f64 / trials as f64,
        successes,
        trials,
        params: sel.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn suprema_examples() {
        let pm = class(&[&[1.0], &[-1.0]]);
        let r = process_supremum(&pm, Noise::Rademacher, 100, Seed(1)).unwrap();
        assert_eq!((r.mean, r.stderr), (1.0, 0.0));
        let g = process_supremum(&pm, Noise::Gaussian, 20_000, Seed(2)).unwrap();
        assert!((g.mean - (2.0 / std::f64::consts::PI).sqrt()).abs() < 3.0 * g.stderr);
        let single = class(&[&[0.3, -1.0, 2.0]]);
        for noise in [Noise::Gaussian, Noise::Rademacher] {
            let s = process_supremum(&single, noise, 20_000, Seed(3)).unwrap();
            assert!(s.mean.abs() < 3.0 * s.stderr, "{s:?}");
        }
        assert!(process_supremum(&pm, Noise::Gaussian, 1, Seed(0)).is_err());
    }

    #[test]
    fn suprema_agree_across_policies() {
        let f = identity(5);
        let a = exec::sequential(|| process_supremum(&f, Noise::Gaussian, 500, Seed(9)).unwrap());
        let b = process_supremum(&f, Noise::Gaussian, 500, Seed(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dudley_examples() {
        let one = class(&[&[1.0, 2.0]]);
        assert_eq!(dudley_integral(&one, &Measure::uniform(2), &Grid::Auto, Seed(0)).unwrap().value, 0.0);
        let r = dudley_integral(&identity(4), &Measure::uniform(4), &Grid::Auto, Seed(0)).unwrap();
        let want = 0.5f64.sqrt() * 4f64.ln().sqrt();
        assert!((r.value - want).abs() < 1e-15, "{}", r.value);
        let doubled = crate::class::scaled(&identity(4), 2.0).unwrap();
        let r2 = dudley_integral(&doubled, &Measure::uniform(4), &Grid::Auto, Seed(0)).unwrap();
        assert!((r2.value - 2.0 * want).abs() < 1e-14);
    }

    #[test]
    fn comb_examples() {
        assert_eq!(comb_integral(&identity(5), &Grid::Auto).unwrap().value, 1.0);
        let cube = FunctionClass::new((0..8u32).map(|m| (0..3).map(|j| (m >> j & 1) as f64).collect()).collect()).unwrap();
        assert!((comb_integral(&cube, &Grid::Auto).unwrap().value - 3f64.sqrt()).abs() < 1e-15);
        let r = comb_integral(&identity(3), &Grid::Explicit(vec![0.25, 0.5, 1.0, 1.5])).unwrap();
        assert_eq!(r.samples, vec![1.0, 1.0, 1.0, 0.0]);
        assert_eq!(r.value, 0.75 + 0.25);
        assert_eq!(comb_integral(&class(&[&[1.0]]), &Grid::Auto).unwrap().value, 0.0);
    }

    #[test]
    fn report_value_is_trapezoid_of_samples() {
        let f = class(&[&[0.0, 1.0], &[2.0, 0.5], &[1.0, 3.0]]);
        let r = comb_integral(&f, &Grid::Auto).unwrap();
        assert_eq!(r.value, trapezoid(&r.grid, &r.samples));
    }

    #[test]
    fn iteration_examples() {
        let bounded = class(&[&[1.0, -1.0], &[0.0, 0.5]]);
        assert_eq!(iteration_bound(&bounded, 3.0, 3.0, 1.0, None).unwrap(), 0.0);
        assert!((iteration_bound(&identity(4), 0.5, 3.0, 1.0, None).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert!(iteration_bound(&identity(4), 0.5, 3.0, 1.0, Some(0)).is_err());
        assert!((iteration_bound(&identity(4), 0.5, 3.0, 1.0, Some(3)).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert!(iteration_bound(&identity(4), 0.5, 2.0, 1.0, None).is_err());
    }

    fn assert_sup_matches(c: &NoSudakovClass, f: &FunctionClass) {
        let mut rng = Seed(77).rng(0);
        for _ in 0..50 {
            let eps: Vec<u64> = (0..c.n.div_ceil(64)).map(|_| rng.random::<u64>()).collect();
            let signs: Vec<f64> = (0..c.n).map(|i| if eps[i / 64] >> (i % 64) & 1 == 1 { 1.0 } else { -1.0 }).collect();
            let direct = f
                .rows()
                .map(|r| r.iter().zip(&signs).map(|(a, b)| a * b).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((direct - c.sup_at(&eps)).abs() < 1e-9, "{direct} vs {}", c.sup_at(&eps));
        }
    }

    #[test]
    fn nosudakov_small() {
        let c = build_nosudakov_class(16, 0.25, Seed(4)).unwrap();
        assert_eq!(c.k1, 1);
        let f = c.materialize().unwrap();
        assert_eq!(f.len(), 16);
        assert!(f.rows().flatten().all(|v| v.abs() == 0.5));
        assert_sup_matches(&c, &f);
        assert_eq!(c.sup_t_sqrt_v_bound(), 2.0);
        assert!(build_nosudakov_class(8, 0.25, Seed(0)).is_err());
        assert!(build_nosudakov_class(16, 1.5, Seed(0)).is_err());
    }

    #[test]
    fn nosudakov_sum_matches_decomposition() {
        let c = build_nosudakov_class_with(100, 0.25, Seed(8), 4).unwrap();
        assert_eq!(c.k1, 2);
        let f = c.materialize().unwrap();
        assert_eq!(f.len(), 256);
        let bound = 2.0 * (0.5 + 0.25);
        assert!(f.rows().flatten().all(|v| v.abs() <= bound));
        assert_sup_matches(&c, &f);
        let e = c.rademacher_supremum_stored(400, Seed(6)).unwrap();
        assert!(e.mean > 0.0 && e.stderr > 0.0);
        let uncapped = c.rademacher_supremum(400, Seed(6)).unwrap();
        assert!(uncapped.mean > e.mean);
        assert!(build_nosudakov_class(1024, 0.125, Seed(1)).unwrap().materialize().is_err());
    }

    #[test]
    fn max_law_matches_direct_sampling() {
        // N = 8 vertices of {-1, 1}^10: compare the mean of the exact law with
        // brute-force draws
        let law = MaxLaw::new(10, 8f64.ln());
        let mut rng = Seed(12).rng(0);
        let trials = 40_000;
        let exact: f64 = (0..trials).map(|_| law.sample(&mut rng) as f64).sum::<f64>() / trials as f64;
        let direct: f64 = (0..trials)
            .map(|_| {
                (0..8)
                    .map(|_| (0..10).map(|_| if rng.random::<bool>() { 1 } else { -1 }).sum::<i64>())
                    .max()
                    .unwrap() as f64
            })
            .sum::<f64>()
            / trials as f64;
        assert!((exact - direct).abs() < 0.05, "{exact} vs {direct}");
        let one = MaxLaw::new(6, 0.0);
        let mean: f64 = (0..trials).map(|_| one.sample(&mut rng) as f64).sum::<f64>() / trials as f64;
        assert!(mean.abs() < 0.05, "{mean}");
    }

    #[test]
    fn selection_examples() {
        let whole = Selection::Discrepancy {
            n: 200,
            gamma: 1.0,
            k: 50.0,
            q: 1,
            c: 1.0,
        };
        assert_eq!(selection_experiment(&whole, 200, Seed(1)).unwrap().success_rate, 1.0);
        let flat = Selection::OneFunction {
            f: vec![1.0; 100],
            psi: GeneratingFunction::power(2.0).unwrap(),
            k: 50.0,
            bound: 1.0,
        };
        assert_eq!(selection_experiment(&flat, 200, Seed(2)).unwrap().success_rate, 1.0);
        let bad = Selection::Binomial {
            m: 100,
            delta: 0.5,
            epsilon: 1.0,
            t: 10.0,
        };
        assert!(selection_experiment(&bad, 10, Seed(0)).is_err());
        let tight = Selection::Discrepancy {
            n: 100,
            gamma: 0.2,
            k: 10.0,
            q: 10,
            c: 0.1,
        };
        assert!(selection_experiment(&tight, 10, Seed(0)).is_err());
    }
}
