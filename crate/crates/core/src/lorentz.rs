//! Generating functions, Lorentz norms `Λ_φ`, the tower norm and comparison
//! functions `(φ|ψ)`.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::class::Measure;
use crate::error::{Error, Result};

const BISECTION_CAP: usize = 200;

/// A convex increasing `φ: [0, ∞) → [0, ∞)` with `φ(0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeneratingFunction {
    /// `t^p`, `p >= 1`.
    Power { p: f64 },
    /// `t` on `[0, 1)` and `exp(α^t - α)` from 1 on, `α >= 2`.
    Tower { alpha: f64 },
    /// Piecewise linear through `(0, 0)` and the given knots, continued with
    /// the last slope.
    Table { knots: Vec<(f64, f64)> },
}

impl GeneratingFunction {
    pub fn power(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::invalid(format!("power generator needs p >= 1, got {p}")));
        }
        Ok(GeneratingFunction::Power { p })
    }

    pub fn tower(alpha: f64) -> Result<Self> {
        if !(alpha >= 2.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!("tower generator needs alpha >= 2, got {alpha}")));
        }
        Ok(GeneratingFunction::Tower { alpha })
    }

    /// Knots must have strictly increasing positive abscissae, increasing
    /// values and nondecreasing slopes, starting from the origin.
    pub fn table(mut knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.first() != Some(&(0.0, 0.0)) {
            knots.insert(0, (0.0, 0.0));
        }
        if knots.len() < 2 {
            return Err(Error::invalid("table generator needs at least one knot besides the origin"));
        }
        if knots.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::invalid("table knots must be finite"));
        }
        let mut prev_slope = 0.0;
        for w in knots.windows(2) {
            let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            if dx <= 0.0 || dy <= 0.0 {
                return Err(Error::invalid("table must be strictly increasing in both coordinates"));
            }
            let slope = dy / dx;
            if slope < prev_slope * (1.0 - 1e-12) {
                return Err(Error::invalid("table must be convex"));
            }
            prev_slope = slope;
        }
        Ok(GeneratingFunction::Table { knots })
    }

    /// Reads a two-column `x,y` CSV file.
    pub fn load_table(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let class = crate::class::FunctionClass::from_csv_str(&text)?;
        if class.domain_size() != 2 {
            return Err(Error::invalid("table file must have two columns"));
        }
        Self::table(class.rows().map(|r| (r[0], r[1])).collect())
    }

    /// Parses `power:<p>`, `tower:<alpha>` or `table:<path>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, arg) = spec
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("generator spec '{spec}' has no ':'")))?;
        let number = || {
            arg.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad generator parameter '{arg}'")))
        };
        match kind.trim() {
            "power" => Self::power(number()?),
            "tower" => Self::tower(number()?),
            "table" => Self::load_table(Path::new(arg)),
            other => Err(Error::invalid(format!("unknown generator kind '{other}'"))),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            GeneratingFunction::Power { p } => t.powf(*p),
            GeneratingFunction::Tower { alpha } => {
                if t < 1.0 {
                    t
                } else {
                    (alpha.powf(t) - alpha).exp()
                }
            }
            GeneratingFunction::Table { knots } => {
                let k = knots.partition_point(|&(x, _)| x < t).clamp(1, knots.len() - 1);
                let (x0, y0) = knots[k - 1];
                let (x1, y1) = knots[k];
                y0 + (t - x0) * (y1 - y0) / (x1 - x0)
            }
        }
    }

    /// `ln φ(t)`; stays finite far past the point where `φ` overflows.
    pub fn ln_eval(&self, t: f64) -> f64 {
        match self {
            GeneratingFunction::Power { p } => p * t.ln(),
            GeneratingFunction::Tower { alpha } if t >= 1.0 => alpha.powf(t) - alpha,
            _ => self.eval(t).ln(),
        }
    }

    /// `ln ln φ(t)` for `φ(t) > 1`, used once `ln φ` itself overflows.
    fn ln_ln_eval(&self, t: f64) -> f64 {
        match self {
            GeneratingFunction::Tower { alpha } if t >= 1.0 => t * alpha.ln() + (-alpha.powf(1.0 - t)).ln_1p(),
            _ => self.ln_eval(t).ln(),
        }
    }

    /// `φ^{-1}(y)` for `y >= 0`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if y <= 0.0 {
            return Ok(0.0);
        }
        match self {
            GeneratingFunction::Power { p } => Ok(y.powf(1.0 / p)),
            GeneratingFunction::Tower { alpha } => Ok(if y < 1.0 {
                y
            } else {
                (alpha + y.ln()).ln() / alpha.ln()
            }),
            GeneratingFunction::Table { .. } => self.inverse_by_bisection(y),
        }
    }

    fn inverse_by_bisection(&self, y: f64) -> Result<f64> {
        let (mut lo, mut hi) = (0.0, 1.0);
        let mut steps = 0;
        while self.eval(hi) < y {
            lo = hi;
            hi *= 2.0;
            steps += 1;
            if steps > BISECTION_CAP {
                return Err(Error::NumericFailure(format!("no bracket for inverse at {y}")));
            }
        }
        for _ in 0..BISECTION_CAP {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-12 * hi.max(1e-300) {
                return Ok(hi);
            }
        }
        Err(Error::NumericFailure(format!("inverse at {y} did not converge")))
    }

    /// Regularity: `φ(t) <= θ_α(t)` for `t >= 1`, checked on the grid
    /// `1 + k/16` up to `t = 64` in log-log scale.
    pub fn is_regular(&self, alpha: f64) -> bool {
        let Ok(theta) = GeneratingFunction::tower(alpha) else {
            return false;
        };
        (0..=1008).all(|k| {
            let t = 1.0 + k as f64 / 16.0;
            let (a, b) = (self.ln_eval(t), theta.ln_eval(t));
            if a.is_finite() && b.is_finite() {
                a <= b + 1e-12 * b.abs().max(1.0)
            } else {
                self.ln_ln_eval(t) <= theta.ln_ln_eval(t) + 1e-12
            }
        })
    }

    /// Whether `φ(1) = 1` to within `1e-12`.
    pub fn is_normalized(&self) -> bool {
        (self.eval(1.0) - 1.0).abs() <= 1e-12
    }
}

impl fmt::Display for GeneratingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratingFunction::Power { p } => write!(f, "power:{p}"),
            GeneratingFunction::Tower { alpha } => write!(f, "tower:{alpha}"),
            GeneratingFunction::Table { knots } => write!(f, "table[{} knots]", knots.len()),
        }
    }
}

fn check_vector(f: &[f64], mu: &Measure) -> Result<()> {
    if f.len() != mu.len() {
        return Err(Error::invalid(format!(
            "vector has {} entries but the measure has {}",
            f.len(),
            mu.len()
        )));
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("vector entries must be finite"));
    }
    Ok(())
}

/// `‖f‖_{Λ_φ} = inf{λ > 0 : μ{|f|/λ >= s} <= 1/φ(s) for all s > 0}`, computed
/// as `max_k v_k / φ^{-1}(1/m_k)` over the distinct levels `v_k` of `|f|`
/// with `m_k = μ{|f| >= v_k}`.
pub fn lorentz_norm(f: &[f64], mu: &Measure, phi: &GeneratingFunction) -> Result<f64> {
    check_vector(f, mu)?;
    let mut atoms: Vec<(f64, f64)> = f
        .iter()
        .zip(mu.weights())
        .filter(|&(&v, &w)| v != 0.0 && w > 0.0)
        .map(|(&v, &w)| (v.abs(), w))
        .collect();
    atoms.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best: f64 = 0.0;
    let mut mass = 0.0;
    let mut k = 0;
    while k < atoms.len() {
        let level = atoms[k].0;
        while k < atoms.len() && atoms[k].0 == level {
            mass += atoms[k].1;
            k += 1;
        }
        best = best.max(level / phi.inverse(1.0 / mass)?);
    }
    Ok(best)
}

/// Lorentz norm for the tower generator `θ_α`.
pub fn tower_norm(f: &[f64], mu: &Measure, alpha: f64) -> Result<f64> {
    lorentz_norm(f, mu, &GeneratingFunction::tower(alpha)?)
}

/// `(φ|ψ)(t) = sup{φ(s) : φ(s) >= ψ(ts)}`, possibly `+∞`. Returns 0 when no
/// `s` in `[2^-60, 2^60]` is feasible.
pub fn comparison_function(phi: &GeneratingFunction, psi: &GeneratingFunction, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("t must be positive, got {t}")));
    }
    let feasible = |s: f64| {
        let (a, b) = (phi.ln_eval(s), psi.ln_eval(t * s));
        match (a.is_finite(), b.is_finite()) {
            (true, true) => a >= b,
            (false, true) => a > 0.0,
            (true, false) => b < 0.0,
            (false, false) => phi.ln_ln_eval(s) >= psi.ln_ln_eval(t * s),
        }
    };
    let grid: Vec<f64> = (-60..=60).map(|k| 2f64.powi(k)).collect();
    let Some(top) = grid.iter().rposition(|&s| feasible(s)) else {
        return Ok(0.0);
    };
    if top == grid.len() - 1 {
        return Ok(f64::INFINITY);
    }
    let (mut lo, mut hi) = (grid[top], grid[top + 1]);
    for _ in 0..BISECTION_CAP {
        if hi - lo <= 1e-13 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(phi.eval(lo))
}

/// `{f : ‖f‖_{Λ_φ} <= radius}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LorentzBall {
    pub generator: GeneratingFunction,
    pub measure: Measure,
    pub radius: f64,
}

impl LorentzBall {
    pub fn new(generator: GeneratingFunction, measure: Measure, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("ball radius must be positive"));
        }
        Ok(LorentzBall {
            generator,
            measure,
            radius,
        })
    }

    /// The tower `Tower^α`: unit ball of `Λ_{θ_α}`.
    pub fn tower(alpha: f64, measure: Measure) -> Result<Self> {
        Self::new(GeneratingFunction::tower(alpha)?, measure, 1.0)
    }

    pub fn gauge(&self, f: &[f64]) -> Result<f64> {
        Ok(lorentz_norm(f, &self.measure, &self.generator)? / self.radius)
    }

    pub fn contains(&self, f: &[f64]) -> Result<bool> {
        Ok(self.gauge(f)? <= 1.0 + 1e-12)
    }
}
