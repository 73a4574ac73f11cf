//! Coordinate sections of symmetric polytopes inside a scaled cross-polytope.
//!
//! Bodies are given by vertices. The gauge `‖x‖_K` and the largest `ℓ_1` norm
//! on a coordinate section are linear programs over convex weights on the
//! vertices.

use std::fs;
use std::path::Path;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::class::Seed;
use crate::combin::combinations;
use crate::error::{Error, Result};
use crate::exec;
use crate::lattice::CoordinateSubset;
use crate::simplex::{maximize, LpOutcome};

/// Distance under which `-v` counts as present.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Slack in `M · max_l1 <= sqrt(|σ|)`.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-9;
pub const EXHAUSTIVE_MAX_N: usize = 16;

/// Convex hull of a sign-symmetric set of points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolytopeFile", into = "PolytopeFile")]
pub struct VPolytope {
    vertices: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeFile {
    vertices: Vec<Vec<f64>>,
}

impl TryFrom<PolytopeFile> for VPolytope {
    type Error = Error;
    fn try_from(f: PolytopeFile) -> Result<Self> {
        VPolytope::new(f.vertices)
    }
}

impl From<VPolytope> for PolytopeFile {
    fn from(k: VPolytope) -> Self {
        PolytopeFile { vertices: k.vertices }
    }
}

impl VPolytope {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let n = vertices.first().ok_or(Error::EmptyInput)?.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        for (r, v) in vertices.iter().enumerate() {
            if v.len() != n {
                return Err(Error::Parse {
                    row: r + 1,
                    col: None,
                    message: format!("expected {n} coordinates, found {}", v.len()),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Parse {
                    row: r + 1,
                    col: None,
                    message: "non-finite coordinate".into(),
                });
            }
        }
        for (r, v) in vertices.iter().enumerate() {
            let mirrored = vertices
                .iter()
                .any(|w| w.iter().zip(v).all(|(a, b)| (a + b).abs() <= SYMMETRY_TOLERANCE));
            if !mirrored {
                return Err(Error::Geometry(format!("vertex {} has no mirror image", r + 1)));
            }
        }
        Ok(VPolytope { vertices })
    }

    /// Hull of the points and their negatives.
    pub fn symmetric_hull(points: Vec<Vec<f64>>) -> Result<Self> {
        let mirrored: Vec<Vec<f64>> = points.iter().map(|p| p.iter().map(|x| -x).collect()).collect();
        VPolytope::new(points.into_iter().chain(mirrored).collect())
    }

    /// `radius · B_1^n`.
    pub fn cross_polytope(n: usize, radius: f64) -> Result<Self> {
        VPolytope::symmetric_hull(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { radius } else { 0.0 }).collect())
                .collect(),
        )
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        VPolytope::from_json_str(&text)
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        VPolytope::new(self.vertices.iter().map(|v| v.iter().map(|x| s * x).collect()).collect())
    }

    /// Gauge `min { t >= 0 : x ∈ t K }`, infinite outside the span of `K`.
    pub fn gauge(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::invalid("point dimension differs from the body"));
        }
        let m = self.vertices.len();
        let a: Vec<Vec<f64>> = (0..self.dim()).map(|i| self.vertices.iter().map(|v| v[i]).collect()).collect();
        match maximize(&vec![-1.0; m], &a, x)? {
            LpOutcome::Optimal { value, .. } => Ok(-value),
            LpOutcome::Infeasible => Ok(f64::INFINITY),
            LpOutcome::Unbounded => Err(Error::NumericFailure("gauge program unbounded".into())),
        }
    }

    /// Whether `K` has 0 as an interior point, by feasibility of each `e_i`.
    pub fn is_full_dimensional(&self) -> Result<bool> {
        let n = self.dim();
        for i in 0..n {
            let e: Vec<f64> = (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect();
            if self.gauge(&e)?.is_infinite() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `max { Σ_{i∈σ} s_i x_i : x ∈ K, x_j = 0 for j ∉ σ }`.
    fn section_value(&self, sigma: &CoordinateSubset, signs: &[f64]) -> Result<f64> {
        let n = self.dim();
        let outside: Vec<usize> = (0..n).filter(|j| !sigma.contains(*j)).collect();
        let mut a: Vec<Vec<f64>> = outside
            .iter()
            .map(|&j| self.vertices.iter().map(|v| v[j]).collect())
            .collect();
        a.push(vec![1.0; self.vertices.len()]);
        let mut b = vec![0.0; outside.len()];
        b.push(1.0);
        let c: Vec<f64> = self
            .vertices
            .iter()
            .map(|v| sigma.coords().iter().zip(signs).map(|(&i, s)| s * v[i]).sum())
            .collect();
        match maximize(&c, &a, &b)? {
            LpOutcome::Optimal { value, .. } => Ok(value.max(0.0)),
            LpOutcome::Infeasible => Ok(0.0),
            LpOutcome::Unbounded => Err(Error::NumericFailure("section program unbounded".into())),
        }
    }

    /// `max { ‖x‖_1 : x ∈ K ∩ R^σ }`; sign patterns `s` and `-s` give the same
    /// value, so only those with `s_first = +1` are solved.
    pub fn section_max_l1(&self, sigma: &CoordinateSubset) -> Result<f64> {
        let k = sigma.len();
        if k == 0 {
            return Err(Error::invalid("σ must be nonempty"));
        }
        if sigma.coords().iter().any(|&i| i >= self.dim()) {
            return Err(Error::invalid("σ has a coordinate outside the body's dimension"));
        }
        if k > 24 {
            return Err(Error::ResourceLimit {
                what: "size of σ for sign-pattern enumeration",
                limit: 24,
                actual: k as u64,
            });
        }
        let values = exec::map_range(1 << (k - 1), |mask| {
            let signs: Vec<f64> = (0..k)
                .map(|j| if j > 0 && mask >> (j - 1) & 1 == 1 { -1.0 } else { 1.0 })
                .collect();
            self.section_value(sigma, &signs)
        });
        values.into_iter().try_fold(0.0, |acc: f64, v| Ok(acc.max(v?)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionCertificate {
    pub sigma: CoordinateSubset,
    #[serde(rename = "M")]
    pub m: f64,
    pub max_l1: f64,
    pub holds: bool,
}

impl SectionCertificate {
    /// `M · max_l1 / sqrt(|σ|)`; the certificate holds when this is at most 1.
    pub fn ratio(&self) -> f64 {
        self.m * self.max_l1 / (self.sigma.len() as f64).sqrt()
    }

    /// Proportion `s = sqrt(|σ| / n)` of the section.
    pub fn implied_s(&self, n: usize) -> f64 {
        (self.sigma.len() as f64 / n as f64).sqrt()
    }

    /// Largest `t` with `K ∩ R^σ ⊆ t^{-1} sqrt(|σ|) B_1^σ`.
    pub fn implied_t(&self) -> f64 {
        if self.max_l1 == 0.0 {
            f64::INFINITY
        } else {
            (self.sigma.len() as f64).sqrt() / self.max_l1
        }
    }
}

pub fn section_l1_check(k: &VPolytope, sigma: &CoordinateSubset, m: f64) -> Result<SectionCertificate> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::invalid(format!("M must be positive, got {m}")));
    }
    let max_l1 = k.section_max_l1(sigma)?;
    let holds = m * max_l1 <= (sigma.len() as f64).sqrt() + CERTIFICATE_TOLERANCE;
    Ok(SectionCertificate {
        sigma: sigma.clone(),
        m,
        max_l1,
        holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exhaustive,
    GreedyDrop,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(SearchMode::Exhaustive),
            "greedy-drop" => Ok(SearchMode::GreedyDrop),
            other => Err(Error::invalid(format!("unknown search mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionSearch {
    /// Largest holding certificate, else the failing one of smallest ratio;
    /// absent when no `σ` of the requested size exists.
    pub best: Option<SectionCertificate>,
    pub n: usize,
    pub checked: usize,
    pub s: Option<f64>,
    pub t: Option<f64>,
}

/// Lower ratio wins; ties go to the larger, then lexicographically smaller σ.
fn better(a: &SectionCertificate, b: &SectionCertificate) -> bool {
    let (ra, rb) = (a.ratio(), b.ratio());
    ra < rb || (ra == rb && (a.sigma.len() > b.sigma.len() || (a.sigma.len() == b.sigma.len() && a.sigma < b.sigma)))
}

pub fn search_section(k: &VPolytope, m: f64, min_size: usize, mode: SearchMode) -> Result<SectionSearch> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::invalid(format!("M must be positive, got {m}")));
    }
    let n = k.dim();
    let min_size = min_size.max(1);
    let mut checked = 0;
    let mut best: Option<SectionCertificate> = None;
    let offer = |c: SectionCertificate, best: &mut Option<SectionCertificate>| {
        if best.as_ref().is_none_or(|b| better(&c, b)) {
            *best = Some(c);
        }
    };
    if min_size <= n {
        match mode {
            SearchMode::Exhaustive => {
                if n > EXHAUSTIVE_MAX_N {
                    return Err(Error::ResourceLimit {
                        what: "dimension for exhaustive section search",
                        limit: EXHAUSTIVE_MAX_N as u64,
                        actual: n as u64,
                    });
                }
                let all: Vec<usize> = (0..n).collect();
                for size in (min_size..=n).rev() {
                    let subsets: Vec<CoordinateSubset> =
                        combinations(&all, size).into_iter().map(|c| CoordinateSubset::new(c, n)).collect::<Result<_>>()?;
                    checked += subsets.len();
                    let certs = exec::map_slice(&subsets, |s| section_l1_check(k, s, m));
                    let mut holding = None;
                    for c in certs {
                        let c = c?;
                        if c.holds && holding.is_none() {
                            holding = Some(c.clone());
                        }
                        offer(c, &mut best);
                    }
                    if let Some(h) = holding {
                        best = Some(h);
                        break;
                    }
                }
            }
            SearchMode::GreedyDrop => {
                let mut current = section_l1_check(k, &CoordinateSubset::full(n), m)?;
                checked += 1;
                offer(current.clone(), &mut best);
                while !current.holds && current.sigma.len() > min_size {
                    let coords = current.sigma.coords().to_vec();
                    let candidates: Vec<CoordinateSubset> = (0..coords.len())
                        .map(|drop| {
                            let kept: Vec<usize> =
                                coords.iter().enumerate().filter(|&(j, _)| j != drop).map(|(_, &i)| i).collect();
                            CoordinateSubset::new(kept, n)
                        })
                        .collect::<Result<_>>()?;
                    checked += candidates.len();
                    let certs = exec::map_slice(&candidates, |s| section_l1_check(k, s, m));
                    let mut step: Option<SectionCertificate> = None;
                    for c in certs {
                        let c = c?;
                        if step.as_ref().is_none_or(|b| better(&c, b)) {
                            step = Some(c);
                        }
                    }
                    current = step.expect("σ has at least two coordinates here");
                    offer(current.clone(), &mut best);
                }
                if current.holds {
                    best = Some(current);
                }
            }
        }
    }
    let (s, t) = match &best {
        Some(c) if c.holds => (Some(c.implied_s(n)), Some(c.implied_t())),
        _ => (None, None),
    };
    Ok(SectionSearch { best, n, checked, s, t })
}

/// Estimate of `M_K`, the mean of `‖x‖_K` over the unit sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Monte Carlo `M_K`; sample `s` uses RNG stream `s` of `seed`.
pub fn m_estimate(k: &VPolytope, samples: u64, seed: Seed) -> Result<MEstimate> {
    if samples < 2 {
        return Err(Error::invalid(format!("need at least 2 samples, got {samples}")));
    }
    if !k.is_full_dimensional()? {
        return Err(Error::Geometry("0 is not an interior point of K".into()));
    }
    let n = k.dim();
    let values = exec::map_range(samples as usize, |s| {
        let mut rng = seed.rng(s as u64);
        let mut x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= r);
        k.gauge(&x)
    });
    let values: Vec<f64> = values.into_iter().collect::<Result<_>>()?;
    let count = values.len() as f64;
    let mean = values.iter().sum::<f64>() / count;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1.0);
    Ok(MEstimate {
        mean,
        stderr: (var / count).sqrt(),
        samples,
    })
}
