//! Integer cells, octants, coordinate convex hulls and cell content.
//!
//! An integer cell on a coordinate set `σ` is `a + [0,1]^σ` with `a ∈ Z^σ`.
//! The cell sits in `cconv(P_σ A)` exactly when `P_σ A` meets each of the
//! `2^|σ|` octants the cell generates. A point can meet at most one of
//! those octants (on every coordinate it is either `<= a_i`, `>= a_i + 1`,
//! or strictly in between), so containment reduces to "the points of `A`
//! realize every sign pattern on `σ`". All searches here exploit that.

use serde::{Deserialize, Serialize};

use crate::class::FunctionClass;
use crate::combin::{combinations, floor_log2};
use crate::error::{Error, Result};
use crate::exec;

/// Default cap on `n` for the exhaustive `2^n` projection loop.
pub const DEFAULT_MAX_N: usize = 16;

/// Sorted set of distinct coordinate indices (0-based). May be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoordinateSubset(Vec<usize>);

impl CoordinateSubset {
    pub fn new(mut coords: Vec<usize>, n: usize) -> Result<Self> {
        coords.sort_unstable();
        if coords.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("coordinate subset has repeated indices"));
        }
        if let Some(&c) = coords.last() {
            if c >= n {
                return Err(Error::invalid(format!("coordinate {c} out of range for n = {n}")));
            }
        }
        Ok(CoordinateSubset(coords))
    }

    pub fn empty() -> Self {
        CoordinateSubset(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        CoordinateSubset((0..n).collect())
    }

    pub fn from_mask(mask: u64) -> Self {
        CoordinateSubset((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Projects a point of `R^n` onto `R^σ`.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        self.0.iter().map(|&i| x[i]).collect()
    }
}

/// `anchor + [0,1]^σ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntegerCell {
    pub sigma: CoordinateSubset,
    pub anchor: Vec<i64>,
}

impl IntegerCell {
    pub fn new(sigma: CoordinateSubset, anchor: Vec<i64>) -> Result<Self> {
        if sigma.len() != anchor.len() {
            return Err(Error::invalid("anchor length differs from |sigma|"));
        }
        Ok(IntegerCell { sigma, anchor })
    }

    /// The 0-dimensional cell of the empty projection.
    pub fn empty() -> Self {
        IntegerCell {
            sigma: CoordinateSubset::empty(),
            anchor: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// Vertex selected by the bits of `pattern` (bit `j` set means the upper
    /// end on the `j`-th coordinate of `σ`), in `σ`-local coordinates.
    pub fn vertex(&self, pattern: u64) -> Vec<f64> {
        self.anchor
            .iter()
            .enumerate()
            .map(|(j, &a)| (a + (pattern >> j & 1) as i64) as f64)
            .collect()
    }

    /// Whether a `σ`-local point lies in the closed cell.
    pub fn contains_local(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(&self.anchor)
            .all(|(&v, &a)| v >= a as f64 && v <= (a + 1) as f64)
    }
}

/// Closed octant `{x : (x_i - z_i) θ_i >= 0 for i ∈ σ}`; the vertex and signs
/// are indexed like `σ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Octant {
    pub sigma: CoordinateSubset,
    pub vertex: Vec<f64>,
    pub signs: Vec<i8>,
}

impl Octant {
    /// Membership of a `σ`-local point.
    pub fn contains_local(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(&self.vertex)
            .zip(&self.signs)
            .all(|((&v, &z), &s)| (v - z) * s as f64 >= 0.0)
    }

    /// Membership of a point of the ambient `R^n`.
    pub fn contains(&self, x: &[f64]) -> bool {
        self.sigma
            .coords()
            .iter()
            .zip(&self.vertex)
            .zip(&self.signs)
            .all(|((&i, &z), &s)| (x[i] - z) * s as f64 >= 0.0)
    }
}

/// The `2^|σ|` octants generated by a cell, indexed by sign pattern: bit `j`
/// of the index set means `θ_j = +1` and the vertex coordinate `a_j + 1`.
pub fn octants_of_cell(cell: &IntegerCell) -> Result<Vec<Octant>> {
    if cell.is_empty() {
        return Err(Error::invalid("the empty cell generates no octants"));
    }
    let k = cell.sigma.len();
    if k >= 32 {
        return Err(Error::ResourceLimit {
            what: "octants of a cell",
            limit: 31,
            actual: k as u64,
        });
    }
    Ok((0..1u64 << k)
        .map(|pattern| Octant {
            sigma: cell.sigma.clone(),
            vertex: cell.vertex(pattern),
            signs: (0..k)
                .map(|j| if pattern >> j & 1 == 1 { 1 } else { -1 })
                .collect(),
        })
        .collect())
}

/// Pattern code of `p` against the cell anchored at `anchor` on `coords`, or
/// `None` when `p` is strictly inside the slab on some coordinate.
fn octant_code(p: &[f64], coords: &[usize], anchor: &[i64]) -> Option<u64> {
    let mut code = 0;
    for (j, (&i, &a)) in coords.iter().zip(anchor).enumerate() {
        let v = p[i];
        if v >= (a + 1) as f64 {
            code |= 1 << j;
        } else if v > a as f64 {
            return None;
        }
    }
    Some(code)
}

/// Whether `cell ⊆ cconv(P_σ A)`, i.e. `P_σ A` meets every generated octant.
pub fn cconv_contains_cell(a: &FunctionClass, sigma: &CoordinateSubset, cell: &IntegerCell) -> Result<bool> {
    if &cell.sigma != sigma {
        return Err(Error::invalid("cell is not a cell of the given projection"));
    }
    if let Some(&c) = sigma.coords().last() {
        if c >= a.domain_size() {
            return Err(Error::invalid("sigma out of range"));
        }
    }
    let k = sigma.len();
    if k == 0 {
        return Ok(true);
    }
    if k >= usize::BITS as usize || 1usize << k > a.len() {
        return Ok(false);
    }
    let mut seen = vec![false; 1 << k];
    let mut missing = 1usize << k;
    for p in a.rows() {
        if let Some(code) = octant_code(p, sigma.coords(), &cell.anchor) {
            let slot = &mut seen[code as usize];
            if !*slot {
                *slot = true;
                missing -= 1;
                if missing == 0 {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Brute-force membership `x ∈ cconv(A)`: every one of the `2^n` closed
/// octants with vertex `x` must meet `A`.
pub fn cconv_membership(a: &FunctionClass, x: &[f64]) -> Result<bool> {
    let n = a.domain_size();
    if x.len() != n {
        return Err(Error::invalid("point dimension differs from the set"));
    }
    if n > 24 {
        return Err(Error::ResourceLimit {
            what: "octants enumerated by cconv_membership",
            limit: 24,
            actual: n as u64,
        });
    }
    for theta in 0..1u64 << n {
        let hit = a.rows().any(|p| {
            (0..n).all(|i| {
                let s = if theta >> i & 1 == 1 { 1.0 } else { -1.0 };
                (p[i] - x[i]) * s >= 0.0
            })
        });
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellContentOptions {
    /// Integer box `[lo, hi]` every counted cell must lie in, per coordinate.
    pub bounds: Option<(i64, i64)>,
    pub max_n: usize,
}

impl Default for CellContentOptions {
    fn default() -> Self {
        CellContentOptions {
            bounds: None,
            max_n: DEFAULT_MAX_N,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellContent {
    /// `Σ(A)`, including 1 for the empty projection.
    pub total: u64,
    /// `per_rank[k]`: cells summed over projections of rank `k`.
    pub per_rank: Vec<u64>,
    /// Number of projections (the empty one included) contributing a cell.
    pub sigma_count: u64,
}

/// Depth-first search over anchors of one projection. A prefix of the anchor
/// survives only while the live points realize all prefix sign patterns.
struct AnchorSearch<'a> {
    a: &'a FunctionClass,
    coords: &'a [usize],
    ranges: Vec<(i64, i64)>,
}

impl<'a> AnchorSearch<'a> {
    fn new(a: &'a FunctionClass, coords: &'a [usize], bounds: Option<(i64, i64)>) -> Self {
        let ranges = coords
            .iter()
            .map(|&i| {
                let (lo, hi) = a.column_range(i);
                let (mut first, mut last) = (lo.ceil() as i64, hi.floor() as i64 - 1);
                if let Some((blo, bhi)) = bounds {
                    first = first.max(blo);
                    last = last.min(bhi - 1);
                }
                (first, last)
            })
            .collect();
        AnchorSearch { a, coords, ranges }
    }

    fn feasible(&self) -> bool {
        self.ranges.iter().all(|(f, l)| f <= l) && 1usize.checked_shl(self.coords.len() as u32).is_some_and(|m| m <= self.a.len())
    }

    fn live_all(&self) -> Vec<(u32, u64)> {
        (0..self.a.len() as u32).map(|p| (p, 0)).collect()
    }

    /// Refines `live` by fixing anchor `a` on the `depth`-th coordinate.
    /// Returns `None` when some pattern of length `depth + 1` is unrealized.
    fn refine(&self, live: &[(u32, u64)], depth: usize, anchor: i64) -> Option<Vec<(u32, u64)>> {
        let need = 1usize << (depth + 1);
        if live.len() < need {
            return None;
        }
        let col = self.coords[depth];
        let mut next = Vec::with_capacity(live.len());
        let mut seen = vec![false; need];
        let mut missing = need;
        for &(p, code) in live {
            let v = self.a.value(p as usize, col);
            let code = if v >= (anchor + 1) as f64 {
                code | 1 << depth
            } else if v <= anchor as f64 {
                code
            } else {
                continue;
            };
            next.push((p, code));
            let slot = &mut seen[code as usize];
            if !*slot {
                *slot = true;
                missing -= 1;
            }
        }
        (missing == 0).then_some(next)
    }

    fn count(&self, live: &[(u32, u64)], depth: usize) -> u64 {
        if depth == self.coords.len() {
            return 1;
        }
        let (first, last) = self.ranges[depth];
        (first..=last)
            .filter_map(|a| self.refine(live, depth, a))
            .map(|next| self.count(&next, depth + 1))
            .sum()
    }

    fn find(&self, live: &[(u32, u64)], depth: usize, anchor: &mut Vec<i64>) -> bool {
        if depth == self.coords.len() {
            return true;
        }
        let (first, last) = self.ranges[depth];
        for a in first..=last {
            if let Some(next) = self.refine(live, depth, a) {
                anchor.push(a);
                if self.find(&next, depth + 1, anchor) {
                    return true;
                }
                anchor.pop();
            }
        }
        false
    }
}

fn check_limit(n: usize, max_n: usize) -> Result<()> {
    if n > max_n || n >= 63 {
        return Err(Error::ResourceLimit {
            what: "domain size for exhaustive projection enumeration",
            limit: max_n as u64,
            actual: n as u64,
        });
    }
    Ok(())
}

/// Number of integer cells contained in `cconv(P_σ A)` for one projection.
pub fn cells_in_projection(a: &FunctionClass, sigma: &CoordinateSubset, bounds: Option<(i64, i64)>) -> u64 {
    if sigma.is_empty() {
        return 1;
    }
    let search = AnchorSearch::new(a, sigma.coords(), bounds);
    if !search.feasible() {
        return 0;
    }
    search.count(&search.live_all(), 0)
}

/// Cell content `Σ(A)`: integer cells in `cconv(P A)` summed over all `2^n`
/// coordinate projections, with 1 for the empty projection.
pub fn cell_content(a: &FunctionClass, opts: &CellContentOptions) -> Result<CellContent> {
    let n = a.domain_size();
    check_limit(n, opts.max_n)?;
    let max_rank = floor_log2(a.len()).min(n);
    let counts = exec::map_range(1usize << n, |mask| {
        let rank = mask.count_ones() as usize;
        if rank > max_rank {
            return (rank, 0);
        }
        let sigma = CoordinateSubset::from_mask(mask as u64);
        (rank, cells_in_projection(a, &sigma, opts.bounds))
    });
    let mut per_rank = vec![0u64; n + 1];
    let mut sigma_count = 0;
    for (rank, c) in counts {
        per_rank[rank] += c;
        if c > 0 {
            sigma_count += 1;
        }
    }
    Ok(CellContent {
        total: per_rank.iter().sum(),
        per_rank,
        sigma_count,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometricDimension {
    pub v: usize,
    /// A contained cell of maximal rank; `None` when `v = 0`.
    pub witness: Option<IntegerCell>,
}

/// Largest rank of a coordinate projection whose coordinate convex hull
/// contains an integer cell. The witness is the first cell found scanning
/// projections in lexicographic order and anchors in increasing order.
pub fn comb_dimension_geometric(a: &FunctionClass, max_n: usize) -> Result<GeometricDimension> {
    let n = a.domain_size();
    check_limit(n, max_n)?;
    let eligible: Vec<usize> = (0..n)
        .filter(|&i| {
            let (lo, hi) = a.column_range(i);
            hi.floor() - lo.ceil() >= 1.0
        })
        .collect();
    let top = eligible.len().min(floor_log2(a.distinct_len()));
    for size in (1..=top).rev() {
        let subsets = combinations(&eligible, size);
        let hit = exec::find_first(subsets.len(), |k| {
            let coords = &subsets[k];
            let search = AnchorSearch::new(a, coords, None);
            if !search.feasible() {
                return None;
            }
            let mut anchor = Vec::with_capacity(size);
            search
                .find(&search.live_all(), 0, &mut anchor)
                .then(|| IntegerCell {
                    sigma: CoordinateSubset(coords.clone()),
                    anchor,
                })
        });
        if let Some(cell) = hit {
            return Ok(GeometricDimension { v: size, witness: Some(cell) });
        }
    }
    Ok(GeometricDimension { v: 0, witness: None })
}

/// Integer grid points of the box `[0, a_1] x ... x [0, a_n]`.
pub fn integer_box_grid(sides: &[u32]) -> Result<FunctionClass> {
    box_lattice(sides, 1)
}

/// Half-integer grid of the box `[0, a_1] x ... x [0, a_n]`. Its coordinate
/// convex hull is the whole box, and it is fine enough that covering it by
/// unit cubes needs exactly as many cubes as the solid box does.
pub fn integer_box_sample(sides: &[u32]) -> Result<FunctionClass> {
    box_lattice(sides, 2)
}

fn box_lattice(sides: &[u32], per_unit: u32) -> Result<FunctionClass> {
    if sides.is_empty() {
        return Err(Error::EmptyInput);
    }
    let steps: Vec<u32> = sides.iter().map(|&a| a * per_unit + 1).collect();
    let total: usize = steps.iter().map(|&s| s as usize).product();
    let mut rows = Vec::with_capacity(total);
    for mut k in 0..total {
        let mut row = Vec::with_capacity(sides.len());
        for &s in &steps {
            row.push((k % s as usize) as f64 / per_unit as f64);
            k /= s as usize;
        }
        rows.push(row);
    }
    FunctionClass::new(rows)
}
