//! Separating trees.
//!
//! A split of a node `B` on coordinate `i` at threshold `a` has sons
//! `B_- = {x : x(i) <= a}` and `B_+ = {x : x(i) >= a + gap}`; rows strictly in
//! between belong to neither son.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::class::{FunctionClass, Measure};
use crate::error::{Error, Result};
use crate::exec;
use crate::lattice::{cell_content, CellContentOptions};
use crate::lorentz::tower_norm;

/// Best leaf count per row mask, with the split that attains it.
type Memo = HashMap<u32, (usize, Option<(Split, u32, u32)>)>;

/// Largest class the exhaustive strategy accepts.
pub const EXHAUSTIVE_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Exhaustive,
    Median,
    GreedyPotential,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "median" => Ok(Strategy::Median),
            "greedy-potential" => Ok(Strategy::GreedyPotential),
            _ => Err(Error::invalid(format!("unknown tree strategy '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub coordinate: usize,
    pub threshold: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    /// Row indices of `A`, increasing.
    pub members: Vec<usize>,
    pub split: Option<Split>,
    /// Node ids of `(B_-, B_+)`.
    pub sons: Option<(usize, usize)>,
}

/// Nodes in preorder; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatingTree {
    pub nodes: Vec<TreeNode>,
}

impl SeparatingTree {
    pub fn leaves(&self) -> usize {
        self.nodes.iter().filter(|n| n.sons.is_none()).count()
    }

    pub fn leaf_sets(&self) -> Vec<&[usize]> {
        self.nodes
            .iter()
            .filter(|n| n.sons.is_none())
            .map(|n| n.members.as_slice())
            .collect()
    }

    pub fn depth(&self) -> usize {
        fn go(t: &SeparatingTree, k: usize) -> usize {
            match t.nodes[k].sons {
                None => 0,
                Some((a, b)) => 1 + go(t, a).max(go(t, b)),
            }
        }
        if self.nodes.is_empty() {
            0
        } else {
            go(self, 0)
        }
    }
}

enum Built {
    Leaf(Vec<usize>),
    Node(Vec<usize>, Split, Box<Built>, Box<Built>),
}

impl Built {
    fn flatten(self, out: &mut Vec<TreeNode>) -> usize {
        let id = out.len();
        match self {
            Built::Leaf(members) => out.push(TreeNode {
                members,
                split: None,
                sons: None,
            }),
            Built::Node(members, split, minus, plus) => {
                out.push(TreeNode {
                    members,
                    split: Some(split),
                    sons: None,
                });
                let m = minus.flatten(out);
                let p = plus.flatten(out);
                out[id].sons = Some((m, p));
            }
        }
        id
    }
}

struct Builder<'a> {
    a: &'a FunctionClass,
    gap: f64,
    alpha: f64,
    strategy: Strategy,
}

/// Candidate split with both sons nonempty.
struct Candidate {
    split: Split,
    minus: Vec<usize>,
    plus: Vec<usize>,
}

impl Builder<'_> {
    fn candidates_on(&self, members: &[usize], i: usize) -> Vec<Candidate> {
        let mut levels: Vec<f64> = members.iter().map(|&r| self.a.value(r, i)).collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        levels
            .into_iter()
            .filter_map(|a| {
                let minus: Vec<usize> = members.iter().copied().filter(|&r| self.a.value(r, i) <= a).collect();
                let plus: Vec<usize> = members
                    .iter()
                    .copied()
                    .filter(|&r| self.a.value(r, i) >= a + self.gap)
                    .collect();
                (!minus.is_empty() && !plus.is_empty()).then_some(Candidate {
                    split: Split {
                        coordinate: i,
                        threshold: a,
                        gap: self.gap,
                    },
                    minus,
                    plus,
                })
            })
            .collect()
    }

    fn candidates(&self, members: &[usize]) -> Vec<Candidate> {
        (0..self.a.domain_size())
            .flat_map(|i| self.candidates_on(members, i))
            .collect()
    }

    fn potential(&self, c: &Candidate) -> f64 {
        (c.minus.len() as f64).powf(1.0 / self.alpha) + (c.plus.len() as f64).powf(1.0 / self.alpha)
    }

    fn choose(&self, members: &[usize]) -> Option<Candidate> {
        match self.strategy {
            Strategy::GreedyPotential => self.candidates(members).into_iter().fold(None, |best, c| match best {
                Some(b) if self.potential(&b) >= self.potential(&c) => Some(b),
                _ => Some(c),
            }),
            Strategy::Median => self.choose_median(members),
            Strategy::Exhaustive => unreachable!(),
        }
    }

    /// Coordinates ranked by the empirical mean of `θ_0(2|x(i) - M_i|)`,
    /// `M_i` the (lower) median; on the first coordinate with a valid split,
    /// prefer thresholds with `|A_-|^{1/α} + |A_+|^{1/α} > |A|^{1/α}`, then
    /// the one whose gap midpoint is nearest the median.
    fn choose_median(&self, members: &[usize]) -> Option<Candidate> {
        let n = self.a.domain_size();
        let theta0 = |t: f64| (self.alpha.powf(t) - self.alpha).exp();
        let mut ranked: Vec<(f64, f64, usize)> = (0..n)
            .map(|i| {
                let mut col: Vec<f64> = members.iter().map(|&r| self.a.value(r, i)).collect();
                col.sort_by(f64::total_cmp);
                let median = col[(col.len() - 1) / 2];
                let moment = col.iter().map(|&x| theta0(2.0 * (x - median).abs())).sum::<f64>() / col.len() as f64;
                (moment, median, i)
            })
            .collect();
        ranked.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.2.cmp(&y.2)));
        let whole = (members.len() as f64).powf(1.0 / self.alpha);
        for (_, median, i) in ranked {
            let cands = self.candidates_on(members, i);
            if cands.is_empty() {
                continue;
            }
            let key = |c: &Candidate| {
                (
                    self.potential(c) <= whole,
                    (c.split.threshold + self.gap / 2.0 - median).abs(),
                )
            };
            return cands.into_iter().fold(None, |best: Option<Candidate>, c| match best {
                Some(b) => {
                    let (kb, kc) = (key(&b), key(&c));
                    if (kc.0, kc.1) < (kb.0, kb.1) {
                        Some(c)
                    } else {
                        Some(b)
                    }
                }
                None => Some(c),
            });
        }
        None
    }

    fn build(&self, members: Vec<usize>) -> Built {
        if members.len() <= 1 {
            return Built::Leaf(members);
        }
        match self.choose(&members) {
            None => Built::Leaf(members),
            Some(c) => {
                let (minus, plus) = exec::join(|| self.build(c.minus), || self.build(c.plus));
                Built::Node(members, c.split, Box::new(minus), Box::new(plus))
            }
        }
    }

    /// Maximal leaf count over all trees of `mask`, memoized.
    fn best(&self, mask: u32, memo: &mut Memo) -> usize {
        if mask.count_ones() <= 1 {
            return 1;
        }
        if let Some(&(v, _)) = memo.get(&mask) {
            return v;
        }
        let members: Vec<usize> = (0..32).filter(|&r| mask >> r & 1 == 1).collect();
        let mut top = (1, None);
        for c in self.candidates(&members) {
            let m = c.minus.iter().fold(0u32, |acc, &r| acc | 1 << r);
            let p = c.plus.iter().fold(0u32, |acc, &r| acc | 1 << r);
            let v = self.best(m, memo) + self.best(p, memo);
            if v > top.0 {
                top = (v, Some((c.split, m, p)));
            }
        }
        memo.insert(mask, top);
        top.0
    }

    fn rebuild(&self, mask: u32, memo: &Memo) -> Built {
        let members: Vec<usize> = (0..32).filter(|&r| mask >> r & 1 == 1).collect();
        match memo.get(&mask).and_then(|e| e.1) {
            None => Built::Leaf(members),
            Some((split, m, p)) => Built::Node(
                members,
                split,
                Box::new(self.rebuild(m, memo)),
                Box::new(self.rebuild(p, memo)),
            ),
        }
    }
}

/// Builds a `gap`-separating tree of `A` with the given strategy.
pub fn build_separating_tree(a: &FunctionClass, gap: f64, alpha: f64, strategy: Strategy) -> Result<SeparatingTree> {
    if !(gap > 0.0 && gap.is_finite()) {
        return Err(Error::invalid(format!("gap must be positive, got {gap}")));
    }
    if !(alpha >= 2.0 && alpha.is_finite()) {
        return Err(Error::invalid(format!("alpha must be at least 2, got {alpha}")));
    }
    let b = Builder { a, gap, alpha, strategy };
    let built = if strategy == Strategy::Exhaustive {
        if a.len() > EXHAUSTIVE_CAP {
            return Err(Error::ResourceLimit {
                what: "rows for the exhaustive tree strategy",
                limit: EXHAUSTIVE_CAP as u64,
                actual: a.len() as u64,
            });
        }
        let full = if a.len() == 32 { u32::MAX } else { (1u32 << a.len()) - 1 };
        let mut memo = HashMap::new();
        b.best(full, &mut memo);
        b.rebuild(full, &memo)
    } else {
        b.build((0..a.len()).collect())
    };
    let mut nodes = Vec::new();
    built.flatten(&mut nodes);
    Ok(SeparatingTree { nodes })
}

/// Checks the definition: root is all of `A`, every internal node has two
/// nonempty disjoint sons inside it, and some coordinate separates them by
/// `gap`. Node ids out of range are a structure error.
pub fn verify_separating_tree(t: &SeparatingTree, a: &FunctionClass, gap: f64) -> Result<bool> {
    let count = t.nodes.len();
    for node in &t.nodes {
        if node.members.iter().any(|&r| r >= a.len()) {
            return Err(Error::Structure(format!("tree refers to row outside A (|A| = {})", a.len())));
        }
        if let Some((m, p)) = node.sons {
            if m >= count || p >= count {
                return Err(Error::Structure(format!("tree refers to missing node (|T| = {count})")));
            }
        }
    }
    if count == 0 {
        return Ok(false);
    }
    let mut root: Vec<usize> = t.nodes[0].members.clone();
    root.sort_unstable();
    if root != (0..a.len()).collect::<Vec<_>>() {
        return Ok(false);
    }
    let mut visited = vec![false; count];
    let mut stack = vec![0];
    while let Some(k) = stack.pop() {
        if std::mem::replace(&mut visited[k], true) {
            return Ok(false);
        }
        let node = &t.nodes[k];
        let Some((m, p)) = node.sons else { continue };
        let (minus, plus) = (&t.nodes[m].members, &t.nodes[p].members);
        if minus.is_empty() || plus.is_empty() {
            return Ok(false);
        }
        let inside = |s: &[usize]| s.iter().all(|r| node.members.contains(r));
        if !inside(minus) || !inside(plus) || minus.iter().any(|r| plus.contains(r)) {
            return Ok(false);
        }
        let separated = (0..a.domain_size()).any(|i| {
            plus.iter()
                .all(|&f| minus.iter().all(|&g| a.value(f, i) >= a.value(g, i) + gap))
        });
        if !separated {
            return Ok(false);
        }
        stack.push(m);
        stack.push(p);
    }
    Ok(visited.iter().all(|&v| v))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeavesReport {
    pub leaves: usize,
    pub sigma: u64,
    pub holds: bool,
}

/// Builds a 2-separating tree and compares its leaf count with `Σ(A)`.
pub fn leaves_vs_cell_content(a: &FunctionClass, strategy: Strategy) -> Result<LeavesReport> {
    let tree = build_separating_tree(a, 2.0, 2.0, strategy)?;
    let sigma = cell_content(a, &CellContentOptions::default())?.total;
    let leaves = tree.leaves();
    Ok(LeavesReport {
        leaves,
        sigma,
        holds: leaves as u64 <= sigma,
    })
}

/// Whether all pairs of rows are at least 1 apart in the tower norm on the
/// uniform measure.
pub fn tower_separated(a: &FunctionClass, alpha: f64) -> Result<bool> {
    let mu = Measure::uniform(a.domain_size());
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let d: Vec<f64> = a.row(i).iter().zip(a.row(j)).map(|(x, y)| x - y).collect();
            if tower_norm(&d, &mu, alpha)? < 1.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(rows: &[&[f64]]) -> FunctionClass {
        FunctionClass::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    const ALL: [Strategy; 3] = [Strategy::Exhaustive, Strategy::Median, Strategy::GreedyPotential];

    #[test]
    fn even_grid_has_four_leaves() {
        let a = class(&[&[0.0, 0.0], &[0.0, 2.0], &[2.0, 0.0], &[2.0, 2.0]]);
        for s in ALL {
            let t = build_separating_tree(&a, 2.0, 2.0, s).unwrap();
            assert_eq!(t.leaves(), 4, "{s:?}");
            assert!(verify_separating_tree(&t, &a, 2.0).unwrap());
            let root = t.nodes[0].split.unwrap();
            assert_eq!((root.coordinate, root.threshold), (0, 0.0));
        }
    }

    #[test]
    fn trivial_trees() {
        let one = class(&[&[1.0, 2.0]]);
        let close = class(&[&[0.0], &[0.3]]);
        for s in ALL {
            let t = build_separating_tree(&one, 2.0, 2.0, s).unwrap();
            assert_eq!(t.leaves(), 1);
            assert!(verify_separating_tree(&t, &one, 2.0).unwrap());
            assert_eq!(build_separating_tree(&close, 1.0, 2.0, s).unwrap().leaves(), 1);
        }
    }

    #[test]
    fn swapped_sons_fail() {
        let a = class(&[&[0.0], &[3.0]]);
        let mut t = build_separating_tree(&a, 2.0, 2.0, Strategy::GreedyPotential).unwrap();
        let (m, p) = t.nodes[0].sons.unwrap();
        t.nodes[0].sons = Some((p, m));
        assert!(!verify_separating_tree(&t, &a, 2.0).unwrap());
        t.nodes[0].sons = Some((m, 7));
        assert!(matches!(verify_separating_tree(&t, &a, 2.0), Err(Error::Structure(_))));
    }

    #[test]
    fn exhaustive_cap() {
        let a = FunctionClass::new((0..21).map(|i| vec![i as f64]).collect()).unwrap();
        assert!(build_separating_tree(&a, 1.0, 2.0, Strategy::Exhaustive).is_err());
        assert_eq!(build_separating_tree(&a, 1.0, 2.0, Strategy::GreedyPotential).unwrap().leaves(), 21);
    }

    #[test]
    fn leaves_against_cells() {
        let grid = class(&[&[0.0, 0.0], &[0.0, 2.0], &[2.0, 0.0], &[2.0, 2.0]]);
        let r = leaves_vs_cell_content(&grid, Strategy::Exhaustive).unwrap();
        assert_eq!((r.leaves, r.sigma, r.holds), (4, 9, true));
        let open = class(&[&[-0.9, -0.9], &[0.9, -0.9], &[-0.9, 0.9], &[0.9, 0.9]]);
        let r = leaves_vs_cell_content(&open, Strategy::GreedyPotential).unwrap();
        assert_eq!((r.leaves, r.sigma, r.holds), (1, 1, true));
        let r = leaves_vs_cell_content(&class(&[&[5.0]]), Strategy::Median).unwrap();
        assert_eq!((r.leaves, r.sigma), (1, 1));
    }

    #[test]
    fn exhaustive_beats_greedy_on_line() {
        let a = FunctionClass::new((0..9).map(|i| vec![i as f64]).collect()).unwrap();
        let ex = build_separating_tree(&a, 2.0, 2.0, Strategy::Exhaustive).unwrap();
        assert_eq!(ex.leaves(), 5);
        for s in ALL {
            let t = build_separating_tree(&a, 2.0, 2.0, s).unwrap();
            assert!(t.leaves() <= ex.leaves());
            assert!(verify_separating_tree(&t, &a, 2.0).unwrap());
        }
    }

    #[test]
    fn tower_separation() {
        assert!(tower_separated(&class(&[&[0.0, 0.0], &[1.0, 1.0]]), 2.0).unwrap());
        assert!(!tower_separated(&class(&[&[0.0, 0.0], &[0.5, 0.5]]), 2.0).unwrap());
    }
}
