//! Maximum clique by branch and bound with a greedy colouring bound.
//!
//! The search is split by lowest vertex: branch `v` looks for cliques whose
//! smallest member is `v`. Branches run through [`exec`] and share the best
//! size seen so far; a branch is only cut when its bound is strictly below
//! that size, so the clique returned (largest, then lowest first vertex, then
//! first in depth-first order) does not depend on scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::exec;

/// Undirected graph on `0..n` stored as adjacency bitsets.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph {
            n,
            words,
            adj: vec![0; n * words],
        }
    }

    /// Graph with an edge between `i < j` whenever `edge(i, j)`.
    pub fn from_fn(n: usize, edge: impl Fn(usize, usize) -> bool) -> Self {
        let mut g = Graph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if edge(i, j) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        self.adj[i * self.words + j / 64] |= 1 << (j % 64);
        self.adj[j * self.words + i / 64] |= 1 << (i % 64);
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.adj[i * self.words..(i + 1) * self.words]
    }
}

fn first(set: &[u64]) -> Option<usize> {
    set.iter()
        .position(|&w| w != 0)
        .map(|w| w * 64 + set[w].trailing_zeros() as usize)
}

fn count(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

/// Number of colours used by greedy sequential colouring of `set`.
fn colour_bound(g: &Graph, set: &[u64]) -> usize {
    let mut left = set.to_vec();
    let mut colours = 0;
    while left.iter().any(|&w| w != 0) {
        colours += 1;
        let mut avail = left.clone();
        while let Some(v) = first(&avail) {
            left[v / 64] &= !(1 << (v % 64));
            avail[v / 64] &= !(1 << (v % 64));
            for (a, r) in avail.iter_mut().zip(g.row(v)) {
                *a &= !r;
            }
        }
    }
    colours
}

struct Search<'a> {
    g: &'a Graph,
    global: &'a AtomicUsize,
}

impl Search<'_> {
    fn expand(&self, current: &mut Vec<usize>, cand: &[u64], best: &mut Vec<usize>) {
        if count(cand) == 0 {
            if current.len() > best.len() {
                *best = current.clone();
                self.global.fetch_max(best.len(), Ordering::Relaxed);
            }
            return;
        }
        let floor = self.global.load(Ordering::Relaxed).max(best.len() + 1);
        if current.len() + colour_bound(self.g, cand) < floor {
            return;
        }
        let mut rest = cand.to_vec();
        while let Some(v) = first(&rest) {
            rest[v / 64] &= !(1 << (v % 64));
            let next: Vec<u64> = rest.iter().zip(self.g.row(v)).map(|(a, b)| a & b).collect();
            current.push(v);
            self.expand(current, &next, best);
            current.pop();
            let floor = self.global.load(Ordering::Relaxed).max(best.len() + 1);
            if current.len() + 1 + count(&rest) < floor {
                return;
            }
        }
        if current.len() > best.len() {
            *best = current.clone();
            self.global.fetch_max(best.len(), Ordering::Relaxed);
        }
    }
}

/// A maximum clique, as sorted vertex indices.
pub fn max_clique(g: &Graph) -> Vec<usize> {
    if g.is_empty() {
        return Vec::new();
    }
    let global = AtomicUsize::new(1);
    let search = Search { g, global: &global };
    let per_root = exec::map_range(g.n, |v| {
        let mut later = vec![0u64; g.words];
        for u in v + 1..g.n {
            later[u / 64] |= 1 << (u % 64);
        }
        let cand: Vec<u64> = later.iter().zip(g.row(v)).map(|(a, b)| a & b).collect();
        if 1 + count(&cand) < global.load(Ordering::Relaxed) {
            return Vec::new();
        }
        let mut best = Vec::new();
        search.expand(&mut vec![v], &cand, &mut best);
        best
    });
    let mut out = per_root.into_iter().fold(Vec::new(), |acc, c| if c.len() > acc.len() { c } else { acc });
    out.sort_unstable();
    out
}

/// Clique found by first-fit in index order.
pub fn greedy_clique(g: &Graph) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for v in 0..g.n {
        if out.iter().all(|&u| g.has_edge(u, v)) {
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn is_clique(g: &Graph, c: &[usize]) -> bool {
        c.iter().enumerate().all(|(k, &a)| c[k + 1..].iter().all(|&b| g.has_edge(a, b)))
    }

    fn brute(g: &Graph) -> usize {
        (0u64..1 << g.len())
            .filter(|m| {
                let c: Vec<usize> = (0..g.len()).filter(|i| m >> i & 1 == 1).collect();
                is_clique(g, &c)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn small_graphs() {
        let g = Graph::from_fn(5, |i, j| (i + j) % 2 == 1 || j - i == 2);
        assert_eq!(max_clique(&g).len(), brute(&g));
        assert_eq!(max_clique(&Graph::new(3)), vec![0]);
        assert!(max_clique(&Graph::new(0)).is_empty());
        let k = Graph::from_fn(70, |_, _| true);
        assert_eq!(max_clique(&k).len(), 70);
    }

    proptest! {
        #[test]
        fn matches_brute_force(n in 1usize..12, seed in any::<u64>()) {
            let g = Graph::from_fn(n, |i, j| (seed.wrapping_mul(0x9E3779B97F4A7C15) >> ((i * 13 + j * 7) % 61)) & 1 == 1);
            let c = max_clique(&g);
            prop_assert!(is_clique(&g, &c));
            prop_assert_eq!(c.len(), brute(&g));
            let seq = exec::sequential(|| max_clique(&g));
            prop_assert_eq!(seq, c);
            prop_assert!(greedy_clique(&g).len() <= brute(&g));
        }
    }
}
