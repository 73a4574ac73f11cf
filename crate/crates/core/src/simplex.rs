//! Dense two-phase simplex with Bland's rule, for the small linear programs
//! of the sections module.

use crate::error::{Error, Result};

pub const TOLERANCE: f64 = 1e-9;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    /// Columns allowed to enter the basis.
    allowed: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.obj.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && row[c] != 0.0 {
                let f = row[c];
                row.iter_mut().zip(&pivot_row).for_each(|(a, b)| *a -= f * b);
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            self.obj.iter_mut().zip(&pivot_row).for_each(|(a, b)| *a -= f * b);
        }
        self.basis[r] = c;
    }

    /// Runs to optimality; `false` if unbounded.
    fn optimize(&mut self) -> Result<bool> {
        let rhs = self.rhs();
        for _ in 0..MAX_PIVOTS {
            let Some(c) = (0..self.allowed).find(|&j| self.obj[j] < -TOLERANCE) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c] > TOLERANCE {
                    let ratio = row[rhs] / row[c];
                    let better = match leave {
                        None => true,
                        Some((l, best)) => {
                            ratio < best - TOLERANCE || (ratio <= best + TOLERANCE && self.basis[i] < self.basis[l])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, c),
            }
        }
        Err(Error::NumericFailure("simplex pivot limit reached".into()))
    }
}

/// Maximizes `c·x` subject to `A x = b`, `x >= 0`.
pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpOutcome> {
    let n = c.len();
    let m = a.len();
    if b.len() != m || a.iter().any(|r| r.len() != n) {
        return Err(Error::invalid("constraint matrix shape does not match"));
    }
    let width = n + m + 1;
    let mut rows = Vec::with_capacity(m);
    for (i, (ai, &bi)) in a.iter().zip(b).enumerate() {
        let sign = if bi < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; width];
        for (j, v) in ai.iter().enumerate() {
            row[j] = sign * v;
        }
        row[n + i] = 1.0;
        row[width - 1] = sign * bi;
        rows.push(row);
    }
    let mut obj = vec![0.0; width];
    for row in &rows {
        for j in 0..n {
            obj[j] -= row[j];
        }
        obj[width - 1] -= row[width - 1];
    }
    let mut t = Tableau {
        rows,
        obj,
        basis: (n..n + m).collect(),
        allowed: n + m,
    };
    t.optimize()?;
    let scale = 1.0 + b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if t.obj[width - 1] < -TOLERANCE * scale {
        return Ok(LpOutcome::Infeasible);
    }
    // drive zero-level artificials out; rows with no original entry are redundant
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| t.rows[i][j].abs() > TOLERANCE) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    t.allowed = n;
    let mut obj = vec![0.0; width];
    for j in 0..n {
        obj[j] = -c[j];
    }
    for (row, &bi) in t.rows.iter().zip(&t.basis) {
        let cb = c[bi];
        if cb != 0.0 {
            obj.iter_mut().zip(row).for_each(|(o, r)| *o += cb * r);
        }
    }
    t.obj = obj;
    if !t.optimize()? {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![0.0; n];
    for (row, &bi) in t.rows.iter().zip(&t.basis) {
        x[bi] = row[width - 1].max(0.0);
    }
    let value = c.iter().zip(&x).map(|(a, b)| a * b).sum();
    Ok(LpOutcome::Optimal { x, value })
}
