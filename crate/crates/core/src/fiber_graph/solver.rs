use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::{FiberConfig, QDivisor};
use crate::error::{Error, Result};
use crate::rational::Rational;

struct Step {
    node: usize,
    pivot: Rational,
    below: Vec<(usize, Rational)>,
}

/// Sparse `L D L^T` factorization of the intersection matrix with the gauge
/// row and column removed, ordered by minimum degree.
///
/// On a connected fiber the remaining principal minor is negative definite,
/// so every pivot is nonzero and no fill-in occurs on tree-shaped graphs.
pub struct GaugeSolver<'a, L> {
    config: &'a FiberConfig<L>,
    gauge: usize,
    steps: Vec<Step>,
}

impl<'a, L> GaugeSolver<'a, L> {
    pub fn new(config: &'a FiberConfig<L>, gauge: usize) -> Result<Self> {
        let n = config.len();
        if gauge >= n {
            return Err(Error::UnknownComponent(gauge));
        }
        let mut diag: Vec<Rational> = config
            .components()
            .iter()
            .map(|c| Rational::from_integer(c.self_intersection.into()))
            .collect();
        let mut off: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); n];
        for (a, row) in off.iter_mut().enumerate() {
            if a == gauge {
                continue;
            }
            for &(b, count) in config.neighbors(a) {
                if b != gauge && b != a {
                    *row.entry(b).or_insert_with(Rational::zero) +=
                        Rational::from_integer(count.into());
                }
            }
        }

        let mut queue: BTreeSet<(usize, usize)> = (0..n)
            .filter(|&v| v != gauge)
            .map(|v| (off[v].len(), v))
            .collect();
        let mut steps = Vec::with_capacity(n.saturating_sub(1));
        while let Some((_, v)) = queue.pop_first() {
            let pivot = std::mem::take(&mut diag[v]);
            if pivot.is_zero() {
                return Err(Error::Internal(format!(
                    "zero pivot at component {v}: intersection matrix has corank > 1"
                )));
            }
            let row = std::mem::take(&mut off[v]);
            let nbrs: Vec<(usize, Rational)> = row.into_iter().collect();
            for (u, _) in &nbrs {
                queue.remove(&(off[*u].len(), *u));
                off[*u].remove(&v);
            }
            for (x, (u, a_uv)) in nbrs.iter().enumerate() {
                diag[*u] -= a_uv * a_uv / &pivot;
                for (w, a_wv) in &nbrs[x + 1..] {
                    let delta = a_uv * a_wv / &pivot;
                    for (p, q) in [(*u, *w), (*w, *u)] {
                        let e = off[p].entry(q).or_insert_with(Rational::zero);
                        *e -= &delta;
                        if e.is_zero() {
                            off[p].remove(&q);
                        }
                    }
                }
            }
            for (u, _) in &nbrs {
                queue.insert((off[*u].len(), *u));
            }
            let below = nbrs.into_iter().map(|(u, a)| (u, a / &pivot)).collect();
            steps.push(Step { node: v, pivot, below });
        }
        Ok(Self { config, gauge, steps })
    }

    pub fn gauge(&self) -> usize {
        self.gauge
    }

    /// Solves `(V . C) = targets[C]` for all `C` with `V[gauge] = gauge_value`.
    pub fn solve(&self, targets: &[Rational], gauge_value: &Rational) -> Result<QDivisor> {
        let config = self.config;
        let n = config.len();
        if targets.len() != n {
            return Err(Error::param(format!(
                "{} targets supplied for {n} components",
                targets.len()
            )));
        }
        let compat: Rational = config
            .components()
            .iter()
            .zip(targets)
            .map(|(c, t)| t * Rational::from_integer(c.multiplicity.into()))
            .sum();
        if !compat.is_zero() {
            return Err(Error::NoSolution(format!(
                "targets are not orthogonal to the fiber: sum d_C t_C = {compat}"
            )));
        }

        let mut b: Vec<Rational> = targets.to_vec();
        if !gauge_value.is_zero() {
            b[self.gauge] -= gauge_value * Rational::from_integer(config.self_intersection(self.gauge).into());
            for &(u, count) in config.neighbors(self.gauge) {
                b[u] -= gauge_value * Rational::from_integer(count.into());
            }
        }
        for step in &self.steps {
            let y = b[step.node].clone();
            if y.is_zero() {
                continue;
            }
            for (u, l) in &step.below {
                b[*u] -= l * &y;
            }
        }
        let mut x: Vec<Rational> = vec![Rational::zero(); n];
        for step in self.steps.iter().rev() {
            let mut v = &b[step.node] / &step.pivot;
            for (u, l) in &step.below {
                v -= l * &x[*u];
            }
            x[step.node] = v;
        }
        x[self.gauge] = gauge_value.clone();
        let solution = QDivisor::from_pairs(x.into_iter().enumerate());

        let residual = config.pair_with_component(&solution, self.gauge)?;
        if residual != targets[self.gauge] {
            return Err(Error::Internal(format!(
                "gauge row residual {residual} != {}",
                targets[self.gauge]
            )));
        }
        Ok(solution)
    }
}

/// Convenience wrapper: factor and solve once. Absent targets are zero.
pub fn solve_gauge<L>(
    config: &FiberConfig<L>,
    targets: &BTreeMap<usize, Rational>,
    gauge: (usize, Rational),
) -> Result<QDivisor> {
    let n = config.len();
    let mut t = vec![Rational::zero(); n];
    for (&id, v) in targets {
        if id >= n {
            return Err(Error::UnknownComponent(id));
        }
        t[id] = v.clone();
    }
    GaugeSolver::new(config, gauge.0)?.solve(&t, &gauge.1)
}

/// Exact rank of a sparse rational matrix given by rows (column -> value),
/// by Gaussian elimination with a Markowitz-style pivot choice.
pub fn sparse_rank(rows: Vec<BTreeMap<usize, Rational>>) -> usize {
    let mut rows: Vec<BTreeMap<usize, Rational>> = rows
        .into_iter()
        .map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect())
        .collect();
    let mut col_rows: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (i, r) in rows.iter().enumerate() {
        for &c in r.keys() {
            col_rows.entry(c).or_default().insert(i);
        }
    }
    let mut active: BTreeSet<(usize, usize)> = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.is_empty())
        .map(|(i, r)| (r.len(), i))
        .collect();
    let mut rank = 0;
    while let Some((_, r)) = active.pop_first() {
        let pivot_row = std::mem::take(&mut rows[r]);
        if pivot_row.is_empty() {
            continue;
        }
        let c = *pivot_row
            .keys()
            .min_by_key(|c| col_rows.get(c).map_or(0, BTreeSet::len))
            .expect("nonempty row");
        let pivot = pivot_row[&c].clone();
        for col in pivot_row.keys() {
            if let Some(set) = col_rows.get_mut(col) {
                set.remove(&r);
            }
        }
        rank += 1;
        let others: Vec<usize> = col_rows.get(&c).map(|s| s.iter().copied().collect()).unwrap_or_default();
        for x in others {
            active.remove(&(rows[x].len(), x));
            let factor = &rows[x][&c] / &pivot;
            for (col, v) in &pivot_row {
                let e = rows[x].entry(*col).or_insert_with(Rational::zero);
                *e -= &factor * v;
                if e.is_zero() {
                    rows[x].remove(col);
                    if let Some(set) = col_rows.get_mut(col) {
                        set.remove(&x);
                    }
                } else {
                    col_rows.entry(*col).or_default().insert(x);
                }
            }
            if !rows[x].is_empty() {
                active.insert((rows[x].len(), x));
            }
        }
    }
    rank
}
