//! Non-contact trapezoid selection.
//!
//! Trapezoids live between the two vertex rows; a feasible selection is a
//! set of trapezoids that are pairwise strictly separated on both rows,
//! i.e. a chain of the strict partial order [`precedes`]. The sweep
//! solver processes upper-row positions left to right and keeps, per
//! lower-row position, the best weight of a selection ending there; a
//! prefix-maximum index makes each lookup logarithmic. A quadratic
//! longest-path solver over the explicit precedence DAG serves as the
//! independent reference.

use std::cmp::max;

use thiserror::Error;

use crate::model::{Matching, Weight};

/// A weighted trapezoid with corners on the two vertex rows and the
/// matching it stands for. Degenerate shapes (triangles, segments) are
/// allowed: `lam_a <= gam_a` and `lam_b <= gam_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trapezoid {
    pub lam_a: usize,
    pub gam_a: usize,
    pub lam_b: usize,
    pub gam_b: usize,
    pub weight: Weight,
    pub payload: Matching,
}

impl Trapezoid {
    pub fn new(
        lam_a: usize,
        gam_a: usize,
        lam_b: usize,
        gam_b: usize,
        weight: Weight,
        payload: Matching,
    ) -> Self {
        Trapezoid {
            lam_a,
            gam_a,
            lam_b,
            gam_b,
            weight,
            payload,
        }
    }

    /// A segment trapezoid over a single cell.
    pub fn segment(a: usize, b: usize, weight: Weight, payload: Matching) -> Self {
        Trapezoid::new(a, a, b, b, weight, payload)
    }
}

/// The strict precedence: `t` ends strictly left of where `u` begins on
/// both rows. Exactly the pairs that may appear together in a selection.
pub fn precedes(t: &Trapezoid, u: &Trapezoid) -> bool {
    t.gam_a < u.lam_a && t.gam_b < u.lam_b
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrapError {
    #[error("trapezoid {index}: corners out of range or inverted")]
    BadCorners { index: usize },
    #[error("trapezoid {index}: weight must be strictly positive")]
    NonPositiveWeight { index: usize },
}

/// An NTSP instance: two row sizes and the trapezoid list.
#[derive(Debug, Clone)]
pub struct TrapCollection {
    n_a: usize,
    n_b: usize,
    traps: Vec<Trapezoid>,
}

impl TrapCollection {
    pub fn new(n_a: usize, n_b: usize, traps: Vec<Trapezoid>) -> Result<Self, TrapError> {
        for (index, t) in traps.iter().enumerate() {
            let ok = 1 <= t.lam_a
                && t.lam_a <= t.gam_a
                && t.gam_a <= n_a
                && 1 <= t.lam_b
                && t.lam_b <= t.gam_b
                && t.gam_b <= n_b;
            if !ok {
                return Err(TrapError::BadCorners { index });
            }
            if !t.weight.is_positive() {
                return Err(TrapError::NonPositiveWeight { index });
            }
        }
        Ok(TrapCollection { n_a, n_b, traps })
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn traps(&self) -> &[Trapezoid] {
        &self.traps
    }

    pub fn len(&self) -> usize {
        self.traps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traps.is_empty()
    }

    fn buckets_by<F: Fn(&Trapezoid) -> usize>(&self, key: F, n: usize) -> Vec<Vec<usize>> {
        let mut buckets = vec![Vec::new(); n + 1];
        for (idx, t) in self.traps.iter().enumerate() {
            buckets[key(t)].push(idx);
        }
        buckets
    }
}

/// Fenwick-style prefix-maximum index over positions `1..=len`.
///
/// Stored values only ever increase, which is exactly what the sweep
/// needs and what keeps prefix queries correct.
#[derive(Debug, Clone)]
pub struct PrefixMaxIndex {
    tree: Vec<Weight>,
}

impl PrefixMaxIndex {
    pub fn new(len: usize) -> Self {
        PrefixMaxIndex {
            tree: vec![Weight::ZERO; len + 1],
        }
    }

    /// Raises the value at `pos` to at least `value`. O(log len).
    pub fn raise(&mut self, mut pos: usize, value: Weight) {
        debug_assert!(pos >= 1 && pos < self.tree.len());
        while pos < self.tree.len() {
            self.tree[pos] = max(self.tree[pos], value);
            pos += pos & pos.wrapping_neg();
        }
    }

    /// Maximum over positions `1..=upto`; zero for `upto == 0`. O(log len).
    pub fn prefix_max(&self, mut upto: usize) -> Weight {
        debug_assert!(upto < self.tree.len());
        let mut best = Weight::ZERO;
        while upto > 0 {
            best = max(best, self.tree[upto]);
            upto -= upto & upto.wrapping_neg();
        }
        best
    }
}

/// Sweep results: per-trapezoid best chain weights ending at that
/// trapezoid, and the overall optimum.
#[derive(Debug, Clone)]
pub struct SweepTables {
    mu: Vec<Weight>,
    omega_star: Weight,
}

impl SweepTables {
    /// Best weight of a chain whose rightmost trapezoid is `idx`.
    pub fn mu(&self, idx: usize) -> Weight {
        self.mu[idx]
    }

    /// Optimal selection weight; zero for an empty collection (the empty
    /// chain).
    pub fn omega_star(&self) -> Weight {
        self.omega_star
    }
}

/// Left-to-right sweep over upper-row positions. O(z log n + n).
///
/// Within a position the loop over trapezoids starting there runs fully
/// before the loop over trapezoids ending there, so a trapezoid confined
/// to a single column is scored before it becomes visible to others.
pub fn select_trape(coll: &TrapCollection) -> SweepTables {
    let by_lam = coll.buckets_by(|t| t.lam_a, coll.n_a);
    let by_gam = coll.buckets_by(|t| t.gam_a, coll.n_a);
    let mut ending_best = PrefixMaxIndex::new(coll.n_b);
    let mut mu = vec![Weight::ZERO; coll.len()];
    let mut omega_star = Weight::ZERO;
    for i in 1..=coll.n_a {
        for &s in &by_lam[i] {
            let p = coll.traps[s].lam_b;
            mu[s] = coll.traps[s].weight + ending_best.prefix_max(p - 1);
        }
        for &t in &by_gam[i] {
            let q = coll.traps[t].gam_b;
            ending_best.raise(q, mu[t]);
            if mu[t] > omega_star {
                omega_star = mu[t];
            }
        }
    }
    SweepTables { mu, omega_star }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("sweep tables inconsistent: no trapezoid accounts for remaining weight {remaining}")]
    InconsistentTables { remaining: i64 },
}

/// Rebuilds an optimal chain from the sweep tables by scanning upper-row
/// positions right to left and matching exact residual weights. Ties go
/// to the lowest trapezoid index. Returns indices in left-to-right order.
pub fn reconstruct(
    coll: &TrapCollection,
    tables: &SweepTables,
) -> Result<Vec<usize>, ReconstructError> {
    let by_gam = coll.buckets_by(|t| t.gam_a, coll.n_a);
    let mut picked = Vec::new();
    let mut remaining = tables.omega_star();
    let mut i = coll.n_a;
    let mut q = coll.n_b;
    while remaining > Weight::ZERO {
        if i == 0 {
            return Err(ReconstructError::InconsistentTables {
                remaining: remaining.scaled(),
            });
        }
        for &t in &by_gam[i] {
            let trap = &coll.traps[t];
            if trap.gam_b <= q && tables.mu(t) == remaining {
                picked.push(t);
                remaining -= trap.weight;
                i = trap.lam_a;
                q = trap.lam_b - 1;
                break;
            }
        }
        i -= 1;
    }
    picked.reverse();
    Ok(picked)
}

/// Reference solver: longest path from the dummy source in the explicit
/// precedence DAG, where entering a trapezoid costs its weight. O(z^2).
pub fn dag_longest_path(coll: &TrapCollection) -> (Weight, Vec<usize>) {
    let z = coll.len();
    let mut order: Vec<usize> = (0..z).collect();
    order.sort_by_key(|&s| coll.traps[s].lam_a);
    let mut dist = vec![Weight::ZERO; z];
    let mut pred: Vec<Option<usize>> = vec![None; z];
    for pos in 0..z {
        let s = order[pos];
        let mut best: Option<usize> = None;
        for &r in &order[..pos] {
            if precedes(&coll.traps[r], &coll.traps[s]) && best.map_or(true, |b| dist[r] > dist[b])
            {
                best = Some(r);
            }
        }
        dist[s] = coll.traps[s].weight + best.map_or(Weight::ZERO, |b| dist[b]);
        pred[s] = best;
    }
    let mut end: Option<usize> = None;
    for s in 0..z {
        if end.map_or(true, |e| dist[s] > dist[e]) {
            end = Some(s);
        }
    }
    match end {
        None => (Weight::ZERO, Vec::new()),
        Some(mut s) => {
            let total = dist[s];
            let mut path = vec![s];
            while let Some(r) = pred[s] {
                path.push(r);
                s = r;
            }
            path.reverse();
            (total, path)
        }
    }
}
