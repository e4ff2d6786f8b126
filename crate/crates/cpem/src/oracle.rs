//! Reference solvers used for verification: exhaustive subset
//! enumeration over edges, and subset enumeration over the admissible
//! set with a non-crossing completion. Both are exponential and capped;
//! they exist to check the real solver, not to be fast.

use thiserror::Error;

use crate::model::{crosses, Instance, Matching, Solution, SolutionError, Weight};
use crate::reduce::{self, SolveError};

/// Default enumeration cap for both oracles.
pub const DEFAULT_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {m} edges, above the enumeration cap {cap}")]
    EdgeCapExceeded { m: usize, cap: usize },
    #[error("instance has {k} admissible pairs, above the enumeration cap {cap}")]
    PairCapExceeded { k: usize, cap: usize },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Solution(#[from] SolutionError),
}

/// Enumerates all edge subsets and keeps the best feasible matching.
/// Weight ties go to the lexicographically smallest edge-index set.
pub fn brute_force(inst: &Instance) -> Result<Solution, OracleError> {
    brute_force_capped(inst, DEFAULT_CAP)
}

pub fn brute_force_capped(inst: &Instance, cap: usize) -> Result<Solution, OracleError> {
    let m = inst.edge_count();
    if m > cap {
        return Err(OracleError::EdgeCapExceeded { m, cap });
    }
    // per-edge masks: endpoint conflicts, crossings, admissible crossings
    let mut conflict = vec![0u64; m];
    let mut crossing = vec![0u64; m];
    let mut admissible = vec![0u64; m];
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let (e, f) = (inst.edge(i), inst.edge(j));
            if e.a == f.a || e.b == f.b {
                conflict[i] |= 1 << j;
            }
            if crosses(e, f) {
                crossing[i] |= 1 << j;
                if inst.is_admissible(i, j) {
                    admissible[i] |= 1 << j;
                }
            }
        }
    }
    let budget = u32::from(inst.c());
    let mut best: Option<(Weight, u64)> = None;
    'masks: for mask in 0u64..1 << m {
        let mut weight = Weight::ZERO;
        let mut bits = mask;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if mask & conflict[e] != 0 {
                continue 'masks;
            }
            if mask & crossing[e] & !admissible[e] != 0 {
                continue 'masks;
            }
            if (mask & crossing[e]).count_ones() > budget {
                continue 'masks;
            }
            weight += inst.edge(e).weight;
        }
        let better = match best {
            None => true,
            Some((bw, bmask)) => weight > bw || (weight == bw && lex_smaller(mask, bmask)),
        };
        if better {
            best = Some((weight, mask));
        }
    }
    let (_, mask) = best.expect("the empty subset always qualifies");
    let matching = Matching::new((0..m).filter(|i| mask >> i & 1 == 1));
    Ok(Solution::compute(inst, matching)?)
}

/// True iff the sorted index sequence of `a` is lexicographically smaller
/// than that of `b`.
fn lex_smaller(a: u64, b: u64) -> bool {
    let (va, vb): (Vec<u32>, Vec<u32>) = (
        (0..64).filter(|i| a >> i & 1 == 1).collect(),
        (0..64).filter(|i| b >> i & 1 == 1).collect(),
    );
    va < vb
}

/// Enumerates admissible subsets: each subset's edges must form a
/// feasible matching on their own, and the rest of the graph is
/// completed with a max-weight non-crossing matching over the edges that
/// neither touch nor cross them.
pub fn fpt_2k(inst: &Instance) -> Result<Solution, OracleError> {
    fpt_2k_capped(inst, DEFAULT_CAP)
}

pub fn fpt_2k_capped(inst: &Instance, cap: usize) -> Result<Solution, OracleError> {
    let k = inst.pair_count();
    if k > cap {
        return Err(OracleError::PairCapExceeded { k, cap });
    }
    let pairs: Vec<(usize, usize)> = inst.admissible().iter().copied().collect();
    let mut best: Option<(Weight, Matching)> = None;
    for ymask in 0u64..1 << k {
        let core = Matching::new((0..k).filter(|t| ymask >> t & 1 == 1).flat_map(|t| {
            let (i, j) = pairs[t];
            [i, j]
        }));
        if inst.is_c_cpe(&core) != Ok(true) {
            continue;
        }
        let mut kept = Vec::new();
        let mut kept_ids = Vec::new();
        for (id, e) in inst.edges().iter().enumerate() {
            if core.contains(id) {
                continue;
            }
            let interacts = core.iter().any(|f| {
                let f = inst.edge(f);
                e.a == f.a || e.b == f.b || crosses(e, f)
            });
            if !interacts {
                kept.push(*e);
                kept_ids.push(id);
            }
        }
        let sub = Instance::new(inst.n_a(), inst.n_b(), kept, [], 0, inst.precision())
            .expect("filtered subgraph stays valid");
        let completion = reduce::solve(&sub)?;
        let matching = core.union(&Matching::new(
            completion.matching().iter().map(|s| kept_ids[s]),
        ));
        let weight = inst.matching_weight(&matching);
        if best.as_ref().map_or(true, |(bw, _)| weight > *bw) {
            best = Some((weight, matching));
        }
    }
    let (_, matching) = best.expect("the empty admissible subset always qualifies");
    Ok(Solution::compute(inst, matching)?)
}
