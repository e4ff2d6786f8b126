//! Reduction from the crossing-budgeted matching problem to non-contact
//! trapezoid selection, for budgets 0, 1 and 2.
//!
//! Budget 0 turns each edge into a segment; budget 1 adds one trapezoid
//! per admissible pair. Budget 2 additionally needs every connected shape
//! a feasible matching can form in the auxiliary graph: 3- and 4-cycles,
//! and crossing chains, whose best representatives come from the path
//! dynamic programs in [`paths`].

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{crosses, edge_precedes, Instance, Matching, Solution, SolutionError, Weight};
use crate::ntsp::{self, ReconstructError, TrapCollection, Trapezoid};

pub mod paths;

pub use paths::{
    best_paths, even_lower, even_upper, odd_paths, BestPath, Parity, PathEngine, PathResult,
    PathTables, Side,
};

/// An admissible pair in canonical order: `left` is the edge with the
/// smaller upper-row index (and therefore the larger lower-row index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedPair {
    pub left: usize,
    pub right: usize,
}

impl OrderedPair {
    pub fn new(inst: &Instance, i: usize, j: usize) -> Self {
        debug_assert!(crosses(inst.edge(i), inst.edge(j)));
        if inst.edge(i).a < inst.edge(j).a {
            OrderedPair { left: i, right: j }
        } else {
            OrderedPair { left: j, right: i }
        }
    }

    pub fn lam_a(&self, inst: &Instance) -> usize {
        inst.edge(self.left).a
    }

    pub fn gam_a(&self, inst: &Instance) -> usize {
        inst.edge(self.right).a
    }

    pub fn lam_b(&self, inst: &Instance) -> usize {
        inst.edge(self.right).b
    }

    pub fn gam_b(&self, inst: &Instance) -> usize {
        inst.edge(self.left).b
    }

    pub fn weight(&self, inst: &Instance) -> Weight {
        inst.edge(self.left).weight + inst.edge(self.right).weight
    }

    pub fn edge_ids(&self) -> [usize; 2] {
        [self.left, self.right]
    }

    pub fn contains_edge(&self, id: usize) -> bool {
        self.left == id || self.right == id
    }
}

/// The admissible set as ordered pairs, in the instance's canonical
/// (sorted) pair order. Pair ids used throughout are indices here.
pub fn ordered_pairs(inst: &Instance) -> Vec<OrderedPair> {
    inst.admissible()
        .iter()
        .map(|&(i, j)| OrderedPair::new(inst, i, j))
        .collect()
}

/// Upper link: `x`'s right edge crosses `y`'s left edge admissibly while
/// everything else stays strictly ordered.
pub fn is_upper_link(inst: &Instance, x: &OrderedPair, y: &OrderedPair) -> bool {
    let (ex, exr) = (inst.edge(x.left), inst.edge(x.right));
    let (ey, eyr) = (inst.edge(y.left), inst.edge(y.right));
    edge_precedes(ex, ey)
        && edge_precedes(ex, eyr)
        && inst.is_admissible(x.right, y.left)
        && edge_precedes(exr, eyr)
}

/// Lower link: the mirror of [`is_upper_link`] with the roles of the two
/// rows swapped; `x`'s left edge crosses `y`'s right edge admissibly.
pub fn is_lower_link(inst: &Instance, x: &OrderedPair, y: &OrderedPair) -> bool {
    let (ex, exr) = (inst.edge(x.left), inst.edge(x.right));
    let (ey, eyr) = (inst.edge(y.left), inst.edge(y.right));
    edge_precedes(ex, ey)
        && inst.is_admissible(x.left, y.right)
        && edge_precedes(exr, ey)
        && edge_precedes(exr, eyr)
}

/// Upper wedge: the pairs share their left edge.
pub fn is_upper_wedge(inst: &Instance, x: &OrderedPair, z: &OrderedPair) -> bool {
    x.left == z.left && edge_precedes(inst.edge(x.right), inst.edge(z.right))
}

/// Lower wedge: the pairs share their right edge.
pub fn is_lower_wedge(inst: &Instance, x: &OrderedPair, z: &OrderedPair) -> bool {
    x.right == z.right && edge_precedes(inst.edge(x.left), inst.edge(z.left))
}

fn trap_from_matching(inst: &Instance, payload: Matching, weight: Weight) -> Trapezoid {
    Trapezoid::new(
        inst.lambda_a(payload.iter()),
        inst.gamma_a(payload.iter()),
        inst.lambda_b(payload.iter()),
        inst.gamma_b(payload.iter()),
        weight,
        payload,
    )
}

/// Budget 0: one segment per edge.
pub fn build_c0(inst: &Instance) -> TrapCollection {
    let traps = inst
        .edges()
        .iter()
        .enumerate()
        .map(|(id, e)| Trapezoid::segment(e.a, e.b, e.weight, Matching::singleton(id)))
        .collect();
    TrapCollection::new(inst.n_a(), inst.n_b(), traps).expect("segments from a valid instance")
}

/// Budget 1: every segment plus one trapezoid per admissible pair.
pub fn build_c1(inst: &Instance) -> TrapCollection {
    let mut traps = build_c0(inst).traps().to_vec();
    for pair in ordered_pairs(inst) {
        let payload = Matching::new(pair.edge_ids());
        let weight = pair.weight(inst);
        traps.push(trap_from_matching(inst, payload, weight));
    }
    TrapCollection::new(inst.n_a(), inst.n_b(), traps).expect("pair trapezoids in range")
}

/// All matchings whose auxiliary graph is a 3- or 4-cycle with every
/// crossing admissible. O(k^2 + m^2) after building the admissibility
/// matrix.
pub fn enumerate_cycles(inst: &Instance) -> Vec<Matching> {
    let m = inst.edge_count();
    // m x m admissibility matrix, the intersection matrix over the pairs
    let mut adm = vec![false; m * m];
    for &(i, j) in inst.admissible() {
        adm[i * m + j] = true;
        adm[j * m + i] = true;
    }
    let pairs = ordered_pairs(inst);
    let mut pairs_by_edge: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (pid, p) in pairs.iter().enumerate() {
        pairs_by_edge[p.left].push(pid);
        pairs_by_edge[p.right].push(pid);
    }

    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    // 3-cycles: two admissible pairs sharing an edge, third pair admissible
    for e in 0..m {
        let here = &pairs_by_edge[e];
        for (pos, &pi) in here.iter().enumerate() {
            for &qi in &here[pos + 1..] {
                let x = if pairs[pi].left == e {
                    pairs[pi].right
                } else {
                    pairs[pi].left
                };
                let y = if pairs[qi].left == e {
                    pairs[qi].right
                } else {
                    pairs[qi].left
                };
                if adm[x * m + y] {
                    let mut ids = vec![e, x, y];
                    ids.sort_unstable();
                    found.insert(ids);
                }
            }
        }
    }
    // 4-cycles: opposite pairs x = (e1, e3), y = (e4, e2) with e1 left of
    // e4, joined by admissible crossings {e1,e2} and {e3,e4} and with the
    // chords {e1,e4}, {e2,e3} crossing-free
    for x in &pairs {
        for y in &pairs {
            let (e1, e3) = (x.left, x.right);
            let (e4, e2) = (y.left, y.right);
            if inst.edge(e1).a > inst.edge(e4).a {
                continue;
            }
            let ids = [e1, e2, e3, e4];
            if ids.iter().collect::<BTreeSet<_>>().len() != 4 {
                continue;
            }
            let union = Matching::new(ids);
            if inst.check_matching(&union).is_err() {
                continue;
            }
            if adm[e1 * m + e2]
                && adm[e3 * m + e4]
                && !crosses(inst.edge(e1), inst.edge(e4))
                && !crosses(inst.edge(e2), inst.edge(e3))
            {
                found.insert(union.to_vec());
            }
        }
    }
    found.into_iter().map(Matching::new).collect()
}

/// Budget 2: segments, cycle trapezoids, and one trapezoid per ordered
/// pair of chain ends with a realizable crossing chain between them.
pub fn build_c2(inst: &Instance) -> TrapCollection {
    let mut traps = build_c0(inst).traps().to_vec();
    for cycle in enumerate_cycles(inst) {
        let weight = inst.matching_weight(&cycle);
        traps.push(trap_from_matching(inst, cycle, weight));
    }
    let result = best_paths(inst);
    for (_, _, best) in result.iter() {
        traps.push(trap_from_matching(inst, best.payload.clone(), best.weight));
    }
    TrapCollection::new(inst.n_a(), inst.n_b(), traps).expect("trapezoids from valid matchings")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("unsupported crossing budget {c}; expected 0, 1 or 2")]
    UnsupportedBudget { c: u8 },
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
    #[error(transparent)]
    Solution(#[from] SolutionError),
}

/// Solves the instance at its own crossing budget.
pub fn solve(inst: &Instance) -> Result<Solution, SolveError> {
    solve_with_budget(inst, inst.c())
}

/// Solves at an explicit budget, which may differ from the instance's.
pub fn solve_with_budget(inst: &Instance, c: u8) -> Result<Solution, SolveError> {
    let scoped;
    let inst = if c == inst.c() {
        inst
    } else {
        scoped = inst
            .with_budget(c)
            .map_err(|_| SolveError::UnsupportedBudget { c })?;
        &scoped
    };
    let coll = match c {
        0 => build_c0(inst),
        1 => build_c1(inst),
        2 => build_c2(inst),
        c => return Err(SolveError::UnsupportedBudget { c }),
    };
    let tables = ntsp::select_trape(&coll);
    let chain = ntsp::reconstruct(&coll, &tables)?;
    let matching = chain.iter().fold(Matching::default(), |acc, &t| {
        acc.union(&coll.traps()[t].payload)
    });
    let solution = Solution::compute(inst, matching)?;
    debug_assert_eq!(solution.weight(), tables.omega_star());
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::{four_edge, make, triangle};
    use crate::oracle;

    fn w(raw: i64) -> Weight {
        Weight::from_scaled(raw)
    }

    /// Fig-style 4-cycle: e1=(1,3), e2=(3,1), e3=(4,2), e4=(2,4), all four
    /// listed crossings admissible.
    fn quad(c: u8) -> Instance {
        make(
            4,
            4,
            &[(1, 3, 1), (3, 1, 1), (4, 2, 1), (2, 4, 1)],
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
            c,
        )
    }

    #[test]
    fn build_c0_shapes() {
        let empty = make(3, 3, &[], &[], 0);
        assert!(build_c0(&empty).is_empty());
        let inst = make(2, 3, &[(2, 3, 7)], &[], 0);
        let coll = build_c0(&inst);
        let t = &coll.traps()[0];
        assert_eq!((t.lam_a, t.gam_a, t.lam_b, t.gam_b), (2, 2, 3, 3));
        assert_eq!(t.weight, w(7));
    }

    #[test]
    fn solve_c0_four_edge() {
        let inst = four_edge(&[], 0);
        let sol = solve(&inst).unwrap();
        assert_eq!(sol.weight(), w(10));
        assert_eq!(sol.matching().to_vec(), vec![0, 1]);
        assert_eq!(sol.weight(), oracle::brute_force(&inst).unwrap().weight());
    }

    #[test]
    fn build_c1_without_pairs_equals_c0() {
        let inst = four_edge(&[], 1);
        assert_eq!(build_c1(&inst).traps(), build_c0(&inst).traps());
    }

    #[test]
    fn build_c1_pair_trapezoid() {
        let inst = make(2, 2, &[(1, 2, 6), (2, 1, 6)], &[(0, 1)], 1);
        let coll = build_c1(&inst);
        assert_eq!(coll.len(), 3);
        let t = &coll.traps()[2];
        assert_eq!((t.lam_a, t.gam_a, t.lam_b, t.gam_b), (1, 2, 1, 2));
        assert_eq!(t.weight, w(12));
    }

    #[test]
    fn solve_c1_heavy_crossing_beats_parallel() {
        let inst = make(
            2,
            2,
            &[(1, 1, 5), (2, 2, 5), (1, 2, 6), (2, 1, 6)],
            &[(2, 3)],
            1,
        );
        let sol = solve(&inst).unwrap();
        assert_eq!(sol.weight(), w(12));
        assert_eq!(sol.weight(), oracle::brute_force(&inst).unwrap().weight());
    }

    #[test]
    fn cycles_triangle_fixture() {
        let cycles = enumerate_cycles(&triangle(2));
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn cycles_quad_fixture() {
        let cycles = enumerate_cycles(&quad(2));
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].to_vec(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn cycles_require_admissibility() {
        // same triangle but one crossing not admissible: no cycle
        let inst = make(
            3,
            3,
            &[(1, 3, 1), (2, 2, 1), (3, 1, 1)],
            &[(0, 1), (0, 2)],
            2,
        );
        assert!(enumerate_cycles(&inst).is_empty());
    }

    /// Subset-scan reference: a matching is a cycle iff every edge has
    /// exactly two admissible realized crossings and the crossings connect
    /// the edges into one cycle.
    fn scan_cycles(inst: &Instance) -> Vec<Matching> {
        let m = inst.edge_count();
        let mut out = Vec::new();
        for mask in 0u32..1 << m {
            if !(3..=4).contains(&mask.count_ones()) {
                continue;
            }
            let ids: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            let matching = Matching::new(ids.iter().copied());
            if inst.check_matching(&matching).is_err() {
                continue;
            }
            let realized = inst.realized_crossings(&matching);
            if realized.len() != ids.len()
                || !realized.iter().all(|&(i, j)| inst.is_admissible(i, j))
            {
                continue;
            }
            if ids
                .iter()
                .all(|&i| realized.iter().filter(|&&(a, b)| a == i || b == i).count() == 2)
            {
                out.push(matching);
            }
        }
        out.sort_by_key(|m| (m.len(), m.to_vec()));
        out
    }

    #[test]
    fn cycles_match_subset_scan_on_randoms() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(33);
        for case in 0..60 {
            let (n_a, n_b) = (rng.gen_range(2..=5), rng.gen_range(2..=5));
            let inst = crate::io::generate(&crate::io::GenParams {
                n_a,
                n_b,
                m: rng.gen_range(0..=9usize.min(n_a * n_b)),
                target_k: rng.gen_range(0..=12),
                c: 2,
                w_min: w(1),
                w_max: w(9),
                seed: rng.gen(),
                precision: 0,
            })
            .unwrap();
            assert_eq!(enumerate_cycles(&inst), scan_cycles(&inst), "case {case}");
        }
    }

    #[test]
    fn build_c2_without_pairs_equals_c0() {
        let inst = four_edge(&[], 2);
        assert_eq!(build_c2(&inst).traps(), build_c0(&inst).traps());
    }

    #[test]
    fn build_c2_triangle_inventory() {
        // 3 segments + 3 single-pair trapezoids + 1 cycle trapezoid
        let coll = build_c2(&triangle(2));
        assert_eq!(coll.len(), 7);
        let cycle_traps = coll.traps().iter().filter(|t| t.payload.len() == 3).count();
        assert_eq!(cycle_traps, 1);
    }

    #[test]
    fn solve_c2_triangle_takes_all_three() {
        let sol = solve(&triangle(2)).unwrap();
        assert_eq!(sol.weight(), w(3));
        assert_eq!(sol.matching().len(), 3);
    }

    #[test]
    fn solve_c2_at_least_c1() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(34);
        for _ in 0..40 {
            let (n_a, n_b) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
            let inst = crate::io::generate(&crate::io::GenParams {
                n_a,
                n_b,
                m: rng.gen_range(0..=10usize.min(n_a * n_b)),
                target_k: rng.gen_range(0..=10),
                c: 2,
                w_min: w(1),
                w_max: w(9),
                seed: rng.gen(),
                precision: 0,
            })
            .unwrap();
            let w2 = solve_with_budget(&inst, 2).unwrap().weight();
            let w1 = solve_with_budget(&inst, 1).unwrap().weight();
            assert!(w2 >= w1);
        }
    }

    #[test]
    fn solve_empty_graph() {
        let inst = make(0, 0, &[], &[], 0);
        let sol = solve(&inst).unwrap();
        assert_eq!(sol.weight(), Weight::ZERO);
        assert!(sol.matching().is_empty());
    }

    #[test]
    fn solve_rejects_unsupported_budget() {
        let inst = four_edge(&[], 0);
        assert_eq!(
            solve_with_budget(&inst, 3),
            Err(SolveError::UnsupportedBudget { c: 3 })
        );
    }

    #[test]
    fn link_and_wedge_examples() {
        // X = {(a1,b2),(a3,b1)}, Y = {(a2,b4),(a4,b3)}, glue {e2,e3}
        let inst = make(
            4,
            4,
            &[(1, 2, 1), (3, 1, 1), (2, 4, 1), (4, 3, 1)],
            &[(0, 1), (2, 3), (1, 2)],
            2,
        );
        let x = OrderedPair::new(&inst, 0, 1);
        let y = OrderedPair::new(&inst, 2, 3);
        assert!(is_upper_link(&inst, &x, &y));
        assert!(!is_upper_link(&inst, &x, &x));
        let without_glue = make(
            4,
            4,
            &[(1, 2, 1), (3, 1, 1), (2, 4, 1), (4, 3, 1)],
            &[(0, 1), (2, 3)],
            2,
        );
        assert!(!is_upper_link(&without_glue, &x, &y));

        // wedge sharing (a1,b3)
        let winst = make(
            4,
            3,
            &[(1, 3, 2), (2, 1, 3), (4, 2, 4)],
            &[(0, 1), (0, 2)],
            2,
        );
        let wx = OrderedPair::new(&winst, 0, 1);
        let wz = OrderedPair::new(&winst, 0, 2);
        assert!(is_upper_wedge(&winst, &wx, &wz));
        assert!(!is_upper_wedge(&winst, &wx, &wx));
        assert!(!is_upper_wedge(&winst, &wz, &wx));
        // disjoint pairs are no wedge
        assert!(!is_upper_wedge(&inst, &x, &y));
        assert!(!is_lower_wedge(&inst, &x, &y));
    }

    /// Connected components of the auxiliary graph of any matching are
    /// pairwise comparable under ≺.
    #[test]
    fn components_form_a_chain() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(35);
        for _ in 0..40 {
            let inst = crate::io::generate(&crate::io::GenParams {
                n_a: 6,
                n_b: 6,
                m: rng.gen_range(0..=10),
                target_k: 40,
                c: 2,
                w_min: w(1),
                w_max: w(9),
                seed: rng.gen(),
                precision: 0,
            })
            .unwrap();
            // a random matching
            let mut matching = Matching::default();
            for id in 0..inst.edge_count() {
                if rng.gen_bool(0.6) {
                    let cand = matching.union(&Matching::singleton(id));
                    if inst.check_matching(&cand).is_ok() {
                        matching = cand;
                    }
                }
            }
            let comps = aux_components(&inst, &matching);
            for (p, x) in comps.iter().enumerate() {
                for y in &comps[p + 1..] {
                    let left_of = |u: &Vec<usize>, v: &Vec<usize>| {
                        inst.gamma_a(u.iter().copied()) < inst.lambda_a(v.iter().copied())
                            && inst.gamma_b(u.iter().copied()) < inst.lambda_b(v.iter().copied())
                    };
                    assert!(left_of(x, y) || left_of(y, x));
                }
            }
        }
    }

    /// No five edges can pairwise-chain into a 5-cycle in the auxiliary
    /// graph, whatever the admissible set.
    #[test]
    fn no_five_cycles_exist() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(36);
        for _ in 0..30 {
            let inst = crate::io::generate(&crate::io::GenParams {
                n_a: 6,
                n_b: 6,
                m: 10,
                target_k: 45,
                c: 2,
                w_min: w(1),
                w_max: w(9),
                seed: rng.gen(),
                precision: 0,
            })
            .unwrap();
            let m = inst.edge_count();
            for mask in 0u32..1 << m {
                if mask.count_ones() != 5 {
                    continue;
                }
                let matching = Matching::new((0..m).filter(|i| mask >> i & 1 == 1));
                if inst.check_matching(&matching).is_err() {
                    continue;
                }
                let realized = inst.realized_crossings(&matching);
                let is_cycle = realized.len() == 5
                    && matching
                        .iter()
                        .all(|i| realized.iter().filter(|&&(a, b)| a == i || b == i).count() == 2);
                assert!(!is_cycle, "found a 5-cycle: {:?}", matching);
            }
        }
    }

    fn aux_components(inst: &Instance, m: &Matching) -> Vec<Vec<usize>> {
        let ids = m.to_vec();
        let realized = inst.realized_crossings(m);
        let mut comp: Vec<Vec<usize>> = Vec::new();
        let mut assigned: std::collections::HashMap<usize, usize> = Default::default();
        for &id in &ids {
            if assigned.contains_key(&id) {
                continue;
            }
            let cix = comp.len();
            let mut stack = vec![id];
            let mut members = Vec::new();
            assigned.insert(id, cix);
            while let Some(u) = stack.pop() {
                members.push(u);
                for &(a, b) in &realized {
                    let v = if a == u {
                        b
                    } else if b == u {
                        a
                    } else {
                        continue;
                    };
                    if !assigned.contains_key(&v) {
                        assigned.insert(v, cix);
                        stack.push(v);
                    }
                }
            }
            members.sort_unstable();
            comp.push(members);
        }
        comp
    }
}
