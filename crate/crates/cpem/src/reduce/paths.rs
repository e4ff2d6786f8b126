//! Dynamic programs for the best crossing chains between two admissible
//! pairs.
//!
//! A chain component of a budget-2 matching reads, in the auxiliary
//! graph, as a path whose consecutive pairs are joined by same-side
//! links; odd-sized chains start from a wedge (two pairs sharing an
//! edge). One engine drives all four variants (even/odd x upper/lower):
//! the lower side runs the same sweep with the two rows swapped, so pair
//! geometry is expressed in per-side coordinates. Per source pair the
//! tables `rho(Y; j)` hold the best chain weight into `Y` whose final hop
//! starts no further right than column `j`, with `chi` backpointers for
//! reconstruction.

use std::collections::VecDeque;

use crate::model::{Instance, Matching, Weight};

use super::{
    is_lower_link, is_lower_wedge, is_upper_link, is_upper_wedge, ordered_pairs, OrderedPair,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    fn index(self) -> usize {
        match self {
            Side::Upper => 0,
            Side::Lower => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// Per-source DP tables with backpointers.
#[derive(Debug, Clone)]
pub struct PathTables {
    source: usize,
    side: Side,
    parity: Parity,
    /// Per-pair view coordinates of the sweep side.
    lam: Vec<usize>,
    gam: Vec<usize>,
    /// Per-pair table over `j in [lam+1, gam-1]`; empty when unreachable.
    rho: Vec<Vec<Option<Weight>>>,
    chi: Vec<Vec<Option<usize>>>,
    determined: Vec<bool>,
}

impl PathTables {
    pub fn source(&self) -> usize {
        self.source
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn pair_count(&self) -> usize {
        self.rho.len()
    }

    /// Table index range `(lo, hi)` for pair `y`, if it has a table.
    pub fn table_range(&self, y: usize) -> Option<(usize, usize)> {
        if self.rho[y].is_empty() {
            None
        } else {
            let lo = self.lam[y] + 1;
            Some((lo, lo + self.rho[y].len() - 1))
        }
    }

    /// `rho(Y; j)`: absent means no such chain.
    pub fn rho(&self, y: usize, j: usize) -> Option<Weight> {
        let lo = self.lam[y] + 1;
        if self.rho[y].is_empty() || j < lo || j > lo + self.rho[y].len() - 1 {
            return None;
        }
        self.rho[y][j - lo]
    }

    /// Backpointer: the pair supplying the final hop counted by `rho(Y; j)`.
    pub fn chi(&self, y: usize, j: usize) -> Option<usize> {
        let lo = self.lam[y] + 1;
        if self.chi[y].is_empty() || j < lo || j > lo + self.chi[y].len() - 1 {
            return None;
        }
        self.chi[y][j - lo]
    }

    /// Best chain weight from the source into `y` for this side/parity.
    pub fn best(&self, y: usize) -> Option<Weight> {
        if self.rho[y].is_empty() {
            None
        } else {
            *self.rho[y].last().unwrap()
        }
    }

    pub fn determined(&self, y: usize) -> bool {
        self.determined[y]
    }

    /// Pair sequence of a best chain, source first, by walking `chi`.
    pub fn trace_pairs(&self, y: usize) -> Option<Vec<usize>> {
        self.best(y)?;
        let mut seq = vec![y];
        let mut cur = y;
        let mut j = self.gam[y] - 1;
        loop {
            let z = self
                .chi(cur, j)
                .expect("finite rho entries always carry a backpointer");
            seq.push(z);
            if z == self.source {
                break;
            }
            j = self.lam[cur] - 1;
            cur = z;
        }
        seq.reverse();
        Some(seq)
    }
}

/// Precomputed pair geometry and link/wedge adjacency for both sides.
pub struct PathEngine<'a> {
    inst: &'a Instance,
    pairs: Vec<OrderedPair>,
    pair_weight: Vec<Weight>,
    lam: [Vec<usize>; 2],
    gam: [Vec<usize>; 2],
    link_next: [Vec<Vec<usize>>; 2],
    link_prev: [Vec<Vec<usize>>; 2],
    wedge_next: [Vec<Vec<usize>>; 2],
}

impl<'a> PathEngine<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        let pairs = ordered_pairs(inst);
        let k = pairs.len();
        let pair_weight = pairs.iter().map(|p| p.weight(inst)).collect();
        let mut lam = [vec![0; k], vec![0; k]];
        let mut gam = [vec![0; k], vec![0; k]];
        for (pid, p) in pairs.iter().enumerate() {
            lam[0][pid] = p.lam_a(inst);
            gam[0][pid] = p.gam_a(inst);
            lam[1][pid] = p.lam_b(inst);
            gam[1][pid] = p.gam_b(inst);
        }
        let mut link_next = [vec![Vec::new(); k], vec![Vec::new(); k]];
        let mut link_prev = [vec![Vec::new(); k], vec![Vec::new(); k]];
        let mut wedge_next = [vec![Vec::new(); k], vec![Vec::new(); k]];
        for side in [Side::Upper, Side::Lower] {
            let s = side.index();
            for z in 0..k {
                for y in 0..k {
                    if z == y {
                        continue;
                    }
                    let link = match side {
                        Side::Upper => is_upper_link(inst, &pairs[z], &pairs[y]),
                        Side::Lower => is_lower_link(inst, &pairs[z], &pairs[y]),
                    };
                    if link {
                        link_next[s][z].push(y);
                        link_prev[s][y].push(z);
                    }
                    let wedge = match side {
                        Side::Upper => is_upper_wedge(inst, &pairs[z], &pairs[y]),
                        Side::Lower => is_lower_wedge(inst, &pairs[z], &pairs[y]),
                    };
                    if wedge {
                        wedge_next[s][z].push(y);
                    }
                }
            }
        }
        PathEngine {
            inst,
            pairs,
            pair_weight,
            lam,
            gam,
            link_next,
            link_prev,
            wedge_next,
        }
    }

    pub fn pairs(&self) -> &[OrderedPair] {
        &self.pairs
    }

    pub fn pair_id(&self, pair: &OrderedPair) -> Option<usize> {
        self.pairs.iter().position(|p| p == pair)
    }

    /// Union of the pairs' edges along a traced sequence.
    pub fn payload(&self, seq: &[usize]) -> Matching {
        Matching::new(seq.iter().flat_map(|&p| self.pairs[p].edge_ids()))
    }

    fn union_weight(&self, x: usize, y: usize) -> Weight {
        self.payload(&[x, y])
            .iter()
            .map(|id| self.inst.edge(id).weight)
            .sum()
    }

    /// Runs one DP from `source`. The first hop is a wedge for odd parity
    /// and a link for even parity; later hops are always links.
    pub fn run(&self, side: Side, parity: Parity, source: usize) -> PathTables {
        let s = side.index();
        let k = self.pairs.len();
        let (lam, gam) = (&self.lam[s], &self.gam[s]);
        let first_hops = match parity {
            Parity::Even => &self.link_next[s][source],
            Parity::Odd => &self.wedge_next[s][source],
        };

        // reachable sub-DAG from the source
        let mut reach = vec![false; k];
        reach[source] = true;
        let mut stack: Vec<usize> = first_hops.clone();
        for &b in first_hops {
            reach[b] = true;
        }
        while let Some(z) = stack.pop() {
            for &y in &self.link_next[s][z] {
                if !reach[y] {
                    reach[y] = true;
                    stack.push(y);
                }
            }
        }

        let mut tables = PathTables {
            source,
            side,
            parity,
            lam: lam.clone(),
            gam: gam.clone(),
            rho: vec![Vec::new(); k],
            chi: vec![Vec::new(); k],
            determined: vec![false; k],
        };
        tables.determined[source] = true;

        let mut is_base = vec![false; k];
        for &b in first_hops {
            is_base[b] = true;
        }
        for &b in first_hops {
            let lo = lam[b] + 1;
            let hi = gam[b] - 1;
            debug_assert!(lo <= hi && (lo..=hi).contains(&gam[source]));
            let base_weight = match parity {
                Parity::Even => self.pair_weight[source] + self.pair_weight[b],
                Parity::Odd => self.union_weight(source, b),
            };
            let mut rho = vec![None; hi - lo + 1];
            let mut chi = vec![None; hi - lo + 1];
            for j in gam[source]..=hi {
                rho[j - lo] = Some(base_weight);
                chi[j - lo] = Some(source);
            }
            tables.rho[b] = rho;
            tables.chi[b] = chi;
            tables.determined[b] = true;
        }

        // ready-queue propagation over the reachable sub-DAG; a pair is
        // ready once every reachable predecessor is determined
        let mut indeg = vec![0usize; k];
        for y in 0..k {
            if reach[y] && !is_base[y] && y != source {
                indeg[y] = self.link_prev[s][y]
                    .iter()
                    .filter(|&&z| reach[z] && z != source)
                    .count();
            }
        }
        let mut queue: VecDeque<usize> = VecDeque::new();
        let release = |from: usize, indeg: &mut Vec<usize>, queue: &mut VecDeque<usize>| {
            for &y in &self.link_next[s][from] {
                if reach[y] && !is_base[y] && y != source {
                    indeg[y] -= 1;
                    if indeg[y] == 0 {
                        queue.push_back(y);
                    }
                }
            }
        };
        for &b in first_hops {
            release(b, &mut indeg, &mut queue);
        }
        while let Some(y) = queue.pop_front() {
            let lo = lam[y] + 1;
            if gam[y] > lo {
                let hi = gam[y] - 1;
                let lookup = lam[y] - 1;
                let mut preds: Vec<usize> = self.link_prev[s][y]
                    .iter()
                    .copied()
                    .filter(|&z| reach[z] && z != source)
                    .collect();
                preds.sort_by_key(|&z| gam[z]); // stable: ties stay in id order
                let mut rho = vec![None; hi - lo + 1];
                let mut chi = vec![None; hi - lo + 1];
                let mut best: Option<(Weight, usize)> = None;
                let mut pi = 0;
                for j in lo..=hi {
                    while pi < preds.len() && gam[preds[pi]] == j {
                        let z = preds[pi];
                        pi += 1;
                        if let Some(v) = tables.rho(z, lookup) {
                            let cand = v + self.pair_weight[y];
                            if best.map_or(true, |(bw, _)| cand > bw) {
                                best = Some((cand, z));
                            }
                        }
                    }
                    if let Some((bw, bz)) = best {
                        rho[j - lo] = Some(bw);
                        chi[j - lo] = Some(bz);
                    }
                }
                debug_assert_eq!(pi, preds.len(), "link predecessor outside table range");
                tables.rho[y] = rho;
                tables.chi[y] = chi;
            }
            tables.determined[y] = true;
            release(y, &mut indeg, &mut queue);
        }
        tables
    }
}

/// Best even-sized upper chain from `x` into every reachable pair.
pub fn even_upper(inst: &Instance, x: &OrderedPair) -> PathTables {
    let engine = PathEngine::new(inst);
    let id = engine
        .pair_id(x)
        .expect("source must be an admissible pair");
    engine.run(Side::Upper, Parity::Even, id)
}

/// Mirror of [`even_upper`] with the two rows swapped.
pub fn even_lower(inst: &Instance, x: &OrderedPair) -> PathTables {
    let engine = PathEngine::new(inst);
    let id = engine
        .pair_id(x)
        .expect("source must be an admissible pair");
    engine.run(Side::Lower, Parity::Even, id)
}

/// Best odd-sized chain from `x`: the first hop is a wedge on the chosen
/// side, later hops links on the same side.
pub fn odd_paths(inst: &Instance, x: &OrderedPair, side: Side) -> PathTables {
    let engine = PathEngine::new(inst);
    let id = engine
        .pair_id(x)
        .expect("source must be an admissible pair");
    engine.run(side, Parity::Odd, id)
}

/// The winning chain for one ordered source/target pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestPath {
    pub weight: Weight,
    pub payload: Matching,
    /// Pair sequence from source to target.
    pub pair_seq: Vec<usize>,
    pub side: Side,
    pub parity: Parity,
}

/// Best chain weights and payloads for every ordered pair of chain ends.
pub struct PathResult {
    k: usize,
    entries: Vec<Option<BestPath>>,
}

impl PathResult {
    pub fn pair_count(&self) -> usize {
        self.k
    }

    pub fn best(&self, x: usize, y: usize) -> Option<&BestPath> {
        self.entries[x * self.k + y].as_ref()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BestPath)> {
        self.entries
            .iter()
            .enumerate()
            .filter_map(move |(ix, e)| e.as_ref().map(|b| (ix / self.k, ix % self.k, b)))
    }
}

/// Runs all four DPs from every source and keeps the best chain per
/// ordered `(x, y)`, including the single-pair chains `x = y`.
pub fn best_paths(inst: &Instance) -> PathResult {
    let engine = PathEngine::new(inst);
    let k = engine.pairs().len();
    let mut entries: Vec<Option<BestPath>> = vec![None; k * k];
    let combos = [
        (Side::Upper, Parity::Even),
        (Side::Lower, Parity::Even),
        (Side::Upper, Parity::Odd),
        (Side::Lower, Parity::Odd),
    ];
    for x in 0..k {
        for (side, parity) in combos {
            let tables = engine.run(side, parity, x);
            for y in 0..k {
                if y == x {
                    continue;
                }
                if let Some(weight) = tables.best(y) {
                    let slot = &mut entries[x * k + y];
                    if slot.as_ref().map_or(true, |b| weight > b.weight) {
                        let seq = tables.trace_pairs(y).expect("finite best traces");
                        let payload = engine.payload(&seq);
                        debug_assert_eq!(inst.matching_weight(&payload), weight);
                        *slot = Some(BestPath {
                            weight,
                            payload,
                            pair_seq: seq,
                            side,
                            parity,
                        });
                    }
                }
            }
        }
        let pair = engine.pairs()[x];
        entries[x * k + x] = Some(BestPath {
            weight: pair.weight(inst),
            payload: Matching::new(pair.edge_ids()),
            pair_seq: vec![x],
            side: Side::Upper,
            parity: Parity::Even,
        });
    }
    PathResult { k, entries }
}
