//! Core domain types: 2-layered bipartite instances, exact weights,
//! matchings, crossings, and the admissible-set machinery.
//!
//! Vertices on both rows are 1-indexed and placed left to right in index
//! order; an edge is the straight segment between its endpoints. Two edges
//! cross exactly when their endpoint orders on the two rows disagree.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub, SubAssign};

use thiserror::Error;

/// Exact weight stored as a scaled integer.
///
/// The decimal scale is fixed per instance (see [`Instance::precision`]),
/// so sums and equality tests used by the solvers are exact.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Weight(i64);

impl Weight {
    pub const ZERO: Weight = Weight(0);

    pub const fn from_scaled(raw: i64) -> Self {
        Weight(raw)
    }

    pub const fn scaled(self) -> i64 {
        self.0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn checked_add(self, rhs: Weight) -> Option<Weight> {
        self.0.checked_add(rhs.0).map(Weight)
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight({})", self.0)
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl AddAssign for Weight {
    fn add_assign(&mut self, rhs: Weight) {
        self.0 += rhs.0;
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        Weight(self.0 - rhs.0)
    }
}

impl SubAssign for Weight {
    fn sub_assign(&mut self, rhs: Weight) {
        self.0 -= rhs.0;
    }
}

impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::ZERO, |acc, w| acc + w)
    }
}

/// An edge `a_i b_q` of the drawing with its exact weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    /// Upper-row index, 1-based.
    pub a: usize,
    /// Lower-row index, 1-based.
    pub b: usize,
    pub weight: Weight,
}

impl Edge {
    pub fn new(a: usize, b: usize, weight: Weight) -> Self {
        Edge { a, b, weight }
    }
}

/// True iff the two segments intersect: the upper-row order and the
/// lower-row order of the endpoints strictly disagree. Edges sharing an
/// endpoint never cross.
pub fn crosses(e: &Edge, f: &Edge) -> bool {
    (e.a < f.a && f.b < e.b) || (f.a < e.a && e.b < f.b)
}

/// The strict precedence `e ≺ f`: every endpoint of `e` lies strictly to
/// the left of the corresponding endpoint of `f`.
pub fn edge_precedes(e: &Edge, f: &Edge) -> bool {
    e.a < f.a && e.b < f.b
}

/// A set of edge indices with no two members sharing an endpoint.
///
/// The endpoint-disjointness is relative to an instance and checked by
/// [`Instance::check_matching`]; the container itself is an ordered set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Matching(BTreeSet<usize>);

impl Matching {
    pub fn new<I: IntoIterator<Item = usize>>(ids: I) -> Self {
        Matching(ids.into_iter().collect())
    }

    pub fn singleton(id: usize) -> Self {
        Matching(BTreeSet::from([id]))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.0.contains(&id)
    }

    pub fn union(&self, other: &Matching) -> Matching {
        Matching(self.0.union(&other.0).copied().collect())
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }
}

impl FromIterator<usize> for Matching {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Matching::new(iter)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("edge {index}: endpoint ({a},{b}) out of range for rows {n_a}x{n_b}")]
    EndpointOutOfRange {
        index: usize,
        a: usize,
        b: usize,
        n_a: usize,
        n_b: usize,
    },
    #[error("edges {first} and {second} connect the same endpoints")]
    DuplicateEdge { first: usize, second: usize },
    #[error("edge {index}: weight must be strictly positive")]
    NonPositiveWeight { index: usize },
    #[error("admissible pair ({i},{j}): edge index out of range")]
    PairOutOfRange { i: usize, j: usize },
    #[error("admissible pair ({i},{i}) references a single edge")]
    SelfPair { i: usize },
    #[error("admissible pair ({i},{j}) is not a crossing pair")]
    PairNotCrossing { i: usize, j: usize },
    #[error("crossing budget {c} unsupported; expected 0, 1 or 2")]
    UnsupportedBudget { c: u8 },
    #[error("total edge weight overflows the exact 64-bit range")]
    WeightSumOverflow,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("edge index {id} out of range")]
    InvalidEdge { id: usize },
    #[error("edges {first} and {second} share an endpoint")]
    SharedEndpoint { first: usize, second: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolutionError {
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error("matching violates the crossing constraints for c={c}")]
    NotCpe { c: u8 },
}

/// A problem instance: the drawing, the weights, the admissible set and
/// the crossing budget. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n_a: usize,
    n_b: usize,
    edges: Vec<Edge>,
    /// Normalized admissible pairs: `(i, j)` with `i < j`, deduplicated.
    admissible: BTreeSet<(usize, usize)>,
    c: u8,
    precision: u32,
}

impl Instance {
    /// Builds and validates an instance. Reversed and duplicate admissible
    /// pairs are normalized silently; everything else that breaks an
    /// invariant is reported.
    pub fn new<I>(
        n_a: usize,
        n_b: usize,
        edges: Vec<Edge>,
        admissible: I,
        c: u8,
        precision: u32,
    ) -> Result<Self, Vec<ValidationError>>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let admissible = admissible
            .into_iter()
            .map(|(i, j)| if i <= j { (i, j) } else { (j, i) })
            .collect();
        let inst = Instance {
            n_a,
            n_b,
            edges,
            admissible,
            c,
            precision,
        };
        inst.validate().map(|_| inst)
    }

    /// Checks every instance invariant, collecting all violations.
    pub fn validate(&self) -> Result<(), Vec<ValidationError>> {
        let mut errors = Vec::new();
        if self.c > 2 {
            errors.push(ValidationError::UnsupportedBudget { c: self.c });
        }
        let mut cell_first: HashMap<(usize, usize), usize> =
            HashMap::with_capacity(self.edges.len());
        let mut total = Weight::ZERO;
        let mut overflow = false;
        for (index, e) in self.edges.iter().enumerate() {
            if e.a < 1 || e.a > self.n_a || e.b < 1 || e.b > self.n_b {
                errors.push(ValidationError::EndpointOutOfRange {
                    index,
                    a: e.a,
                    b: e.b,
                    n_a: self.n_a,
                    n_b: self.n_b,
                });
            }
            if let Some(&first) = cell_first.get(&(e.a, e.b)) {
                errors.push(ValidationError::DuplicateEdge {
                    first,
                    second: index,
                });
            } else {
                cell_first.insert((e.a, e.b), index);
            }
            if !e.weight.is_positive() {
                errors.push(ValidationError::NonPositiveWeight { index });
            }
            match total.checked_add(e.weight) {
                Some(t) => total = t,
                None => overflow = true,
            }
        }
        if overflow {
            errors.push(ValidationError::WeightSumOverflow);
        }
        for &(i, j) in &self.admissible {
            if i == j {
                errors.push(ValidationError::SelfPair { i });
                continue;
            }
            if j >= self.edges.len() {
                errors.push(ValidationError::PairOutOfRange { i, j });
                continue;
            }
            if !crosses(&self.edges[i], &self.edges[j]) {
                errors.push(ValidationError::PairNotCrossing { i, j });
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    /// Same instance with a different crossing budget.
    pub fn with_budget(&self, c: u8) -> Result<Instance, Vec<ValidationError>> {
        let mut inst = self.clone();
        inst.c = c;
        inst.validate().map(|_| inst)
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn c(&self) -> u8 {
        self.c
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn admissible(&self) -> &BTreeSet<(usize, usize)> {
        &self.admissible
    }

    pub fn pair_count(&self) -> usize {
        self.admissible.len()
    }

    pub fn is_admissible(&self, i: usize, j: usize) -> bool {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.admissible.contains(&key)
    }

    pub fn crosses_ids(&self, i: usize, j: usize) -> bool {
        crosses(&self.edges[i], &self.edges[j])
    }

    /// All crossing pairs of the drawing, `{(i, j) : i < j}`. O(m^2).
    pub fn all_crossing_pairs(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for i in 0..self.edges.len() {
            for j in i + 1..self.edges.len() {
                if crosses(&self.edges[i], &self.edges[j]) {
                    out.insert((i, j));
                }
            }
        }
        out
    }

    /// Crossing pairs realized inside `m`.
    pub fn realized_crossings(&self, m: &Matching) -> BTreeSet<(usize, usize)> {
        let ids = m.to_vec();
        let mut out = BTreeSet::new();
        for (p, &i) in ids.iter().enumerate() {
            for &j in &ids[p + 1..] {
                if crosses(&self.edges[i], &self.edges[j]) {
                    out.insert((i, j));
                }
            }
        }
        out
    }

    /// Verifies that `m` is a matching of this instance: valid indices and
    /// pairwise endpoint-disjoint edges.
    pub fn check_matching(&self, m: &Matching) -> Result<(), MatchingError> {
        let ids = m.to_vec();
        for &id in &ids {
            if id >= self.edges.len() {
                return Err(MatchingError::InvalidEdge { id });
            }
        }
        for (p, &i) in ids.iter().enumerate() {
            for &j in &ids[p + 1..] {
                let (e, f) = (&self.edges[i], &self.edges[j]);
                if e.a == f.a || e.b == f.b {
                    return Err(MatchingError::SharedEndpoint {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(())
    }

    /// True iff `m` is a c-CPE matching: every realized crossing pair is
    /// admissible and no edge takes part in more than `c` of them.
    ///
    /// Non-matching input (shared endpoint or bad index) is an error,
    /// distinct from a plain constraint violation.
    pub fn is_c_cpe(&self, m: &Matching) -> Result<bool, MatchingError> {
        self.check_matching(m)?;
        let realized = self.realized_crossings(m);
        let mut counts: HashMap<usize, u32> = HashMap::new();
        for &(i, j) in &realized {
            if !self.admissible.contains(&(i, j)) {
                return Ok(false);
            }
            *counts.entry(i).or_insert(0) += 1;
            *counts.entry(j).or_insert(0) += 1;
        }
        Ok(counts.values().all(|&n| n <= u32::from(self.c)))
    }

    pub fn matching_weight(&self, m: &Matching) -> Weight {
        m.iter().map(|id| self.edges[id].weight).sum()
    }

    /// Smallest upper-row index over the edges; 0 for an empty set.
    pub fn lambda_a<I: IntoIterator<Item = usize>>(&self, ids: I) -> usize {
        ids.into_iter()
            .map(|id| self.edges[id].a)
            .min()
            .unwrap_or(0)
    }

    /// Largest upper-row index over the edges; `n_a + 1` for an empty set.
    pub fn gamma_a<I: IntoIterator<Item = usize>>(&self, ids: I) -> usize {
        ids.into_iter()
            .map(|id| self.edges[id].a)
            .max()
            .unwrap_or(self.n_a + 1)
    }

    /// Smallest lower-row index over the edges; 0 for an empty set.
    pub fn lambda_b<I: IntoIterator<Item = usize>>(&self, ids: I) -> usize {
        ids.into_iter()
            .map(|id| self.edges[id].b)
            .min()
            .unwrap_or(0)
    }

    /// Largest lower-row index over the edges; `n_b + 1` for an empty set.
    pub fn gamma_b<I: IntoIterator<Item = usize>>(&self, ids: I) -> usize {
        ids.into_iter()
            .map(|id| self.edges[id].b)
            .max()
            .unwrap_or(self.n_b + 1)
    }
}

/// A feasible answer: the matching, its exact weight, and the crossing
/// pairs it realizes, all recomputed from scratch at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    matching: Matching,
    weight: Weight,
    realized: BTreeSet<(usize, usize)>,
}

impl Solution {
    pub fn compute(inst: &Instance, matching: Matching) -> Result<Solution, SolutionError> {
        if !inst.is_c_cpe(&matching)? {
            return Err(SolutionError::NotCpe { c: inst.c() });
        }
        let weight = inst.matching_weight(&matching);
        let realized = inst.realized_crossings(&matching);
        Ok(Solution {
            matching,
            weight,
            realized,
        })
    }

    pub fn matching(&self) -> &Matching {
        &self.matching
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn realized_crossings(&self) -> &BTreeSet<(usize, usize)> {
        &self.realized
    }
}
