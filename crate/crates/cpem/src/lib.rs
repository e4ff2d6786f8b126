//! Exact solver for maximum-weight matchings with a bounded number of
//! admissible edge crossings per edge in 2-layered bipartite drawings.
//!
//! Given a bipartite graph drawn on two horizontal rows, positive edge
//! weights, a set of crossing pairs that are allowed to appear, and a
//! budget `c` in {0, 1, 2}, [`reduce::solve`] finds a maximum-weight
//! matching in which every realized crossing is admissible and no edge
//! crosses more than `c` others. The solver reduces the problem to
//! selecting a maximum-weight set of pairwise non-contacting trapezoids
//! ([`ntsp`]), which a single left-to-right sweep solves in
//! near-linear time. Two independent reference solvers live in
//! [`oracle`] for verification.

pub mod io;
pub mod model;
pub mod ntsp;
pub mod oracle;
pub mod reduce;

pub use model::{Instance, Matching, Solution, Weight};
