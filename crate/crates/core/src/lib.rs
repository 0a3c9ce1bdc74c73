//! Exact arithmetic, constructions and solvers for group edge irregularity
//! strength `es_g(G)`, integer edge irregularity strength `es(G)` and
//! harmonious order `har(G)` of graphs over arbitrary finite Abelian groups.
//!
//! - [`abelian`]: finite Abelian groups as direct sums of cyclic groups,
//!   with enumeration up to isomorphism, subgroups and coset transversals.
//! - [`graphs`]: simple graphs, digraphs, generators, degeneracy orderings
//!   and the four-set split partition.
//! - [`labeling`]: labelings, edge/arc weight tables, and the verifier every
//!   constructor and solver is checked against.
//! - [`constructors`]: the constructive procedures — forests with prescribed
//!   weights, bipartite coset labelings, greedy labelings along a degeneracy
//!   order, split and component compositions, and the DAG variant.
//! - [`solvers`]: exact `es`/`es_g`/`har` by budgeted backtracking with
//!   certificates and refutations, maximum S₂-sets, the parity obstruction,
//!   next primes, bound reports, and the conjecture sweep.

pub mod abelian;
mod bits;
pub mod constructors;
pub mod graphs;
pub mod labeling;
pub mod solvers;

pub use abelian::{enumerate_groups, AbelianGroup, GroupElement};
pub use graphs::{Digraph, FourSetPartition, Graph, Quadrant};
pub use labeling::{edge_weights, is_edge_irregular, is_injective, Labeling};
pub use solvers::{exact_es, exact_esg, exact_har, max_sidon, next_prime, Budget, Outcome};
