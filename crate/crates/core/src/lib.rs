//! Computational toolkit for finite lattice theory and finite model theory.
//!
//! The crate is organised bottom-up:
//!
//! - [`structures`]: finite relational/algebraic structures, graphs, cyclic groups.
//! - [`folang`]: first-order formulas with equality; parser, evaluator and a
//!   library of named sentences.
//! - [`order`]: finite posets and lattices, down-set lattices, irreducibles,
//!   isomorphism testing.
//! - [`congruence`]: principal congruences, congruence lattices and the poset of
//!   join-irreducible congruences.
//! - [`slimsm`]: planar slim semimodular diagrams, 4-cells, trajectories and
//!   fork insertion.
//! - [`props`]: predicates on finite distributive lattices (Two-cover,
//!   bipartite maximal elements, VW-elements, cyclic elements, decomposability).
//! - [`enumverify`]: poset enumeration and exhaustive verification runs.

pub mod congruence;
pub mod enumverify;
pub mod folang;
pub mod order;
pub mod par;
pub mod props;
pub mod report;
pub mod slimsm;
pub mod structures;

mod bits;
mod dsu;

pub use order::{Lattice, Poset};
pub use report::{PropertyReport, Witness};
pub use structures::{FiniteStructure, GraphView, Signature};
