//! Verdicts with machine-checkable witnesses.

use serde::{Deserialize, Serialize};

/// A property verdict together with the evidence supporting it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub verdict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl PropertyReport {
    pub fn new(property: &str, verdict: bool, witness: Option<Witness>) -> Self {
        PropertyReport {
            property: property.to_string(),
            verdict,
            witness,
        }
    }
}

/// One `x = y ∨ z` split of a cyclic element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub cyclic: usize,
    pub y: usize,
    pub z: usize,
    /// true when the alternating pattern failed and exhaustive search was needed
    #[serde(default)]
    pub fallback: bool,
}

/// A cyclic element with its circle of maximal join-irreducibles, in cycle order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleWitness {
    pub element: usize,
    pub circle: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// proper 2-colouring of a graph
    TwoColoring { left: Vec<usize>, right: Vec<usize> },
    /// chord-free odd cycle, in cycle order
    OddCircle { circle: Vec<usize> },
    /// strict mode: graph too small to have two nonempty colour classes
    TooSmall { vertices: Vec<usize> },
    /// join-irreducible with more than two covers inside J
    ExcessCovers { element: usize, covers: Vec<usize> },
    /// for VW-elements: the V-sets and W-sets covering the maximal irreducibles below
    VwSets { v_sets: Vec<Vec<usize>>, w_sets: Vec<Vec<usize>> },
    /// element responsible for a negative verdict
    Element { element: usize, reason: String },
    Decompositions { items: Vec<Decomposition> },
    Indecomposable { cyclic: usize, circle: Vec<usize> },
    Circles { items: Vec<CircleWitness> },
    Antichain { elements: Vec<usize> },
    /// a triple refuting distributivity (median law) or semimodularity
    Triple { x: usize, y: usize, z: usize },
    /// the lattice is not distributive, so the predicate is undefined
    NotDistributive { x: usize, y: usize, z: usize },
}
