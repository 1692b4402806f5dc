//! Lattice congruences.
//!
//! `Con(L)` is built from the principal congruences of covering pairs. The
//! distinct ones are exactly the join-irreducible congruences; every
//! congruence is the join of the generators below it, so walking the
//! down-sets of the generator poset reaches all of `Con(L)`.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsu::Dsu;
use crate::order::{self, Lattice, OrderError, Poset, MAX_DOWNSET_LATTICE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("element {0} out of range")]
    OutOfRange(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("congruence lattice too large: {0}")]
    TooLarge(String),
}

impl From<OrderError> for CongruenceError {
    fn from(e: OrderError) -> Self {
        CongruenceError::TooLarge(e.to_string())
    }
}

/// A partition in canonical form: `reps[x]` is the least element of x's block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Congruence {
    reps: Vec<usize>,
}

impl Congruence {
    pub fn identity(n: usize) -> Self {
        Congruence {
            reps: (0..n).collect(),
        }
    }

    pub fn total(n: usize) -> Self {
        Congruence { reps: vec![0; n] }
    }

    /// Accepts any block labelling and canonicalises it.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut first: HashMap<usize, usize> = HashMap::new();
        let reps = labels
            .iter()
            .enumerate()
            .map(|(x, l)| *first.entry(*l).or_insert(x))
            .collect();
        Congruence { reps }
    }

    /// Requires canonical form.
    pub fn from_reps(reps: Vec<usize>) -> Result<Self, CongruenceError> {
        for (x, &r) in reps.iter().enumerate() {
            if r > x || reps[r] != r {
                return Err(CongruenceError::InvalidPartition(format!(
                    "entry {x} -> {r} is not canonical"
                )));
            }
        }
        Ok(Congruence { reps })
    }

    fn from_dsu(d: &mut Dsu) -> Self {
        Congruence {
            reps: d.canonical(),
        }
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn size(&self) -> usize {
        self.reps.len()
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.reps[x] == self.reps[y]
    }

    pub fn num_blocks(&self) -> usize {
        self.reps.iter().enumerate().filter(|&(x, &r)| x == r).count()
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut index = vec![usize::MAX; self.size()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (x, &r) in self.reps.iter().enumerate() {
            if index[r] == usize::MAX {
                index[r] = out.len();
                out.push(Vec::new());
            }
            out[index[r]].push(x);
        }
        out
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Congruence) -> bool {
        self.reps
            .iter()
            .enumerate()
            .all(|(x, &r)| other.reps[x] == other.reps[r])
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let labels: Vec<usize> = (0..self.size())
            .map(|x| self.reps[x] * self.size() + other.reps[x])
            .collect();
        Congruence::from_labels(&labels)
    }

    /// Transitive closure of the union. For congruences this is their join.
    pub fn union_closure(&self, other: &Congruence) -> Congruence {
        let mut d = Dsu::new(self.size());
        for c in [self, other] {
            for (x, &r) in c.reps.iter().enumerate() {
                d.union(x, r);
            }
        }
        Congruence::from_dsu(&mut d)
    }

    /// Compatibility with join and meet.
    pub fn is_compatible(&self, l: &Lattice) -> bool {
        let n = l.size();
        (0..n).all(|x| {
            let r = self.reps[x];
            r == x
                || (0..n).all(|z| {
                    self.related(l.join(x, z), l.join(r, z)) && self.related(l.meet(x, z), l.meet(r, z))
                })
        })
    }
}

/// Closes `d` under compatibility, starting from the merged pairs in `pending`.
fn close(l: &Lattice, d: &mut Dsu, mut pending: Vec<(usize, usize)>) {
    let n = l.size();
    while let Some((x, y)) = pending.pop() {
        for z in 0..n {
            for (p, q) in [(l.join(x, z), l.join(y, z)), (l.meet(x, z), l.meet(y, z))] {
                if d.union(p, q) {
                    pending.push((p, q));
                }
            }
        }
    }
}

/// The least congruence collapsing `a` and `b`.
pub fn principal_congruence(l: &Lattice, a: usize, b: usize) -> Result<Congruence, CongruenceError> {
    let n = l.size();
    for x in [a, b] {
        if x >= n {
            return Err(CongruenceError::OutOfRange(x));
        }
    }
    let mut d = Dsu::new(n);
    let mut pending = Vec::new();
    if d.union(a, b) {
        pending.push((a, b));
    }
    close(l, &mut d, pending);
    Ok(Congruence::from_dsu(&mut d))
}

/// Least congruence containing both partitions (fixpoint closure).
pub fn join(l: &Lattice, alpha: &Congruence, beta: &Congruence) -> Congruence {
    let mut d = Dsu::new(l.size());
    let mut pending = Vec::new();
    for c in [alpha, beta] {
        for (x, &r) in c.reps.iter().enumerate() {
            if d.union(x, r) {
                pending.push((x, r));
            }
        }
    }
    close(l, &mut d, pending);
    Congruence::from_dsu(&mut d)
}

/// The join-irreducible congruences with the covering pair that first produced each.
#[derive(Clone, Debug)]
pub struct JirCongruences {
    pub congruences: Vec<Congruence>,
    pub generators: Vec<(usize, usize)>,
    pub poset: Option<Poset>,
}

pub fn jir_congruences(l: &Lattice) -> JirCongruences {
    let mut seen: HashMap<Congruence, usize> = HashMap::new();
    let mut congruences = Vec::new();
    let mut generators = Vec::new();
    for (a, b) in l.poset().cover_pairs() {
        let c = principal_congruence(l, a, b).expect("cover pairs are in range");
        if !seen.contains_key(&c) {
            seen.insert(c.clone(), congruences.len());
            congruences.push(c);
            generators.push((a, b));
        }
    }
    let poset = if congruences.is_empty() {
        None
    } else {
        Some(
            Poset::from_leq(congruences.len(), |i, j| congruences[i].refines(&congruences[j]))
                .expect("refinement is a partial order on distinct partitions"),
        )
    };
    JirCongruences {
        congruences,
        generators,
        poset,
    }
}

/// `J(Con L)` directly from the covering-pair congruences. `None` for the
/// one-element lattice, whose congruence lattice has no join-irreducibles.
pub fn jir_congruence_poset(l: &Lattice) -> Option<Poset> {
    jir_congruences(l).poset
}

/// `Con(L)` as a lattice, with the partition each element stands for.
#[derive(Clone, Debug)]
pub struct ConLattice {
    pub lattice: Lattice,
    pub congruences: Vec<Congruence>,
}

impl ConLattice {
    pub fn index_of(&self, c: &Congruence) -> Option<usize> {
        self.congruences.iter().position(|d| d == c)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.lattice.to_json();
        v["blocks"] = serde_json::to_value(
            self.congruences.iter().map(|c| c.blocks()).collect::<Vec<_>>(),
        )
        .expect("blocks serialise");
        v
    }
}

pub fn congruence_lattice(l: &Lattice) -> Result<ConLattice, CongruenceError> {
    let n = l.size();
    let jc = jir_congruences(l);
    let Some(gen_poset) = &jc.poset else {
        let lattice = order::chain(1)?;
        return Ok(ConLattice {
            lattice,
            congruences: vec![Congruence::identity(n)],
        });
    };
    let gens = &jc.congruences;
    let sets = order::down_sets(gen_poset)?;

    let mut index: HashMap<Congruence, usize> = HashMap::new();
    let mut congruences: Vec<Congruence> = Vec::new();
    for s in &sets {
        let mut d = Dsu::new(n);
        for g in s.ones() {
            for (x, &r) in gens[g].reps.iter().enumerate() {
                d.union(x, r);
            }
        }
        let c = Congruence::from_dsu(&mut d);
        if !index.contains_key(&c) {
            if congruences.len() >= MAX_DOWNSET_LATTICE {
                return Err(CongruenceError::TooLarge(format!("more than {MAX_DOWNSET_LATTICE} congruences")));
            }
            index.insert(c.clone(), congruences.len());
            congruences.push(c);
        }
    }

    // M(α): generators below α. α ≤ β iff M(α) ⊆ M(β), since α = ⋁M(α).
    let k = gens.len();
    let masks: Vec<FixedBitSet> = congruences
        .iter()
        .map(|c| {
            let mut m = FixedBitSet::with_capacity(k);
            for (j, &(a, b)) in jc.generators.iter().enumerate() {
                if c.related(a, b) {
                    m.insert(j);
                }
            }
            m
        })
        .collect();
    let mut order_ix: Vec<usize> = (0..congruences.len()).collect();
    order_ix.sort_by(|&x, &y| {
        masks[x]
            .count_ones(..)
            .cmp(&masks[y].count_ones(..))
            .then_with(|| congruences[x].cmp(&congruences[y]))
    });
    let congruences: Vec<Congruence> = order_ix.iter().map(|&i| congruences[i].clone()).collect();
    let masks: Vec<FixedBitSet> = order_ix.iter().map(|&i| masks[i].clone()).collect();
    let m = congruences.len();
    let mut down = vec![FixedBitSet::with_capacity(m); m];
    for (b, row) in down.iter_mut().enumerate() {
        for a in 0..=b {
            if masks[a].is_subset(&masks[b]) {
                row.insert(a);
            }
        }
    }
    let lattice = Lattice::unchecked(Poset::from_down_rows(down));
    Ok(ConLattice {
        lattice,
        congruences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{chain, grid, is_distributive, is_isomorphic, join_irreducibles};

    #[test]
    fn principal_examples() {
        let c3 = chain(3).unwrap();
        assert_eq!(principal_congruence(&c3, 1, 1).unwrap(), Congruence::identity(3));
        let c = principal_congruence(&c3, 1, 2).unwrap();
        assert_eq!(c.blocks(), vec![vec![0], vec![1, 2]]);
        // Boolean square: 0=(0,0), a=(0,1)=1, b=(1,0)=2, 1=(1,1)=3
        let g = grid(1).unwrap();
        let c = principal_congruence(&g, 0, 1).unwrap();
        assert_eq!(c.blocks(), vec![vec![0, 1], vec![2, 3]]);
        assert!(principal_congruence(&g, 0, 7).is_err());
    }

    #[test]
    fn congruence_lattice_sizes() {
        for m in 1..=4 {
            let con = congruence_lattice(&chain(m + 1).unwrap()).unwrap();
            assert_eq!(con.lattice.size(), 1 << m);
            let j = jir_congruence_poset(&chain(m + 1).unwrap()).unwrap();
            assert_eq!(j.cover_pairs().len(), 0);
            assert_eq!(j.size(), m);
        }
        for k in 1..=3 {
            let g = grid(k).unwrap();
            let con = congruence_lattice(&g).unwrap();
            assert_eq!(con.lattice.size(), 1 << (2 * k));
            let j = jir_congruence_poset(&g).unwrap();
            assert_eq!((j.size(), j.cover_pairs().len()), (2 * k, 0));
        }
        let one = congruence_lattice(&chain(1).unwrap()).unwrap();
        assert_eq!(one.lattice.size(), 1);
    }

    #[test]
    fn bounds_and_compatibility() {
        let l = grid(2).unwrap();
        let con = congruence_lattice(&l).unwrap();
        let n = l.size();
        assert_eq!(con.congruences[con.lattice.bottom()], Congruence::identity(n));
        assert_eq!(con.congruences[con.lattice.top()], Congruence::total(n));
        assert!(con.congruences.iter().all(|c| c.is_compatible(&l)));
        assert!(is_distributive(&con.lattice));
        let cs = &con.congruences;
        for a in 0..cs.len() {
            for b in 0..cs.len() {
                let j = con.lattice.join(a, b);
                let m = con.lattice.meet(a, b);
                assert_eq!(cs[j], join(&l, &cs[a], &cs[b]));
                assert_eq!(cs[m], cs[a].meet(&cs[b]));
            }
        }
    }

    #[test]
    fn jir_poset_matches_irreducibles_of_con() {
        let n5 = Lattice::from_poset(
            Poset::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap(),
        )
        .unwrap();
        for l in [grid(2).unwrap(), chain(4).unwrap(), n5] {
            let con = congruence_lattice(&l).unwrap();
            let a = jir_congruence_poset(&l).unwrap();
            let b = join_irreducibles(&con.lattice).unwrap().poset;
            assert!(is_isomorphic(&a, &b).is_some());
        }
    }

    #[test]
    fn canonical_forms() {
        assert!(Congruence::from_reps(vec![0, 0, 1]).is_err());
        let c = Congruence::from_labels(&[7, 3, 7, 3]);
        assert_eq!(c.reps(), &[0, 1, 0, 1]);
        assert_eq!(c.num_blocks(), 2);
        assert!(Congruence::identity(4).refines(&c) && c.refines(&Congruence::total(4)));
    }
}
