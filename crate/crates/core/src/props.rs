//! Predicates on finite distributive lattices built from the graph on the
//! maximal join-irreducibles.
//!
//! Two maximal join-irreducibles `a ≠ b` are adjacent when some
//! join-irreducible lies below both, or, under
//! [`EdgeReading::CommonLowerCover`], when they share a lower cover inside
//! `J(D)`. For an element `x` let `H(x)` be the maximal join-irreducibles
//! below `x`; most predicates look at the graph induced on `H(x)`.
//!
//! The two readings really differ: `Id(P)` for `P = {z<w<a, w<b, z<c}` has
//! Two-cover and a cyclic top under the first, and no cyclic element under
//! the second.

use std::cell::RefCell;
use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::bits::first_common;
use crate::order::{self, Lattice};
use crate::report::{CircleWitness, Decomposition, PropertyReport, Witness};
use crate::structures::{bipartition, bipartition_report, BipartiteMode, GraphView, StructureError};

/// Exhaustive decomposition search is refused above this many maximal
/// join-irreducibles under a cyclic element.
pub const FALLBACK_LIMIT: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PropsError {
    #[error("the lattice is not distributive")]
    NotDistributive,
    #[error("element {0} out of range")]
    OutOfRange(usize),
    #[error("the Two-cover property fails at element {0}")]
    TwoCoverViolated(usize),
    #[error("{0} maximal join-irreducibles exceed the exhaustive search limit")]
    TooLarge(usize),
}

/// The E-graph on the maximal join-irreducibles. Vertices are positions
/// `0..k`; `vertices()[i]` is the lattice element at position `i`.
#[derive(Clone, Debug)]
pub struct MaxJirGraph {
    vertices: Vec<usize>,
    adj: Vec<Vec<usize>>,
    matrix: Vec<FixedBitSet>,
}

impl MaxJirGraph {
    fn from_edges(vertices: Vec<usize>, edge: impl Fn(usize, usize) -> bool) -> Self {
        let k = vertices.len();
        let mut adj = vec![Vec::new(); k];
        let mut matrix = vec![FixedBitSet::with_capacity(k); k];
        for i in 0..k {
            for j in i + 1..k {
                if edge(i, j) {
                    adj[i].push(j);
                    adj[j].push(i);
                    matrix[i].insert(j);
                    matrix[j].insert(i);
                }
            }
        }
        MaxJirGraph {
            vertices,
            adj,
            matrix,
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.matrix[i].contains(j)
    }

    /// Edges as pairs of lattice elements.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.vertices.len() {
            for &j in &self.adj[i] {
                if i < j {
                    out.push((self.vertices[i], self.vertices[j]));
                }
            }
        }
        out
    }

    /// Adjacency lists of the subgraph spanned by `positions`, reindexed.
    pub fn spanned(&self, positions: &[usize]) -> Vec<Vec<usize>> {
        positions
            .iter()
            .map(|&p| {
                positions
                    .iter()
                    .enumerate()
                    .filter(|&(_, &q)| self.has_edge(p, q))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect()
    }

    pub fn to_graph_view(&self) -> Result<GraphView, StructureError> {
        let mut edges = Vec::new();
        for i in 0..self.vertices.len() {
            for &j in &self.adj[i] {
                if i < j {
                    edges.push((i, j));
                }
            }
        }
        GraphView::from_edges(self.vertices.len().max(1), &edges)
    }
}

/// Cached data for one distributive lattice.
pub struct Analysis<'a> {
    lattice: &'a Lattice,
    jir: Vec<usize>,
    jir_mask: FixedBitSet,
    max_mask: FixedBitSet,
    graph: MaxJirGraph,
    reading: EdgeReading,
    jir_covers: HashMap<usize, Vec<usize>>,
    vw_cache: RefCell<HashMap<usize, bool>>,
}

/// How two maximal join-irreducibles are declared adjacent. The first is
/// the default everywhere; the second is the cover-based one, under which
/// Two-cover forces a bipartite E-graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeReading {
    /// some join-irreducible lies below both
    #[default]
    CommonLowerBound,
    /// they share a lower cover inside `J(D)`
    CommonLowerCover,
}

impl EdgeReading {
    pub fn name(self) -> &'static str {
        match self {
            EdgeReading::CommonLowerBound => "lower-bound",
            EdgeReading::CommonLowerCover => "lower-cover",
        }
    }

    pub fn other(self) -> EdgeReading {
        match self {
            EdgeReading::CommonLowerBound => EdgeReading::CommonLowerCover,
            EdgeReading::CommonLowerCover => EdgeReading::CommonLowerBound,
        }
    }
}

impl std::str::FromStr for EdgeReading {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lower-bound" => Ok(EdgeReading::CommonLowerBound),
            "lower-cover" => Ok(EdgeReading::CommonLowerCover),
            _ => Err(format!("unknown reading {s:?} (lower-bound or lower-cover)")),
        }
    }
}

impl<'a> Analysis<'a> {
    pub fn new(lattice: &'a Lattice) -> Result<Self, PropsError> {
        Self::with_reading(lattice, EdgeReading::default())
    }

    /// Builds the E-graph, and everything derived from it, under `reading`.
    pub fn with_reading(lattice: &'a Lattice, reading: EdgeReading) -> Result<Self, PropsError> {
        if !order::is_distributive(lattice) {
            return Err(PropsError::NotDistributive);
        }
        let n = lattice.size();
        let jir = order::join_irreducible_elements(lattice);
        let mut jir_mask = FixedBitSet::with_capacity(n);
        for &j in &jir {
            jir_mask.insert(j);
        }
        let poset = lattice.poset();
        let max: Vec<usize> = jir
            .iter()
            .copied()
            .filter(|&j| poset.up_set(j).intersection_count(&jir_mask) == 1)
            .collect();
        let mut max_mask = FixedBitSet::with_capacity(n);
        for &m in &max {
            max_mask.insert(m);
        }
        // covers of each join-irreducible inside J
        let mut jir_covers = HashMap::new();
        for &j in &jir {
            let mut above: Vec<usize> = poset
                .up_set(j)
                .ones()
                .filter(|&z| z != j && jir_mask.contains(z))
                .collect();
            above.sort_by_key(|&z| poset.down_set(z).count_ones(..));
            let mut covers: Vec<usize> = Vec::new();
            for z in above {
                if covers.iter().all(|&c| !poset.leq(c, z)) {
                    covers.push(z);
                }
            }
            covers.sort_unstable();
            jir_covers.insert(j, covers);
        }
        let graph = match reading {
            EdgeReading::CommonLowerBound => MaxJirGraph::from_edges(max.clone(), |i, j| {
                poset
                    .down_set(max[i])
                    .intersection(poset.down_set(max[j]))
                    .any(|z| jir_mask.contains(z))
            }),
            EdgeReading::CommonLowerCover => {
                let lower: Vec<Vec<usize>> = max
                    .iter()
                    .map(|&m| jir.iter().copied().filter(|j| jir_covers[j].contains(&m)).collect())
                    .collect();
                MaxJirGraph::from_edges(max.clone(), |i, j| lower[i].iter().any(|c| lower[j].contains(c)))
            }
        };
        Ok(Analysis {
            lattice,
            jir,
            jir_mask,
            max_mask,
            graph,
            reading,
            jir_covers,
            vw_cache: RefCell::new(HashMap::new()),
        })
    }

    pub fn lattice(&self) -> &Lattice {
        self.lattice
    }

    pub fn join_irreducibles(&self) -> &[usize] {
        &self.jir
    }

    pub fn max_join_irreducibles(&self) -> &[usize] {
        self.graph.vertices()
    }

    pub fn graph(&self) -> &MaxJirGraph {
        &self.graph
    }

    fn check(&self, x: usize) -> Result<(), PropsError> {
        if x < self.lattice.size() {
            Ok(())
        } else {
            Err(PropsError::OutOfRange(x))
        }
    }

    /// Positions (in the E-graph) of the maximal join-irreducibles below `x`.
    pub fn below(&self, x: usize) -> Vec<usize> {
        let down = self.lattice.poset().down_set(x);
        self.graph
            .vertices()
            .iter()
            .enumerate()
            .filter(|&(_, &m)| down.contains(m))
            .map(|(i, _)| i)
            .collect()
    }

    fn elements(&self, positions: &[usize]) -> Vec<usize> {
        positions.iter().map(|&p| self.graph.vertices[p]).collect()
    }

    fn join_of(&self, positions: &[usize]) -> usize {
        self.lattice.join_all(positions.iter().map(|&p| self.graph.vertices[p]))
    }

    /// Join-irreducibles with more than two covers in `J(D)`.
    pub fn two_cover_violation(&self) -> Option<(usize, Vec<usize>)> {
        self.jir.iter().find_map(|&j| {
            let c = &self.jir_covers[&j];
            (c.len() > 2).then(|| (j, c.clone()))
        })
    }

    pub fn has_two_cover(&self) -> bool {
        self.two_cover_violation().is_none()
    }

    pub fn two_cover_report(&self) -> PropertyReport {
        match self.two_cover_violation() {
            None => PropertyReport::new("two_cover", true, None),
            Some((element, covers)) => PropertyReport::new(
                "two_cover",
                false,
                Some(Witness::ExcessCovers { element, covers }),
            ),
        }
    }

    /// The E-graph under `reading`; the cached one when it matches.
    pub fn bmep_graph(&self, reading: EdgeReading) -> MaxJirGraph {
        if reading == self.reading {
            self.graph.clone()
        } else {
            Analysis::with_reading(self.lattice, reading)
                .expect("already known distributive")
                .graph
        }
    }

    pub fn reading(&self) -> EdgeReading {
        self.reading
    }

    pub fn bmep_report(&self, mode: BipartiteMode, reading: EdgeReading) -> PropertyReport {
        let g = self.bmep_graph(reading);
        bipartition_report("bmep", &g.adj, mode, |p| g.vertices[p])
    }

    pub fn has_bmep(&self) -> bool {
        bipartition(&self.graph.adj, BipartiteMode::Standard).is_bipartite()
    }

    /// V-sets of `x`: edges of the E-graph spanned by `H(x)`, as element pairs.
    pub fn v_sets(&self, x: usize) -> Result<Vec<[usize; 2]>, PropsError> {
        self.check(x)?;
        let h = self.below(x);
        let mut out = Vec::new();
        for (i, &p) in h.iter().enumerate() {
            for &q in &h[i + 1..] {
                if self.graph.has_edge(p, q) {
                    out.push([self.graph.vertices[p], self.graph.vertices[q]]);
                }
            }
        }
        Ok(out)
    }

    /// W-sets of `x`: 4-subsets of `H(x)` spanning a path, listed in path
    /// order with the smaller endpoint first.
    pub fn w_sets(&self, x: usize) -> Result<Vec<[usize; 4]>, PropsError> {
        self.check(x)?;
        let h = self.below(x);
        Ok(self
            .w_paths(&h)
            .into_iter()
            .map(|p| p.map(|i| self.graph.vertices[i]))
            .collect())
    }

    fn w_paths(&self, h: &[usize]) -> Vec<[usize; 4]> {
        let k = h.len();
        let mut out = Vec::new();
        if k < 4 {
            return out;
        }
        let g = &self.graph;
        for a in 0..k {
            for b in a + 1..k {
                for c in b + 1..k {
                    for d in c + 1..k {
                        let s = [h[a], h[b], h[c], h[d]];
                        let deg: Vec<usize> = s
                            .iter()
                            .map(|&u| s.iter().filter(|&&v| g.has_edge(u, v)).count())
                            .collect();
                        if deg.iter().sum::<usize>() != 6 || deg.iter().filter(|&&e| e == 1).count() != 2 {
                            continue;
                        }
                        // 3 edges with degrees {1,1,2,2}: a path; walk it
                        let start = (0..4).find(|&i| deg[i] == 1).expect("path endpoint");
                        let mut path = [s[start]; 4];
                        let mut prev = usize::MAX;
                        for step in 1..4 {
                            let cur = path[step - 1];
                            let next = s
                                .iter()
                                .copied()
                                .find(|&v| v != prev && g.has_edge(cur, v))
                                .expect("path continues");
                            prev = cur;
                            path[step] = next;
                        }
                        if g.vertices[path[0]] > g.vertices[path[3]] {
                            path.reverse();
                        }
                        out.push(path);
                    }
                }
            }
        }
        out
    }

    /// `x ≠ 0`, `x = ⋁H(x)`, and each `y ∈ H(x)` lies in exactly one V-set and
    /// no W-set, or in exactly one W-set.
    pub fn vw_report(&self, x: usize) -> Result<PropertyReport, PropsError> {
        self.check(x)?;
        let fail = |element: usize, reason: &str| {
            Ok(PropertyReport::new(
                "vw",
                false,
                Some(Witness::Element {
                    element,
                    reason: reason.to_string(),
                }),
            ))
        };
        if x == self.lattice.bottom() {
            return fail(x, "zero");
        }
        let h = self.below(x);
        if self.join_of(&h) != x {
            return fail(x, "not the join of its maximal join-irreducibles");
        }
        let paths = self.w_paths(&h);
        let mut in_w: HashMap<usize, usize> = HashMap::new();
        for p in &paths {
            for &v in p {
                *in_w.entry(v).or_default() += 1;
            }
        }
        for &y in &h {
            let nv = h.iter().filter(|&&q| self.graph.has_edge(y, q)).count();
            let nw = in_w.get(&y).copied().unwrap_or(0);
            if !((nv == 1 && nw == 0) || nw == 1) {
                let reason = format!("in {nv} V-sets and {nw} W-sets");
                return fail(self.graph.vertices[y], &reason);
            }
        }
        let v_sets = h
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| h[i + 1..].iter().map(move |&q| (p, q)))
            .filter(|&(p, q)| self.graph.has_edge(p, q) && !in_w.contains_key(&p))
            .map(|(p, q)| self.elements(&[p, q]))
            .collect();
        let w_sets = paths.iter().map(|p| self.elements(p)).collect();
        Ok(PropertyReport::new("vw", true, Some(Witness::VwSets { v_sets, w_sets })))
    }

    pub fn is_vw(&self, x: usize) -> bool {
        if let Some(&v) = self.vw_cache.borrow().get(&x) {
            return v;
        }
        let v = self.vw_report(x).map(|r| r.verdict).unwrap_or(false);
        self.vw_cache.borrow_mut().insert(x, v);
        v
    }

    /// Circle order of the positions `h` if they span one cycle of length >= 3.
    fn circle(&self, h: &[usize]) -> Option<Vec<usize>> {
        if h.len() < 3 {
            return None;
        }
        let adj = self.graph.spanned(h);
        if adj.iter().any(|a| a.len() != 2) {
            return None;
        }
        let mut order = vec![0usize];
        let mut prev = usize::MAX;
        loop {
            let cur = *order.last().unwrap();
            let next = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
            if next == 0 {
                break;
            }
            prev = cur;
            order.push(next);
        }
        (order.len() == h.len()).then(|| order.into_iter().map(|i| h[i]).collect())
    }

    /// The spanned circle of a cyclic element, as lattice elements.
    pub fn cyclic_circle(&self, x: usize) -> Result<Option<Vec<usize>>, PropsError> {
        self.check(x)?;
        if let Some((j, _)) = self.two_cover_violation() {
            return Err(PropsError::TwoCoverViolated(j));
        }
        let h = self.below(x);
        if h.len() < 3 || self.join_of(&h) != x {
            return Ok(None);
        }
        Ok(self.circle(&h).map(|c| self.elements(&c)))
    }

    pub fn cyclic_elements(&self) -> Result<Vec<CircleWitness>, PropsError> {
        let mut out = Vec::new();
        for x in 0..self.lattice.size() {
            if let Some(circle) = self.cyclic_circle(x)? {
                out.push(CircleWitness { element: x, circle });
            }
        }
        Ok(out)
    }

    /// `H(x)` nonempty, `x = ⋁H(x)`, and every vertex of the spanned graph has degree 2.
    pub fn is_multicyclic(&self, x: usize) -> Result<bool, PropsError> {
        self.check(x)?;
        let h = self.below(x);
        if h.is_empty() || self.join_of(&h) != x {
            return Ok(false);
        }
        Ok(self.graph.spanned(&h).iter().all(|a| a.len() == 2))
    }

    /// `y`, `z` are VW-elements with `y ∨ z = x` and no maximal join-irreducible below both.
    pub fn is_decomposition(&self, x: usize, y: usize, z: usize) -> bool {
        let n = self.lattice.size();
        if x >= n || y >= n || z >= n || self.lattice.join(y, z) != x {
            return false;
        }
        let m = self.lattice.meet(y, z);
        let disjoint = first_common(self.lattice.poset().down_set(m), &self.max_mask).is_none();
        disjoint && self.is_vw(y) && self.is_vw(z)
    }

    /// The alternating split of an even circle: pairs of consecutive
    /// elements go alternately to the two sides; when the length is 2 mod 4
    /// the first side starts with four.
    pub fn alternating_split(circle: &[usize]) -> Option<(Vec<usize>, Vec<usize>)> {
        let n = circle.len();
        if n % 2 == 1 || n < 4 {
            return None;
        }
        let in_u = |i: usize| {
            if n % 4 == 0 {
                i % 4 < 2
            } else {
                i < 4 || (i >= 6 && (i - 6) % 4 < 2)
            }
        };
        let (u, v): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| in_u(i));
        Some((
            u.into_iter().map(|i| circle[i]).collect(),
            v.into_iter().map(|i| circle[i]).collect(),
        ))
    }

    /// Finds `x = y ∨ z` for a cyclic `x`; alternating split first, then all splits.
    pub fn dcep_witness(&self, x: usize) -> Result<Option<Decomposition>, PropsError> {
        let Some(circle) = self.cyclic_circle(x)? else {
            return Err(PropsError::OutOfRange(x));
        };
        if let Some((u, v)) = Self::alternating_split(&circle) {
            let (y, z) = (self.lattice.join_all(u), self.lattice.join_all(v));
            if self.is_decomposition(x, y, z) {
                return Ok(Some(Decomposition {
                    cyclic: x,
                    y,
                    z,
                    fallback: false,
                }));
            }
        }
        let k = circle.len();
        if k > FALLBACK_LIMIT {
            return Err(PropsError::TooLarge(k));
        }
        // circle[0] always on the y side; both sides nonempty
        for mask in 1u32..(1 << (k - 1)) {
            let full = (mask << 1) | 1;
            if full == (1 << k) - 1 {
                continue;
            }
            let pick = |side: u32| {
                self.lattice.join_all(
                    (0..k)
                        .filter(|&i| (full >> i) & 1 == side)
                        .map(|i| circle[i]),
                )
            };
            let (y, z) = (pick(1), pick(0));
            if self.is_decomposition(x, y, z) {
                return Ok(Some(Decomposition {
                    cyclic: x,
                    y,
                    z,
                    fallback: true,
                }));
            }
        }
        Ok(None)
    }

    pub fn dcep_report(&self) -> Result<PropertyReport, PropsError> {
        let mut items = Vec::new();
        for c in self.cyclic_elements()? {
            match self.dcep_witness(c.element)? {
                Some(d) => items.push(d),
                None => {
                    return Ok(PropertyReport::new(
                        "dcep",
                        false,
                        Some(Witness::Indecomposable {
                            cyclic: c.element,
                            circle: c.circle,
                        }),
                    ))
                }
            }
        }
        Ok(PropertyReport::new("dcep", true, Some(Witness::Decompositions { items })))
    }

    pub fn cyclic_report(&self) -> Result<PropertyReport, PropsError> {
        let items = self.cyclic_elements()?;
        Ok(PropertyReport::new(
            "cyclic",
            !items.is_empty(),
            Some(Witness::Circles { items }),
        ))
    }

    pub fn multicyclic_report(&self) -> Result<PropertyReport, PropsError> {
        let elements: Vec<usize> = (0..self.lattice.size())
            .filter(|&x| self.is_multicyclic(x).unwrap_or(false))
            .collect();
        Ok(PropertyReport::new(
            "multicyclic",
            !elements.is_empty(),
            Some(Witness::Antichain { elements }),
        ))
    }

    /// Independently re-validates a report produced for this lattice.
    pub fn recheck(&self, report: &PropertyReport) -> Result<bool, PropsError> {
        let n = self.lattice.size();
        let is_max = |e: usize| e < n && self.max_mask.contains(e);
        Ok(match (report.property.as_str(), report.verdict, &report.witness) {
            ("two_cover", true, None) => self.has_two_cover(),
            ("two_cover", false, Some(Witness::ExcessCovers { element, covers })) => {
                let e = *element;
                e < n
                    && self.jir_mask.contains(e)
                    && covers.len() > 2
                    && covers.iter().all(|&c| {
                        c < n
                            && self.jir_mask.contains(c)
                            && self.lattice.poset().lt(e, c)
                            && !self.jir.iter().any(|&z| {
                                z != e && z != c && self.lattice.leq(e, z) && self.lattice.leq(z, c)
                            })
                    })
            }
            ("bmep", true, Some(Witness::TwoColoring { left, right })) => {
                let mut all: Vec<usize> = left.iter().chain(right.iter()).copied().collect();
                all.sort_unstable();
                all == self.graph.vertices
                    && self.graph.edges().iter().all(|&(a, b)| left.contains(&a) != left.contains(&b))
            }
            ("bmep", false, Some(Witness::OddCircle { circle })) => {
                let pos: Option<Vec<usize>> = circle
                    .iter()
                    .map(|&e| self.graph.vertices.iter().position(|&v| v == e))
                    .collect();
                match pos {
                    Some(p) if circle.len() % 2 == 1 => {
                        let k = p.len();
                        k >= 3
                            && (0..k).all(|i| {
                                (i + 1..k).all(|j| {
                                    let consecutive = j == i + 1 || (i == 0 && j == k - 1);
                                    self.graph.has_edge(p[i], p[j]) == consecutive
                                })
                            })
                    }
                    _ => false,
                }
            }
            ("bmep", false, Some(Witness::TooSmall { vertices })) => {
                vertices.len() < 2 && vertices.iter().all(|&v| is_max(v))
            }
            ("dcep", true, Some(Witness::Decompositions { items })) => {
                let cyclic: Vec<usize> = self.cyclic_elements()?.iter().map(|c| c.element).collect();
                let listed: Vec<usize> = items.iter().map(|d| d.cyclic).collect();
                cyclic == listed && items.iter().all(|d| self.is_decomposition(d.cyclic, d.y, d.z))
            }
            ("dcep", false, Some(Witness::Indecomposable { cyclic, .. })) => {
                self.cyclic_circle(*cyclic)?.is_some() && self.dcep_witness(*cyclic)?.is_none()
            }
            ("cyclic", _, Some(Witness::Circles { items })) => {
                let found = self.cyclic_elements()?;
                found.len() == items.len()
                    && found.iter().zip(items).all(|(a, b)| a.element == b.element)
                    && report.verdict == !items.is_empty()
            }
            ("multicyclic", _, Some(Witness::Antichain { elements })) => {
                elements.iter().all(|&x| self.is_multicyclic(x).unwrap_or(false))
                    && report.verdict == !elements.is_empty()
            }
            _ => false,
        })
    }
}

pub fn max_jir_graph(d: &Lattice) -> Result<MaxJirGraph, PropsError> {
    Ok(Analysis::new(d)?.graph)
}

pub fn has_two_cover(d: &Lattice) -> Result<PropertyReport, PropsError> {
    Ok(Analysis::new(d)?.two_cover_report())
}

pub fn has_bmep(d: &Lattice) -> Result<PropertyReport, PropsError> {
    Ok(Analysis::new(d)?.bmep_report(BipartiteMode::Standard, EdgeReading::CommonLowerBound))
}

pub fn v_sets(d: &Lattice, x: usize) -> Result<Vec<[usize; 2]>, PropsError> {
    Analysis::new(d)?.v_sets(x)
}

pub fn w_sets(d: &Lattice, x: usize) -> Result<Vec<[usize; 4]>, PropsError> {
    Analysis::new(d)?.w_sets(x)
}

pub fn is_vw_element(d: &Lattice, x: usize) -> Result<PropertyReport, PropsError> {
    Analysis::new(d)?.vw_report(x)
}

pub fn cyclic_elements(d: &Lattice) -> Result<Vec<usize>, PropsError> {
    Ok(Analysis::new(d)?.cyclic_elements()?.into_iter().map(|c| c.element).collect())
}

pub fn is_multicyclic(d: &Lattice, x: usize) -> Result<bool, PropsError> {
    Analysis::new(d)?.is_multicyclic(x)
}

pub fn has_dcep(d: &Lattice) -> Result<PropertyReport, PropsError> {
    Analysis::new(d)?.dcep_report()
}

pub fn dcep_witness(d: &Lattice, x: usize) -> Result<Option<(usize, usize)>, PropsError> {
    Ok(Analysis::new(d)?.dcep_witness(x)?.map(|w| (w.y, w.z)))
}
