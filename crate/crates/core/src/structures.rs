//! Finite structures over explicit signatures, graphs and cyclic groups.

use std::collections::{BTreeMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::{PropertyReport, Witness};

pub const ORDER_RELATION: &str = "leq";
pub const JOIN: &str = "join";
pub const MEET: &str = "meet";
pub const EDGE_RELATION: &str = "E";
pub const GROUP_OP: &str = "+";

// tables beyond this many cells are refused rather than allocated
const MAX_TABLE_CELLS: usize = 1 << 28;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("malformed structure JSON: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: &str, arity: usize) -> Self {
        Symbol {
            name: name.to_string(),
            arity,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Signature {
    pub relations: Vec<Symbol>,
    pub functions: Vec<Symbol>,
}

impl Signature {
    pub fn new(relations: Vec<Symbol>, functions: Vec<Symbol>) -> Result<Self, StructureError> {
        let mut seen = HashSet::new();
        for s in relations.iter().chain(functions.iter()) {
            if s.name.is_empty() {
                return Err(StructureError::InvalidStructure("empty symbol name".into()));
            }
            if !seen.insert(s.name.clone()) {
                return Err(StructureError::InvalidStructure(format!(
                    "duplicate symbol {}",
                    s.name
                )));
            }
        }
        Ok(Signature {
            relations,
            functions,
        })
    }

    pub fn graph() -> Self {
        Signature {
            relations: vec![Symbol::new(EDGE_RELATION, 2)],
            functions: vec![],
        }
    }

    pub fn order() -> Self {
        Signature {
            relations: vec![Symbol::new(ORDER_RELATION, 2)],
            functions: vec![],
        }
    }

    pub fn lattice() -> Self {
        Signature {
            relations: vec![Symbol::new(ORDER_RELATION, 2)],
            functions: vec![Symbol::new(JOIN, 2), Symbol::new(MEET, 2)],
        }
    }

    pub fn group() -> Self {
        Signature {
            relations: vec![],
            functions: vec![Symbol::new(GROUP_OP, 2)],
        }
    }

    pub fn relation(&self, name: &str) -> Option<(usize, &Symbol)> {
        self.relations.iter().enumerate().find(|(_, s)| s.name == name)
    }

    pub fn function(&self, name: &str) -> Option<(usize, &Symbol)> {
        self.functions.iter().enumerate().find(|(_, s)| s.name == name)
    }

    /// True if every symbol of `self` occurs in `other` with the same arity.
    pub fn is_subset_of(&self, other: &Signature) -> bool {
        self.relations
            .iter()
            .all(|s| other.relation(&s.name).is_some_and(|(_, t)| t.arity == s.arity))
            && self
                .functions
                .iter()
                .all(|s| other.function(&s.name).is_some_and(|(_, t)| t.arity == s.arity))
    }
}

fn table_len(n: usize, arity: usize) -> Result<usize, StructureError> {
    let mut len = 1usize;
    for _ in 0..arity {
        len = len
            .checked_mul(n)
            .filter(|&l| l <= MAX_TABLE_CELLS)
            .ok_or_else(|| StructureError::InvalidStructure("table too large".into()))?;
    }
    Ok(len)
}

/// A finite structure on the domain `0..size`.
///
/// Relations are stored as dense bitsets and functions as flat row-major
/// tables, both indexed by `Σ args[i] · n^(arity-1-i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStructure {
    signature: Signature,
    size: usize,
    relations: Vec<FixedBitSet>,
    functions: Vec<Vec<u32>>,
}

impl FiniteStructure {
    /// `relations[i]` lists the tuples of relation symbol `i`; `functions[j]`
    /// is the flat table of function symbol `j`.
    pub fn new(
        signature: Signature,
        size: usize,
        relations: Vec<Vec<Vec<usize>>>,
        functions: Vec<Vec<usize>>,
    ) -> Result<Self, StructureError> {
        if size == 0 {
            return Err(StructureError::InvalidStructure("empty domain".into()));
        }
        if size > u32::MAX as usize {
            return Err(StructureError::InvalidStructure("domain too large".into()));
        }
        if relations.len() != signature.relations.len() || functions.len() != signature.functions.len() {
            return Err(StructureError::InvalidStructure(
                "interpretations do not match the signature".into(),
            ));
        }
        let mut rels = Vec::with_capacity(relations.len());
        for (sym, tuples) in signature.relations.iter().zip(relations) {
            let mut bits = FixedBitSet::with_capacity(table_len(size, sym.arity)?);
            for t in tuples {
                if t.len() != sym.arity {
                    return Err(StructureError::InvalidStructure(format!(
                        "tuple of length {} for {}/{}",
                        t.len(),
                        sym.name,
                        sym.arity
                    )));
                }
                if t.iter().any(|&x| x >= size) {
                    return Err(StructureError::InvalidStructure(format!(
                        "tuple {:?} of {} outside the domain",
                        t, sym.name
                    )));
                }
                bits.insert(index_of(size, &t));
            }
            rels.push(bits);
        }
        let mut funs = Vec::with_capacity(functions.len());
        for (sym, table) in signature.functions.iter().zip(functions) {
            let len = table_len(size, sym.arity)?;
            if table.len() != len {
                return Err(StructureError::InvalidStructure(format!(
                    "table of {} has {} entries, expected {}",
                    sym.name,
                    table.len(),
                    len
                )));
            }
            if table.iter().any(|&x| x >= size) {
                return Err(StructureError::InvalidStructure(format!(
                    "table of {} leaves the domain",
                    sym.name
                )));
            }
            funs.push(table.into_iter().map(|x| x as u32).collect());
        }
        Ok(FiniteStructure {
            signature,
            size,
            relations: rels,
            functions: funs,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn holds(&self, relation: usize, args: &[usize]) -> bool {
        self.relations[relation].contains(index_of(self.size, args))
    }

    /// Relation lookup by a precomputed flat index.
    pub fn holds_at(&self, relation: usize, index: usize) -> bool {
        self.relations[relation].contains(index)
    }

    pub fn apply(&self, function: usize, args: &[usize]) -> usize {
        self.functions[function][index_of(self.size, args)] as usize
    }

    pub fn apply_at(&self, function: usize, index: usize) -> usize {
        self.functions[function][index] as usize
    }

    pub fn tuples(&self, relation: usize) -> Vec<Vec<usize>> {
        let arity = self.signature.relations[relation].arity;
        self.relations[relation]
            .ones()
            .map(|idx| tuple_of(self.size, arity, idx))
            .collect()
    }

    pub fn table(&self, function: usize) -> Vec<usize> {
        self.functions[function].iter().map(|&x| x as usize).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let relations: BTreeMap<String, Vec<Vec<usize>>> = self
            .signature
            .relations
            .iter()
            .enumerate()
            .map(|(i, s)| (s.name.clone(), self.tuples(i)))
            .collect();
        let functions: BTreeMap<String, TableJson> = self
            .signature
            .functions
            .iter()
            .enumerate()
            .map(|(i, s)| (s.name.clone(), TableJson { table: self.table(i) }))
            .collect();
        serde_json::to_value(StructureJson {
            signature: self.signature.clone(),
            size: self.size,
            relations,
            functions,
        })
        .expect("structure serialises")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, StructureError> {
        let raw: StructureJson =
            serde_json::from_value(value.clone()).map_err(|e| StructureError::Json(e.to_string()))?;
        let signature = Signature::new(raw.signature.relations, raw.signature.functions)?;
        let mut relations = Vec::new();
        for s in &signature.relations {
            relations.push(raw.relations.get(&s.name).cloned().unwrap_or_default());
        }
        let mut functions = Vec::new();
        for s in &signature.functions {
            let t = raw
                .functions
                .get(&s.name)
                .ok_or_else(|| StructureError::Json(format!("missing table for {}", s.name)))?;
            functions.push(t.table.clone());
        }
        FiniteStructure::new(signature, raw.size, relations, functions)
    }
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    table: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct StructureJson {
    signature: Signature,
    size: usize,
    #[serde(default)]
    relations: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default)]
    functions: BTreeMap<String, TableJson>,
}

pub(crate) fn index_of(n: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

fn tuple_of(n: usize, arity: usize, mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; arity];
    for slot in t.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    t
}

/// A structure over the graph signature with cached adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphView {
    structure: FiniteStructure,
    adj: Vec<Vec<usize>>,
    symmetric: bool,
    loop_free: bool,
}

impl GraphView {
    pub fn new(structure: FiniteStructure) -> Result<Self, StructureError> {
        if structure.signature() != &Signature::graph() {
            return Err(StructureError::InvalidStructure(
                "graph view needs exactly the signature {E/2}".into(),
            ));
        }
        let n = structure.size();
        let mut adj = vec![Vec::new(); n];
        let mut symmetric = true;
        let mut loop_free = true;
        for x in 0..n {
            for y in 0..n {
                if structure.holds(0, &[x, y]) {
                    adj[x].push(y);
                    loop_free &= x != y;
                    symmetric &= structure.holds(0, &[y, x]);
                }
            }
        }
        Ok(GraphView {
            structure,
            adj,
            symmetric,
            loop_free,
        })
    }

    /// Undirected graph from an edge list; each edge is stored in both directions.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, StructureError> {
        let mut tuples = Vec::with_capacity(2 * edges.len());
        for &(a, b) in edges {
            tuples.push(vec![a, b]);
            tuples.push(vec![b, a]);
        }
        GraphView::new(FiniteStructure::new(Signature::graph(), n, vec![tuples], vec![])?)
    }

    pub fn structure(&self) -> &FiniteStructure {
        &self.structure
    }

    pub fn size(&self) -> usize {
        self.structure.size()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.structure.holds(0, &[a, b])
    }

    pub fn is_undirected(&self) -> bool {
        self.symmetric
    }

    pub fn is_simple(&self) -> bool {
        self.symmetric && self.loop_free
    }

    /// Undirected edges `(a, b)` with `a < b` (or loops `(a, a)`).
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, ns) in self.adj.iter().enumerate() {
            for &b in ns {
                if a <= b || !self.symmetric {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.size() {
            s.push_str(&format!("  {v};\n"));
        }
        for (a, b) in self.edges() {
            s.push_str(&format!("  {a} -- {b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

pub fn circle_graph(n: usize) -> Result<GraphView, StructureError> {
    if n < 2 {
        return Err(StructureError::InvalidParameter(format!("circle needs n >= 2, got {n}")));
    }
    let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    if n > 2 {
        edges.push((n - 1, 0));
    }
    GraphView::from_edges(n, &edges)
}

pub fn path_graph(m: usize) -> Result<GraphView, StructureError> {
    if m < 2 {
        return Err(StructureError::InvalidParameter(format!("path needs m >= 2, got {m}")));
    }
    let edges: Vec<(usize, usize)> = (0..m - 1).map(|i| (i, i + 1)).collect();
    GraphView::from_edges(m, &edges)
}

pub fn cyclic_group(n: usize) -> Result<FiniteStructure, StructureError> {
    if n < 1 {
        return Err(StructureError::InvalidParameter("cyclic group needs n >= 1".into()));
    }
    let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    FiniteStructure::new(Signature::group(), n, vec![], vec![table])
}

/// A cyclic group has no proper nontrivial subgroups exactly when its order is prime.
pub fn cyclic_group_is_simple(n: usize) -> Result<bool, StructureError> {
    if n < 2 {
        return Err(StructureError::InvalidParameter("order must be >= 2".into()));
    }
    Ok((2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BipartiteMode {
    /// ordinary 2-colourability
    #[default]
    Standard,
    /// both colour classes must be nonempty
    Strict,
}

/// Outcome of a bipartiteness test on adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bipartition {
    Parts { left: Vec<usize>, right: Vec<usize> },
    OddCycle(Vec<usize>),
    /// strict mode only: fewer than two vertices
    TooSmall,
}

impl Bipartition {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Bipartition::Parts { .. })
    }
}

/// Two-colours an undirected loop-free graph given by adjacency lists.
pub fn bipartition(adj: &[Vec<usize>], mode: BipartiteMode) -> Bipartition {
    let n = adj.len();
    let mut colour = vec![u8::MAX; n];
    for s in 0..n {
        if colour[s] != u8::MAX {
            continue;
        }
        colour[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if colour[v] == u8::MAX {
                    colour[v] = 1 - colour[u];
                    queue.push_back(v);
                } else if colour[v] == colour[u] {
                    return Bipartition::OddCycle(
                        shortest_odd_cycle(adj).expect("a monochromatic edge implies an odd cycle"),
                    );
                }
            }
        }
    }
    let mut left: Vec<usize> = (0..n).filter(|&v| colour[v] == 0).collect();
    let mut right: Vec<usize> = (0..n).filter(|&v| colour[v] == 1).collect();
    if mode == BipartiteMode::Strict && right.is_empty() {
        // an empty class means no edges at all, so any vertex may move over
        if left.len() < 2 {
            return Bipartition::TooSmall;
        }
        right.push(left.pop().expect("at least two vertices"));
    }
    Bipartition::Parts { left, right }
}

/// A shortest odd cycle, listed in cycle order. Being shortest it has no chords.
///
/// BFS from every vertex; an edge between two vertices at equal depth `d`
/// closes an odd walk of length `2d + 1`. A minimum-length odd closed walk is
/// necessarily a simple cycle.
pub fn shortest_odd_cycle(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut best: Option<Vec<usize>> = None;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        let mut found: Option<(usize, usize)> = None;
        'bfs: while let Some(u) = queue.pop_front() {
            if let Some(b) = &best {
                if 2 * dist[u] + 1 >= b.len() {
                    break;
                }
            }
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if dist[v] == dist[u] {
                    found = Some((u, v));
                    break 'bfs;
                }
            }
        }
        if let Some((u, v)) = found {
            let len = 2 * dist[u] + 1;
            if best.as_ref().is_none_or(|b| len < b.len()) {
                let mut left = vec![u];
                while *left.last().unwrap() != s {
                    left.push(parent[*left.last().unwrap()]);
                }
                let mut right = vec![v];
                while *right.last().unwrap() != s {
                    right.push(parent[*right.last().unwrap()]);
                }
                right.pop();
                left.reverse();
                // s .. u, v .. (child of s)
                left.extend(right);
                best = Some(left);
            }
        }
    }
    best
}

pub fn is_bipartite(g: &GraphView, mode: BipartiteMode) -> Result<PropertyReport, StructureError> {
    if !g.is_simple() {
        return Err(StructureError::InvalidStructure(
            "bipartiteness needs an undirected loop-free graph".into(),
        ));
    }
    Ok(bipartition_report("bipartite", &g.adj, mode, |v| v))
}

/// Shared by graph and lattice callers; `label` maps positions to element ids.
pub(crate) fn bipartition_report(
    property: &str,
    adj: &[Vec<usize>],
    mode: BipartiteMode,
    label: impl Fn(usize) -> usize,
) -> PropertyReport {
    let map = |v: Vec<usize>| v.into_iter().map(&label).collect::<Vec<_>>();
    match bipartition(adj, mode) {
        Bipartition::Parts { left, right } => PropertyReport::new(
            property,
            true,
            Some(Witness::TwoColoring {
                left: map(left),
                right: map(right),
            }),
        ),
        Bipartition::OddCycle(c) => {
            PropertyReport::new(property, false, Some(Witness::OddCircle { circle: map(c) }))
        }
        Bipartition::TooSmall => PropertyReport::new(
            property,
            false,
            Some(Witness::TooSmall {
                vertices: map((0..adj.len()).collect()),
            }),
        ),
    }
}

/// Re-checks a bipartiteness witness against the graph.
pub fn recheck_bipartite(g: &GraphView, report: &PropertyReport) -> bool {
    let n = g.size();
    match (&report.witness, report.verdict) {
        (Some(Witness::TwoColoring { left, right }), true) => {
            let mut side = vec![2u8; n];
            for (s, part) in [(0u8, left), (1u8, right)] {
                for &v in part {
                    if v >= n || side[v] != 2 {
                        return false;
                    }
                    side[v] = s;
                }
            }
            side.iter().all(|&s| s != 2) && g.edges().iter().all(|&(a, b)| side[a] != side[b])
        }
        (Some(Witness::OddCircle { circle }), false) => is_chordless_cycle(g, circle) && circle.len() % 2 == 1,
        (Some(Witness::TooSmall { vertices }), false) => n < 2 && vertices.len() == n,
        _ => false,
    }
}

/// `cycle` lists distinct vertices forming a cycle with no chords.
pub fn is_chordless_cycle(g: &GraphView, cycle: &[usize]) -> bool {
    let k = cycle.len();
    if k < 3 || cycle.iter().any(|&v| v >= g.size()) {
        return false;
    }
    let distinct: HashSet<_> = cycle.iter().collect();
    if distinct.len() != k {
        return false;
    }
    for i in 0..k {
        for j in i + 1..k {
            let consecutive = j == i + 1 || (i == 0 && j == k - 1);
            if g.has_edge(cycle[i], cycle[j]) != consecutive {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_edges() {
        let c4 = circle_graph(4).unwrap();
        assert_eq!(c4.edges(), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
        let c3 = circle_graph(3).unwrap();
        assert_eq!(c3.edges().len(), 3);
        let c8 = circle_graph(8).unwrap();
        assert!((0..8).all(|v| c8.degree(v) == 2));
        assert!(circle_graph(1).is_err());
    }

    #[test]
    fn paths() {
        assert_eq!(path_graph(2).unwrap().edges(), vec![(0, 1)]);
        assert_eq!(path_graph(3).unwrap().edges(), vec![(0, 1), (1, 2)]);
        let p5 = path_graph(5).unwrap();
        assert_eq!(p5.degree(0), 1);
        assert_eq!(p5.degree(4), 1);
        assert!((1..4).all(|v| p5.degree(v) == 2));
        assert!(path_graph(1).is_err());
    }

    #[test]
    fn groups() {
        let g = cyclic_group(5).unwrap();
        assert_eq!(g.apply(0, &[3, 4]), 2);
        let g1 = cyclic_group(1).unwrap();
        assert_eq!(g1.apply(0, &[0, 0]), 0);
        let g6 = cyclic_group(6).unwrap();
        assert!((0..6).all(|x| g6.apply(0, &[x, 0]) == x));
        assert!(cyclic_group(0).is_err());
        assert!(cyclic_group_is_simple(5).unwrap());
        assert!(!cyclic_group_is_simple(6).unwrap());
        assert!(cyclic_group_is_simple(2).unwrap());
        assert!(cyclic_group_is_simple(1).is_err());
    }

    #[test]
    fn group_laws() {
        for n in 1..=12 {
            let g = cyclic_group(n).unwrap();
            let add = |a, b| g.apply(0, &[a, b]);
            for a in 0..n {
                assert_eq!(add(a, 0), a);
                assert!((0..n).any(|b| add(a, b) == 0));
                for b in 0..n {
                    for c in 0..n {
                        assert_eq!(add(add(a, b), c), add(a, add(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn bipartite_circles() {
        for n in 2..=32 {
            let g = circle_graph(n).unwrap();
            let r = is_bipartite(&g, BipartiteMode::Standard).unwrap();
            assert_eq!(r.verdict, n % 2 == 0, "n = {n}");
            assert!(recheck_bipartite(&g, &r));
            if n % 2 == 1 {
                assert_eq!(r.witness, Some(Witness::OddCircle { circle: (0..n).collect() }));
            }
        }
        assert!(is_bipartite(&path_graph(5).unwrap(), BipartiteMode::Standard).unwrap().verdict);
    }

    #[test]
    fn strict_mode_differs_only_on_one_vertex() {
        let single = GraphView::from_edges(1, &[]).unwrap();
        assert!(is_bipartite(&single, BipartiteMode::Standard).unwrap().verdict);
        let strict = is_bipartite(&single, BipartiteMode::Strict).unwrap();
        assert!(!strict.verdict);
        assert!(recheck_bipartite(&single, &strict));
        let two = GraphView::from_edges(2, &[]).unwrap();
        let r = is_bipartite(&two, BipartiteMode::Strict).unwrap();
        assert!(r.verdict && recheck_bipartite(&two, &r));
    }

    #[test]
    fn odd_cycle_is_chordless() {
        // a 5-cycle with a pendant triangle far away plus a long odd cycle
        let g = GraphView::from_edges(
            9,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 6), (6, 7), (7, 5), (4, 8)],
        )
        .unwrap();
        let r = is_bipartite(&g, BipartiteMode::Standard).unwrap();
        match &r.witness {
            Some(Witness::OddCircle { circle }) => assert_eq!(circle.len(), 3),
            w => panic!("unexpected {w:?}"),
        }
        assert!(recheck_bipartite(&g, &r));
    }

    #[test]
    fn directed_input_is_rejected() {
        let s = FiniteStructure::new(Signature::graph(), 2, vec![vec![vec![0, 1]]], vec![]).unwrap();
        let g = GraphView::new(s).unwrap();
        assert!(!g.is_undirected());
        assert!(is_bipartite(&g, BipartiteMode::Standard).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = cyclic_group(4).unwrap();
        let back = FiniteStructure::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
        let c = circle_graph(5).unwrap();
        let back = FiniteStructure::from_json(&c.structure().to_json()).unwrap();
        assert_eq!(c.structure(), &back);
        assert!(FiniteStructure::from_json(&serde_json::json!({"size": 2})).is_err());
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteStructure::new(Signature::group(), 2, vec![], vec![vec![0, 1, 1]]).is_err());
        assert!(FiniteStructure::new(Signature::group(), 2, vec![], vec![vec![0, 1, 1, 2]]).is_err());
        assert!(Signature::new(vec![Symbol::new("E", 2)], vec![Symbol::new("E", 1)]).is_err());
    }

    #[test]
    fn dot_lists_edges_once() {
        let dot = circle_graph(3).unwrap().to_dot();
        assert_eq!(dot.matches("--").count(), 3);
    }
}
