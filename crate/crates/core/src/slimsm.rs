//! Planar slim semimodular lattices carried as diagrams.
//!
//! Every element keeps its upper and lower covers ordered left to right.
//! 4-cells, trajectories and fork insertion are all read off these lists.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsu::Dsu;
use crate::order::{self, Lattice, OrderError, Poset};

pub type Edge = (usize, usize);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SlimError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("not a 4-cell: {0:?}")]
    NotACell(FourCell),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("malformed diagram JSON: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FourCell {
    pub bottom: usize,
    pub left: usize,
    pub right: usize,
    pub top: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarSlimLattice {
    lattice: Lattice,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    labels: BTreeMap<String, Edge>,
}

/// Trajectories as edge sequences, plus the trajectory index of every edge.
#[derive(Clone, Debug)]
pub struct Trajectories {
    pub paths: Vec<Vec<Edge>>,
    pub index: HashMap<Edge, usize>,
}

/// What a fork insertion added.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForkInsertion {
    pub apex: usize,
    pub left_leg: Vec<usize>,
    pub right_leg: Vec<usize>,
    /// labels whose edge got subdivided; they move to the lower half
    pub subdivided_labels: Vec<String>,
}

fn position(list: &[usize], x: usize) -> Option<usize> {
    list.iter().position(|&y| y == x)
}

impl PlanarSlimLattice {
    /// Validates a diagram: the lists must be exactly the covers, left-right
    /// orders must agree across every 4-cell, and the lattice must be slim
    /// and semimodular.
    pub fn from_diagram(
        upper: Vec<Vec<usize>>,
        lower: Vec<Vec<usize>>,
        labels: BTreeMap<String, Edge>,
    ) -> Result<Self, SlimError> {
        let n = upper.len();
        if lower.len() != n {
            return Err(SlimError::InvalidDiagram("upper and lower lists differ in length".into()));
        }
        let pairs: Vec<Edge> = upper
            .iter()
            .enumerate()
            .flat_map(|(x, us)| us.iter().map(move |&y| (x, y)))
            .collect();
        let poset = Poset::from_covers(n, &pairs)?;
        for x in 0..n {
            let mut u = upper[x].clone();
            let mut l = lower[x].clone();
            u.sort_unstable();
            l.sort_unstable();
            if u != poset.upper_covers(x) || l != poset.lower_covers(x) {
                return Err(SlimError::InvalidDiagram(format!(
                    "cover lists of {x} are not its covers"
                )));
            }
        }
        let lattice = Lattice::from_poset(poset)?;
        for o in 0..n {
            for (i, &a) in upper[o].iter().enumerate() {
                for &b in &upper[o][i + 1..] {
                    let t = lattice.join(a, b);
                    let (Some(pa), Some(pb)) = (position(&lower[t], a), position(&lower[t], b)) else {
                        continue;
                    };
                    if pa > pb {
                        return Err(SlimError::InvalidDiagram(format!(
                            "{a} is left of {b} above {o} but right of it below {t}"
                        )));
                    }
                }
            }
        }
        for (name, &(lo, hi)) in &labels {
            if hi >= n || !lattice.poset().covers(lo, hi) {
                return Err(SlimError::InvalidDiagram(format!("label {name} is not on a cover")));
            }
        }
        if let Some((x, y, z)) = order::semimodularity_witness(&lattice) {
            return Err(SlimError::InvalidDiagram(format!(
                "not semimodular: {x} < {y} but not after joining {z}"
            )));
        }
        if let Some(a) = order::slimness_witness(&lattice) {
            return Err(SlimError::InvalidDiagram(format!("not slim: antichain {a:?}")));
        }
        Ok(PlanarSlimLattice {
            lattice,
            upper,
            lower,
            labels,
        })
    }

    pub fn chain(m: usize) -> Result<Self, SlimError> {
        if m < 1 {
            return Err(SlimError::InvalidParameter("chain needs m >= 1".into()));
        }
        let upper = (0..m).map(|i| if i + 1 < m { vec![i + 1] } else { vec![] }).collect();
        let lower = (0..m).map(|i| if i > 0 { vec![i - 1] } else { vec![] }).collect();
        Self::from_diagram(upper, lower, BTreeMap::new())
    }

    /// `(i, j)` is element `i * (k + 1) + j`; moving up-left increases `i`.
    pub fn grid(k: usize) -> Result<Self, SlimError> {
        if k < 1 {
            return Err(SlimError::InvalidParameter("grid needs k >= 1".into()));
        }
        let s = k + 1;
        let id = |i: usize, j: usize| i * s + j;
        let mut upper = vec![Vec::new(); s * s];
        let mut lower = vec![Vec::new(); s * s];
        for i in 0..s {
            for j in 0..s {
                if i + 1 < s {
                    upper[id(i, j)].push(id(i + 1, j));
                }
                if j + 1 < s {
                    upper[id(i, j)].push(id(i, j + 1));
                }
                if j > 0 {
                    lower[id(i, j)].push(id(i, j - 1));
                }
                if i > 0 {
                    lower[id(i, j)].push(id(i - 1, j));
                }
            }
        }
        Self::from_diagram(upper, lower, BTreeMap::new())
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn size(&self) -> usize {
        self.lattice.size()
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    pub fn labels(&self) -> &BTreeMap<String, Edge> {
        &self.labels
    }

    pub fn label(&self, name: &str) -> Option<Edge> {
        self.labels.get(name).copied()
    }

    pub fn with_label(mut self, name: &str, edge: Edge) -> Result<Self, SlimError> {
        if edge.1 >= self.size() || !self.lattice.poset().covers(edge.0, edge.1) {
            return Err(SlimError::InvalidDiagram(format!("label {name} is not on a cover")));
        }
        self.labels.insert(name.to_string(), edge);
        Ok(self)
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.lattice.poset().cover_pairs()
    }

    fn cell_at(&self, o: usize, a: usize, b: usize) -> Option<FourCell> {
        let pa = position(&self.upper[o], a)?;
        if self.upper[o].get(pa + 1) != Some(&b) {
            return None;
        }
        let t = self.lattice.join(a, b);
        let pa = position(&self.lower[t], a)?;
        if self.lower[t].get(pa + 1) != Some(&b) {
            return None;
        }
        Some(FourCell {
            bottom: o,
            left: a,
            right: b,
            top: t,
        })
    }

    pub fn is_cell(&self, c: &FourCell) -> bool {
        c.bottom < self.size()
            && c.left < self.size()
            && c.right < self.size()
            && self.cell_at(c.bottom, c.left, c.right).is_some_and(|d| d == *c)
    }

    pub fn cells(&self) -> Vec<FourCell> {
        let mut out = Vec::new();
        for o in 0..self.size() {
            for w in self.upper[o].windows(2) {
                if let Some(c) = self.cell_at(o, w[0], w[1]) {
                    out.push(c);
                }
            }
        }
        out
    }

    /// The cell whose upper-right edge is `(w, z)`.
    fn cell_left_of(&self, w: usize, z: usize) -> Option<FourCell> {
        let pos = position(&self.lower[z], w)?;
        let q = self.lower[z][pos.checked_sub(1)?];
        let p = self.lattice.meet(q, w);
        self.cell_at(p, q, w).filter(|c| c.top == z)
    }

    /// The cell whose upper-left edge is `(w, z)`.
    fn cell_right_of(&self, w: usize, z: usize) -> Option<FourCell> {
        let pos = position(&self.lower[z], w)?;
        let q = *self.lower[z].get(pos + 1)?;
        let p = self.lattice.meet(w, q);
        self.cell_at(p, w, q).filter(|c| c.top == z)
    }

    pub fn trajectories(&self) -> Trajectories {
        let edges = self.edges();
        let id: HashMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut links = vec![Vec::new(); edges.len()];
        let mut d = Dsu::new(edges.len());
        for c in self.cells() {
            for (e, f) in [
                ((c.bottom, c.left), (c.right, c.top)),
                ((c.bottom, c.right), (c.left, c.top)),
            ] {
                let (i, j) = (id[&e], id[&f]);
                d.union(i, j);
                links[i].push(j);
                links[j].push(i);
            }
        }
        let reps = d.canonical();
        let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &r) in reps.iter().enumerate() {
            members.entry(r).or_default().push(i);
        }
        let mut paths = Vec::new();
        let mut index = HashMap::new();
        let mut seen = vec![false; edges.len()];
        for group in members.values() {
            let start = group
                .iter()
                .copied()
                .find(|&i| links[i].len() <= 1)
                .unwrap_or(group[0]);
            let mut path = Vec::with_capacity(group.len());
            let mut cur = Some(start);
            while let Some(i) = cur {
                seen[i] = true;
                index.insert(edges[i], paths.len());
                path.push(edges[i]);
                cur = links[i].iter().copied().find(|&j| !seen[j]);
            }
            // a closed trajectory is walked once; anything left over joins it
            for &i in group {
                if !seen[i] {
                    seen[i] = true;
                    index.insert(edges[i], paths.len());
                    path.push(edges[i]);
                }
            }
            paths.push(path);
        }
        Trajectories { paths, index }
    }

    /// Inserts a fork into `c`, returning the new diagram and the added elements.
    pub fn insert_fork(&self, c: &FourCell) -> Result<(Self, ForkInsertion), SlimError> {
        if !self.is_cell(c) {
            return Err(SlimError::NotACell(*c));
        }
        let FourCell {
            bottom: o,
            left: a,
            right: b,
            top: t,
        } = *c;

        let mut left_leg = vec![(o, a)];
        while let Some(cell) = self.cell_left_of(left_leg.last().unwrap().0, left_leg.last().unwrap().1) {
            left_leg.push((cell.bottom, cell.left));
        }
        let mut right_leg = vec![(o, b)];
        while let Some(cell) = self.cell_right_of(right_leg.last().unwrap().0, right_leg.last().unwrap().1) {
            right_leg.push((cell.bottom, cell.right));
        }

        let n = self.size();
        let m = n;
        let us: Vec<usize> = (0..left_leg.len()).map(|i| n + 1 + i).collect();
        let vs: Vec<usize> = (0..right_leg.len()).map(|i| n + 1 + left_leg.len() + i).collect();
        let total = n + 1 + us.len() + vs.len();
        let mut upper = self.upper.clone();
        let mut lower = self.lower.clone();
        upper.resize(total, Vec::new());
        lower.resize(total, Vec::new());

        let pa = position(&lower[t], a).expect("cell top lists its left cover");
        lower[t].insert(pa + 1, m);
        upper[m] = vec![t];
        lower[m] = vec![us[0], vs[0]];

        let replace = |list: &mut Vec<usize>, old: usize, new: usize| {
            let p = position(list, old).expect("subdivided edge present");
            list[p] = new;
        };
        let mut labels = self.labels.clone();
        let mut subdivided = Vec::new();
        let mut subdivide = |upper: &mut Vec<Vec<usize>>, lower: &mut Vec<Vec<usize>>, (lo, hi): Edge, s: usize| {
            replace(&mut upper[lo], hi, s);
            replace(&mut lower[hi], lo, s);
            lower[s] = vec![lo];
            for (name, e) in labels.iter_mut() {
                if *e == (lo, hi) {
                    *e = (lo, s);
                    subdivided.push(name.clone());
                }
            }
        };
        for (i, &e) in left_leg.iter().enumerate() {
            subdivide(&mut upper, &mut lower, e, us[i]);
            if i == 0 {
                upper[us[0]] = vec![e.1, m];
            } else {
                upper[us[i]] = vec![e.1, us[i - 1]];
                lower[us[i - 1]].insert(0, us[i]);
            }
        }
        for (i, &e) in right_leg.iter().enumerate() {
            subdivide(&mut upper, &mut lower, e, vs[i]);
            if i == 0 {
                upper[vs[0]] = vec![m, e.1];
            } else {
                upper[vs[i]] = vec![vs[i - 1], e.1];
                lower[vs[i - 1]].push(vs[i]);
            }
        }
        subdivided.sort();
        let out = PlanarSlimLattice::from_diagram(upper, lower, labels)?;
        Ok((
            out,
            ForkInsertion {
                apex: m,
                left_leg: us,
                right_leg: vs,
                subdivided_labels: subdivided,
            },
        ))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DiagramJson {
            size: self.size(),
            covers: self.edges().into_iter().map(|(a, b)| [a, b]).collect(),
            cover_order: self.upper.clone(),
            lower_cover_order: self.lower.clone(),
            labels: self.labels.iter().map(|(k, &(a, b))| (k.clone(), [a, b])).collect(),
        })
        .expect("diagram serialises")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, SlimError> {
        let raw: DiagramJson =
            serde_json::from_value(value.clone()).map_err(|e| SlimError::Json(e.to_string()))?;
        if raw.cover_order.len() != raw.size || raw.lower_cover_order.len() != raw.size {
            return Err(SlimError::Json("cover order lists do not match size".into()));
        }
        let labels = raw.labels.into_iter().map(|(k, [a, b])| (k, (a, b))).collect();
        Self::from_diagram(raw.cover_order, raw.lower_cover_order, labels)
    }

    /// Hasse diagram with covers drawn in their left-to-right order.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph L {\n  rankdir=BT;\n  ordering=out;\n  edge [arrowhead=none];\n");
        for x in 0..self.size() {
            s.push_str(&format!("  {x};\n"));
        }
        let names: HashMap<Edge, &String> = self.labels.iter().map(|(k, &e)| (e, k)).collect();
        for x in 0..self.size() {
            for &y in &self.upper[x] {
                match names.get(&(x, y)) {
                    Some(name) => s.push_str(&format!("  {x} -> {y} [label=\"{name}\"];\n")),
                    None => s.push_str(&format!("  {x} -> {y};\n")),
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct DiagramJson {
    size: usize,
    covers: Vec<[usize; 2]>,
    cover_order: Vec<Vec<usize>>,
    lower_cover_order: Vec<Vec<usize>>,
    #[serde(default)]
    labels: BTreeMap<String, [usize; 2]>,
}

/// The lattice `L_n` whose congruence lattice has `J(Con L_n) ≅ K_n`.
///
/// Starts from `grid(n/2)`, labels the upper boundary edges `a_0 .. a_{n-1}`
/// (even indices on the left, odd on the right, both counted downward from
/// the top) and inserts forks for the pairs `(a_0,a_1)`, `(a_0,a_{n-1})`,
/// `(a_1,a_2)`, ..., `(a_{n-2},a_{n-1})`. The fork for `(a_p, a_q)` goes into
/// the only cell whose upper edges lie on the trajectories of `a_p` and
/// `a_q`; its new edge `m ≺ t` is labelled `b_p` (`b_{n-1}` for the pair
/// `(a_0, a_{n-1})`).
pub fn build_ln(n: usize) -> Result<PlanarSlimLattice, SlimError> {
    if n < 4 || n % 2 == 1 {
        return Err(SlimError::InvalidParameter(format!("L_n needs an even n >= 4, got {n}")));
    }
    let k = n / 2;
    let id = |i: usize, j: usize| i * (k + 1) + j;
    let mut l = PlanarSlimLattice::grid(k)?;
    for t in 0..k {
        l = l.with_label(&format!("a{}", 2 * t), (id(k, k - 1 - t), id(k, k - t)))?;
        l = l.with_label(&format!("a{}", 2 * t + 1), (id(k - 1 - t, k), id(k - t, k)))?;
    }
    let mut schedule = vec![(0, 1, 0), (0, n - 1, n - 1)];
    schedule.extend((1..n - 1).map(|p| (p, p + 1, p)));
    for (p, q, b) in schedule {
        let traj = l.trajectories();
        let tp = traj.index[&l.label(&format!("a{p}")).expect("label present")];
        let tq = traj.index[&l.label(&format!("a{q}")).expect("label present")];
        let targets: Vec<FourCell> = l
            .cells()
            .into_iter()
            .filter(|c| {
                let x = traj.index[&(c.left, c.top)];
                let y = traj.index[&(c.right, c.top)];
                (x == tp && y == tq) || (x == tq && y == tp)
            })
            .collect();
        if targets.len() != 1 {
            return Err(SlimError::Construction(format!(
                "{} candidate cells for the pair (a{p}, a{q})",
                targets.len()
            )));
        }
        let (next, ins) = l.insert_fork(&targets[0])?;
        if !ins.subdivided_labels.is_empty() {
            return Err(SlimError::Construction(format!(
                "fork for (a{p}, a{q}) subdivided {:?}",
                ins.subdivided_labels
            )));
        }
        l = next.with_label(&format!("b{b}"), (ins.apex, targets[0].top))?;
    }
    Ok(l)
}

/// `grid(grid_k)` followed by `forks` insertions into uniformly chosen cells.
pub fn random_slim(seed: u64, grid_k: usize, forks: usize) -> Result<PlanarSlimLattice, SlimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut l = PlanarSlimLattice::grid(grid_k)?;
    for _ in 0..forks {
        let cells = l.cells();
        let c = cells[rng.random_range(0..cells.len())];
        l = l.insert_fork(&c)?.0;
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_cells() {
        for k in 1..=4 {
            assert_eq!(PlanarSlimLattice::grid(k).unwrap().cells().len(), k * k);
        }
        assert!(PlanarSlimLattice::chain(5).unwrap().cells().is_empty());
    }

    #[test]
    fn single_fork_gives_s7() {
        let g = PlanarSlimLattice::grid(1).unwrap();
        let c = g.cells()[0];
        let (s7, ins) = g.insert_fork(&c).unwrap();
        assert_eq!(s7.size(), 7);
        let (o, a, b, t, m, u, v) = (0, 2, 1, 3, 4, 5, 6);
        assert_eq!((c.bottom, c.left, c.right, c.top), (o, a, b, t));
        assert_eq!((ins.apex, ins.left_leg.as_slice(), ins.right_leg.as_slice()), (m, &[u][..], &[v][..]));
        let mut expected = vec![(o, u), (o, v), (u, a), (u, m), (v, m), (v, b), (a, t), (m, t), (b, t)];
        expected.sort_unstable();
        assert_eq!(s7.edges(), expected);
        assert_eq!(s7.lower_covers(t), &[a, m, b]);
        assert_eq!(s7.cells().len(), 3);
    }

    #[test]
    fn legs_run_to_the_boundary() {
        let g = PlanarSlimLattice::grid(3).unwrap();
        // the top cell: o = (2,2), both legs cross two more cells each
        let top = *g.cells().iter().find(|c| c.top == 15).unwrap();
        let (l, ins) = g.insert_fork(&top).unwrap();
        assert_eq!(ins.left_leg.len(), 3);
        assert_eq!(ins.right_leg.len(), 3);
        assert_eq!(l.size(), 16 + 7);
        // each leg element splits one cell; the top cell becomes three
        assert_eq!(l.cells().len(), 9 + ins.left_leg.len() + ins.right_leg.len());
        // bottom-corner cell touches the boundary on both sides
        let corner = g.cells()[0];
        let (l2, ins2) = g.insert_fork(&corner).unwrap();
        assert_eq!(l2.size(), 19);
        assert_eq!(ins2.left_leg.len() + ins2.right_leg.len(), 2);
    }

    #[test]
    fn not_a_cell() {
        let g = PlanarSlimLattice::grid(2).unwrap();
        let bogus = FourCell {
            bottom: 0,
            left: 1,
            right: 3,
            top: 4,
        };
        assert!(matches!(g.insert_fork(&bogus), Err(SlimError::NotACell(_))));
    }

    #[test]
    fn trajectories_partition_edges() {
        let l = random_slim(7, 3, 4).unwrap();
        let t = l.trajectories();
        let mut all: Vec<Edge> = t.paths.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, l.edges());
        // in a grid every trajectory crosses from one side to the other
        let g = PlanarSlimLattice::grid(3).unwrap();
        let tg = g.trajectories();
        assert_eq!(tg.paths.len(), 6);
        assert!(tg.paths.iter().all(|p| p.len() == 4));
    }

    #[test]
    fn random_is_reproducible() {
        assert_eq!(random_slim(3, 2, 0).unwrap(), PlanarSlimLattice::grid(2).unwrap());
        let a = random_slim(42, 3, 5).unwrap();
        let b = random_slim(42, 3, 5).unwrap();
        assert_eq!(a, b);
        assert!(order::is_semimodular(a.lattice()) && order::is_slim(a.lattice()));
    }

    #[test]
    fn ln_builds() {
        for n in [4, 6, 8] {
            let l = build_ln(n).unwrap();
            assert_eq!(l.labels().len(), 2 * n);
        }
        assert!(build_ln(5).is_err());
        assert!(build_ln(2).is_err());
    }

    #[test]
    fn ln_congruences_form_crowns() {
        use crate::congruence::{jir_congruence_poset, principal_congruence};
        for n in [4, 6, 8] {
            let l = build_ln(n).unwrap();
            let j = jir_congruence_poset(l.lattice()).unwrap();
            assert!(order::is_isomorphic(&j, &order::crown(n).unwrap()).is_some(), "n = {n}");
            // b_i collapses into exactly a_i and a_{i+1}
            let con = |name: String| {
                let (lo, hi) = l.label(&name).unwrap();
                principal_congruence(l.lattice(), lo, hi).unwrap()
            };
            for i in 0..n {
                let b = con(format!("b{i}"));
                for jx in 0..n {
                    let a = con(format!("a{jx}"));
                    assert_eq!(b.refines(&a), jx == i || jx == (i + 1) % n, "n={n} b{i} a{jx}");
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let l = build_ln(4).unwrap();
        let back = PlanarSlimLattice::from_json(&l.to_json()).unwrap();
        assert_eq!(l, back);
        assert!(l.to_dot().contains("label=\"b0\""));
    }

    #[test]
    fn rejects_inconsistent_orders() {
        let g = PlanarSlimLattice::grid(1).unwrap();
        let mut upper: Vec<Vec<usize>> = (0..4).map(|x| g.upper_covers(x).to_vec()).collect();
        let lower: Vec<Vec<usize>> = (0..4).map(|x| g.lower_covers(x).to_vec()).collect();
        upper[0].reverse();
        assert!(PlanarSlimLattice::from_diagram(upper, lower, BTreeMap::new()).is_err());
    }
}
