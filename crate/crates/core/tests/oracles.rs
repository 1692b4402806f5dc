//! Brute-force oracles, written without the library's own algorithms.

use std::collections::BTreeSet;

use itertools::Itertools;
use slimcon::congruence::{congruence_lattice, Congruence};
use slimcon::enumverify::enumerate_posets;
use slimcon::order::{downset_lattice, DownSetFamily, Lattice, Poset};
use slimcon::props::Analysis;

/// Strict orders on `0..n` that extend the natural order, as `lt[i][j]`.
fn naturally_labelled(n: usize) -> Vec<Vec<Vec<bool>>> {
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let mut lt = vec![vec![false; n]; n];
        for (b, &(i, j)) in pairs.iter().enumerate() {
            lt[i][j] = mask >> b & 1 == 1;
        }
        let transitive = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(lt[i][j] && lt[j][k]) || lt[i][k])));
        if transitive {
            out.push(lt);
        }
    }
    out
}

fn canonical(lt: &[Vec<bool>]) -> u64 {
    let n = lt.len();
    (0..n)
        .permutations(n)
        .map(|p| {
            let mut code = 0u64;
            for i in 0..n {
                for j in 0..n {
                    if lt[i][j] {
                        code |= 1 << (p[i] * n + p[j]);
                    }
                }
            }
            code
        })
        .min()
        .unwrap_or(0)
}

/// One representative per isomorphism class of `n`-element posets.
fn posets_up_to_iso(n: usize) -> Vec<Vec<Vec<bool>>> {
    let mut seen = BTreeSet::new();
    naturally_labelled(n)
        .into_iter()
        .filter(|lt| seen.insert(canonical(lt)))
        .collect()
}

#[test]
fn poset_counts_match_brute_force() {
    let brute: Vec<usize> = (1..=6).map(|n| posets_up_to_iso(n).len()).collect();
    assert_eq!(brute, vec![1, 2, 5, 16, 63, 318]);
    assert_eq!(enumerate_posets(6).unwrap().counts(), brute);
}

/// Every lattice with at most eight elements: the bounded extensions of
/// all posets with at most six.
fn small_lattices() -> Vec<Lattice> {
    let mut out = vec![
        Lattice::from_poset(Poset::from_covers(1, &[]).unwrap()).unwrap(),
        Lattice::from_poset(Poset::from_covers(2, &[(0, 1)]).unwrap()).unwrap(),
    ];
    for m in 1..=6 {
        for lt in posets_up_to_iso(m) {
            let (bot, top) = (m, m + 1);
            let p = Poset::from_leq(m + 2, |x, y| {
                x == y || x == bot || y == top || (x < m && y < m && lt[x][y])
            })
            .unwrap();
            if let Ok(l) = Lattice::from_poset(p) {
                out.push(l);
            }
        }
    }
    out
}

#[test]
fn lattice_counts_are_the_known_sequence() {
    let mut counts = [0usize; 9];
    for l in small_lattices() {
        counts[l.size()] += 1;
    }
    assert_eq!(&counts[1..], &[1, 1, 1, 2, 5, 15, 53, 222]);
}

/// Restricted growth strings of length `n`.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    fn go(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur[i] = b;
            go(i + 1, max.max(b), cur, out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    go(1, 0, &mut cur, &mut out);
    out
}

fn compatible(l: &Lattice, block: &[usize]) -> bool {
    let n = l.size();
    (0..n).all(|x| {
        (x + 1..n).all(|y| {
            block[x] != block[y]
                || (0..n).all(|z| {
                    block[l.join(x, z)] == block[l.join(y, z)] && block[l.meet(x, z)] == block[l.meet(y, z)]
                })
        })
    })
}

#[test]
fn congruence_lattices_match_brute_force() {
    let lattices = small_lattices();
    let mut parts: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for n in 1..=8 {
        parts.push(partitions(n));
    }
    assert_eq!(parts[8].len(), 4140);
    for l in &lattices {
        let brute: BTreeSet<Congruence> = parts[l.size()]
            .iter()
            .filter(|b| compatible(l, b))
            .map(|b| Congruence::from_labels(b))
            .collect();
        let con = congruence_lattice(l).unwrap();
        let ours: BTreeSet<Congruence> = con.congruences.iter().cloned().collect();
        assert_eq!(ours, brute, "covers {:?}", l.poset().cover_pairs());
        assert_eq!(con.congruences.len(), con.lattice.size());
        // the order of Con(L) is refinement
        for (i, a) in con.congruences.iter().enumerate() {
            for (j, b) in con.congruences.iter().enumerate() {
                assert_eq!(con.lattice.leq(i, j), a.refines(b));
            }
        }
    }
}

#[test]
fn down_set_counts_match_subset_enumeration() {
    for m in 1..=5 {
        for lt in posets_up_to_iso(m) {
            let p = Poset::from_leq(m, |x, y| x == y || lt[x][y]).unwrap();
            let brute = (0u32..1 << m)
                .filter(|&s| (0..m).all(|y| s >> y & 1 == 0 || (0..m).all(|x| !lt[x][y] || s >> x & 1 == 1)))
                .count();
            assert_eq!(downset_lattice(&p).unwrap().size(), brute);
        }
    }
}

/// The poset whose E-graph is `g`: vertices on top, one minimal element
/// under both ends of each edge.
fn edge_poset(n: usize, edges: &[(usize, usize)]) -> Poset {
    let mut covers = Vec::new();
    for (e, &(a, b)) in edges.iter().enumerate() {
        covers.push((n + e, a));
        covers.push((n + e, b));
    }
    Poset::from_covers(n + edges.len(), &covers).unwrap()
}

/// Components of `g` restricted to `s` are all single edges or paths on
/// four vertices.
fn components_are_k2_or_p4(s: &[usize], edges: &[(usize, usize)]) -> bool {
    let inside: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|(a, b)| s.contains(a) && s.contains(b))
        .collect();
    let mut seen = BTreeSet::new();
    for &v in s {
        if seen.contains(&v) {
            continue;
        }
        let mut comp = vec![v];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            for &(a, b) in &inside {
                let w = if a == u { b } else if b == u { a } else { continue };
                if !comp.contains(&w) {
                    comp.push(w);
                }
            }
            i += 1;
        }
        seen.extend(comp.iter().copied());
        let m = inside.iter().filter(|(a, _)| comp.contains(a)).count();
        let degrees: Vec<usize> = comp
            .iter()
            .map(|&u| inside.iter().filter(|(a, b)| *a == u || *b == u).count())
            .collect();
        let ok = match comp.len() {
            2 => m == 1,
            4 => m == 3 && degrees.iter().all(|&d| d <= 2),
            _ => false,
        };
        if !ok {
            return false;
        }
    }
    true
}

#[test]
fn vw_elements_are_unions_of_edges_and_four_paths() {
    for n in 1..=4usize {
        let all: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
        for mask in 0u32..1 << all.len() {
            let edges: Vec<(usize, usize)> =
                all.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
            let p = edge_poset(n, &edges);
            let fam = DownSetFamily::new(&p).unwrap();
            let a = Analysis::new(&fam.lattice).unwrap();
            for sub in 1u32..1 << n {
                let s: Vec<usize> = (0..n).filter(|&v| sub >> v & 1 == 1).collect();
                let x = fam.generated(&p, &s);
                assert_eq!(
                    a.is_vw(x),
                    components_are_k2_or_p4(&s, &edges),
                    "n={n} edges={edges:?} s={s:?}"
                );
            }
        }
    }
}

#[test]
fn vw_on_five_vertex_graphs() {
    let n = 5;
    let all: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    for mask in 0u32..1 << all.len() {
        let edges: Vec<(usize, usize)> =
            all.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
        let p = edge_poset(n, &edges);
        let fam = DownSetFamily::new(&p).unwrap();
        let a = Analysis::new(&fam.lattice).unwrap();
        let all_vertices: Vec<usize> = (0..n).collect();
        let x = fam.generated(&p, &all_vertices);
        assert_eq!(a.is_vw(x), components_are_k2_or_p4(&all_vertices, &edges), "edges={edges:?}");
    }
}
