//! Named sentences and formulas.
//!
//! Formulas with free variables document them; callers pick the variable
//! names of the `*_at` constructors. Bound variables use prefixes reserved
//! per formula family (`j*`, `m*`, `e*`, `s*`, `t*`, `c*`, `v*`, `w*`, `q*`)
//! so that nesting never captures a caller's variable, provided callers
//! avoid those prefixes followed by a digit-free suffix.

use thiserror::Error;

use super::{
    and, and_all, eq, exists, exists_all, forall, forall_all, implies, leq, lt, not, or, or_all, rel, v, Formula,
    Term,
};
use crate::order;
use crate::structures::{EDGE_RELATION, GROUP_OP, JOIN};

/// Largest crown size accepted by [`xi`].
pub const XI_MAX: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LibraryError {
    #[error("unknown builtin `{0}`")]
    Unknown(String),
    #[error("builtin `{name}` expects {expected} parameter(s), got {found}")]
    Params { name: String, expected: usize, found: usize },
    #[error("parameter out of range: {0}")]
    Range(String),
}

/// Every name accepted by [`builtin`], with its parameter count.
pub const BUILTINS: &[(&str, usize)] = &[
    ("lambda", 1),
    ("lambda_false", 0),
    ("eta", 1),
    ("tau", 1),
    ("alpha", 0),
    ("beta", 0),
    ("delta1", 0),
    ("delta2", 0),
    ("delta3", 0),
    ("xi", 1),
    ("rho_edge", 0),
    ("rho_exists2", 0),
    ("rho_atmost2", 0),
    ("rho_eq2", 0),
    ("rho_mcyclic", 0),
    ("psi_dcep", 0),
    ("vset", 0),
    ("wset", 0),
    ("vw", 0),
    ("jir", 0),
    ("mjir", 0),
    ("no_spanned_circle", 1),
];

/// Looks up a library formula by name.
///
/// Free variables: `alpha`, `beta`, `rho_*` (except `rho_edge`) and
/// `rho_mcyclic` use `x`; `rho_edge` uses `y1, y2, x`; `jir`/`mjir` use
/// `y, x`; `vset` uses `y0, y1, x`; `wset` uses `y0..y3, x`; `vw` uses `y`.
pub fn builtin(name: &str, params: &[usize]) -> Result<Formula, LibraryError> {
    let expected = BUILTINS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(_, k)| k)
        .ok_or_else(|| LibraryError::Unknown(name.to_string()))?;
    if params.len() != expected {
        return Err(LibraryError::Params {
            name: name.to_string(),
            expected,
            found: params.len(),
        });
    }
    let p = params.first().copied().unwrap_or(0);
    Ok(match name {
        "lambda" => lambda(p)?,
        "lambda_false" => lambda_false(),
        "eta" => eta(p)?,
        "tau" => tau(p)?,
        "alpha" => alpha_at("x"),
        "beta" => beta_at("x"),
        "delta1" => delta1(),
        "delta2" => delta2(),
        "delta3" => delta3(),
        "xi" => xi(p)?,
        "rho_edge" => edge_at("y1", "y2", "x"),
        "rho_exists2" => exists2_at("x"),
        "rho_atmost2" => atmost2_at("x"),
        "rho_eq2" => eq2_at("x"),
        "rho_mcyclic" => mcyclic_at("x"),
        "psi_dcep" => psi_dcep(),
        "vset" => vset_at("y0", "y1", "x"),
        "wset" => wset_at(["y0", "y1", "y2", "y3"], "x"),
        "vw" => vw_at("y"),
        "jir" => jir_at("y", "x"),
        "mjir" => mjir_at("y", "x"),
        "no_spanned_circle" => no_spanned_circle(p)?,
        _ => unreachable!("listed in BUILTINS"),
    })
}

fn range(ok: bool, msg: &str) -> Result<(), LibraryError> {
    if ok {
        Ok(())
    } else {
        Err(LibraryError::Range(msg.to_string()))
    }
}

fn distinct(vars: &[String]) -> Vec<Formula> {
    let mut out = Vec::new();
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            out.push(not(eq(v(&vars[i]), v(&vars[j]))));
        }
    }
    out
}

fn names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

fn refs(names: &[String]) -> Vec<&str> {
    names.iter().map(String::as_str).collect()
}

/// `λ_k`: at least `k` elements.
pub fn lambda(k: usize) -> Result<Formula, LibraryError> {
    range(k >= 1, "lambda needs k >= 1")?;
    let xs = names("x", k);
    let body = if k == 1 {
        eq(v("x1"), v("x1"))
    } else {
        and_all(distinct(&xs))
    };
    Ok(exists_all(&refs(&xs), body))
}

/// `λ_{-1}`: the identically false sentence `EX x. (x = x & ~(x = x))`.
pub fn lambda_false() -> Formula {
    exists("x", and(eq(v("x"), v("x")), not(eq(v("x"), v("x")))))
}

/// `(..((t + t) + t) + ..) + t` with `k` occurrences of `t`.
fn multiple(t: &str, k: usize) -> Term {
    (1..k).fold(v(t), |acc, _| Term::app(GROUP_OP, vec![acc, v(t)]))
}

/// `η_k`: every element is a `k`-fold sum.
pub fn eta(k: usize) -> Result<Formula, LibraryError> {
    range(k >= 1, "eta needs k >= 1")?;
    Ok(forall("x", exists("y", eq(multiple("y", k), v("x")))))
}

/// `τ_k`: `k+1` copies of `x` summing to `x` forces `x` to be the identity.
pub fn tau(k: usize) -> Result<Formula, LibraryError> {
    range(k >= 1, "tau needs k >= 1")?;
    let identity = forall("y", eq(Term::app(GROUP_OP, vec![v("x"), v("y")]), v("y")));
    Ok(forall("x", implies(eq(multiple("x", k + 1), v("x")), identity)))
}

/// `α(x)`: `x` is maximal.
pub fn alpha_at(x: &str) -> Formula {
    forall("qa", implies(leq(v(x), v("qa")), eq(v("qa"), v(x))))
}

/// `β(x)`: `x` is minimal.
pub fn beta_at(x: &str) -> Formula {
    forall("qb", implies(leq(v("qb"), v(x)), eq(v("qb"), v(x))))
}

/// Exactly two `y` satisfy `p(y)`, spelled out with equality.
fn exactly_two(y1: &str, y2: &str, y3: &str, p: impl Fn(&str) -> Formula) -> Formula {
    exists_all(
        &[y1, y2],
        and_all([
            not(eq(v(y1), v(y2))),
            p(y1),
            p(y2),
            forall(y3, implies(p(y3), or(eq(v(y3), v(y1)), eq(v(y3), v(y2))))),
        ]),
    )
}

/// `δ₁`: every element is maximal or minimal, not both.
pub fn delta1() -> Formula {
    forall(
        "x",
        and(
            or(alpha_at("x"), beta_at("x")),
            not(and(alpha_at("x"), beta_at("x"))),
        ),
    )
}

/// `δ₂`: every maximal element lies above exactly two minimal ones.
pub fn delta2() -> Formula {
    forall(
        "x",
        implies(
            alpha_at("x"),
            exactly_two("y1", "y2", "y3", |y| and(beta_at(y), leq(v(y), v("x")))),
        ),
    )
}

/// `δ₃`: every minimal element lies below exactly two maximal ones.
pub fn delta3() -> Formula {
    forall(
        "x",
        implies(
            beta_at("x"),
            exactly_two("y1", "y2", "y3", |y| and(alpha_at(y), leq(v("x"), v(y)))),
        ),
    )
}

/// `ξ_m`: no subset is order isomorphic to the crown `K_m`.
///
/// Built from the order matrix of `crown(m)`, variables `a0, b0, a1, b1, ..`.
/// Distinctness needs no separate conjuncts: every two distinct crown
/// elements have a non-comparability in one direction, which reflexivity
/// rules out for equal images.
pub fn xi(m: usize) -> Result<Formula, LibraryError> {
    range((2..=XI_MAX).contains(&m), "xi needs 2 <= m <= 12")?;
    let crown = order::crown(m).map_err(|e| LibraryError::Range(e.to_string()))?;
    // crown(m): maximal a_j = j, minimal b_i = m + i
    let name = |e: usize| if e < m { format!("a{e}") } else { format!("b{}", e - m) };
    let order: Vec<usize> = (0..m).flat_map(|i| [i, m + i]).collect();
    let mut parts = Vec::new();
    for &p in &order {
        for &q in &order {
            if p != q {
                let atom = leq(v(&name(p)), v(&name(q)));
                parts.push(if crown.leq(p, q) { atom } else { not(atom) });
            }
        }
    }
    let vars: Vec<String> = order.iter().map(|&e| name(e)).collect();
    Ok(not(exists_all(&refs(&vars), and_all(parts))))
}

/// No induced cycle of length `m` in a graph (signature with `E`).
pub fn no_spanned_circle(m: usize) -> Result<Formula, LibraryError> {
    range(m >= 3, "circles have length >= 3")?;
    let vs: Vec<String> = (0..m).map(|i| format!("w{i}")).collect();
    let e = |i: usize, j: usize| rel(EDGE_RELATION, vec![v(&vs[i]), v(&vs[j])]);
    let mut parts = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if j == i + 1 || (i == 0 && j == m - 1) {
                parts.push(e(i, j));
            } else {
                parts.push(not(e(i, j)));
                parts.push(not(eq(v(&vs[i]), v(&vs[j]))));
            }
        }
    }
    // adjacent vertices differ when E is loop-free; say so anyway
    for i in 0..m {
        parts.push(not(eq(v(&vs[i]), v(&vs[(i + 1) % m]))));
    }
    Ok(not(exists_all(&refs(&vs), and_all(parts))))
}

fn join_eq(a: &str, b: &str, c: &str) -> Formula {
    eq(Term::app(JOIN, vec![v(a), v(b)]), v(c))
}

/// `w` is join-irreducible: nonzero and not a join of two smaller elements.
fn jir0(w: &str) -> Formula {
    and(
        exists("jz", not(leq(v(w), v("jz")))),
        forall_all(
            &["ja", "jb"],
            implies(join_eq("ja", "jb", w), or(eq(v("ja"), v(w)), eq(v("jb"), v(w)))),
        ),
    )
}

/// `w` is a maximal join-irreducible.
fn mjir0(w: &str) -> Formula {
    and(
        jir0(w),
        forall("mw", implies(and(jir0("mw"), leq(v(w), v("mw"))), eq(v("mw"), v(w)))),
    )
}

/// `ρ_jir(y, x)`: `y` is join-irreducible and `y <= x`.
pub fn jir_at(y: &str, x: &str) -> Formula {
    and(jir0(y), leq(v(y), v(x)))
}

/// `ρ_mjir(y, x)`: `y` is a maximal join-irreducible and `y <= x`.
pub fn mjir_at(y: &str, x: &str) -> Formula {
    and(mjir0(y), leq(v(y), v(x)))
}

/// Some join-irreducible lies below both `a` and `b`.
fn common_jir(a: &str, b: &str) -> Formula {
    exists("wz", and_all([jir0("wz"), leq(v("wz"), v(a)), leq(v("wz"), v(b))]))
}

/// `ρ*_edge(y1, y2, x)`: an edge of the E-graph on the maximal
/// join-irreducibles below `x`.
pub fn edge_at(y1: &str, y2: &str, x: &str) -> Formula {
    and_all([
        mjir_at(y1, x),
        mjir_at(y2, x),
        not(eq(v(y1), v(y2))),
        exists("ez", and_all([lt(v("ez"), v(y1)), lt(v("ez"), v(y2)), jir_at("ez", x)])),
    ])
}

/// `ρ*_∃2(x)`: every vertex below `x` has at least two neighbours.
pub fn exists2_at(x: &str) -> Formula {
    forall(
        "sy",
        implies(
            mjir_at("sy", x),
            exists_all(
                &["sy1", "sy2"],
                and_all([
                    edge_at("sy", "sy1", x),
                    edge_at("sy", "sy2", x),
                    not(eq(v("sy1"), v("sy2"))),
                ]),
            ),
        ),
    )
}

/// `ρ*_≤2(x)`: every vertex below `x` has at most two neighbours.
pub fn atmost2_at(x: &str) -> Formula {
    forall(
        "ty",
        implies(
            mjir_at("ty", x),
            forall_all(
                &["ty1", "ty2", "ty3"],
                implies(
                    and_all([
                        edge_at("ty", "ty1", x),
                        edge_at("ty", "ty2", x),
                        edge_at("ty", "ty3", x),
                    ]),
                    or_all([
                        eq(v("ty1"), v("ty2")),
                        eq(v("ty1"), v("ty3")),
                        eq(v("ty2"), v("ty3")),
                    ]),
                ),
            ),
        ),
    )
}

/// `ρ*_=2(x)`: every vertex below `x` has exactly two neighbours.
pub fn eq2_at(x: &str) -> Formula {
    and(exists2_at(x), atmost2_at(x))
}

/// `x` is the join of the maximal join-irreducibles below it.
fn spanned_by_max(x: &str, p: &str, q: &str) -> Formula {
    forall(
        p,
        implies(jir_at(p, x), exists(q, and(mjir_at(q, x), leq(v(p), v(q))))),
    )
}

/// `ρ_mcyclic(x)`: `x` is multicyclic.
///
/// The last conjunct reads "every join-irreducible below `x` lies below a
/// maximal join-irreducible below `x`", i.e. `x` is the join of those.
pub fn mcyclic_at(x: &str) -> Formula {
    and_all([
        exists("cy", mjir_at("cy", x)),
        eq2_at(x),
        spanned_by_max(x, "cy", "cz"),
    ])
}

/// `{y0, y1}` is a V-set of `x`.
pub fn vset_at(y0: &str, y1: &str, x: &str) -> Formula {
    and_all([
        mjir_at(y0, x),
        mjir_at(y1, x),
        not(eq(v(y0), v(y1))),
        common_jir(y0, y1),
    ])
}

/// `{y0, .., y3}` is a W-set of `x`: four maximal join-irreducibles below `x`
/// admitting an order in which consecutive ones, and only those, share a
/// join-irreducible lower bound.
pub fn wset_at(ys: [&str; 4], x: &str) -> Formula {
    let mut paths = Vec::new();
    for p in permutations4() {
        // each path once, not also reversed
        if p[0] > p[3] {
            continue;
        }
        let y = |i: usize| ys[p[i]];
        paths.push(and_all([
            common_jir(y(0), y(1)),
            common_jir(y(1), y(2)),
            common_jir(y(2), y(3)),
            not(common_jir(y(0), y(2))),
            not(common_jir(y(0), y(3))),
            not(common_jir(y(1), y(3))),
        ]));
    }
    let names: Vec<String> = ys.iter().map(|s| s.to_string()).collect();
    and_all(
        ys.iter()
            .map(|y| mjir_at(y, x))
            .chain(distinct(&names))
            .chain([or_all(paths)]),
    )
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| p.contains(&i)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// `ρ_VW(y)`: `y` is a VW-element.
///
/// Per maximal join-irreducible `a` below `y`: either `a` is in exactly one
/// V-set and no W-set, or `a` is in exactly one W-set.
pub fn vw_at(y: &str) -> Formula {
    let a = "va";
    let one_v = exists(
        "vb",
        and(
            vset_at(a, "vb", y),
            forall("vc", implies(vset_at(a, "vc", y), eq(v("vc"), v("vb")))),
        ),
    );
    let some_w = exists_all(&["vb", "vc", "vd"], wset_at([a, "vb", "vc", "vd"], y));
    let among = |u: &str| or_all([eq(v(u), v("vb")), eq(v(u), v("vc")), eq(v(u), v("vd"))]);
    let one_w = exists_all(
        &["vb", "vc", "vd"],
        and(
            wset_at([a, "vb", "vc", "vd"], y),
            forall_all(
                &["ve", "vf", "vg"],
                implies(
                    wset_at([a, "ve", "vf", "vg"], y),
                    and_all([among("ve"), among("vf"), among("vg")]),
                ),
            ),
        ),
    );
    and_all([
        exists("vh", mjir_at("vh", y)),
        spanned_by_max(y, "vi", "vj"),
        forall(a, implies(mjir_at(a, y), or(and(one_v, not(some_w)), one_w))),
    ])
}

/// `ψ_DCEP`: every multicyclic element is the join of two VW-elements whose
/// ideals share no maximal join-irreducible.
pub fn psi_dcep() -> Formula {
    forall(
        "x",
        implies(
            mcyclic_at("x"),
            exists_all(
                &["y", "z"],
                and_all([
                    join_eq("y", "z", "x"),
                    not(exists("t", and(mjir_at("t", "y"), mjir_at("t", "z")))),
                    vw_at("y"),
                    vw_at("z"),
                ]),
            ),
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folang::{eval, parse, Valuation};
    use crate::order::{crown, downset_lattice, DownSetFamily};
    use crate::props::Analysis;
    use crate::structures::{circle_graph, cyclic_group, Signature};
    use crate::Lattice;

    fn holds(f: &Formula, s: &crate::FiniteStructure) -> bool {
        eval(f, s, &Valuation::new()).unwrap()
    }

    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn lambda_counts_elements() {
        for n in 3..=9 {
            let g = circle_graph(n).unwrap();
            for k in 1..=10 {
                assert_eq!(holds(&lambda(k).unwrap(), g.structure()), n >= k, "k={k} n={n}");
            }
            assert!(!holds(&lambda_false(), g.structure()));
        }
    }

    #[test]
    fn group_sentences_follow_gcd() {
        for n in 1..=9 {
            let g = cyclic_group(n).unwrap();
            for k in 1..=6 {
                let coprime = gcd(k, n) == 1;
                assert_eq!(holds(&eta(k).unwrap(), &g), coprime, "eta k={k} n={n}");
                assert_eq!(holds(&tau(k).unwrap(), &g), coprime, "tau k={k} n={n}");
            }
        }
    }

    #[test]
    fn crown_sentences() {
        for n in 2..=6 {
            let s = crown(n).unwrap().to_structure();
            assert!(holds(&delta1(), &s));
            assert!(holds(&delta2(), &s));
            assert!(holds(&delta3(), &s));
        }
        let k5 = crown(5).unwrap().to_structure();
        let k7 = crown(7).unwrap().to_structure();
        assert!(holds(&xi(5).unwrap(), &k7));
        assert!(!holds(&xi(5).unwrap(), &k5));
        // a chain is neither
        let c = crate::order::chain_poset(3).unwrap().to_structure();
        assert!(!holds(&delta1(), &c));
    }

    #[test]
    fn printed_library_parses_back() {
        let lat = Signature::lattice();
        let mut sigs: Vec<(Formula, Signature)> = vec![
            (lambda(4).unwrap(), Signature::graph()),
            (lambda_false(), Signature::graph()),
            (eta(3).unwrap(), Signature::group()),
            (tau(3).unwrap(), Signature::group()),
            (no_spanned_circle(5).unwrap(), Signature::graph()),
            (xi(4).unwrap(), Signature::order()),
            (delta1(), Signature::order()),
            (delta2(), Signature::order()),
            (delta3(), Signature::order()),
        ];
        for name in [
            "rho_edge",
            "rho_exists2",
            "rho_atmost2",
            "rho_eq2",
            "rho_mcyclic",
            "psi_dcep",
            "vset",
            "wset",
            "vw",
            "jir",
            "mjir",
        ] {
            sigs.push((builtin(name, &[]).unwrap(), lat.clone()));
        }
        for (f, sig) in sigs {
            let text = f.to_string();
            assert_eq!(parse(&text, &sig).unwrap(), f, "{text}");
        }
    }

    #[test]
    fn builtin_errors() {
        assert_eq!(builtin("nope", &[]), Err(LibraryError::Unknown("nope".into())));
        assert!(matches!(builtin("lambda", &[]), Err(LibraryError::Params { .. })));
        assert!(matches!(builtin("xi", &[13]), Err(LibraryError::Range(_))));
        assert!(builtin("xi", &[12]).is_ok());
    }

    fn crown_lattice(n: usize) -> Lattice {
        let p = crown(n).unwrap();
        DownSetFamily::new(&p).unwrap().lattice
    }

    #[test]
    fn psi_dcep_on_small_crowns() {
        let d3 = downset_lattice(&crown(3).unwrap()).unwrap();
        assert_eq!(d3.size(), 18);
        assert!(!holds(&psi_dcep(), &d3.to_structure()));
        let d4 = crown_lattice(4);
        assert!(holds(&psi_dcep(), &d4.to_structure()));
    }

    #[test]
    fn lattice_formulas_match_combinatorics() {
        for n in 3..=4 {
            let d = crown_lattice(n);
            let s = d.to_structure();
            let a = Analysis::new(&d).unwrap();
            let mut mc = crate::folang::eval::Evaluator::new(&mcyclic_at("x"), &s, &Default::default()).unwrap();
            let mut vw = crate::folang::eval::Evaluator::new(&vw_at("x"), &s, &Default::default()).unwrap();
            let mc = mc.eval_each().unwrap();
            let vw = vw.eval_each().unwrap();
            for x in 0..d.size() {
                assert_eq!(mc[x], a.is_multicyclic(x).unwrap(), "mcyclic n={n} x={x}");
                assert_eq!(vw[x], a.is_vw(x), "vw n={n} x={x}");
            }
        }
    }
}
