//! Evaluation by exhaustive quantifier expansion.
//!
//! A formula is compiled once per structure: negations are pushed to the
//! atoms, `&`/`|` are flattened, quantifiers are pushed inward past
//! subformulas that do not mention the bound variable, and conjuncts are
//! ordered cheapest first so that cheap guards prune early. Quantified
//! subformulas with at most three free variables are memoized on the values
//! of those variables. None of this changes the truth value; it only
//! decides the order in which the domain is scanned.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::{Formula, Term};
use crate::structures::FiniteStructure;

pub const DEFAULT_MAX_DOMAIN: usize = 512;

const MEMO_MAX_VARS: usize = 3;
const DENSE_MEMO_LIMIT: usize = 1 << 22;

/// Values for (at least) the free variables of a formula.
pub type Valuation = BTreeMap<String, usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("free variable `{0}` has no value")]
    Unbound(String),
    #[error("value {value} of `{var}` is outside the domain of size {size}")]
    OutOfDomain { var: String, value: usize, size: usize },
    #[error("domain of size {size} exceeds the limit {limit}")]
    DomainTooLarge { size: usize, limit: usize },
}

#[derive(Clone, Debug)]
pub struct EvalOptions {
    pub max_domain: usize,
}

impl Default for EvalOptions {
    /// Reads `SLIMCON_MAX_DOMAIN`, falling back to 512.
    fn default() -> Self {
        let max_domain = std::env::var("SLIMCON_MAX_DOMAIN")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(DEFAULT_MAX_DOMAIN);
        EvalOptions { max_domain }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum CTerm {
    Var(usize),
    App(usize, Vec<CTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Const(bool),
    Rel { rel: usize, args: Vec<CTerm>, pos: bool },
    Eq { a: CTerm, b: CTerm, pos: bool },
    And(Vec<usize>),
    Or(Vec<usize>),
    Quant { forall: bool, slot: usize, body: usize },
}

struct Info {
    free: Vec<usize>,
    cost: f64,
    memo: Option<usize>,
    // no relation or function symbols below: only equality between variables
    pure: bool,
}

enum Memo {
    // allocated on first store
    Dense { cells: usize, table: Vec<u8> },
    Sparse(HashMap<usize, bool>),
}

/// A formula compiled against one structure. Repeated calls to
/// [`Evaluator::eval`] share the memo tables.
pub struct Evaluator<'s> {
    s: &'s FiniteStructure,
    nodes: Vec<Node>,
    info: Vec<Info>,
    interned: HashMap<Node, usize>,
    memos: Vec<Memo>,
    root: usize,
    free: Vec<(String, usize)>,
    slots: usize,
}

fn term_slots(t: &CTerm, out: &mut Vec<usize>) {
    match t {
        CTerm::Var(s) => out.push(*s),
        CTerm::App(_, args) => args.iter().for_each(|a| term_slots(a, out)),
    }
}

fn merge(parts: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = parts.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v
}

impl<'s> Evaluator<'s> {
    pub fn new(f: &Formula, s: &'s FiniteStructure, opts: &EvalOptions) -> Result<Self, EvalError> {
        if s.size() > opts.max_domain {
            return Err(EvalError::DomainTooLarge {
                size: s.size(),
                limit: opts.max_domain,
            });
        }
        let free: Vec<(String, usize)> = f.free_vars().into_iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut ev = Evaluator {
            s,
            nodes: Vec::new(),
            info: Vec::new(),
            interned: HashMap::new(),
            memos: Vec::new(),
            root: 0,
            slots: free.len(),
            free: free.clone(),
        };
        let mut scope: Vec<(String, usize)> = free;
        ev.root = ev.compile(f, true, &mut scope)?;
        Ok(ev)
    }

    /// Evaluates under `val`, which must cover the free variables.
    pub fn eval(&mut self, val: &Valuation) -> Result<bool, EvalError> {
        let n = self.s.size();
        let mut env = vec![0usize; self.slots.max(1)];
        for (name, slot) in &self.free {
            let &value = val.get(name).ok_or_else(|| EvalError::Unbound(name.clone()))?;
            if value >= n {
                return Err(EvalError::OutOfDomain {
                    var: name.clone(),
                    value,
                    size: n,
                });
            }
            env[*slot] = value;
        }
        let mut run = Run {
            s: self.s,
            nodes: &self.nodes,
            info: &self.info,
            memos: &mut self.memos,
        };
        Ok(run.run(self.root, &mut env))
    }

    /// Evaluates a formula with exactly one free variable at each element.
    pub fn eval_each(&mut self) -> Result<Vec<bool>, EvalError> {
        let n = self.s.size();
        let name = match self.free.as_slice() {
            [(name, _)] => name.clone(),
            _ => return Err(EvalError::Unbound(format!("{} free variables", self.free.len()))),
        };
        (0..n)
            .map(|x| self.eval(&Valuation::from([(name.clone(), x)])))
            .collect()
    }

    fn compile_term(&self, t: &Term, scope: &[(String, usize)]) -> Result<CTerm, EvalError> {
        match t {
            Term::Var(v) => scope
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|&(_, slot)| CTerm::Var(slot))
                .ok_or_else(|| EvalError::Unbound(v.clone())),
            Term::App(f, args) => {
                let (id, sym) = self
                    .s
                    .signature()
                    .function(f)
                    .ok_or_else(|| EvalError::SignatureMismatch(format!("no function symbol `{f}`")))?;
                if sym.arity != args.len() {
                    return Err(EvalError::SignatureMismatch(format!(
                        "`{f}` has arity {}, used with {}",
                        sym.arity,
                        args.len()
                    )));
                }
                let args = args
                    .iter()
                    .map(|a| self.compile_term(a, scope))
                    .collect::<Result<_, _>>()?;
                Ok(CTerm::App(id, args))
            }
        }
    }

    fn compile(&mut self, f: &Formula, pos: bool, scope: &mut Vec<(String, usize)>) -> Result<usize, EvalError> {
        Ok(match f {
            Formula::Rel(r, args) => {
                let (rel, sym) = self
                    .s
                    .signature()
                    .relation(r)
                    .ok_or_else(|| EvalError::SignatureMismatch(format!("no relation symbol `{r}`")))?;
                if sym.arity != args.len() {
                    return Err(EvalError::SignatureMismatch(format!(
                        "`{r}` has arity {}, used with {}",
                        sym.arity,
                        args.len()
                    )));
                }
                let args = args
                    .iter()
                    .map(|a| self.compile_term(a, scope))
                    .collect::<Result<_, _>>()?;
                self.intern(Node::Rel { rel, args, pos })
            }
            Formula::Eq(a, b) => {
                let (a, b) = (self.compile_term(a, scope)?, self.compile_term(b, scope)?);
                if a == b {
                    self.intern(Node::Const(pos))
                } else {
                    self.intern(Node::Eq { a, b, pos })
                }
            }
            Formula::Not(a) => self.compile(a, !pos, scope)?,
            Formula::And(a, b) | Formula::Or(a, b) => {
                let conj = matches!(f, Formula::And(..)) == pos;
                let parts = vec![self.compile(a, pos, scope)?, self.compile(b, pos, scope)?];
                self.junction(conj, parts)
            }
            Formula::Implies(a, b) => {
                // a -> b is ~a | b
                let parts = vec![self.compile(a, !pos, scope)?, self.compile(b, pos, scope)?];
                self.junction(!pos, parts)
            }
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                let forall = matches!(f, Formula::Forall(..)) == pos;
                let slot = self.slots;
                self.slots += 1;
                scope.push((v.clone(), slot));
                let body = self.compile(a, pos, scope);
                scope.pop();
                self.quantifier(forall, slot, body?)
            }
        })
    }

    fn intern(&mut self, node: Node) -> usize {
        if let Some(&id) = self.interned.get(&node) {
            return id;
        }
        let n = self.s.size() as f64;
        let (free, cost) = match &node {
            Node::Const(_) => (Vec::new(), 0.0),
            Node::Rel { args, .. } => {
                let mut v = Vec::new();
                args.iter().for_each(|a| term_slots(a, &mut v));
                (merge(v), 1.0)
            }
            Node::Eq { a, b, .. } => {
                let mut v = Vec::new();
                term_slots(a, &mut v);
                term_slots(b, &mut v);
                (merge(v), 1.0)
            }
            Node::And(parts) | Node::Or(parts) => (
                merge(parts.iter().flat_map(|&p| self.info[p].free.iter().copied())),
                parts.iter().map(|&p| self.info[p].cost).sum(),
            ),
            Node::Quant { slot, body, .. } => {
                let free: Vec<usize> = self.info[*body].free.iter().copied().filter(|s| s != slot).collect();
                let range = if self.info[*body].pure { n.min(free.len() as f64 + 1.0) } else { n };
                (free, range * self.info[*body].cost)
            }
        };
        let pure = match &node {
            Node::Const(_) => true,
            Node::Rel { .. } => false,
            Node::Eq { a, b, .. } => matches!((a, b), (CTerm::Var(_), CTerm::Var(_))),
            Node::And(parts) | Node::Or(parts) => parts.iter().all(|&p| self.info[p].pure),
            Node::Quant { body, .. } => self.info[*body].pure,
        };
        let mut memo = None;
        let mut cost = cost;
        if matches!(node, Node::Quant { .. }) && free.len() <= MEMO_MAX_VARS {
            let cells = (0..free.len()).try_fold(1usize, |acc, _| acc.checked_mul(self.s.size()));
            memo = Some(self.memos.len());
            self.memos.push(match cells {
                Some(c) if c <= DENSE_MEMO_LIMIT => Memo::Dense { cells: c, table: Vec::new() },
                _ => Memo::Sparse(HashMap::new()),
            });
            // amortized: each point is computed once
            cost = cost.min(4.0);
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.info.push(Info { free, cost, memo, pure });
        self.interned.insert(node, id);
        id
    }

    fn junction(&mut self, conj: bool, parts: Vec<usize>) -> usize {
        let mut flat = Vec::new();
        for p in parts {
            match &self.nodes[p] {
                Node::And(inner) if conj => flat.extend(inner.iter().copied()),
                Node::Or(inner) if !conj => flat.extend(inner.iter().copied()),
                Node::Const(b) if *b == conj => {}
                Node::Const(_) => return self.intern(Node::Const(!conj)),
                _ => flat.push(p),
            }
        }
        flat.sort_by(|&a, &b| self.info[a].cost.total_cmp(&self.info[b].cost).then(a.cmp(&b)));
        flat.dedup();
        match flat.len() {
            0 => self.intern(Node::Const(conj)),
            1 => flat[0],
            _ if conj => self.intern(Node::And(flat)),
            _ => self.intern(Node::Or(flat)),
        }
    }

    fn mentions(&self, id: usize, slot: usize) -> bool {
        self.info[id].free.binary_search(&slot).is_ok()
    }

    fn quantifier(&mut self, forall: bool, slot: usize, body: usize) -> usize {
        if self.s.size() == 0 {
            return self.intern(Node::Const(forall));
        }
        if !self.mentions(body, slot) {
            return body;
        }
        match self.nodes[body].clone() {
            // EX v (A & B) with v not in B: B & EX v A; dually for ALL and |
            Node::And(parts) | Node::Or(parts) => {
                let is_and = matches!(self.nodes[body], Node::And(_));
                if is_and != forall {
                    let (inner, outer): (Vec<usize>, Vec<usize>) =
                        parts.into_iter().partition(|&p| self.mentions(p, slot));
                    if outer.is_empty() {
                        return self.intern(Node::Quant { forall, slot, body });
                    }
                    let inner = self.junction(is_and, inner);
                    let q = self.quantifier(forall, slot, inner);
                    let mut all = outer;
                    all.push(q);
                    self.junction(is_and, all)
                } else {
                    // EX distributes over |, ALL over &
                    let qs = parts.into_iter().map(|p| self.quantifier(forall, slot, p)).collect();
                    self.junction(is_and, qs)
                }
            }
            _ => self.intern(Node::Quant { forall, slot, body }),
        }
    }

}

struct Run<'a> {
    s: &'a FiniteStructure,
    nodes: &'a [Node],
    info: &'a [Info],
    memos: &'a mut [Memo],
}

impl Run<'_> {
    /// Values worth trying for the variable bound at `id`. A body built from
    /// equalities alone cannot tell apart two elements that no free variable
    /// names, so the named values and one fresh element suffice.
    fn candidates(&self, id: usize, body: usize, env: &[usize]) -> Vec<usize> {
        let n = self.s.size();
        if !self.info[body].pure {
            return (0..n).collect();
        }
        let mut named: Vec<usize> = self.info[id].free.iter().map(|&s| env[s]).collect();
        named.sort_unstable();
        named.dedup();
        if let Some(fresh) = (0..n).find(|d| named.binary_search(d).is_err()) {
            named.push(fresh);
        }
        named
    }

    fn term(&self, t: &CTerm, env: &[usize]) -> usize {
        match t {
            CTerm::Var(s) => env[*s],
            CTerm::App(f, args) => {
                let n = self.s.size();
                let idx = args.iter().fold(0, |acc, a| acc * n + self.term(a, env));
                self.s.apply_at(*f, idx)
            }
        }
    }

    fn run(&mut self, id: usize, env: &mut [usize]) -> bool {
        let nodes = self.nodes;
        match &nodes[id] {
            Node::Const(b) => *b,
            Node::Rel { rel, args, pos } => {
                let n = self.s.size();
                let idx = args.iter().fold(0, |acc, a| acc * n + self.term(a, env));
                self.s.holds_at(*rel, idx) == *pos
            }
            Node::Eq { a, b, pos } => (self.term(a, env) == self.term(b, env)) == *pos,
            Node::And(parts) => parts.iter().all(|&p| self.run(p, env)),
            Node::Or(parts) => parts.iter().any(|&p| self.run(p, env)),
            &Node::Quant { forall, slot, body } => {
                let info = &self.info[id];
                let key = info.memo.map(|m| {
                    let n = self.s.size();
                    (m, info.free.iter().fold(0, |acc, &s| acc * n + env[s]))
                });
                if let Some((m, k)) = key {
                    let hit = match &self.memos[m] {
                        Memo::Dense { table, .. } if table.is_empty() => None,
                        Memo::Dense { table, .. } => match table[k] {
                            0 => None,
                            v => Some(v == 2),
                        },
                        Memo::Sparse(h) => h.get(&k).copied(),
                    };
                    if let Some(v) = hit {
                        return v;
                    }
                }
                let saved = env[slot];
                let mut result = forall;
                for d in self.candidates(id, body, env) {
                    env[slot] = d;
                    if self.run(body, env) != forall {
                        result = !forall;
                        break;
                    }
                }
                env[slot] = saved;
                if let Some((m, k)) = key {
                    match &mut self.memos[m] {
                        Memo::Dense { cells, table } => {
                            if table.is_empty() {
                                *table = vec![0; *cells];
                            }
                            table[k] = 1 + result as u8;
                        }
                        Memo::Sparse(h) => {
                            h.insert(k, result);
                        }
                    }
                }
                result
            }
        }
    }
}

/// Truth of `f` in `s` under `v`, with default options.
pub fn eval(f: &Formula, s: &FiniteStructure, v: &Valuation) -> Result<bool, EvalError> {
    eval_with(f, s, v, &EvalOptions::default())
}

pub fn eval_with(f: &Formula, s: &FiniteStructure, v: &Valuation, opts: &EvalOptions) -> Result<bool, EvalError> {
    Evaluator::new(f, s, opts)?.eval(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folang::parse;
    use crate::structures::{circle_graph, cyclic_group, Signature};

    // direct Tarskian semantics, no rewriting
    fn naive(f: &Formula, s: &FiniteStructure, v: &mut Valuation) -> bool {
        fn term(t: &Term, s: &FiniteStructure, v: &Valuation) -> usize {
            match t {
                Term::Var(x) => v[x],
                Term::App(f, args) => {
                    let vals: Vec<usize> = args.iter().map(|a| term(a, s, v)).collect();
                    s.apply(s.signature().function(f).unwrap().0, &vals)
                }
            }
        }
        match f {
            Formula::Rel(r, args) => {
                let vals: Vec<usize> = args.iter().map(|a| term(a, s, v)).collect();
                s.holds(s.signature().relation(r).unwrap().0, &vals)
            }
            Formula::Eq(a, b) => term(a, s, v) == term(b, s, v),
            Formula::Not(a) => !naive(a, s, v),
            Formula::And(a, b) => naive(a, s, v) && naive(b, s, v),
            Formula::Or(a, b) => naive(a, s, v) || naive(b, s, v),
            Formula::Implies(a, b) => !naive(a, s, v) || naive(b, s, v),
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                let old = v.get(x).copied();
                let forall = matches!(f, Formula::Forall(..));
                let mut res = forall;
                for d in 0..s.size() {
                    v.insert(x.clone(), d);
                    if naive(a, s, v) != forall {
                        res = !forall;
                        break;
                    }
                }
                match old {
                    Some(o) => v.insert(x.clone(), o),
                    None => v.remove(x),
                };
                res
            }
        }
    }

    #[test]
    fn agrees_with_naive_semantics() {
        let g = circle_graph(6).unwrap();
        let sig = Signature::graph();
        let sentences = [
            "ALL x. EX y. E(x,y)",
            "EX x. EX y. EX z. E(x,y) & E(y,z) & E(z,x)",
            "ALL x. ALL y. E(x,y) -> E(y,x)",
            "ALL x. EX y. EX z. ~(y = z) & E(x,y) & E(x,z) & (ALL w. E(x,w) -> w = y | w = z)",
            "EX x. ALL y. ~E(x,y) | (EX z. E(y,z) & ~(z = x))",
            "ALL x. x = x -> EX y. E(y,y)",
            "EX x. (ALL y. E(x,y)) | x = x",
            "ALL x. EX x. E(x,x) | ~(x = x) | (EX y. E(x,y))",
        ];
        for src in sentences {
            let f = parse(src, &sig).unwrap();
            let expected = naive(&f, g.structure(), &mut Valuation::new());
            assert_eq!(eval(&f, g.structure(), &Valuation::new()).unwrap(), expected, "{src}");
        }
    }

    #[test]
    fn equality_only_shortcut() {
        // mixes pure bodies with relational ones and shadowing
        let sentences = [
            "EX a. EX b. EX c. ~(a = b) & ~(b = c) & ~(a = c)",
            "ALL a. ALL b. ALL c. a = b | b = c | a = c",
            "ALL a. EX b. ~(a = b) & (ALL c. c = a | c = b)",
            "EX a. ALL b. EX c. ~(c = a) & ~(c = b)",
            "ALL a. EX b. E(a,b) & (EX c. ~(c = a) & ~(c = b))",
            "EX a. EX b. ~(a = b) & (ALL a. a = b | E(a,b))",
            "ALL a. EX b. (EX a. ~(a = b)) & ~(a = b)",
        ];
        let sig = Signature::graph();
        for n in 2..=6 {
            let g = circle_graph(n).unwrap();
            for src in sentences {
                let f = parse(src, &sig).unwrap();
                let expected = naive(&f, g.structure(), &mut Valuation::new());
                assert_eq!(eval(&f, g.structure(), &Valuation::new()).unwrap(), expected, "{src} on C{n}");
            }
        }
    }

    #[test]
    fn group_sentences() {
        let sig = Signature::group();
        let eta2 = parse("ALL x. EX y. +(y,y) = x", &sig).unwrap();
        assert!(eval(&eta2, &cyclic_group(5).unwrap(), &Valuation::new()).unwrap());
        assert!(!eval(&eta2, &cyclic_group(4).unwrap(), &Valuation::new()).unwrap());
    }

    #[test]
    fn free_variables_and_errors() {
        let g = circle_graph(5).unwrap();
        let f = parse("E(x, y)", &Signature::graph()).unwrap();
        let val = |a, b| Valuation::from([("x".to_string(), a), ("y".to_string(), b)]);
        assert!(eval(&f, g.structure(), &val(0, 1)).unwrap());
        assert!(!eval(&f, g.structure(), &val(0, 2)).unwrap());
        assert_eq!(
            eval(&f, g.structure(), &Valuation::from([("x".to_string(), 0)])),
            Err(EvalError::Unbound("y".into()))
        );
        assert!(matches!(eval(&f, g.structure(), &val(0, 9)), Err(EvalError::OutOfDomain { .. })));
        let h = parse("x <= y", &Signature::order()).unwrap();
        assert!(matches!(
            eval(&h, g.structure(), &val(0, 1)),
            Err(EvalError::SignatureMismatch(_))
        ));
        let small = EvalOptions { max_domain: 4 };
        assert!(matches!(
            eval_with(&f, g.structure(), &val(0, 1), &small),
            Err(EvalError::DomainTooLarge { .. })
        ));
    }

    #[test]
    fn evaluator_reuse() {
        let g = circle_graph(7).unwrap();
        let f = parse("EX y. EX z. E(x,y) & E(y,z) & ~(x = z)", &Signature::graph()).unwrap();
        let mut ev = Evaluator::new(&f, g.structure(), &EvalOptions::default()).unwrap();
        assert_eq!(ev.eval_each().unwrap(), vec![true; 7]);
    }
}
