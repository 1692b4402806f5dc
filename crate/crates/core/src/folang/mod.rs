//! First-order logic with equality over finite structures.
//!
//! Concrete syntax:
//!
//! ```text
//! formula := quant | impl
//! quant   := ("ALL" | "EX") ident "." formula
//! impl    := disj ["->" formula]
//! disj    := conj {"|" conj}
//! conj    := neg {"&" neg}
//! neg     := "~" neg | atom
//! atom    := "(" formula ")" | ident "(" terms ")" | term ("=" | "<=" | "<") term
//! term    := ident | ident "(" terms ")"
//! ```
//!
//! `x <= y` is the order relation `leq(x, y)`; `x < y` abbreviates
//! `x <= y & ~(x = y)`.

mod eval;
pub mod library;
mod parser;
mod separation;

use std::collections::BTreeSet;
use std::fmt;

pub use eval::{eval, eval_with, EvalError, EvalOptions, Evaluator, Valuation, DEFAULT_MAX_DOMAIN};
pub use parser::{parse, ParseError};
pub use separation::{separation_report, SeparationReport, SeparationRow};

use crate::structures::ORDER_RELATION;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Rel(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(name.to_string(), args)
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut terms = BTreeSet::new();
        match self {
            Formula::Rel(_, args) => args.iter().for_each(|t| t.collect_vars(&mut terms)),
            Formula::Eq(a, b) => {
                a.collect_vars(&mut terms);
                b.collect_vars(&mut terms);
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
        out.extend(terms.into_iter().filter(|v| !bound.contains(v)));
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Rel(..) | Formula::Eq(..) => 1,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Rel(..) | Formula::Eq(..) => 0,
            Formula::Not(a) => a.quantifier_depth(),
            Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.quantifier_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.quantifier_depth().max(b.quantifier_depth())
            }
        }
    }

    /// Relation and function symbols used, with arities.
    pub fn symbols(&self) -> (BTreeSet<(String, usize)>, BTreeSet<(String, usize)>) {
        fn term(t: &Term, funs: &mut BTreeSet<(String, usize)>) {
            if let Term::App(f, args) = t {
                funs.insert((f.clone(), args.len()));
                args.iter().for_each(|a| term(a, funs));
            }
        }
        fn go(f: &Formula, rels: &mut BTreeSet<(String, usize)>, funs: &mut BTreeSet<(String, usize)>) {
            match f {
                Formula::Rel(r, args) => {
                    rels.insert((r.clone(), args.len()));
                    args.iter().for_each(|a| term(a, funs));
                }
                Formula::Eq(a, b) => {
                    term(a, funs);
                    term(b, funs);
                }
                Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => go(a, rels, funs),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    go(a, rels, funs);
                    go(b, rels, funs);
                }
            }
        }
        let (mut rels, mut funs) = (BTreeSet::new(), BTreeSet::new());
        go(self, &mut rels, &mut funs);
        (rels, funs)
    }

    // precedence: quantifiers 0, -> 1, | 2, & 3, ~ 4, atoms 5
    fn level(&self) -> u8 {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => 0,
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(..) => 4,
            Formula::Rel(..) | Formula::Eq(..) => 5,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.level() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Formula::Rel(r, args) if r == ORDER_RELATION && args.len() == 2 => {
                write!(f, "{} <= {}", args[0], args[1])?
            }
            Formula::Rel(r, args) => {
                write!(f, "{r}(")?;
                write_args(f, args)?;
                f.write_str(")")?
            }
            Formula::Eq(a, b) => write!(f, "{a} = {b}")?,
            Formula::Not(a) => {
                f.write_str("~")?;
                // `~x = y` parses fine but reads badly
                let infix = matches!(**a, Formula::Eq(..))
                    || matches!(&**a, Formula::Rel(r, args) if r == ORDER_RELATION && args.len() == 2);
                a.write(f, if infix { 6 } else { 4 })?
            }
            Formula::And(a, b) => {
                a.write(f, 3)?;
                f.write_str(" & ")?;
                b.write(f, 4)?
            }
            Formula::Or(a, b) => {
                a.write(f, 2)?;
                f.write_str(" | ")?;
                b.write(f, 3)?
            }
            Formula::Implies(a, b) => {
                a.write(f, 2)?;
                f.write_str(" -> ")?;
                b.write(f, 0)?
            }
            Formula::Forall(v, a) => {
                write!(f, "ALL {v}. ")?;
                a.write(f, 0)?
            }
            Formula::Exists(v, a) => {
                write!(f, "EX {v}. ")?;
                a.write(f, 0)?
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(name, args) if args.is_empty() => f.write_str(name),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                write_args(f, args)?;
                f.write_str(")")
            }
        }
    }
}

/// Prints in the concrete syntax; `parse` reads the output back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

// small constructors used by the library and tests

pub fn v(name: &str) -> Term {
    Term::var(name)
}

pub fn rel(name: &str, args: Vec<Term>) -> Formula {
    Formula::Rel(name.to_string(), args)
}

pub fn leq(a: Term, b: Term) -> Formula {
    rel(ORDER_RELATION, vec![a, b])
}

pub fn lt(a: Term, b: Term) -> Formula {
    and(leq(a.clone(), b.clone()), not(eq(a, b)))
}

pub fn eq(a: Term, b: Term) -> Formula {
    Formula::Eq(a, b)
}

pub fn not(a: Formula) -> Formula {
    Formula::Not(Box::new(a))
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}

pub fn forall(var: &str, a: Formula) -> Formula {
    Formula::Forall(var.to_string(), Box::new(a))
}

pub fn exists(var: &str, a: Formula) -> Formula {
    Formula::Exists(var.to_string(), Box::new(a))
}

/// Left-nested conjunction. Panics on an empty list.
pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
    parts.into_iter().reduce(and).expect("nonempty conjunction")
}

/// Left-nested disjunction. Panics on an empty list.
pub fn or_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
    parts.into_iter().reduce(or).expect("nonempty disjunction")
}

pub fn forall_all(vars: &[&str], body: Formula) -> Formula {
    vars.iter().rev().fold(body, |acc, v| forall(v, acc))
}

pub fn exists_all(vars: &[&str], body: Formula) -> Formula {
    vars.iter().rev().fold(body, |acc, v| exists(v, acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::Signature;

    #[test]
    fn printing_keeps_structure() {
        let f = forall("x", implies(and(leq(v("x"), v("y")), not(eq(v("x"), v("y")))), exists("z", eq(v("z"), v("x")))));
        assert_eq!(f.to_string(), "ALL x. x <= y & ~(x = y) -> EX z. z = x");
        assert_eq!(parse(&f.to_string(), &Signature::lattice()).unwrap(), f);
        // right-nested or needs parentheses; left-nested does not
        let r = or(rel("E", vec![v("a"), v("b")]), or(eq(v("a"), v("b")), eq(v("b"), v("a"))));
        assert_eq!(r.to_string(), "E(a, b) | (a = b | b = a)");
        assert_eq!(parse(&r.to_string(), &Signature::graph()).unwrap(), r);
    }

    #[test]
    fn free_variables() {
        let f = forall("x", and(rel("E", vec![v("x"), v("y")]), exists("y", eq(v("y"), v("z")))));
        let fv: Vec<String> = f.free_vars().into_iter().collect();
        assert_eq!(fv, vec!["y".to_string(), "z".to_string()]);
        assert_eq!(f.quantifier_depth(), 2);
        assert!(!f.is_sentence());
    }
}
