//! Recursive-descent parser for the concrete syntax.

use thiserror::Error;

use super::{and, eq, leq, not, Formula, Term};
use crate::structures::Signature;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{name}` at {pos}")]
    UnknownSymbol { pos: usize, name: String },
    #[error("`{name}` at {pos} takes {expected} arguments, got {found}")]
    Arity {
        pos: usize,
        name: String,
        expected: usize,
        found: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    All,
    Ex,
    LParen,
    RParen,
    Comma,
    Dot,
    And,
    Or,
    Not,
    Arrow,
    Eq,
    Le,
    Lt,
    End,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '+' | '*' | '^')
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let next = chars.get(i + 1).map(|&(_, c)| c);
        let (tok, width) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            '.' => (Tok::Dot, 1),
            '&' => (Tok::And, 1),
            '|' => (Tok::Or, 1),
            '~' => (Tok::Not, 1),
            '=' => (Tok::Eq, 1),
            '-' if next == Some('>') => (Tok::Arrow, 2),
            '<' if next == Some('=') => (Tok::Le, 2),
            '<' => (Tok::Lt, 1),
            c if is_ident_char(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j].1) {
                    j += 1;
                }
                let word: String = chars[i..j].iter().map(|&(_, c)| c).collect();
                let tok = match word.as_str() {
                    "ALL" => Tok::All,
                    "EX" => Tok::Ex,
                    _ => Tok::Ident(word),
                };
                (tok, j - i)
            }
            other => {
                return Err(ParseError::Syntax {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, pos));
        i += width;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail("expected identifier"),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::All | Tok::Ex => {
                let forall = self.bump() == Tok::All;
                let var = self.ident()?;
                self.expect(Tok::Dot, "`.` after quantified variable")?;
                let body = Box::new(self.formula()?);
                Ok(if forall {
                    Formula::Forall(var, body)
                } else {
                    Formula::Exists(var, body)
                })
            }
            _ => self.implication(),
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            f = Formula::Or(Box::new(f), Box::new(self.conjunction()?));
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.negation()?;
        while *self.peek() == Tok::And {
            self.bump();
            f = Formula::And(Box::new(f), Box::new(self.negation()?));
        }
        Ok(f)
    }

    fn negation(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(not(self.negation()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(name) if *self.peek2() == Tok::LParen && self.sig.relation(&name).is_some() => {
                let pos = self.pos();
                self.bump();
                let args = self.arguments()?;
                let (_, sym) = self.sig.relation(&name).expect("checked above");
                check_arity(pos, &name, sym.arity, args.len())?;
                Ok(Formula::Rel(name, args))
            }
            Tok::Ident(_) => {
                let lhs = self.term()?;
                let pos = self.pos();
                let op = self.peek().clone();
                if !matches!(op, Tok::Eq | Tok::Le | Tok::Lt) {
                    return self.fail("expected `=`, `<=` or `<`");
                }
                self.bump();
                if op != Tok::Eq {
                    self.order_symbol(pos)?;
                }
                let rhs = self.term()?;
                Ok(match op {
                    Tok::Eq => eq(lhs, rhs),
                    Tok::Le => leq(lhs, rhs),
                    _ => and(leq(lhs.clone(), rhs.clone()), not(eq(lhs, rhs))),
                })
            }
            _ => self.fail("expected a formula"),
        }
    }

    fn order_symbol(&self, pos: usize) -> Result<(), ParseError> {
        match self.sig.relation(crate::structures::ORDER_RELATION) {
            Some((_, s)) => check_arity(pos, &s.name, s.arity, 2),
            None => Err(ParseError::UnknownSymbol {
                pos,
                name: crate::structures::ORDER_RELATION.to_string(),
            }),
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            args.push(self.term()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.term()?);
            }
        }
        self.expect(Tok::RParen, "`)` or `,`")?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        let name = self.ident()?;
        let fun = self.sig.function(&name).map(|(_, s)| s.arity);
        if *self.peek() == Tok::LParen {
            let args = self.arguments()?;
            let Some(arity) = fun else {
                return Err(ParseError::UnknownSymbol { pos, name });
            };
            check_arity(pos, &name, arity, args.len())?;
            return Ok(Term::App(name, args));
        }
        match fun {
            // constants are nullary function symbols
            Some(0) => Ok(Term::App(name, Vec::new())),
            Some(arity) => Err(ParseError::Arity {
                pos,
                name,
                expected: arity,
                found: 0,
            }),
            None => Ok(Term::Var(name)),
        }
    }
}

fn check_arity(pos: usize, name: &str, expected: usize, found: usize) -> Result<(), ParseError> {
    if expected == found {
        Ok(())
    } else {
        Err(ParseError::Arity {
            pos,
            name: name.to_string(),
            expected,
            found,
        })
    }
}

/// Parses `src` against `sig`. Identifiers that are not function symbols
/// of `sig` are variables.
pub fn parse(src: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
        sig,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.fail("trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folang::{exists, forall, rel, v};

    #[test]
    fn graph_sentence() {
        let f = parse("ALL x. EX y. E(x,y)", &Signature::graph()).unwrap();
        assert_eq!(f, forall("x", exists("y", rel("E", vec![v("x"), v("y")]))));
    }

    #[test]
    fn false_sentence() {
        let f = parse("EX x. (x = x & ~(x = x))", &Signature::graph()).unwrap();
        let xx = || eq(v("x"), v("x"));
        assert_eq!(f, exists("x", and(xx(), not(xx()))));
    }

    #[test]
    fn group_sentence() {
        let f = parse("ALL x. EX y. +(y,y) = x", &Signature::group()).unwrap();
        let sum = Term::app("+", vec![v("y"), v("y")]);
        assert_eq!(f, forall("x", exists("y", eq(sum, v("x")))));
    }

    #[test]
    fn order_sugar() {
        let f = parse("x < y", &Signature::order()).unwrap();
        assert_eq!(f, and(leq(v("x"), v("y")), not(eq(v("x"), v("y")))));
        assert!(matches!(
            parse("x <= y", &Signature::graph()),
            Err(ParseError::UnknownSymbol { .. })
        ));
    }

    #[test]
    fn precedence_and_associativity() {
        let sig = Signature::graph();
        let f = parse("a = b | b = c & c = d -> a = d -> b = d", &sig).unwrap();
        let (ab, bc, cd, ad, bd) = (
            eq(v("a"), v("b")),
            eq(v("b"), v("c")),
            eq(v("c"), v("d")),
            eq(v("a"), v("d")),
            eq(v("b"), v("d")),
        );
        let expected = Formula::Implies(
            Box::new(Formula::Or(Box::new(ab), Box::new(and(bc, cd)))),
            Box::new(Formula::Implies(Box::new(ad), Box::new(bd))),
        );
        assert_eq!(f, expected);
        // quantifiers extend as far right as possible
        let g = parse("EX x. x = x & x = y", &sig).unwrap();
        assert!(matches!(g, Formula::Exists(_, ref b) if matches!(**b, Formula::And(..))));
    }

    #[test]
    fn errors_carry_positions() {
        let sig = Signature::graph();
        assert_eq!(
            parse("ALL x E(x,x)", &sig),
            Err(ParseError::Syntax {
                pos: 6,
                msg: "expected `.` after quantified variable".into()
            })
        );
        assert!(matches!(parse("E(x)", &sig), Err(ParseError::Arity { pos: 0, expected: 2, found: 1, .. })));
        assert!(matches!(parse("f(x) = x", &sig), Err(ParseError::UnknownSymbol { pos: 0, .. })));
        assert!(matches!(parse("x = y)", &sig), Err(ParseError::Syntax { pos: 5, .. })));
        assert!(matches!(parse("x $ y", &sig), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("+(x) = x", &Signature::group()), Err(ParseError::Arity { .. })));
    }
}
