//! Operation terms over the signature `{k, i, c, ^, v}` and generators.
//!
//! Text syntax: unary letters `k`, `i`, `c` apply by juxtaposition on the
//! left, generators are `g1..gn`, `^` is meet and `v` is join (meet binds
//! tighter, both associate to the left), parentheses group. For example
//! `k(g1 ^ ik g1)`. The identity operation is the bare generator.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::topology::TopSpace;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    /// 1-based generator index.
    Gen(usize),
    K(Box<Term>),
    Iop(Box<Term>),
    C(Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
}

impl Term {
    pub fn gen(index: usize) -> Term {
        assert!(index >= 1, "generators are numbered from 1");
        Term::Gen(index)
    }

    pub fn k(self) -> Term {
        Term::K(Box::new(self))
    }

    pub fn i(self) -> Term {
        Term::Iop(Box::new(self))
    }

    pub fn c(self) -> Term {
        Term::C(Box::new(self))
    }

    pub fn meet(self, other: Term) -> Term {
        Term::Meet(Box::new(self), Box::new(other))
    }

    pub fn join(self, other: Term) -> Term {
        Term::Join(Box::new(self), Box::new(other))
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Term::Gen(_) => 1,
            Term::K(t) | Term::Iop(t) | Term::C(t) => 1 + t.size(),
            Term::Meet(a, b) | Term::Join(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Highest generator index used (0 for none, which cannot happen for a
    /// well-formed term).
    pub fn max_generator(&self) -> usize {
        match self {
            Term::Gen(j) => *j,
            Term::K(t) | Term::Iop(t) | Term::C(t) => t.max_generator(),
            Term::Meet(a, b) | Term::Join(a, b) => a.max_generator().max(b.max_generator()),
        }
    }

    /// Position in the fixed node-kind order Gen < K < Iop < C < Meet < Join.
    pub fn kind_rank(&self) -> u8 {
        match self {
            Term::Gen(_) => 0,
            Term::K(_) => 1,
            Term::Iop(_) => 2,
            Term::C(_) => 3,
            Term::Meet(..) => 4,
            Term::Join(..) => 5,
        }
    }

    pub fn eval(&self, space: &TopSpace, assignment: &[PointSet]) -> Result<PointSet> {
        let needed = self.max_generator();
        if needed > assignment.len() {
            return Err(Error::Arity {
                index: needed,
                available: assignment.len(),
            });
        }
        for a in assignment {
            a.check_len(space.point_count())?;
        }
        Ok(self.eval_unchecked(space, assignment))
    }

    /// Evaluation without the arity and dimension checks of [`Term::eval`].
    pub(crate) fn eval_unchecked(&self, space: &TopSpace, assignment: &[PointSet]) -> PointSet {
        match self {
            Term::Gen(j) => assignment[j - 1],
            Term::K(t) => space.close(t.eval_unchecked(space, assignment)),
            Term::Iop(t) => space.open(t.eval_unchecked(space, assignment)),
            Term::C(t) => t.eval_unchecked(space, assignment).complement(),
            Term::Meet(a, b) => a
                .eval_unchecked(space, assignment)
                .intersection(b.eval_unchecked(space, assignment)),
            Term::Join(a, b) => a
                .eval_unchecked(space, assignment)
                .union(b.eval_unchecked(space, assignment)),
        }
    }

    /// The dual operation `c t c_n`: swaps k with i and meet with join.
    pub fn dual(&self) -> Term {
        match self {
            Term::Gen(j) => Term::Gen(*j),
            Term::K(t) => t.dual().i(),
            Term::Iop(t) => t.dual().k(),
            Term::C(t) => t.dual().c(),
            Term::Meet(a, b) => a.dual().join(b.dual()),
            Term::Join(a, b) => a.dual().meet(b.dual()),
        }
    }

    fn children(&self) -> (Option<&Term>, Option<&Term>) {
        match self {
            Term::Gen(_) => (None, None),
            Term::K(t) | Term::Iop(t) | Term::C(t) => (Some(t), None),
            Term::Meet(a, b) | Term::Join(a, b) => (Some(a), Some(b)),
        }
    }
}

impl Ord for Term {
    /// Size first, then node kind, then generator index or children left to
    /// right under the same order.
    fn cmp(&self, other: &Term) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.structural_cmp(other))
    }
}

impl Term {
    fn structural_cmp(&self, other: &Term) -> Ordering {
        self.kind_rank()
            .cmp(&other.kind_rank())
            .then_with(|| match (self, other) {
                (Term::Gen(a), Term::Gen(b)) => a.cmp(b),
                _ => {
                    let (a1, a2) = self.children();
                    let (b1, b2) = other.children();
                    a1.cmp(&b1).then_with(|| a2.cmp(&b2))
                }
            })
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Term) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const PREC_JOIN: u8 = 0;
const PREC_MEET: u8 = 1;
const PREC_ATOM: u8 = 2;

impl Term {
    fn write_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            Term::Gen(j) => write!(f, "g{j}"),
            Term::K(_) | Term::Iop(_) | Term::C(_) => {
                let mut t = self;
                loop {
                    match t {
                        Term::K(s) => {
                            f.write_str("k")?;
                            t = s;
                        }
                        Term::Iop(s) => {
                            f.write_str("i")?;
                            t = s;
                        }
                        Term::C(s) => {
                            f.write_str("c")?;
                            t = s;
                        }
                        Term::Gen(j) => return write!(f, " g{j}"),
                        _ => return t.write_prec(f, PREC_ATOM),
                    }
                }
            }
            Term::Meet(a, b) | Term::Join(a, b) => {
                let (mine, sym) = match self {
                    Term::Meet(..) => (PREC_MEET, "^"),
                    _ => (PREC_JOIN, "v"),
                };
                let wrap = prec > mine;
                if wrap {
                    f.write_str("(")?;
                }
                a.write_prec(f, mine)?;
                write!(f, " {sym} ")?;
                b.write_prec(f, mine + 1)?;
                if wrap {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, PREC_JOIN)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token {
    K,
    I,
    C,
    Meet,
    Join,
    Gen(usize),
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let start = pos;
        let tok = match bytes[pos] {
            b' ' | b'\t' | b'\n' | b'\r' => {
                pos += 1;
                continue;
            }
            b'k' => Token::K,
            b'i' => Token::I,
            b'c' => Token::C,
            b'^' => Token::Meet,
            b'v' => Token::Join,
            b'(' => Token::Open,
            b')' => Token::Close,
            b'g' => {
                let digits = bytes[pos + 1..]
                    .iter()
                    .take_while(|b| b.is_ascii_digit())
                    .count();
                if digits == 0 {
                    return Err(Error::Parse {
                        position: pos,
                        message: "expected a generator index after `g`".into(),
                    });
                }
                let index: usize =
                    text[pos + 1..pos + 1 + digits]
                        .parse()
                        .map_err(|_| Error::Parse {
                            position: pos,
                            message: "generator index too large".into(),
                        })?;
                if index == 0 {
                    return Err(Error::Parse {
                        position: pos,
                        message: "generators are numbered from g1".into(),
                    });
                }
                pos += digits;
                Token::Gen(index)
            }
            other => {
                return Err(Error::Parse {
                    position: pos,
                    message: format!("unexpected character `{}`", other as char),
                })
            }
        };
        pos += 1;
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.pos).map(|t| t.1)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.here(),
            message: message.into(),
        })
    }

    fn join(&mut self) -> Result<Term> {
        let mut t = self.meet()?;
        while self.peek() == Some(Token::Join) {
            self.pos += 1;
            t = t.join(self.meet()?);
        }
        Ok(t)
    }

    fn meet(&mut self) -> Result<Term> {
        let mut t = self.unary()?;
        while self.peek() == Some(Token::Meet) {
            self.pos += 1;
            t = t.meet(self.unary()?);
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<Term> {
        match self.peek() {
            Some(Token::K) => {
                self.pos += 1;
                Ok(self.unary()?.k())
            }
            Some(Token::I) => {
                self.pos += 1;
                Ok(self.unary()?.i())
            }
            Some(Token::C) => {
                self.pos += 1;
                Ok(self.unary()?.c())
            }
            Some(Token::Gen(j)) => {
                self.pos += 1;
                Ok(Term::Gen(j))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let t = self.join()?;
                if self.peek() != Some(Token::Close) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(t)
            }
            Some(_) => self.error("expected a generator, unary operator or `(`"),
            None => self.error("unexpected end of input"),
        }
    }
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(text: &str) -> Result<Term> {
        let mut p = Parser {
            tokens: tokenize(text)?,
            pos: 0,
            end: text.len(),
        };
        let t = p.join()?;
        if p.pos != p.tokens.len() {
            return p.error("trailing input");
        }
        Ok(t)
    }
}
