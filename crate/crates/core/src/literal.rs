//! Element literal syntax.
//!
//! * `{1,2,3}` small sets; `{1/2, 3}` rational sets; `{1:a, 3:b}` words
//! * `2` table atoms
//! * `(x, y)` pairs in products
//! * `e` the adjoined identity

use std::fmt;

use num_rational::Rational64;
use thiserror::Error;

use crate::psg::{ElemId, Element, Family, PsgInstance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Literal {
    Set(Vec<Rational64>),
    Word(Vec<(u32, char)>),
    Int(i64),
    Pair(Box<Literal>, Box<Literal>),
    Identity,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiteralError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("literal `{0}` does not denote an element of {1}")]
    NotAnElement(String, String),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Set(xs) => {
                let p: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "{{{}}}", p.join(","))
            }
            Literal::Word(ws) => {
                let p: Vec<String> = ws.iter().map(|(a, c)| format!("{a}:{c}")).collect();
                write!(f, "{{{}}}", p.join(","))
            }
            Literal::Int(i) => write!(f, "{i}"),
            Literal::Pair(a, b) => write!(f, "({a},{b})"),
            Literal::Identity => f.write_str("e"),
        }
    }
}

/// A tiny cursor-based reader shared by literal and list parsing.
pub struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: u8) -> Result<(), LiteralError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    pub fn error(&self, msg: impl Into<String>) -> LiteralError {
        LiteralError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    pub fn integer(&mut self) -> Result<i64, LiteralError> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| LiteralError::Syntax {
                pos: start,
                msg: "expected integer".into(),
            })
    }

    pub fn rational(&mut self) -> Result<Rational64, LiteralError> {
        let num = self.integer()?;
        if self.eat(b'/') {
            let den = self.integer()?;
            if den == 0 {
                return Err(self.error("zero denominator"));
            }
            Ok(Rational64::new(num, den))
        } else {
            Ok(Rational64::from_integer(num))
        }
    }

    fn symbol(&mut self) -> Result<char, LiteralError> {
        self.skip_ws();
        let rest =
            std::str::from_utf8(&self.src[self.pos..]).map_err(|_| self.error("bad utf-8"))?;
        let c = rest
            .chars()
            .next()
            .ok_or_else(|| self.error("expected symbol"))?;
        if c.is_whitespace() || matches!(c, ',' | '}' | '{' | '(' | ')') {
            return Err(self.error("expected symbol"));
        }
        self.pos += c.len_utf8();
        Ok(c)
    }

    pub fn literal(&mut self) -> Result<Literal, LiteralError> {
        match self.peek() {
            Some(b'{') => {
                self.pos += 1;
                let mut nums = Vec::new();
                let mut word = Vec::new();
                loop {
                    let r = self.rational()?;
                    if self.eat(b':') {
                        if !nums.is_empty() || !r.is_integer() || *r.numer() < 1 {
                            return Err(self.error("bad word position"));
                        }
                        word.push((*r.numer() as u32, self.symbol()?));
                    } else {
                        if !word.is_empty() {
                            return Err(self.error("mixed word and set entries"));
                        }
                        nums.push(r);
                    }
                    if self.eat(b'}') {
                        break;
                    }
                    self.expect(b',')?;
                }
                if word.is_empty() {
                    Ok(Literal::Set(nums))
                } else {
                    Ok(Literal::Word(word))
                }
            }
            Some(b'(') => {
                self.pos += 1;
                let a = self.literal()?;
                self.expect(b',')?;
                let b = self.literal()?;
                self.expect(b')')?;
                Ok(Literal::Pair(Box::new(a), Box::new(b)))
            }
            Some(b'e') => {
                self.pos += 1;
                Ok(Literal::Identity)
            }
            Some(c) if c.is_ascii_digit() || c == b'-' => Ok(Literal::Int(self.integer()?)),
            _ => Err(self.error("expected element literal")),
        }
    }
}

/// Parses a single element literal.
pub fn parse_literal(src: &str) -> Result<Literal, LiteralError> {
    let mut c = Cursor::new(src);
    let lit = c.literal()?;
    if !c.at_end() {
        return Err(c.error("trailing input"));
    }
    Ok(lit)
}

fn canonical_set<T: Ord + Clone>(xs: &[T]) -> Option<Vec<T>> {
    let mut v = xs.to_vec();
    v.sort();
    let before = v.len();
    v.dedup();
    (v.len() == before && !v.is_empty()).then_some(v)
}

/// Converts a literal into the matching payload for `psg`, without checking membership.
pub fn to_element(psg: &PsgInstance, lit: &Literal) -> Option<Element> {
    match (psg.family(), lit) {
        (_, Literal::Identity) if psg.identity().is_some() => match psg.family() {
            Family::IdentityAdjoined(_) => Some(Element::IdentityMark),
            _ => None,
        },
        (Family::IdentityAdjoined(base), _) => to_element(base, lit),
        (Family::ExplicitTable { .. }, Literal::Int(i)) => {
            u32::try_from(*i).ok().map(Element::Atom)
        }
        (Family::FinSetDisjointUnion { .. }, Literal::Set(xs)) => {
            let ints: Option<Vec<u32>> = xs
                .iter()
                .map(|x| {
                    if x.is_integer() {
                        u32::try_from(*x.numer()).ok()
                    } else {
                        None
                    }
                })
                .collect();
            canonical_set(&ints?).map(Element::SmallSet)
        }
        (Family::FinSetOrderedUnion { .. }, Literal::Set(xs)) => {
            canonical_set(xs).map(Element::RatSet)
        }
        (Family::LocatedWords { .. }, Literal::Word(ws)) => {
            let mut v = ws.clone();
            v.sort();
            let ok = v.windows(2).all(|w| w[0].0 < w[1].0);
            ok.then_some(Element::Word(v))
        }
        (Family::Product(l, r), Literal::Pair(a, b)) => Some(Element::Pair(
            Box::new(to_element(l, a)?),
            Box::new(to_element(r, b)?),
        )),
        _ => None,
    }
}

/// Resolves a literal to an element id of `psg`.
pub fn resolve(psg: &PsgInstance, lit: &Literal) -> Result<ElemId, LiteralError> {
    to_element(psg, lit)
        .and_then(|e| psg.id_of(&e).ok())
        .ok_or_else(|| LiteralError::NotAnElement(lit.to_string(), psg.describe()))
}

/// Parses and resolves a literal in one step.
pub fn parse_element(psg: &PsgInstance, src: &str) -> Result<ElemId, LiteralError> {
    resolve(psg, &parse_literal(src)?)
}
