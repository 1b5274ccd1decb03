//! Polynomial text grammar: integer literals, declared variable identifiers,
//! `+ - * ^`, parentheses; whitespace insignificant. Example: `X^3 + 9`.

use super::{BasePoly, VarSet};
use num_bigint::BigInt;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("parse error at line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    /// Shift the reported position into an enclosing document.
    pub fn offset(mut self, line: usize, col: usize) -> ParseError {
        if self.line == 1 {
            self.col += col - 1;
        }
        self.line += line - 1;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Plus => write!(f, "+"),
            Tok::Minus => write!(f, "-"),
            Tok::Star => write!(f, "*"),
            Tok::Caret => write!(f, "^"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
        }
    }
}

pub(crate) struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

pub(crate) fn lex(text: &str) -> Result<Lexer, ParseError> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() {
                    s.push(bump(&mut chars));
                } else {
                    break;
                }
            }
            toks.push((Tok::Int(s.parse().unwrap()), tl, tc));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    s.push(bump(&mut chars));
                } else {
                    break;
                }
            }
            toks.push((Tok::Ident(s), tl, tc));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ParseError::new(tl, tc, format!("unexpected character {other:?}")))
            }
        };
        bump(&mut chars);
        toks.push((tok, tl, tc));
    }
    Ok(Lexer {
        toks,
        pos: 0,
        end: (line, col),
    })
}

impl Lexer {
    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    pub(crate) fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|&(_, l, c)| (l, c))
            .unwrap_or(self.end)
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        let (l, c) = self.here();
        ParseError::new(l, c, message)
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t == tok => {
                self.next();
                Ok(())
            }
            Some(t) => Err(self.error(format!("expected `{tok}`, found `{t}`"))),
            None => Err(self.error(format!("expected `{tok}`, found end of input"))),
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos == self.toks.len()
    }
}

/// Parse a polynomial over the given variables; every identifier must be a
/// declared variable.
pub fn parse_poly(vars: &Arc<VarSet>, text: &str) -> Result<BasePoly, ParseError> {
    let mut lx = lex(text)?;
    let poly = parse_expr(&mut lx, vars)?;
    if !lx.at_end() {
        return Err(lx.error("trailing input after polynomial"));
    }
    Ok(poly)
}

pub(crate) fn parse_expr(lx: &mut Lexer, vars: &Arc<VarSet>) -> Result<BasePoly, ParseError> {
    let mut negate = false;
    if lx.peek() == Some(&Tok::Minus) {
        lx.next();
        negate = true;
    }
    let mut acc = parse_term(lx, vars)?;
    if negate {
        acc = acc.neg();
    }
    loop {
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                let t = parse_term(lx, vars)?;
                acc = acc.add(&t);
            }
            Some(Tok::Minus) => {
                lx.next();
                let t = parse_term(lx, vars)?;
                acc = acc.sub(&t);
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(lx: &mut Lexer, vars: &Arc<VarSet>) -> Result<BasePoly, ParseError> {
    let mut acc = parse_factor(lx, vars)?;
    while lx.peek() == Some(&Tok::Star) {
        lx.next();
        let f = parse_factor(lx, vars)?;
        acc = acc.mul(&f);
    }
    Ok(acc)
}

fn parse_factor(lx: &mut Lexer, vars: &Arc<VarSet>) -> Result<BasePoly, ParseError> {
    let base = parse_primary(lx, vars)?;
    if lx.peek() == Some(&Tok::Caret) {
        lx.next();
        let e = parse_exponent(lx)?;
        return Ok(base.pow(e));
    }
    Ok(base)
}

pub(crate) fn parse_exponent(lx: &mut Lexer) -> Result<u32, ParseError> {
    match lx.peek() {
        Some(Tok::Int(_)) => {
            let Some(Tok::Int(n)) = lx.next() else {
                unreachable!()
            };
            u32::try_from(&n).map_err(|_| lx.error(format!("exponent {n} out of range")))
        }
        Some(t) => Err(lx.error(format!("expected exponent, found `{t}`"))),
        None => Err(lx.error("expected exponent, found end of input")),
    }
}

fn parse_primary(lx: &mut Lexer, vars: &Arc<VarSet>) -> Result<BasePoly, ParseError> {
    match lx.peek() {
        Some(Tok::Int(_)) => {
            let Some(Tok::Int(n)) = lx.next() else {
                unreachable!()
            };
            Ok(BasePoly::constant(vars, n))
        }
        Some(Tok::Ident(_)) => {
            let err = lx.error("");
            let Some(Tok::Ident(name)) = lx.next() else {
                unreachable!()
            };
            match vars.index_of(&name) {
                Some(i) => Ok(BasePoly::var(vars, i)),
                None => Err(ParseError::new(
                    err.line,
                    err.col,
                    format!("unknown variable `{name}`"),
                )),
            }
        }
        Some(Tok::LParen) => {
            lx.next();
            let inner = parse_expr(lx, vars)?;
            lx.expect(&Tok::RParen)?;
            Ok(inner)
        }
        Some(t) => Err(lx.error(format!("expected integer, variable or `(`, found `{t}`"))),
        None => Err(lx.error("unexpected end of input")),
    }
}
