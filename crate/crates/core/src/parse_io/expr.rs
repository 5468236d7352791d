//! Polynomial expression grammar and its canonical printer.
//!
//! ```text
//! sum     := product (("+" | "-") product)*
//! product := unary (("*" | "/")? unary)*        juxtaposition multiplies
//! unary   := ("-" | "+") unary | power
//! power   := atom ("^" integer)?
//! atom    := integer | identifier | "z@" prime | "(" sum ")"
//! ```
//! Division is only defined by nonzero constants, so `2/3` is a rational
//! literal and `x/(1 + z@3)` scales by an inverse.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::coeff::{fmt_rational, CyclotomicNumber, Field, Rational};
use crate::poly::{Monomial, PolyRing, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnknownIdentifier(String),
    MalformedExponent,
    UnexpectedToken(String),
    UnexpectedEnd,
    FieldSymbol { found: u32, field: Field },
    NonConstantDivisor,
    DivisionByZero,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnknownIdentifier(s) => write!(f, "unknown identifier `{s}`"),
            ParseErrorKind::MalformedExponent => f.write_str("exponent must be a non-negative integer"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected `{t}`"),
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
            ParseErrorKind::FieldSymbol { found, field } => {
                write!(f, "symbol z@{found} is not available over {field}")
            }
            ParseErrorKind::NonConstantDivisor => f.write_str("division by a non-constant expression"),
            ParseErrorKind::DivisionByZero => f.write_str("division by zero"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Zeta(u32),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Int(n) => n.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::Zeta(p) => format!("z@{p}"),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Caret => "^".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::End => "end of input".into(),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self, Tok::Int(_) | Tok::Ident(_) | Tok::Zeta(_) | Tok::LParen)
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    let err = |line, column, kind| ParseError { line, column, kind };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line: l0, column: c0 });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned {
                tok: Tok::Int(s.parse().expect("digits")),
                line: l0,
                column: c0,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            if s == "z" && i < chars.len() && chars[i] == '@' {
                i += 1;
                let ds = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if ds == i {
                    return Err(err(line, col + (ds - start), match chars.get(ds) {
                        Some(&ch) => ParseErrorKind::UnexpectedChar(ch),
                        None => ParseErrorKind::UnexpectedEnd,
                    }));
                }
                let digits: String = chars[ds..i].iter().collect();
                let p = digits.parse().map_err(|_| err(l0, c0, ParseErrorKind::MalformedExponent))?;
                col += i - start;
                out.push(Spanned { tok: Tok::Zeta(p), line: l0, column: c0 });
                continue;
            }
            col += i - start;
            out.push(Spanned { tok: Tok::Ident(s), line: l0, column: c0 });
            continue;
        }
        return Err(err(l0, c0, ParseErrorKind::UnexpectedChar(c)));
    }
    out.push(Spanned { tok: Tok::End, line, column: col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    ring: &'a Arc<PolyRing>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Spanned, kind: ParseErrorKind) -> ParseError {
        ParseError { line: t.line, column: t.column, kind }
    }

    fn unexpected(t: &Spanned) -> ParseError {
        let kind = match t.tok {
            Tok::End => ParseErrorKind::UnexpectedEnd,
            ref other => ParseErrorKind::UnexpectedToken(other.text()),
        };
        Self::error_at(t, kind)
    }

    fn sum(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.product()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.product()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.peek().clone();
                    let divisor = self.unary()?;
                    let c = divisor
                        .constant_value()
                        .ok_or_else(|| Self::error_at(&at, ParseErrorKind::NonConstantDivisor))?;
                    let inv = c
                        .inverse()
                        .map_err(|_| Self::error_at(&at, ParseErrorKind::DivisionByZero))?;
                    acc = acc.scale(&inv);
                }
                ref t if t.starts_atom() => {
                    acc = &acc * &self.unary()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek().tok {
            Tok::Minus => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.bump();
        match t.tok {
            Tok::Int(ref n) => {
                let e: u32 = n
                    .try_into()
                    .map_err(|_| Self::error_at(&t, ParseErrorKind::MalformedExponent))?;
                Ok(base.pow(e))
            }
            _ => Err(Self::error_at(&t, ParseErrorKind::MalformedExponent)),
        }
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Int(ref n) => Ok(Polynomial::constant(
                self.ring,
                self.ring.field().from_rational(Rational::from_integer(n.clone())),
            )),
            Tok::Ident(ref name) => self
                .ring
                .index_of(name)
                .map(|i| Polynomial::var(self.ring, i))
                .ok_or_else(|| Self::error_at(&t, ParseErrorKind::UnknownIdentifier(name.clone()))),
            Tok::Zeta(p) => {
                let field = self.ring.field();
                if field != Field::Cyclotomic(p) {
                    return Err(Self::error_at(&t, ParseErrorKind::FieldSymbol { found: p, field }));
                }
                let zeta = crate::coeff::root_of_unity(p, 1).expect("field order is prime");
                Ok(Polynomial::constant(self.ring, zeta))
            }
            Tok::LParen => {
                let inner = self.sum()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return Err(Self::unexpected(&close));
                }
                Ok(inner)
            }
            _ => Err(Self::unexpected(&t)),
        }
    }
}

/// Parses `text` as a polynomial in `ring`. Error positions are 1-based.
pub fn parse_expression(text: &str, ring: &Arc<PolyRing>) -> Result<Polynomial, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0, ring };
    let out = parser.sum()?;
    let t = parser.peek().clone();
    if t.tok != Tok::End {
        return Err(Parser::unexpected(&t));
    }
    Ok(out)
}

pub fn format_monomial(m: &Monomial, vars: &[String]) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .zip(vars)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn format_term(c: &CyclotomicNumber, m: &Monomial, vars: &[String], first: bool) -> String {
    let mono = (!m.is_one()).then(|| format_monomial(m, vars));
    let (neg, body) = match c.as_rational() {
        Some(q) => {
            let abs = q.abs();
            let body = match &mono {
                None => fmt_rational(&abs),
                Some(s) if abs == Rational::from_integer(1.into()) => s.clone(),
                Some(s) => format!("{}*{s}", fmt_rational(&abs)),
            };
            (q.is_negative(), body)
        }
        None => {
            let coeff = format!("({c})");
            let body = match &mono {
                None => coeff,
                Some(s) => format!("{coeff}*{s}"),
            };
            (false, body)
        }
    };
    match (first, neg) {
        (true, false) => body,
        (true, true) => format!("-{body}"),
        (false, false) => format!(" + {body}"),
        (false, true) => format!(" - {body}"),
    }
}

/// Canonical text: descending graded-lex order, `*` between factors.
pub fn format_polynomial(f: &Polynomial) -> String {
    let vars = f.ring().vars();
    let mut out = String::new();
    for (i, (m, c)) in f.sorted_terms().into_iter().enumerate() {
        out.push_str(&format_term(c, m, vars, i == 0));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
