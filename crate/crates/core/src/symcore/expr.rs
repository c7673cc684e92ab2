//! Expression trees and the shared expression grammar.
//!
//! ```text
//! expr   := wedge (("+" | "-") wedge)*
//! wedge  := term ("/\" term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := ("-" | "+") unary | power
//! power  := atom ("^" "-"? integer)?
//! atom   := integer | identifier | "d" "(" identifier ")" | "(" expr ")"
//! ```
//!
//! Scalars reject `d(..)` and `/\`; forms accept them.

use num_bigint::BigInt;

use super::chart::Chart;
use super::poly::Rat;
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rat),
    Name(String),
    /// Differential of a coordinate.
    D(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Wedge(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based character column within the parsed text.
    pub col: usize,
    pub msg: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "column {}: {}", self.col, self.msg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Wedge,
    LParen,
    RParen,
}

fn lex(src: &str) -> std::result::Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().unwrap()), col));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '/' => {
                if chars.get(i + 1) == Some(&'\\') {
                    i += 1;
                    Tok::Wedge
                } else {
                    Tok::Slash
                }
            }
            _ => return Err(ParseError { col, msg: format!("unexpected character `{c}`") }),
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> std::result::Result<T, ParseError> {
        Err(ParseError { col: self.col(), msg: msg.into() })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut lhs = self.wedge()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.wedge()?));
            } else if self.eat(&Tok::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.wedge()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn wedge(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while self.eat(&Tok::Wedge) {
            lhs = Expr::Wedge(Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(&Tok::Slash) {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> std::result::Result<Expr, ParseError> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(&Tok::Plus) {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> std::result::Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let neg = self.eat(&Tok::Minus);
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e: i64 = match i64::try_from(n) {
                        Ok(e) if e <= 1000 => e,
                        _ => return self.err("exponent too large"),
                    };
                    return Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }));
                }
                _ => return self.err("expected an integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> std::result::Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Num(Rat::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "d" && self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let inner = match self.peek().cloned() {
                        Some(Tok::Ident(n)) => n,
                        _ => return self.err("expected a coordinate name inside d(..)"),
                    };
                    self.pos += 1;
                    if !self.eat(&Tok::RParen) {
                        return self.err("expected `)`");
                    }
                    return Ok(Expr::D(inner));
                }
                Ok(Expr::Name(name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of expression"),
        }
    }
}

pub fn parse_expr(src: &str) -> std::result::Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end_col: src.chars().count() + 1 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Canonical scalar of an expression; bound parameters are replaced by their values.
pub fn normalize(e: &Expr, chart: &Chart) -> Result<Scalar> {
    Ok(match e {
        Expr::Num(r) => Scalar::from(r.clone()),
        Expr::Name(n) => {
            if let Some(r) = chart.param(n) {
                Scalar::from(r.clone())
            } else {
                Scalar::var(chart.expect_var(n)?)
            }
        }
        Expr::D(n) => return Err(Error::InvalidExpression(format!("differential d({n}) in a scalar expression"))),
        Expr::Wedge(..) => return Err(Error::InvalidExpression("wedge in a scalar expression".into())),
        Expr::Neg(a) => normalize(a, chart)?.neg(),
        Expr::Add(a, b) => normalize(a, chart)?.add(&normalize(b, chart)?),
        Expr::Sub(a, b) => normalize(a, chart)?.sub(&normalize(b, chart)?),
        Expr::Mul(a, b) => normalize(a, chart)?.mul(&normalize(b, chart)?),
        Expr::Div(a, b) => {
            let d = normalize(b, chart)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            normalize(a, chart)?.div(&d)?
        }
        Expr::Pow(a, k) => {
            let b = normalize(a, chart)?;
            if b.is_zero() && *k < 0 {
                return Err(Error::DivisionByZero);
            }
            if b.is_zero() && *k == 0 {
                Scalar::one()
            } else {
                b.pow(*k)?
            }
        }
    })
}

/// Parses and normalizes a scalar expression in one step.
pub fn scalar(src: &str, chart: &Chart) -> Result<Scalar> {
    let e = parse_expr(src).map_err(|e| Error::InvalidExpression(format!("`{src}`: {e}")))?;
    normalize(&e, chart)
}

pub fn rational(src: &str) -> Option<Rat> {
    let e = parse_expr(src).ok()?;
    let s = normalize(&e, &Chart::new()).ok()?;
    s.constant_value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::chart::Role;

    #[test]
    fn precedence() {
        let mut c = Chart::new();
        c.add("x", Role::Independent, 0).unwrap();
        c.add("y", Role::Field, 0).unwrap();
        let s = scalar("-x^2 + 1/2*y", &c).unwrap();
        assert_eq!(s.display(&c), "-x^2 + 1/2*y");
        assert!(scalar("d(x)", &c).is_err());
        assert_eq!(parse_expr("x +").unwrap_err().col, 4);
    }

    #[test]
    fn wedge_binds_looser_than_product() {
        let e = parse_expr("a*d(x) /\\ d(y) + d(z)").unwrap();
        match e {
            Expr::Add(l, _) => assert!(matches!(*l, Expr::Wedge(..))),
            _ => panic!("unexpected tree {e:?}"),
        }
    }
}
