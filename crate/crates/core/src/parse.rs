//! Reading and printing polynomials in the `x112`-style notation.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (['*'|'/'] factor)*      juxtaposition multiplies
//! factor := ['+'|'-'] atom ['^' integer]
//! atom   := integer | symbol | '(' expr ')'
//! ```
//!
//! Division is only allowed by nonzero constants, so `1/2*x12^2` and
//! `x12^2/2` both work. A symbol is `x` followed by digits (or `_`-separated
//! indices for rank >= 10); any iterated bracket symbol such as `x312` is
//! accepted and replaced by its normal form.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::lie::GradedAlgebra;
use crate::num::Rational;
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Sym(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => {
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                out.push((pos, Tok::Num(s.parse().expect("digits"))));
            }
            'x' => {
                let start = i;
                i += 1;
                while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                out.push((pos, Tok::Sym(s)));
            }
            '+' => {
                out.push((pos, Tok::Plus));
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push((pos, Tok::Minus));
                i += 1;
            }
            '*' | '\u{00b7}' => {
                out.push((pos, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((pos, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((pos, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            other => {
                return Err(Error::Parse { pos, msg: format!("unexpected character `{other}`") });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    alg: &'a GradedAlgebra,
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.alg.ring());
        let mut sign = match self.peek() {
            Some(Tok::Plus) => {
                self.at += 1;
                false
            }
            Some(Tok::Minus) => {
                self.at += 1;
                true
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if sign { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Tok::Plus) => sign = false,
                Some(Tok::Minus) => sign = true,
                _ => return Ok(acc),
            }
            self.at += 1;
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_) | Tok::Sym(_) | Tok::LParen))
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    let pos = self.pos();
                    let d = self.factor()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(Error::Parse { pos, msg: "division by a non-constant or zero".into() });
                    }
                    acc = acc.scale(&d.constant_term().recip());
                }
                _ if self.starts_factor() => acc = &acc * &self.factor()?,
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let negate = match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                true
            }
            Some(Tok::Plus) => {
                self.at += 1;
                false
            }
            _ => false,
        };
        let base = self.atom()?;
        let base = if self.peek() == Some(&Tok::Caret) {
            self.at += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.at += 1;
                    let k: u32 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                    base.pow(k)
                }
                _ => return self.err("expected an integer exponent"),
            }
        } else {
            base
        };
        Ok(if negate { -base } else { base })
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let ring = self.alg.ring();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(Polynomial::constant(ring, Rational::from_integer(n)))
            }
            Some(Tok::Sym(s)) => {
                self.at += 1;
                let e = self.alg.resolve_symbol(&s)?;
                Ok(Polynomial::linear(ring, &e))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.at += 1;
                Ok(inner)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a polynomial over the coordinates of `alg`.
pub fn parse_polynomial(alg: &GradedAlgebra, text: &str) -> Result<Polynomial> {
    let toks = tokenize(text)?;
    let mut p = Parser { alg, toks, at: 0, end: text.len() };
    if p.peek().is_none() {
        return p.err("empty polynomial");
    }
    let f = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

/// Canonical text: terms in descending grlex order, unit coefficients
/// omitted, rational coefficients as `a/b*`.
pub fn format_polynomial(alg: &GradedAlgebra, f: &Polynomial) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in f.terms().rev().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let abs = c.abs();
        let vars: Vec<String> = m
            .factors()
            .iter()
            .map(|&(v, e)| {
                let name = alg.name(v as usize);
                if e == 1 {
                    name.to_string()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if vars.is_empty() {
            out.push_str(&abs.to_string());
        } else {
            if !abs.is_one() {
                out.push_str(&abs.to_string());
                out.push('*');
            }
            out.push_str(&vars.join("*"));
        }
    }
    out
}

/// Parses a file with one polynomial per non-empty line (`#` starts a
/// comment). Errors carry the 1-based line number.
pub fn parse_lines(alg: &GradedAlgebra, text: &str) -> Vec<(usize, Result<Polynomial>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let body = line.split('#').next().unwrap_or("").trim();
            (!body.is_empty()).then(|| (i + 1, parse_polynomial(alg, body)))
        })
        .collect()
}
