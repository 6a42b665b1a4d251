//! Text grammar: `+`/`-` separated terms, `^` for powers, `*` or
//! juxtaposition for products, `/` by a nonzero constant, parentheses, and
//! the token `i` for a square root of −1.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::{Polynomial, Ring};
use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        match c {
            c if c.is_whitespace() => k += 1,
            '+' => {
                out.push(Token::Plus);
                k += 1
            }
            '-' => {
                out.push(Token::Minus);
                k += 1
            }
            '*' => {
                out.push(Token::Star);
                k += 1
            }
            '/' => {
                out.push(Token::Slash);
                k += 1
            }
            '^' => {
                out.push(Token::Caret);
                k += 1
            }
            '(' => {
                out.push(Token::LParen);
                k += 1
            }
            ')' => {
                out.push(Token::RParen);
                k += 1
            }
            c if c.is_ascii_digit() => {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let s: String = chars[start..k].iter().collect();
                out.push(Token::Num(s.parse().map_err(|_| Error::Parse(format!("bad number {s}")))?));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = k;
                while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                    k += 1;
                }
                out.push(Token::Ident(chars[start..k].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    tokens: Vec<Token>,
    pos: usize,
    ring: &'a Arc<Ring<F>>,
}

impl<F: Field> Parser<'_, F> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial<F>> {
        let mut acc = match self.peek() {
            Some(Token::Plus) => {
                self.bump();
                self.term()?
            }
            Some(Token::Minus) => {
                self.bump();
                -&self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Token::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<F>> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    acc = acc.try_mul(&self.unary()?)?;
                }
                Some(Token::Slash) => {
                    self.bump();
                    let d = self.unary()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(Error::Parse("division is only by nonzero constants".into()));
                    }
                    let c = d.constant_coeff();
                    acc = acc.scale(&self.ring.field().inv(&c));
                }
                Some(Token::Num(_)) | Some(Token::Ident(_)) | Some(Token::LParen) => {
                    acc = acc.try_mul(&self.unary()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial<F>> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.bump();
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial<F>> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            match self.bump() {
                Some(Token::Num(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| Error::ExponentOverflow { limit: super::MAX_EXPONENT })?;
                    if e > super::MAX_EXPONENT {
                        return Err(Error::ExponentOverflow { limit: super::MAX_EXPONENT });
                    }
                    return base.pow(e);
                }
                other => return Err(Error::Parse(format!("expected exponent, found {other:?}"))),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial<F>> {
        let field = self.ring.field();
        match self.bump() {
            Some(Token::Num(n)) => {
                let c = field.from_ratio(&n, &BigInt::one())?;
                Ok(Polynomial::constant(self.ring, c))
            }
            Some(Token::Ident(name)) if name == "i" => {
                let unit = field.imaginary_unit().ok_or(Error::ImaginaryUnitUnavailable)?;
                Ok(Polynomial::constant(self.ring, unit))
            }
            Some(Token::Ident(name)) => match self.ring.var_index(&name) {
                Some(k) => Ok(Polynomial::var(self.ring, k)),
                None => Err(Error::UnknownVariable(name)),
            },
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    other => Err(Error::Parse(format!("expected `)`, found {other:?}"))),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses `text` into the canonical form over `ring`.
pub fn parse_polynomial<F: Field>(text: &str, ring: &Arc<Ring<F>>) -> Result<Polynomial<F>> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    let mut parser = Parser { tokens, pos: 0, ring };
    let p = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input starting at {:?}",
            parser.tokens[parser.pos]
        )));
    }
    Ok(p)
}
