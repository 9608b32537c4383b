//! Parser for quadratic-surd expressions such as `(sqrt(5)-1)/2`,
//! `1/sqrt(5)` or `2/5 + 3/7*sqrt(2)`.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | atom
//! atom   := number | 'sqrt' '(' integer ')' | '(' expr ')'
//! number := digits ('.' digits)?
//! ```
//!
//! All radicals in one expression must share a radicand.

use super::{parse_fraction, SurdValue};
use crate::{Error, Result};

pub fn parse_surd(src: &str) -> Result<SurdValue> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::parse(format!(
            "{what} at offset {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SurdValue> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SurdValue> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?)?;
            } else if self.eat(b'/') {
                acc = acc.div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<SurdValue> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<SurdValue> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.') {
                    self.pos += 1;
                }
                let lit = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(SurdValue::from_fraction(&parse_fraction(lit)?))
            }
            Some(b's') if self.src[self.pos..].starts_with(b"sqrt") => {
                self.pos += 4;
                if !self.eat(b'(') {
                    return Err(self.err("expected '(' after sqrt"));
                }
                self.skip_ws();
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let lit = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let d: u64 = lit.parse().map_err(|_| self.err("expected a non-negative integer radicand"))?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(SurdValue::sqrt(d))
            }
            _ => Err(self.err("expected a number, sqrt(..) or '('")),
        }
    }
}
