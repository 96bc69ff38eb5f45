//! Recursive-descent parser and canonical printer for the polynomial input
//! grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := number | variable | '(' signed ')'
//! signed := ('+'|'-')? expr
//! ```
//!
//! Whitespace is insignificant, implicit multiplication is rejected, and a
//! sign on a number is only legal inside parentheses.

use super::{Monomial, Polynomial};
use std::fmt;
use thiserror::Error;

const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError { offset, message: message.into() }
    }
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => Err(ParseError::new(
                self.pos,
                format!("expected '{}', found '{}'", c as char, got as char),
            )),
            None => Err(ParseError::new(self.pos, format!("expected '{}', found end of input", c as char))),
        }
    }

    fn parse_uint(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        let mut val: u64 = 0;
        let mut any = false;
        while let Some(c) = self.text.get(self.pos).copied() {
            if !c.is_ascii_digit() {
                break;
            }
            any = true;
            val = val
                .checked_mul(10)
                .and_then(|v| v.checked_add((c - b'0') as u64))
                .ok_or_else(|| ParseError::new(start, "integer literal overflows"))?;
            self.pos += 1;
        }
        if !any {
            return Err(ParseError::new(self.pos, "expected an unsigned integer"));
        }
        Ok(val)
    }

    fn parse_number(&mut self, negative: bool) -> Result<Polynomial, ParseError> {
        let start = self.pos;
        while let Some(c) = self.text.get(self.pos).copied() {
            if c.is_ascii_digit() || c == b'.' {
                self.pos += 1;
            } else {
                break;
            }
        }
        let lit = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        if lit.is_empty() || lit == "." || lit.bytes().filter(|&b| b == b'.').count() > 1 {
            return Err(ParseError::new(start, format!("bad number literal '{lit}'")));
        }
        let value: f64 = lit
            .parse()
            .map_err(|_| ParseError::new(start, format!("bad number literal '{lit}'")))?;
        Ok(Polynomial::constant(self.nvars, if negative { -value } else { value }))
    }

    fn parse_base(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                // sign is only legal here, directly inside parentheses
                let neg = match self.peek() {
                    Some(b'-') => {
                        self.pos += 1;
                        true
                    }
                    Some(b'+') => {
                        self.pos += 1;
                        false
                    }
                    _ => false,
                };
                let inner = self.parse_expr()?;
                self.expect(b')')?;
                Ok(if neg { inner.scale(-1.0) } else { inner })
            }
            Some(b'x') => {
                self.pos += 1;
                let at = self.pos;
                let idx = self.parse_uint()?;
                if idx == 0 {
                    return Err(ParseError::new(at, "variable indices start at x1"));
                }
                if idx as usize > self.nvars {
                    return Err(ParseError::new(
                        at,
                        format!("variable x{idx} exceeds the {} available variables", self.nvars),
                    ));
                }
                Ok(Polynomial::variable(self.nvars, idx as usize - 1))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.parse_number(false),
            Some(c) => Err(ParseError::new(self.pos, format!("unexpected character '{}'", c as char))),
            None => Err(ParseError::new(self.pos, "unexpected end of input")),
        }
    }

    fn parse_factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.parse_base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let e = self.parse_uint()?;
            if e > MAX_EXPONENT as u64 {
                return Err(ParseError::new(at, format!("exponent {e} exceeds the limit {MAX_EXPONENT}")));
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn parse_term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.parse_factor()?;
                    acc = acc.mul(&f);
                }
                // implicit multiplication like "2x1" is a syntax error
                Some(c) if c == b'x' || c.is_ascii_digit() || c == b'(' => {
                    return Err(ParseError::new(
                        self.pos,
                        "implicit multiplication is not allowed; insert '*'",
                    ));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.parse_term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.add(&self.parse_term()?.scale(-1.0));
                }
                _ => return Ok(acc),
            }
        }
    }
}

/// Parses `text` into a canonical polynomial in `nvars` variables.
pub fn parse(text: &str, nvars: usize) -> Result<Polynomial, ParseError> {
    let mut p = Parser { text: text.as_bytes(), pos: 0, nvars };
    let poly = p.parse_expr()?;
    if let Some(c) = p.peek() {
        return Err(ParseError::new(p.pos, format!("trailing input starting at '{}'", c as char)));
    }
    Ok(poly)
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, lead: bool) -> fmt::Result {
    let c = if lead { m.coefficient } else { m.coefficient.abs() };
    let is_const = m.exponents.iter().all(|&e| e == 0);
    let mut wrote = false;
    if is_const {
        if c < 0.0 {
            write!(f, "({c})")?;
        } else {
            write!(f, "{c}")?;
        }
        wrote = true;
    } else if c < 0.0 {
        write!(f, "({c})")?;
        wrote = true;
    } else if c != 1.0 {
        write!(f, "{c}")?;
        wrote = true;
    }
    for (i, &e) in m.exponents.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if wrote {
            write!(f, "*")?;
        }
        wrote = true;
        write!(f, "x{}", i + 1)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    /// Canonical printing; `parse(print(p)) == p` structurally (Rust's f64
    /// formatting is shortest-round-trip, and the grammar has no exponent
    /// notation, so coefficients are printed in positional decimal).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, m) in self.terms().iter().rev().enumerate() {
            if i == 0 {
                write_monomial(f, m, true)?;
            } else if m.coefficient < 0.0 {
                write!(f, " - ")?;
                write_monomial(f, m, false)?;
            } else {
                write!(f, " + ")?;
                write_monomial(f, m, false)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms_of(p: &Polynomial) -> Vec<(Vec<u32>, f64)> {
        p.terms().iter().map(|t| (t.exponents.clone(), t.coefficient)).collect()
    }

    #[test]
    fn basic_examples() {
        let p = parse("x1^2 + x2^2 + x3^2", 3).unwrap();
        assert_eq!(
            terms_of(&p),
            vec![
                (vec![0, 0, 2], 1.0),
                (vec![0, 2, 0], 1.0),
                (vec![2, 0, 0], 1.0),
            ]
        );
        let q = parse("2*x1*x2 + x1*x2", 3).unwrap();
        assert_eq!(terms_of(&q), vec![(vec![1, 1, 0], 3.0)]);
        let z = parse("x1 - x1", 3).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn whitespace_and_parens() {
        let p = parse("  ( x1 + x2 ) ^ 2 ", 3).unwrap();
        assert_eq!(
            terms_of(&p),
            vec![(vec![0, 2, 0], 1.0), (vec![1, 1, 0], 2.0), (vec![2, 0, 0], 1.0)]
        );
        let q = parse("(-2)*x1 + (+1.5)*x2", 3).unwrap();
        assert_eq!(terms_of(&q), vec![(vec![0, 1, 0], 1.5), (vec![1, 0, 0], -2.0)]);
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse("2x1", 3).unwrap_err();
        assert_eq!(e.offset, 1);
        assert!(e.message.contains("implicit multiplication"));

        let e = parse("x4 + x1", 3).unwrap_err();
        assert_eq!(e.offset, 1);
        assert!(e.message.contains("x4"));

        let e = parse("x1^999999999999999999999", 3).unwrap_err();
        assert!(e.message.contains("overflow") || e.message.contains("limit"));

        let e = parse("x1 + ", 3).unwrap_err();
        assert_eq!(e.offset, 5);

        assert!(parse("-x1", 3).is_err(), "leading sign outside parens");
        assert!(parse("x1 * * x2", 3).is_err());
    }

    #[test]
    fn print_parse_round_trip() {
        for s in [
            "x1^2 + x2^2 + x3^4",
            "(-1)*x1 + 2*x2*x3 - 0.125*x3^3",
            "0",
            "3.5",
            "x1*x2*x3",
        ] {
            let p = parse(s, 3).unwrap();
            let printed = p.to_string();
            let q = parse(&printed, 3).unwrap();
            assert_eq!(p, q, "printed form: {printed}");
        }
    }
}
