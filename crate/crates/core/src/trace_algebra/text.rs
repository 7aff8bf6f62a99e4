//! Stable text form of trace expressions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := coeff ['*'] word* | word+
//! coeff := int ['/' int]
//! word  := '(' (('A' | 'a') [int])+ ')'
//! ```
//!
//! `A` is a creation matrix, `a` an annihilation matrix and the optional count repeats the
//! letter, so `3/2*(A2)(a1)` is `(3/2) tr(a†a†) tr(a)`. A term without words is a scalar.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::expr::TraceExpr;
use super::wick::OrderedProduct;
use super::word::{Letter, TraceWord};
use crate::error::{Error, Result};
use crate::rational::{to_fraction_string, Q};

impl fmt::Display for TraceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (ws, c)) in self.terms().iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if ws.is_empty() {
                write!(f, "{}", to_fraction_string(&mag))?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{}*", to_fraction_string(&mag))?;
            }
            for w in ws {
                write!(f, "{w}")?;
            }
        }
        Ok(())
    }
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn int(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn coeff(&mut self) -> Result<Option<Q>> {
        let Some(num) = self.int() else {
            return Ok(None);
        };
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let Some(den) = self.int() else {
                return self.err("expected denominator");
            };
            if den.is_zero() {
                return self.err("zero denominator");
            }
            return Ok(Some(Q::new(num, den)));
        }
        Ok(Some(Q::from_integer(num)))
    }

    fn word(&mut self) -> Result<Vec<Letter>> {
        self.pos += 1; // '('
        let mut letters = Vec::new();
        loop {
            match self.peek() {
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                Some(c @ (b'A' | b'a')) => {
                    self.pos += 1;
                    let l = if c == b'A' { Letter::Create } else { Letter::Annihilate };
                    let count = match self.s.get(self.pos) {
                        Some(d) if d.is_ascii_digit() => {
                            let v = self.int().expect("digit present");
                            usize::try_from(v).or_else(|_| self.err("letter count too large"))?
                        }
                        _ => 1,
                    };
                    if count == 0 {
                        return self.err("letter count must be positive");
                    }
                    letters.extend(std::iter::repeat_n(l, count));
                }
                Some(_) => return self.err("expected 'A', 'a' or ')'"),
                None => return self.err("unterminated trace"),
            }
        }
        if letters.is_empty() {
            return self.err("empty trace");
        }
        Ok(letters)
    }

    fn term(&mut self) -> Result<(Q, Vec<Vec<Letter>>)> {
        let c = self.coeff()?;
        if c.is_some() && self.peek() == Some(b'*') {
            self.pos += 1;
            if self.peek() != Some(b'(') {
                return self.err("expected trace after '*'");
            }
        }
        let mut words = Vec::new();
        while self.peek() == Some(b'(') {
            words.push(self.word()?);
        }
        if c.is_none() && words.is_empty() {
            return self.err("expected coefficient or trace");
        }
        Ok((c.unwrap_or_else(Q::one), words))
    }

    fn sum(&mut self) -> Result<Vec<(Q, Vec<Vec<Letter>>)>> {
        let mut out = Vec::new();
        let mut sign = Q::one();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -sign;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let (c, w) = self.term()?;
            out.push((c * &sign, w));
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = Q::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -Q::one();
                }
                None => break,
                Some(_) => return self.err("expected '+', '-' or end of input"),
            }
        }
        Ok(out)
    }
}

/// Parses an expression whose monomials are read as normal ordered.
pub fn parse_expr(n: u32, s: &str) -> Result<TraceExpr> {
    let mut lx = Lexer { s: s.as_bytes(), pos: 0 };
    let mut out = TraceExpr::zero(n);
    for (c, ws) in lx.sum()? {
        let words = ws.into_iter().map(TraceWord::new).collect::<Result<Vec<_>>>()?;
        out = out.add(&TraceExpr::monomial(n, words, c));
    }
    Ok(out)
}

/// Parses an expression whose monomials are literal operator products in the written order.
pub fn parse_written(n: u32, s: &str) -> Result<Vec<(Q, OrderedProduct)>> {
    let mut lx = Lexer { s: s.as_bytes(), pos: 0 };
    lx.sum()?.into_iter().map(|(c, ws)| Ok((c, OrderedProduct::written(n, &ws)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::trace_algebra::normal_order;

    #[test]
    fn print_parse_round_trip() {
        let e = parse_expr(3, "3/2*(A2)(a1) - (A2a1) + 2").unwrap();
        assert_eq!(e.to_string(), "2 + 3/2*(A2)(a1) - (A2a1)");
        assert_eq!(parse_expr(3, &e.to_string()).unwrap(), e);
        assert_eq!(parse_expr(3, "(AAa)").unwrap(), parse_expr(3, "(A2a)").unwrap());
        assert_eq!(parse_expr(3, "-1/2").unwrap(), TraceExpr::scalar(3, frac(-1, 2)));
        assert_eq!(TraceExpr::zero(3).to_string(), "0");
    }

    #[test]
    fn parse_errors_carry_positions() {
        for bad in ["", "(A2", "()", "(b)", "1/0", "2*", "(A0)", "(A2) ) "] {
            assert!(matches!(parse_expr(3, bad), Err(Error::Parse { .. })), "{bad}");
        }
    }

    #[test]
    fn written_products_are_normal_ordered() {
        let terms = parse_written(2, "(a2)(A2)").unwrap();
        let e = normal_order(&terms[0].1);
        assert_eq!(e.scalar_part(), frac(3, 2));
        assert_eq!(e.coeff(&[TraceWord::new(vec![Letter::Create, Letter::Annihilate]).unwrap()]), int(2));
    }
}
