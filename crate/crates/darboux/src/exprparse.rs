//! Plain-text polynomial format shared by the CLI flags and JSON payloads.
//!
//! Grammar: a signed sum of terms. A term is a rational coefficient
//! (`3`, `-1/2`), a product of variable factors (`x^2*y`), or both joined
//! by `*`. Exponent `1` and coefficient `1` are implicit on output.
//! Implicit multiplication (`2x`) is rejected so every error has a single
//! obvious fix.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{Poly2, Rational, Var};

/// Parse failure with the byte offset of the first unusable character.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: expected {expected}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: &'static str,
}

impl ParseError {
    fn new(offset: usize, expected: &'static str) -> Self {
        ParseError { offset, expected }
    }
}

/// Render a polynomial in descending monomial order with deterministic bytes.
pub fn format_poly(p: &Poly2) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms_desc().enumerate() {
        if idx == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mag = c.abs();
        let vars = format_monomial(m.i, m.j);
        if vars.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&vars);
        } else {
            out.push_str(&mag.to_string());
            out.push('*');
            out.push_str(&vars);
        }
    }
    out
}

fn format_monomial(i: u32, j: u32) -> String {
    let mut parts = Vec::new();
    if i == 1 {
        parts.push("x".to_string());
    } else if i > 1 {
        parts.push(format!("x^{i}"));
    }
    if j == 1 {
        parts.push("y".to_string());
    } else if j > 1 {
        parts.push(format!("y^{j}"));
    }
    parts.join("*")
}

/// Parse the grammar above into a polynomial. Whitespace is ignored.
pub fn parse_poly(s: &str) -> Result<Poly2, ParseError> {
    let mut sc = Scanner::new(s);
    let mut poly = Poly2::zero();
    sc.skip_ws();
    let mut first = true;
    loop {
        let negative = match sc.peek() {
            Some(b'+') => {
                sc.bump();
                false
            }
            Some(b'-') => {
                sc.bump();
                true
            }
            None if first => {
                return Err(ParseError::new(sc.pos, "a term"));
            }
            None => unreachable!("separator checked before looping"),
            Some(_) if first => false,
            Some(_) => unreachable!("separator checked before looping"),
        };
        first = false;
        sc.skip_ws();
        let (m, c) = sc.term()?;
        poly = &poly + &Poly2::from_terms([((m.0, m.1), if negative { -c } else { c })]);
        sc.skip_ws();
        match sc.peek() {
            None => return Ok(poly),
            Some(b'+') | Some(b'-') => continue,
            Some(_) => {
                return Err(ParseError::new(sc.pos, "`+`, `-`, or end of input"));
            }
        }
    }
}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(s: &'a str) -> Self {
        Scanner {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.bump();
        }
    }

    fn term(&mut self) -> Result<((u32, u32), Rational), ParseError> {
        match self.peek() {
            Some(b'0'..=b'9') => {
                let coeff = self.coefficient()?;
                match self.peek() {
                    Some(b'*') => {
                        self.bump();
                        self.skip_ws();
                        let (i, j) = self.factors()?;
                        Ok(((i, j), coeff))
                    }
                    _ => Ok(((0, 0), coeff)),
                }
            }
            Some(b'x') | Some(b'y') => {
                let (i, j) = self.factors()?;
                Ok(((i, j), Rational::one()))
            }
            _ => Err(ParseError::new(
                self.pos,
                "a coefficient, `x`, or `y`",
            )),
        }
    }

    fn coefficient(&mut self) -> Result<Rational, ParseError> {
        let numer = self.integer("a coefficient, `x`, or `y`")?;
        self.skip_ws();
        if self.peek() == Some(b'/') {
            self.bump();
            self.skip_ws();
            let at = self.pos;
            let denom = self.integer("a positive integer denominator")?;
            if denom.is_zero() {
                return Err(ParseError::new(at, "a positive integer denominator"));
            }
            self.skip_ws();
            Ok(Rational::new(numer, denom))
        } else {
            self.skip_ws();
            Ok(Rational::from_integer(numer))
        }
    }

    fn integer(&mut self, expected: &'static str) -> Result<num_bigint::BigInt, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.bump();
        }
        if self.pos == start {
            return Err(ParseError::new(start, expected));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digit run parses as an integer"))
    }

    fn factors(&mut self) -> Result<(u32, u32), ParseError> {
        let mut i: u32 = 0;
        let mut j: u32 = 0;
        loop {
            let var = match self.peek() {
                Some(b'x') => Var::X,
                Some(b'y') => Var::Y,
                _ => return Err(ParseError::new(self.pos, "`x` or `y`")),
            };
            self.bump();
            self.skip_ws();
            let exp = if self.peek() == Some(b'^') {
                self.bump();
                self.skip_ws();
                self.exponent()?
            } else {
                1
            };
            match var {
                Var::X => {
                    i = i
                        .checked_add(exp)
                        .ok_or(ParseError::new(self.pos, "a smaller exponent"))?
                }
                Var::Y => {
                    j = j
                        .checked_add(exp)
                        .ok_or(ParseError::new(self.pos, "a smaller exponent"))?
                }
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.bump();
                self.skip_ws();
            } else {
                return Ok((i, j));
            }
        }
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.bump();
        }
        if self.pos == start {
            return Err(ParseError::new(start, "a nonnegative integer exponent"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits
            .parse()
            .map_err(|_| ParseError::new(start, "a smaller exponent"))
    }
}
