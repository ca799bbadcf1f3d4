//! Shared scanner for the problem and polynomial grammars.

use std::fmt;

use thiserror::Error;

use crate::ff::{FFElem, Field};

/// A syntax error with a 1-based position in the input text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: expected {expected}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
}

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn error_at(&self, pos: usize, expected: impl fmt::Display) -> SyntaxError {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        SyntaxError { line, col, expected: expected.to_string() }
    }

    pub fn error(&self, expected: impl fmt::Display) -> SyntaxError {
        self.error_at(self.pos, expected)
    }

    /// Skips spaces and tabs; newlines too when `newlines` is set.
    pub fn skip_ws(&mut self, newlines: bool) {
        let skip = self
            .rest()
            .char_indices()
            .find(|&(_, c)| !(c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n')))
            .map_or(self.rest().len(), |(i, _)| i);
        self.pos += skip;
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws(false);
        self.rest().chars().next()
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("'{c}'")))
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    /// An unsigned decimal integer.
    pub fn uint(&mut self) -> Result<u64, SyntaxError> {
        self.skip_ws(false);
        let digits = self.rest().chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.error("an integer"));
        }
        let text = &self.rest()[..digits];
        let v = text.parse::<u64>().map_err(|_| self.error("an integer that fits in 64 bits"))?;
        self.pos += digits;
        Ok(v)
    }

    /// An optionally negative integer.
    pub fn int(&mut self) -> Result<i64, SyntaxError> {
        let neg = self.eat('-');
        let start = self.pos;
        let v = self.uint()?;
        let v = i64::try_from(v).map_err(|_| self.error_at(start, "a smaller integer"))?;
        Ok(if neg { -v } else { v })
    }

    /// A keyword made of ASCII letters and underscores.
    pub fn word(&mut self) -> Option<&'a str> {
        self.skip_ws(false);
        let len = self.rest().chars().take_while(|c| c.is_ascii_alphabetic() || *c == '_').count();
        if len == 0 {
            return None;
        }
        let w = &self.rest()[..len];
        self.pos += len;
        Some(w)
    }
}

/// `term (("+"|"-") term)*` where each term is `c`, `c*v^e`, or `v^e`.
/// The callback parses a coefficient; `v` is the variable letter.
pub(crate) fn parse_sum<C, T>(
    cur: &mut Cursor<'_>,
    var: char,
    allow_negative_exp: bool,
    mut coeff: C,
) -> Result<Vec<(T, i64)>, SyntaxError>
where
    C: FnMut(&mut Cursor<'_>) -> Result<Option<T>, SyntaxError>,
    T: Neg,
{
    let mut out = Vec::new();
    let mut negate = cur.eat('-');
    loop {
        let c = coeff(cur)?;
        let exp = match c {
            Some(_) if !cur.eat('*') => 0,
            _ => {
                if !cur.eat(var) {
                    return Err(cur.error(if out.is_empty() && c.is_none() {
                        format!("a coefficient or '{var}'")
                    } else {
                        format!("'{var}'")
                    }));
                }
                if cur.eat('^') {
                    let start = cur.pos();
                    let e = cur.int()?;
                    if e < 0 && !allow_negative_exp {
                        return Err(cur.error_at(start, "a nonnegative exponent"));
                    }
                    e
                } else {
                    1
                }
            }
        };
        out.push((c.map(|v| if negate { v.neg() } else { v }), negate, exp));
        match cur.peek() {
            Some('+') => {
                cur.eat('+');
                negate = false;
            }
            Some('-') => {
                cur.eat('-');
                negate = true;
            }
            _ => break,
        }
    }
    Ok(out
        .into_iter()
        .map(|(c, negate, e)| (c.unwrap_or_else(|| T::unit(negate)), e))
        .collect())
}

/// Coefficient types usable in [`parse_sum`].
pub(crate) trait Neg: Sized {
    fn neg(self) -> Self;
    fn unit(negative: bool) -> Self;
}

impl Neg for i64 {
    fn neg(self) -> Self {
        -self
    }
    fn unit(negative: bool) -> Self {
        if negative {
            -1
        } else {
            1
        }
    }
}

/// A coefficient of a skew polynomial: an integer or an element given in `t`.
#[derive(Debug, Clone)]
pub(crate) enum Coeff {
    Int(i64),
    Elem(FFElem),
}

impl Coeff {
    pub fn into_elem(self, field: &Field) -> FFElem {
        match self {
            Coeff::Int(v) => field.from_int(v),
            Coeff::Elem(e) => e,
        }
    }
}

impl Neg for Coeff {
    fn neg(self) -> Self {
        match self {
            Coeff::Int(v) => Coeff::Int(-v),
            Coeff::Elem(e) => Coeff::Elem(-e),
        }
    }
    fn unit(negative: bool) -> Self {
        Coeff::Int(i64::unit(negative))
    }
}

/// Parses an integer coefficient if one starts here.
pub(crate) fn int_coeff(cur: &mut Cursor<'_>) -> Result<Option<i64>, SyntaxError> {
    if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
        Ok(Some(i64::try_from(cur.uint()?).map_err(|_| cur.error("a smaller integer"))?))
    } else {
        Ok(None)
    }
}

/// Parses a polynomial in `t` with integer coefficients, constant term first.
pub(crate) fn parse_t_poly(cur: &mut Cursor<'_>) -> Result<Vec<i64>, SyntaxError> {
    let terms = parse_sum(cur, 't', false, int_coeff)?;
    let deg = terms.iter().map(|&(_, e)| e).max().unwrap_or(0) as usize;
    if deg > 64 {
        return Err(cur.error("a polynomial in t of degree at most 64"));
    }
    let mut out = vec![0i64; deg + 1];
    for (c, e) in terms {
        out[e as usize] += c;
    }
    Ok(out)
}
