//! Text syntax for words: `ab^3A`, `(ab)^-2`, `t A^2 T`, `1`.
//!
//! Lowercase letters are generators, uppercase letters their inverses.
//! Whitespace, `*` and `.` are separators. `1` (or the empty string) is the
//! identity.

use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

/// Maximum number of letters a parsed word may expand to.
const MAX_EXPANSION: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

/// A letter with an integer exponent, e.g. `b^-3` is `('b', -3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawLetter {
    pub letter: char,
    pub exponent: i64,
}

pub fn parse_raw(input: &str) -> Result<Vec<RawLetter>, ParseError> {
    let mut parser = Parser {
        bytes: input.as_bytes(),
        pos: 0,
    };
    let out = parser.word()?;
    parser.skip_separators();
    if parser.pos != parser.bytes.len() {
        return Err(ParseError::new(parser.pos, "unexpected character"));
    }
    Ok(out)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_separators(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() || c == b'*' || c == b'.' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn word(&mut self) -> Result<Vec<RawLetter>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_separators();
            match self.peek() {
                None | Some(b')') => return Ok(out),
                Some(b'1') => {
                    self.pos += 1;
                    // `1^k` is still the identity
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.integer()?;
                    }
                }
                Some(b'(') => {
                    let open = self.pos;
                    self.pos += 1;
                    let inner = self.word()?;
                    if self.peek() != Some(b')') {
                        return Err(ParseError::new(open, "unbalanced parenthesis"));
                    }
                    self.pos += 1;
                    let exp = self.exponent()?;
                    let block: Vec<RawLetter> = if exp < 0 {
                        inner
                            .iter()
                            .rev()
                            .map(|l| RawLetter {
                                letter: l.letter,
                                exponent: -l.exponent,
                            })
                            .collect()
                    } else {
                        inner
                    };
                    let reps = exp.unsigned_abs() as usize;
                    if block.len().saturating_mul(reps) + out.len() > MAX_EXPANSION {
                        return Err(ParseError::new(open, "word expands beyond the size limit"));
                    }
                    for _ in 0..reps {
                        out.extend_from_slice(&block);
                    }
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    self.pos += 1;
                    let sign = if c.is_ascii_uppercase() { -1 } else { 1 };
                    let exp = self.exponent()?;
                    if exp != 0 {
                        out.push(RawLetter {
                            letter: (c as char).to_ascii_lowercase(),
                            exponent: sign * exp,
                        });
                    }
                }
                Some(_) => return Err(ParseError::new(self.pos, "unexpected character")),
            }
        }
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.integer()
        } else {
            Ok(1)
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        let negative = self.peek() == Some(b'-');
        if negative {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if digits_start == self.pos {
            return Err(ParseError::new(start, "expected an integer exponent"));
        }
        let text = core::str::from_utf8(&self.bytes[digits_start..self.pos]).unwrap_or("");
        let value: i64 = text
            .parse()
            .map_err(|_| ParseError::new(start, "exponent out of range"))?;
        Ok(if negative { -value } else { value })
    }
}
