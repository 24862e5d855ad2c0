//! Text format for polynomials: terms joined by `+`/`-`, monomials written
//! `coef*var1^e1*var2^e2`, coefficients in the scalar syntax (integers, `z`,
//! rationals, parenthesized sums like `(2+z)/3`). Whitespace-insensitive.
//!
//! Parenthesized sub-polynomials are accepted anywhere a factor may appear,
//! so fixture entries can be written the way they are usually displayed,
//! e.g. `s*t*(u^2*w + z*v*w^2 + z^2*u*v^2)`.

use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;

use crate::scalars::Eisenstein;

use super::{MultiPoly, VarTable};

/// Parse failure with a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for PolyParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for PolyParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Zeta,
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next_tok(&mut self) -> Result<(usize, Tok), PolyParseError> {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        if self.pos >= self.bytes.len() {
            return Ok((start, Tok::End));
        }
        let c = self.bytes[self.pos];
        self.pos += 1;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.bytes.len() && self.bytes[end].is_ascii_digit() {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.bytes[start..end]).unwrap();
                self.pos = end;
                Tok::Int(text.parse::<BigInt>().unwrap())
            }
            _ if c.is_ascii_alphabetic() => {
                let mut end = self.pos;
                while end < self.bytes.len()
                    && (self.bytes[end].is_ascii_alphanumeric() || self.bytes[end] == b'_')
                {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.bytes[start..end]).unwrap().to_string();
                self.pos = end;
                if text == "z" {
                    Tok::Zeta
                } else {
                    Tok::Ident(text)
                }
            }
            _ => {
                return Err(PolyParseError {
                    pos: start,
                    msg: format!("unexpected character {:?}", c as char),
                })
            }
        };
        Ok((start, tok))
    }
}

struct Parser<'a> {
    table: &'a Arc<VarTable>,
    lexer: Lexer<'a>,
    look: (usize, Tok),
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), PolyParseError> {
        self.look = self.lexer.next_tok()?;
        Ok(())
    }

    fn poly(&mut self) -> Result<MultiPoly, PolyParseError> {
        let mut acc = self.term()?;
        loop {
            match self.look.1 {
                Tok::Plus => {
                    self.bump()?;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump()?;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, PolyParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.look.1 {
                Tok::Star => {
                    self.bump()?;
                    acc = acc.mul(&self.factor()?);
                }
                Tok::Slash => {
                    let pos = self.look.0;
                    self.bump()?;
                    let d = self.factor()?;
                    let c = d.as_constant().ok_or_else(|| PolyParseError {
                        pos,
                        msg: "division by a non-constant polynomial".into(),
                    })?;
                    let inv = c.inv().map_err(|_| PolyParseError {
                        pos,
                        msg: "division by zero".into(),
                    })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly, PolyParseError> {
        match self.look.1 {
            Tok::Minus => {
                self.bump()?;
                Ok(self.factor()?.neg())
            }
            Tok::Plus => {
                self.bump()?;
                self.factor()
            }
            _ => {
                let base = self.atom()?;
                if self.look.1 == Tok::Caret {
                    self.bump()?;
                    let (pos, tok) = self.look.clone();
                    match tok {
                        Tok::Int(e) => {
                            self.bump()?;
                            let e: u32 = e.try_into().map_err(|_| PolyParseError {
                                pos,
                                msg: "exponent out of range".into(),
                            })?;
                            Ok(base.pow(e))
                        }
                        other => Err(PolyParseError {
                            pos,
                            msg: format!("expected integer exponent, got {other:?}"),
                        }),
                    }
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn atom(&mut self) -> Result<MultiPoly, PolyParseError> {
        let (pos, tok) = self.look.clone();
        match tok {
            Tok::Int(n) => {
                self.bump()?;
                Ok(MultiPoly::constant(
                    self.table,
                    Eisenstein::from_rational(num::BigRational::from(n)),
                ))
            }
            Tok::Zeta => {
                self.bump()?;
                Ok(MultiPoly::constant(self.table, Eisenstein::zeta()))
            }
            Tok::Ident(name) => {
                self.bump()?;
                MultiPoly::var(self.table, &name)
                    .map_err(|_| PolyParseError { pos, msg: format!("undeclared variable `{name}`") })
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.poly()?;
                if self.look.1 != Tok::RParen {
                    return Err(PolyParseError { pos: self.look.0, msg: "expected ')'".into() });
                }
                self.bump()?;
                Ok(inner)
            }
            other => Err(PolyParseError { pos, msg: format!("unexpected token {other:?}") }),
        }
    }
}

/// Parses a single polynomial over the given table.
pub fn parse_poly(table: &Arc<VarTable>, input: &str) -> Result<MultiPoly, PolyParseError> {
    let mut lexer = Lexer { bytes: input.as_bytes(), pos: 0 };
    let look = lexer.next_tok()?;
    let mut p = Parser { table, lexer, look };
    let v = p.poly()?;
    if p.look.1 != Tok::End {
        return Err(PolyParseError {
            pos: p.look.0,
            msg: "trailing input after polynomial".into(),
        });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_factored_fixture_style() {
        let t = VarTable::new(&["s", "t", "u", "v", "w"]);
        let a = parse_poly(&t, "s*t*(u^2*w + z*v*w^2 + z^2*u*v^2)").unwrap();
        let b = parse_poly(&t, "s*t*u^2*w + z*s*t*v*w^2 + z^2*s*t*u*v^2").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_undeclared_variable() {
        let t = VarTable::new(&["x0", "x1"]);
        let err = parse_poly(&t, "x0 + x10").unwrap_err();
        assert!(err.msg.contains("x10"));
    }

    #[test]
    fn division_only_by_constants() {
        let t = VarTable::new(&["x"]);
        assert!(parse_poly(&t, "(1-z^2)/3*x").is_ok());
        assert!(parse_poly(&t, "x/x").is_err());
        assert!(parse_poly(&t, "x/0").is_err());
    }

    #[test]
    fn empty_input_is_an_error() {
        let t = VarTable::new(&["x"]);
        assert!(parse_poly(&t, "").is_err());
        assert!(parse_poly(&t, "   ").is_err());
    }
}
