//! Exact arithmetic in the field Q(z) of Eisenstein rationals, where z is a
//! primitive cube root of unity satisfying z^2 + z + 1 = 0.
//!
//! Every element is stored on the basis {1, z} as a pair of reduced
//! arbitrary-precision rationals, so equality of values is equality of
//! representations. z^2 is never stored: it reduces to -1 - z.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use thiserror::Error;

/// Reduced arbitrary-precision rational, positive denominator.
pub type Rational = num::BigRational;

/// Errors from scalar arithmetic and parsing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// An element a + b*z of Q(z), with a = `re` and b = `zc`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Eisenstein {
    re: Rational,
    zc: Rational,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl Eisenstein {
    pub fn new(re: Rational, zc: Rational) -> Self {
        Eisenstein { re, zc }
    }

    pub fn from_rational(re: Rational) -> Self {
        Eisenstein { re, zc: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n, 1))
    }

    /// n/d + (zn/zd)*z; panics if a denominator is zero.
    pub fn from_parts(n: i64, d: i64, zn: i64, zd: i64) -> Self {
        Eisenstein { re: rat(n, d), zc: rat(zn, zd) }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The generator z itself.
    pub fn zeta() -> Self {
        Eisenstein { re: Rational::zero(), zc: Rational::one() }
    }

    /// z^2 = -1 - z.
    pub fn zeta2() -> Self {
        Eisenstein { re: rat(-1, 1), zc: rat(-1, 1) }
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn zc(&self) -> &Rational {
        &self.zc
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.zc.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.zc.is_zero()
    }

    /// True iff the value is rational (no z component).
    pub fn is_rational(&self) -> bool {
        self.zc.is_zero()
    }

    /// Galois conjugate a + b*z^2 = (a - b) - b*z.
    pub fn conj(&self) -> Self {
        Eisenstein {
            re: &self.re - &self.zc,
            zc: -self.zc.clone(),
        }
    }

    /// Field norm x * conj(x) = a^2 - a*b + b^2, a rational.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re - &self.re * &self.zc + &self.zc * &self.zc
    }

    /// Multiplicative inverse via the conjugate and the rational norm.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conj();
        Ok(Eisenstein { re: c.re / &n, zc: c.zc / n })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Eisenstein::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Sign convention used when printing terms: treat the value as
    /// "negative" when re < 0, or re = 0 and zc < 0.
    pub fn is_display_negative(&self) -> bool {
        self.re.is_negative() || (self.re.is_zero() && self.zc.is_negative())
    }

    /// True when the canonical text form is a bare sum like `1-2*z`, which
    /// must be parenthesized before a `*` can be appended to it.
    pub fn needs_parens_as_factor(&self) -> bool {
        !self.re.is_zero()
            && !self.zc.is_zero()
            && self.re.denom().is_one()
            && self.zc.denom().is_one()
    }
}

impl Add for &Eisenstein {
    type Output = Eisenstein;
    fn add(self, rhs: &Eisenstein) -> Eisenstein {
        Eisenstein { re: &self.re + &rhs.re, zc: &self.zc + &rhs.zc }
    }
}

impl Sub for &Eisenstein {
    type Output = Eisenstein;
    fn sub(self, rhs: &Eisenstein) -> Eisenstein {
        Eisenstein { re: &self.re - &rhs.re, zc: &self.zc - &rhs.zc }
    }
}

impl Mul for &Eisenstein {
    type Output = Eisenstein;
    fn mul(self, rhs: &Eisenstein) -> Eisenstein {
        // (a + b z)(c + d z) = ac + (ad + bc) z + bd z^2, z^2 = -1 - z.
        let ac = &self.re * &rhs.re;
        let ad_bc = &self.re * &rhs.zc + &self.zc * &rhs.re;
        let bd = &self.zc * &rhs.zc;
        Eisenstein { re: ac - &bd, zc: ad_bc - bd }
    }
}

impl Neg for &Eisenstein {
    type Output = Eisenstein;
    fn neg(self) -> Eisenstein {
        Eisenstein { re: -self.re.clone(), zc: -self.zc.clone() }
    }
}

/// Panics on a zero divisor; use [`Eisenstein::inv`] for the checked path.
impl Div for &Eisenstein {
    type Output = Eisenstein;
    #[allow(clippy::suspicious_arithmetic_impl)] // division is mul by inverse
    fn div(self, rhs: &Eisenstein) -> Eisenstein {
        self * &rhs.inv().expect("division by zero in Q(z)")
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Eisenstein {
            type Output = Eisenstein;
            fn $method(self, rhs: Eisenstein) -> Eisenstein {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Eisenstein> for Eisenstein {
            type Output = Eisenstein;
            fn $method(self, rhs: &Eisenstein) -> Eisenstein {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for Eisenstein {
    type Output = Eisenstein;
    fn neg(self) -> Eisenstein {
        -(&self)
    }
}

impl AddAssign<&Eisenstein> for Eisenstein {
    fn add_assign(&mut self, rhs: &Eisenstein) {
        self.re += &rhs.re;
        self.zc += &rhs.zc;
    }
}

impl SubAssign<&Eisenstein> for Eisenstein {
    fn sub_assign(&mut self, rhs: &Eisenstein) {
        self.re -= &rhs.re;
        self.zc -= &rhs.zc;
    }
}

impl MulAssign<&Eisenstein> for Eisenstein {
    fn mul_assign(&mut self, rhs: &Eisenstein) {
        *self = (&*self) * rhs;
    }
}

/// Canonical text form. Examples: `0`, `-7/3`, `z`, `-z/3`, `2*z`,
/// `1-2*z`, `(2+z)/3`. Parsing the output always round-trips exactly.
impl fmt::Display for Eisenstein {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Common denominator: lcm of the two reduced denominators, positive.
        let d = num::integer::lcm(self.re.denom().clone(), self.zc.denom().clone());
        let a = self.re.numer() * (&d / self.re.denom());
        let b = self.zc.numer() * (&d / self.zc.denom());
        let one = BigInt::one();

        if b.is_zero() {
            if d.is_one() {
                return write!(f, "{a}");
            }
            return write!(f, "{a}/{d}");
        }
        if a.is_zero() {
            let core = if b == one {
                "z".to_string()
            } else if b == -&one {
                "-z".to_string()
            } else {
                format!("{b}*z")
            };
            if d.is_one() {
                return write!(f, "{core}");
            }
            return write!(f, "{core}/{d}");
        }
        let zterm = if b == one {
            "+z".to_string()
        } else if b == -&one {
            "-z".to_string()
        } else if b.is_negative() {
            format!("{b}*z")
        } else {
            format!("+{b}*z")
        };
        if d.is_one() {
            write!(f, "{a}{zterm}")
        } else {
            write!(f, "({a}{zterm})/{d}")
        }
    }
}

impl fmt::Debug for Eisenstein {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// ---------------------------------------------------------------------------
// Parsing: whitespace-insensitive expressions over integers and `z` with
// + - * / ^ and parentheses, evaluated exactly in Q(z).
// ---------------------------------------------------------------------------

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Zeta,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer { bytes: s.as_bytes(), pos: 0 }
    }

    fn next_tok(&mut self) -> Result<(usize, Tok), ScalarError> {
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
            b'z' => Tok::Zeta,
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.bytes.len() && self.bytes[end].is_ascii_digit() {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.bytes[start..end]).unwrap();
                self.pos = end;
                Tok::Int(text.parse::<BigInt>().unwrap())
            }
            _ => {
                return Err(ScalarError::Parse {
                    pos: start,
                    msg: format!("unexpected character {:?}", c as char),
                })
            }
        };
        Ok((start, tok))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    look: (usize, Tok),
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Result<Self, ScalarError> {
        let mut lexer = Lexer::new(s);
        let look = lexer.next_tok()?;
        Ok(Parser { lexer, look })
    }

    fn bump(&mut self) -> Result<(), ScalarError> {
        self.look = self.lexer.next_tok()?;
        Ok(())
    }

    fn expr(&mut self) -> Result<Eisenstein, ScalarError> {
        let mut acc = self.term()?;
        loop {
            match self.look.1 {
                Tok::Plus => {
                    self.bump()?;
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump()?;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Eisenstein, ScalarError> {
        let mut acc = self.unary()?;
        loop {
            match self.look.1 {
                Tok::Star => {
                    self.bump()?;
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    let pos = self.look.0;
                    self.bump()?;
                    let d = self.unary()?;
                    acc = &acc
                        * &d.inv().map_err(|_| ScalarError::Parse {
                            pos,
                            msg: "division by zero".into(),
                        })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Eisenstein, ScalarError> {
        match self.look.1 {
            Tok::Minus => {
                self.bump()?;
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.bump()?;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Eisenstein, ScalarError> {
        let (pos, tok) = self.look.clone();
        let base = match tok {
            Tok::Int(n) => {
                self.bump()?;
                Eisenstein::from_rational(Rational::from(n))
            }
            Tok::Zeta => {
                self.bump()?;
                Eisenstein::zeta()
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                if self.look.1 != Tok::RParen {
                    return Err(ScalarError::Parse { pos: self.look.0, msg: "expected ')'".into() });
                }
                self.bump()?;
                inner
            }
            _ => {
                return Err(ScalarError::Parse { pos, msg: format!("unexpected token {tok:?}") });
            }
        };
        if self.look.1 == Tok::Caret {
            self.bump()?;
            match self.look.1.clone() {
                Tok::Int(e) => {
                    self.bump()?;
                    let e: u32 = e.try_into().map_err(|_| ScalarError::Parse {
                        pos: self.look.0,
                        msg: "exponent out of range".into(),
                    })?;
                    Ok(base.pow(e))
                }
                other => Err(ScalarError::Parse {
                    pos: self.look.0,
                    msg: format!("expected integer exponent, got {other:?}"),
                }),
            }
        } else {
            Ok(base)
        }
    }
}

impl FromStr for Eisenstein {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, ScalarError> {
        let mut p = Parser::new(s)?;
        let v = p.expr()?;
        if p.look.1 != Tok::End {
            return Err(ScalarError::Parse {
                pos: p.look.0,
                msg: "trailing input after expression".into(),
            });
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> Eisenstein {
        s.parse().unwrap()
    }

    #[test]
    fn zeta_satisfies_minimal_polynomial() {
        let z = Eisenstein::zeta();
        assert_eq!(&(&z * &z) + &z + Eisenstein::one(), Eisenstein::zero());
        assert_eq!(z.pow(3), Eisenstein::one());
    }

    #[test]
    fn addition_examples() {
        assert_eq!(&Eisenstein::zeta() + &Eisenstein::zeta2(), Eisenstein::from_int(-1));
        let x = e("(5-2*z)/7");
        assert_eq!(&Eisenstein::zero() + &x, x);
        // (1 - z) + (1 - z^2) = 3
        let s = &(Eisenstein::one() - Eisenstein::zeta())
            + &(Eisenstein::one() - Eisenstein::zeta2());
        assert_eq!(s, Eisenstein::from_int(3));
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(&Eisenstein::zeta() * &Eisenstein::zeta2(), Eisenstein::one());
        let d = Eisenstein::zeta() - Eisenstein::zeta2();
        assert_eq!(&d * &d, Eisenstein::from_int(-3));
        let n = (Eisenstein::one() - Eisenstein::zeta2()) * (Eisenstein::one() - Eisenstein::zeta());
        assert_eq!(n, Eisenstein::from_int(3));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Eisenstein::zeta().inv().unwrap(), Eisenstein::zeta2());
        assert_eq!(Eisenstein::from_int(3).inv().unwrap(), e("1/3"));
        let x = Eisenstein::one() - Eisenstein::zeta();
        let expected = (Eisenstein::one() - Eisenstein::zeta2()) * e("1/3");
        assert_eq!(x.inv().unwrap(), expected);
        assert_eq!(Eisenstein::zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn display_canonical_forms() {
        assert_eq!(Eisenstein::zero().to_string(), "0");
        assert_eq!(e("-7/3").to_string(), "-7/3");
        assert_eq!(Eisenstein::zeta().to_string(), "z");
        assert_eq!((-Eisenstein::zeta()).to_string(), "-z");
        assert_eq!(e("2*z").to_string(), "2*z");
        assert_eq!(e("1-2*z").to_string(), "1-2*z");
        // (1 - z^2)/3 = (2 + z)/3 on the {1, z} basis
        let x = (Eisenstein::one() - Eisenstein::zeta2()) * e("1/3");
        assert_eq!(x.to_string(), "(2+z)/3");
        assert_eq!(e("z/3").to_string(), "z/3");
        assert_eq!(e("-z/3").to_string(), "-z/3");
        assert_eq!(e("2*z/3").to_string(), "2*z/3");
    }

    #[test]
    fn parse_accepts_documented_forms() {
        assert_eq!(e("  - 7 / 3 "), e("-7/3"));
        assert_eq!(e("(1+2*z)/5"), Eisenstein::new(rat(1, 5), rat(2, 5)));
        assert_eq!(e("z^2"), Eisenstein::zeta2());
        assert_eq!(e("z - z^2"), Eisenstein::new(rat(1, 1), rat(2, 1)));
        assert!("3//4".parse::<Eisenstein>().is_err());
        assert!("".parse::<Eisenstein>().is_err());
        assert!("1/0".parse::<Eisenstein>().is_err());
        assert!("q".parse::<Eisenstein>().is_err());
    }
}
