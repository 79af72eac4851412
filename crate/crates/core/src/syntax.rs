//! Text forms of ring elements.
//!
//! Basis form is `a+b*w` (`w` is the basis element ω). Pretty form is
//! `x+y√d` with rational `x, y`, e.g. `3/2+1/2√-3`; `sqrt(d)` is accepted for
//! `√d`, and `i` for `√-1`. The parser accepts any mix of terms and checks
//! that the result is an algebraic integer of the ring.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{BasisKind, QInt, RingId};

enum Symbol {
    None,
    Omega,
    Root,
}

struct Parser<'a> {
    input: &'a str,
    chars: Vec<char>,
    pos: usize,
    ring: RingId,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, reason: &str) -> Error {
        Error::parse(self.input, format!("{reason} at position {}", self.pos))
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().ok()
    }

    fn coefficient(&mut self) -> Result<Option<BigRational>> {
        let Some(num) = self.digits() else {
            return Ok(None);
        };
        if self.eat('/') {
            let den = self.digits().ok_or_else(|| self.err("expected denominator"))?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            Ok(Some(BigRational::new(num, den)))
        } else {
            Ok(Some(BigRational::from_integer(num)))
        }
    }

    fn radicand(&mut self) -> Result<()> {
        let negative = self.eat('-');
        let value = self.digits().ok_or_else(|| self.err("expected radicand"))?;
        let value = if negative { -value } else { value };
        if value != BigInt::from(self.ring.d()) {
            return Err(self.err(&format!("radicand {value} does not match ring d={}", self.ring)));
        }
        Ok(())
    }

    fn symbol(&mut self) -> Result<Symbol> {
        match self.peek() {
            Some('w') | Some('ω') => {
                self.pos += 1;
                Ok(Symbol::Omega)
            }
            Some('i') if self.ring.d() == -1 => {
                self.pos += 1;
                Ok(Symbol::Root)
            }
            Some('√') => {
                self.pos += 1;
                let paren = self.eat('(');
                self.radicand()?;
                if paren && !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(Symbol::Root)
            }
            Some('s') => {
                let rest: String = self.chars[self.pos..].iter().take(5).collect();
                if rest != "sqrt(" {
                    return Err(self.err("unexpected character"));
                }
                self.pos += 5;
                self.radicand()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(Symbol::Root)
            }
            _ => Ok(Symbol::None),
        }
    }

    fn parse(mut self) -> Result<QInt> {
        if self.chars.is_empty() {
            return Err(self.err("empty element"));
        }
        let mut constant = BigRational::zero();
        let mut root = BigRational::zero();
        let mut omega = BigRational::zero();
        let mut first = true;
        while self.pos < self.chars.len() {
            let negative = if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else if first {
                false
            } else {
                return Err(self.err("expected '+' or '-'"));
            };
            first = false;
            let coef = self.coefficient()?;
            let starred = self.eat('*');
            let symbol = self.symbol()?;
            let coef = match (coef, &symbol) {
                (None, Symbol::None) => return Err(self.err("expected a term")),
                (Some(_), Symbol::None) if starred => return Err(self.err("expected w or √d after '*'")),
                (None, _) => BigRational::one(),
                (Some(c), _) => c,
            };
            let coef = if negative { -coef } else { coef };
            match symbol {
                Symbol::None => constant += coef,
                Symbol::Omega => omega += coef,
                Symbol::Root => root += coef,
            }
        }
        let half = BigRational::new(1.into(), 2.into());
        let (x, y) = match self.ring.basis_kind() {
            BasisKind::Integral => (constant, root + omega),
            BasisKind::HalfIntegral => (constant + &omega * &half, root + &omega * &half),
        };
        let (a, b) = match self.ring.basis_kind() {
            BasisKind::Integral => (x, y),
            BasisKind::HalfIntegral => {
                let b = &y * BigRational::from_integer(2.into());
                (x - y, b)
            }
        };
        if !a.is_integer() || !b.is_integer() {
            return Err(Error::parse(self.input, "not an algebraic integer of this ring"));
        }
        Ok(QInt::new(self.ring, a.to_integer(), b.to_integer()))
    }
}

impl QInt {
    /// Parse either basis or pretty syntax.
    pub fn parse(ring: RingId, input: &str) -> Result<QInt> {
        let chars = input.chars().filter(|c| !c.is_whitespace()).collect();
        Parser {
            input,
            chars,
            pos: 0,
            ring,
        }
        .parse()
    }

    /// Rational parts `(x, y)` with `self = x + y√d`.
    pub fn rational_parts(&self) -> (BigRational, BigRational) {
        let (x2, y2) = self.doubled_parts();
        let two = BigInt::from(2);
        (BigRational::new(x2, two.clone()), BigRational::new(y2, two))
    }

    /// `x+y√d` with rational `x, y`.
    pub fn pretty(&self) -> String {
        let (x, y) = self.rational_parts();
        let mut out = String::new();
        if !x.is_zero() {
            out.push_str(&x.to_string());
        }
        if !y.is_zero() {
            if y.is_negative() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let mag = y.abs();
            if !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            out.push_str(&format!("√{}", self.ring().d()));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Basis form `a+b*w`.
impl fmt::Display for QInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (self.a(), self.b());
        if b.is_zero() {
            return write!(f, "{a}");
        }
        if !a.is_zero() {
            write!(f, "{a}")?;
            if b.is_positive() {
                f.write_str("+")?;
            }
        }
        if b.is_negative() {
            f.write_str("-")?;
        }
        let mag = b.abs();
        if mag.is_one() {
            f.write_str("w")
        } else {
            write!(f, "{mag}*w")
        }
    }
}
