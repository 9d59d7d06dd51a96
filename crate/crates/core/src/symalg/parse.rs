//! Recursive-descent parser for operator expressions.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' signed-int)?
//! atom   := x1 | x2 | p1 | p2 | pinv2 | k | i | rational | '(' expr ')'
//! ```
//!
//! Only `x2` takes negative exponents. `pinv2` may be preceded within a term
//! by scalar factors only.

use alloc::format;
use alloc::string::String;

use num_traits::{One, Zero};

use super::coeff::{gaussian, Gaussian, Rational};
use super::error::SymError;
use super::expr::OperatorExpr;

pub fn parse_operator(text: &str) -> Result<OperatorExpr, SymError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

enum Atom {
    X2,
    Other(OperatorExpr),
}

impl Parser<'_> {
    fn syntax(&self, msg: &str) -> SymError {
        SymError::Syntax {
            pos: self.pos,
            msg: String::from(msg),
        }
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

    fn eat(&mut self, ch: u8) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<OperatorExpr, SymError> {
        let negate = match self.peek() {
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
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<OperatorExpr, SymError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            self.skip_ws();
            let at = self.pos;
            let f = self.factor()?;
            if f.max_s() > 0 && !acc.is_scalar() {
                return Err(SymError::PinvNotLeading { pos: at });
            }
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<OperatorExpr, SymError> {
        self.skip_ws();
        let at = self.pos;
        let atom = self.atom()?;
        let power = if self.eat(b'^') {
            Some(self.signed_int()?)
        } else {
            None
        };
        match (atom, power) {
            (Atom::X2, p) => Ok(OperatorExpr::x2_pow(p.unwrap_or(1))),
            (Atom::Other(e), None) => Ok(e),
            (Atom::Other(_), Some(p)) if p < 0 => Err(SymError::NegativePower { pos: at }),
            (Atom::Other(e), Some(p)) => e.pow(p.unsigned_abs()),
        }
    }

    fn signed_int(&mut self) -> Result<i32, SymError> {
        let negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected integer exponent"));
        }
        let digits = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        let v: i32 = digits.parse().map_err(|_| self.syntax("exponent out of range"))?;
        Ok(if negative { -v } else { v })
    }

    fn atom(&mut self) -> Result<Atom, SymError> {
        let Some(ch) = self.peek() else {
            return Err(self.syntax("unexpected end of input"));
        };
        if ch == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            if !self.eat(b')') {
                return Err(self.syntax("expected ')'"));
            }
            return Ok(Atom::Other(e));
        }
        if ch.is_ascii_digit() || ch == b'.' {
            return self.rational().map(|g| Atom::Other(OperatorExpr::scalar(g)));
        }
        if ch.is_ascii_alphabetic() {
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
            let word = &self.src[start..self.pos];
            let atom = match word {
                b"x1" => Atom::Other(OperatorExpr::x1()),
                b"x2" => Atom::X2,
                b"p1" => Atom::Other(OperatorExpr::p1()),
                b"p2" => Atom::Other(OperatorExpr::p2()),
                b"pinv2" => Atom::Other(OperatorExpr::pinv2()),
                b"k" => Atom::Other(OperatorExpr::k()),
                b"i" => Atom::Other(OperatorExpr::scalar(gaussian(0, 1))),
                _ => {
                    self.pos = start;
                    let name = String::from_utf8_lossy(word);
                    return Err(self.syntax(&format!("unknown identifier '{name}'")));
                }
            };
            return Ok(atom);
        }
        Err(self.syntax(&format!("unexpected character '{}'", ch as char)))
    }

    fn unsigned_decimal(&mut self) -> Result<Rational, SymError> {
        let start = self.pos;
        let mut int_part: i128 = 0;
        let mut scale: i128 = 1;
        let mut seen_dot = false;
        let mut digits = 0;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_digit() {
                int_part = int_part
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(i128::from(c - b'0')))
                    .ok_or_else(|| self.syntax("numeric literal out of range"))?;
                if seen_dot {
                    scale = scale
                        .checked_mul(10)
                        .ok_or_else(|| self.syntax("numeric literal out of range"))?;
                }
                digits += 1;
            } else if c == b'.' && !seen_dot {
                seen_dot = true;
            } else {
                break;
            }
            self.pos += 1;
        }
        if digits == 0 {
            self.pos = start;
            return Err(self.syntax("malformed number"));
        }
        Ok(Rational::new(int_part, scale))
    }

    fn rational(&mut self) -> Result<Gaussian, SymError> {
        let num = self.unsigned_decimal()?;
        let save = self.pos;
        if self.eat(b'/') {
            self.skip_ws();
            if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                let den = self.unsigned_decimal()?;
                if den.is_zero() {
                    return Err(self.syntax("division by zero"));
                }
                return Ok(Gaussian::new(num / den, Rational::zero()));
            }
            self.pos = save;
            return Err(self.syntax("expected denominator after '/'"));
        }
        Ok(Gaussian::new(num, Rational::zero()) * Gaussian::one())
    }
}
