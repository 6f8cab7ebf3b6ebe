//! Recursive-descent parser for element expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' digits)?
//! atom   := digits ('/' digits)? | 'x' | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. `x` is only accepted in polynomial carriers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Element, RingDescriptor, RingError};

const MAX_EXPONENT: u64 = 100_000;

struct Parser<'a> {
    ring: RingDescriptor,
    src: &'a [u8],
    pos: usize,
}

fn syntax(pos: usize, msg: impl Into<String>) -> RingError {
    RingError::Syntax {
        pos,
        msg: msg.into(),
    }
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
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

    fn digits(&mut self) -> Result<BigInt, RingError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(syntax(start, "expected digits"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("ascii digits"))
    }

    fn expr(&mut self) -> Result<Element, RingError> {
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

    fn term(&mut self) -> Result<Element, RingError> {
        let mut acc = self.unary()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.unary()?)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Element, RingError> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Element, RingError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        if self.peek() == Some(b'-') {
            return Err(syntax(at, "exponent must be a nonnegative integer"));
        }
        let exp = self.digits()?;
        let exp = u64::try_from(exp)
            .ok()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or_else(|| syntax(at, format!("exponent exceeds {MAX_EXPONENT}")))?;
        Ok(base.pow(exp))
    }

    fn atom(&mut self) -> Result<Element, RingError> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits()?;
                if !self.eat(b'/') {
                    return Ok(Element::from_bigint(self.ring, &num));
                }
                let den_at = self.pos;
                let den = self.digits()?;
                if den.is_zero() {
                    return Err(syntax(den_at, "zero denominator"));
                }
                Element::from_rational(self.ring, &BigRational::new(num, den))
            }
            Some(b'x') => {
                self.pos += 1;
                self.ring
                    .var()
                    .map_err(|_| syntax(at, format!("variable x is not allowed in {}", self.ring)))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(syntax(self.pos, "expected ')'"));
                }
                Ok(inner)
            }
            Some(c) => Err(syntax(at, format!("unexpected character {:?}", c as char))),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

/// Parses `text` as an element of `ring`.
pub fn parse_element(ring: RingDescriptor, text: &str) -> Result<Element, RingError> {
    let mut p = Parser {
        ring,
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(c) => Err(syntax(
            p.pos,
            format!("unexpected character {:?}", c as char),
        )),
    }
}
