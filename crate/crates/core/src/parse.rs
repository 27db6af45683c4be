//! Parser for rational-function literals such as `z(2-z)/2(1-z)^2`.
//!
//! Grammar:
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := product ('/' product)*
//! product := power (['*'] power)*
//! power   := atom ['^' uint]
//! atom    := uint | 'z' | '(' expr ')'
//! ```
//!
//! Juxtaposition binds tighter than `/`, so `a/bc` reads as `a/(b c)`.
//! Whitespace is ignored.

use crate::exact::Rat;
use crate::poly::Poly;
use crate::reconstruct::RationalFn;
use crate::{Error, Result};

const MAX_EXPONENT: u32 = 64;
const MAX_DEGREE: usize = 256;
const MAX_NESTING: usize = 64;
const MAX_DIGITS: usize = 64;

/// `num / den` before normalization.
#[derive(Clone, Debug)]
struct Frac {
    num: Poly,
    den: Poly,
}

impl Frac {
    fn poly(p: Poly) -> Frac {
        Frac {
            num: p,
            den: Poly::constant(Rat::one()),
        }
    }

    fn check(self) -> Result<Frac> {
        let too_big = |p: &Poly| p.degree().is_some_and(|d| d > MAX_DEGREE);
        if too_big(&self.num) || too_big(&self.den) {
            return Err(Error::Parse("degree too large".into()));
        }
        Ok(self)
    }

    fn add(self, o: Frac, sign: bool) -> Result<Frac> {
        let lhs = &self.num * &o.den;
        let rhs = &o.num * &self.den;
        let num = if sign { &lhs + &rhs } else { &lhs - &rhs };
        Frac {
            num,
            den: &self.den * &o.den,
        }
        .check()
    }

    fn mul(self, o: Frac) -> Result<Frac> {
        Frac {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
        .check()
    }

    fn div(self, o: Frac) -> Result<Frac> {
        if o.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Frac {
            num: &self.num * &o.den,
            den: &self.den * &o.num,
        }
        .check()
    }

    fn pow(self, e: u32) -> Result<Frac> {
        let deg = |p: &Poly| p.degree().unwrap_or(0) * e as usize;
        if deg(&self.num) > MAX_DEGREE || deg(&self.den) > MAX_DEGREE {
            return Err(Error::Parse("degree too large".into()));
        }
        Ok(Frac {
            num: self.num.pow(e),
            den: self.den.pow(e),
        })
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} at offset {}", self.pos)))
    }

    fn expr(&mut self) -> Result<Frac> {
        let mut neg = false;
        if let Some(c @ (b'+' | b'-')) = self.peek() {
            neg = c == b'-';
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if neg {
            acc.num = -&acc.num;
        }
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = acc.add(t, c == b'+')?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Frac> {
        let mut acc = self.product()?;
        while self.peek() == Some(b'/') {
            self.pos += 1;
            let d = self.product()?;
            acc = acc.div(d)?;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Frac> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let p = self.power()?;
                    acc = acc.mul(p)?;
                }
                Some(b'0'..=b'9' | b'z' | b'(') => {
                    let p = self.power()?;
                    acc = acc.mul(p)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Frac> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.uint()?;
        let e: u32 = match e.parse() {
            Ok(e) if e <= MAX_EXPONENT => e,
            _ => return self.err("exponent too large"),
        };
        base.pow(e)
    }

    fn uint(&mut self) -> Result<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected digits");
        }
        if self.pos - start > MAX_DIGITS {
            return self.err("integer too long");
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<Frac> {
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                Ok(Frac::poly(Poly::z()))
            }
            Some(b'0'..=b'9') => {
                let digits = self.uint()?;
                let c: Rat = digits.parse()?;
                Ok(Frac::poly(Poly::constant(c)))
            }
            Some(b'(') => {
                if self.depth >= MAX_NESTING {
                    return self.err("nesting too deep");
                }
                self.pos += 1;
                self.depth += 1;
                let inner = self.expr()?;
                self.depth -= 1;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a literal and normalizes it; the result must be `z + O(z^2)`.
pub fn parse_function(input: &str) -> Result<RationalFn> {
    let cleaned: Vec<u8> = input.bytes().filter(|c| !c.is_ascii_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    let mut p = Parser {
        s: &cleaned,
        pos: 0,
        depth: 0,
    };
    let f = p.expr()?;
    if p.pos != cleaned.len() {
        return p.err("trailing input");
    }
    RationalFn::new(&f.num, &f.den)
}
