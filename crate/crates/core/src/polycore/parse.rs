//! Recursive-descent parser for the polynomial input language.
//!
//! ```text
//! expr   := term (('*'|'/') term)*
//! term   := atom ('^' posint)?
//! atom   := '(' sum ')' | 'Phi(' posint ')'
//! sum    := signed (('+'|'-') signed)*
//! signed := posint? 'x' ('^' posint)? | posint
//! ```
//!
//! Whitespace is ignored, a leading sign is allowed inside a sum, and
//! `3*x` is accepted as a spelling of `3x`. Input without any parentheses is
//! read as a single sum, so `x^5-1` works. Positions in errors are 0-based
//! character offsets into the original input.

use num_bigint::BigInt;
use num_traits::One;

use super::{cyclotomic, IntPoly};
use crate::error::{Error, Result};

const MAX_DEGREE: usize = 4096;

/// Parses a polynomial in `x`.
pub fn parse_poly(expr: &str) -> Result<IntPoly> {
    parse_poly_in(expr, 'x')
}

/// Parses a polynomial in the given variable.
pub fn parse_poly_in(expr: &str, var: char) -> Result<IntPoly> {
    let chars: Vec<char> = expr.chars().collect();
    if !chars.contains(&'(') && !chars.is_empty() {
        let mut wrapped = Vec::with_capacity(chars.len() + 2);
        wrapped.push('(');
        wrapped.extend(&chars);
        wrapped.push(')');
        let mut p = Parser { src: wrapped, pos: 0, var, offset: 1 };
        return p.parse_all();
    }
    let mut p = Parser { src: chars, pos: 0, var, offset: 0 };
    p.parse_all()
}

struct Parser {
    src: Vec<char>,
    pos: usize,
    var: char,
    /// Number of synthetic characters prepended to the input.
    offset: usize,
}

impl Parser {
    fn parse_all(&mut self) -> Result<IntPoly> {
        let p = self.expr()?;
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.syntax(format!("unexpected '{}'", self.src[self.pos])));
        }
        Ok(p)
    }

    fn here(&self) -> usize {
        self.pos.saturating_sub(self.offset).min(self.src.len().saturating_sub(2 * self.offset))
    }

    fn syntax(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.here(), msg: msg.into() }
    }

    /// The character at the cursor, with the synthetic closing parenthesis
    /// reported as end of input.
    fn found(&self) -> String {
        match self.src.get(self.pos) {
            Some(_) if self.offset > 0 && self.pos + 1 == self.src.len() => "end of input".into(),
            Some(c) => format!("'{c}'"),
            None => "end of input".into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => Err(self.syntax(format!("expected '{c}', found {}", self.found()))),
            None => Err(self.syntax(format!("expected '{c}', found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<IntPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.term()?;
                }
                Some('/') => {
                    let at = self.here();
                    self.pos += 1;
                    let d = self.term()?;
                    acc = acc.exact_div(&d).ok_or(Error::InexactDivision { pos: at })?;
                }
                _ => break,
            }
            if acc.degree() > MAX_DEGREE {
                return Err(self.syntax("polynomial degree too large"));
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<IntPoly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.posint()?;
            let e: u32 = e
                .try_into()
                .ok()
                .filter(|&e: &u32| (e as usize).saturating_mul(base.degree()) <= MAX_DEGREE)
                .ok_or_else(|| self.syntax("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<IntPoly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let s = self.sum()?;
                self.expect(')')?;
                Ok(s)
            }
            Some('P') => {
                for c in "Phi".chars() {
                    if self.src.get(self.pos) != Some(&c) {
                        return Err(self.syntax("expected 'Phi('"));
                    }
                    self.pos += 1;
                }
                self.expect('(')?;
                let d = self.posint()?;
                if d == 0 || d > MAX_DEGREE as u64 {
                    return Err(self.syntax("cyclotomic index out of range"));
                }
                self.expect(')')?;
                Ok(cyclotomic(d))
            }
            Some(_) => Err(self.syntax(format!("expected '(' or 'Phi(', found {}", self.found()))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn sum(&mut self) -> Result<IntPoly> {
        let mut acc = IntPoly::zero();
        let mut negative = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.signed()?;
            acc = if negative { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some('+') => negative = false,
                Some('-') => negative = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn signed(&mut self) -> Result<IntPoly> {
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.bigint()?;
                if matches!(self.src.get(self.pos), Some('.') | Some('/')) {
                    return Err(Error::NonIntegerCoefficient { pos: self.here() });
                }
                if self.peek() == Some('*') {
                    self.pos += 1;
                    if self.peek() != Some(self.var) {
                        return Err(self.syntax(format!("expected '{}' after '*'", self.var)));
                    }
                }
                Some(n)
            }
            _ => None,
        };
        if self.peek() == Some(self.var) {
            self.pos += 1;
            let mut k = 1usize;
            if self.peek() == Some('^') {
                self.pos += 1;
                k = self
                    .posint()?
                    .try_into()
                    .ok()
                    .filter(|&k| k <= MAX_DEGREE)
                    .ok_or_else(|| self.syntax("exponent too large"))?;
            }
            return Ok(IntPoly::monomial(k, coeff.unwrap_or_else(BigInt::one)));
        }
        match coeff {
            Some(n) => Ok(IntPoly::constant(n)),
            None => match self.peek() {
                Some(c) if c.is_alphabetic() => {
                    Err(self.syntax(format!("unknown variable '{c}', expected '{}'", self.var)))
                }
                Some(_) => Err(self.syntax(format!("expected a term, found {}", self.found()))),
                None => Err(self.syntax("expected a term, found end of input")),
            },
        }
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected a positive integer"));
        }
        Ok(self.src[start..self.pos].iter().collect())
    }

    fn bigint(&mut self) -> Result<BigInt> {
        let s = self.digits()?;
        Ok(s.parse().expect("ascii digits"))
    }

    fn posint(&mut self) -> Result<u64> {
        let s = self.digits()?;
        if self.src.get(self.pos) == Some(&'.') {
            return Err(Error::NonIntegerCoefficient { pos: self.here() });
        }
        s.parse().map_err(|_| self.syntax("integer too large"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn examples() {
        assert_eq!(parse_poly("(x^5-1)").unwrap(), p(&[-1, 0, 0, 0, 0, 1]));
        assert_eq!(parse_poly("(x+1)*(x^2+1)^2").unwrap(), p(&[1, 1, 2, 2, 1, 1]));
        assert_eq!(parse_poly("Phi(12)").unwrap(), p(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn division_and_whitespace() {
        let g = parse_poly(" (x + 1) * (x^5 - 1) / (x - 1) ").unwrap();
        assert_eq!(g, p(&[1, 2, 2, 2, 2, 1]));
        assert_eq!(parse_poly("(2x^2+3*x+1)").unwrap(), p(&[1, 3, 2]));
        assert_eq!(parse_poly("(-1+x)").unwrap(), p(&[-1, 1]));
        assert_eq!(parse_poly("x^5-1").unwrap(), p(&[-1, 0, 0, 0, 0, 1]));
        assert_eq!(parse_poly_in("(y^2+y+1)", 'y').unwrap(), p(&[1, 1, 1]));
        assert_eq!(parse_poly("(1)").unwrap(), IntPoly::one());
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_poly("(x^5-1)/(x+1)"), Err(Error::InexactDivision { pos: 7 }));
        assert_eq!(parse_poly("(1.5x+1)"), Err(Error::NonIntegerCoefficient { pos: 2 }));
        assert!(matches!(parse_poly("(x+)"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly("(x+1"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_poly("(y+1)"), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse_poly("(x+1))"), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(parse_poly("x+"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly(""), Err(Error::Syntax { .. })));
    }

    #[test]
    fn render_round_trip() {
        for c in [&[-1, 0, 0, 0, 0, 1][..], &[1, -2, 0, 3], &[0, -1], &[7], &[0]] {
            let q = p(c);
            assert_eq!(parse_poly(&q.render()).unwrap(), q);
        }
    }
}
