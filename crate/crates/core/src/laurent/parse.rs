//! Parser for rational-function expressions such as `(1 - x^2)/(4*x)`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary | implicit)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' exponent)?
//! exponent := ['-' | '+'] integer | '(' ['-' | '+'] integer ')'
//! atom   := number | variable | '(' expr ')'
//! number := digits ['.' digits]
//! ```
//!
//! Juxtaposition such as `4x` or `2(x+1)` multiplies. Rational literals are
//! written as quotients (`1/2`), which the grammar already covers.

use num_bigint::BigInt;

use crate::arith::{parse_rational, Rational};
use crate::error::{Error, Result};

use super::poly::LaurentPoly;
use super::ratfunc::{checked_div, RationalFunction};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    var: &'a str,
}

pub fn parse_rational_function(src: &str, var: &str) -> Result<RationalFunction> {
    let mut parser = Parser { src, pos: 0, var };
    let value = parser.expr()?;
    parser.skip_ws();
    if parser.pos != src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(value)
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { offset: self.pos, message: format!("{message} in `{}`", self.src) }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let at = self.pos;
                let d = self.unary()?;
                acc = checked_div(&acc, &d).map_err(|_| Error::Parse {
                    offset: at,
                    message: format!("division by zero in `{}`", self.src),
                })?;
            } else if self.starts_atom() {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&mut self) -> bool {
        self.skip_ws();
        match self.peek() {
            Some('(') => true,
            Some(c) if c.is_ascii_digit() => true,
            Some(_) => self.src[self.pos..].starts_with(self.var),
            None => false,
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let k: u32 = self.src[start..self.pos].parse().map_err(|_| self.error("expected an integer exponent"))?;
        if paren && !self.eat(')') {
            return Err(self.error("expected `)`"));
        }
        let mut acc = RationalFunction::one();
        for _ in 0..k {
            acc = &acc * &base;
        }
        if negative {
            acc = acc.recip().map_err(|_| self.error("zero raised to a negative power"))?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        self.skip_ws();
        if self.eat('(') {
            let inner = self.expr()?;
            if !self.eat(')') {
                return Err(self.error("expected `)`"));
            }
            return Ok(inner);
        }
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
                    self.pos += 1;
                }
                let q: Rational = parse_rational(&self.src[start..self.pos])
                    .map_err(|_| Error::Parse { offset: start, message: format!("bad number in `{}`", self.src) })?;
                Ok(RationalFunction::constant(q))
            }
            Some(_) if !self.var.is_empty() && self.src[self.pos..].starts_with(self.var) => {
                let end = self.pos + self.var.len();
                let next = self.src[end..].chars().next();
                if next.is_some_and(|c| c.is_alphanumeric() || c == '_') {
                    return Err(self.error("unknown identifier"));
                }
                self.pos = end;
                Ok(RationalFunction::from_poly(LaurentPoly::monomial(Rational::from_integer(BigInt::from(1)), 1)))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn rf(s: &str) -> RationalFunction {
        parse_rational_function(s, "x").unwrap()
    }

    #[test]
    fn basic_forms() {
        let f = rf("(1 - x^2)/(4*x)");
        let expected = RationalFunction::new(
            LaurentPoly::from_terms([(0, int(1)), (2, int(-1))]),
            LaurentPoly::from_terms([(1, int(4))]),
        )
        .unwrap();
        assert_eq!(f, expected);
        assert_eq!(rf("1/2"), RationalFunction::constant(rat(1, 2)));
        assert_eq!(rf("x^-1"), rf("1/x"));
        assert_eq!(rf("x^(-2)"), rf("1/(x*x)"));
        assert_eq!(rf("4x"), rf("4*x"));
        assert_eq!(rf("-x^2"), -&rf("x^2"));
        assert_eq!(rf("0.5*x"), rf("x/2"));
        assert_eq!(rf("2(x+1)"), rf("2*x+2"));
    }

    #[test]
    fn other_variable() {
        let f = parse_rational_function("z^2 + 1/z", "z").unwrap();
        assert_eq!(f, rf("x^2 + 1/x"));
        assert!(parse_rational_function("x", "z").is_err());
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_rational_function("1/(x-x)", "x"), Err(Error::Parse { .. })));
        assert!(parse_rational_function("(1+x", "x").is_err());
        assert!(parse_rational_function("1 +", "x").is_err());
        assert!(parse_rational_function("xy", "x").is_err());
        assert!(parse_rational_function("x^y", "x").is_err());
    }

    #[test]
    fn display_reparses() {
        for s in ["(1 - x^2)/(4*x)", "-1/2*x^-3 + 7/3", "(x+2)/(x^2-6*x+8)", "0"] {
            let f = rf(s);
            assert_eq!(rf(&f.to_string()), f, "{s} -> {f}");
        }
    }
}
