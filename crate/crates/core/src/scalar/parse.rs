//! Recursive-descent parser for the scalar expression grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | factor
//! factor := base ('^' integer)?
//! base   := number | ident | ident '(' args ')' | '(' expr ')'
//! ```
//!
//! Unary minus binds looser than `^`, so `-x^2` is `-(x^2)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{Generator, Monomial, Poly};
use super::Scalar;
use crate::chart::Chart;
use crate::error::{Error, Result};

pub fn parse_expr(text: &str, chart: &Chart) -> Result<Scalar> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        chart,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    chart: &'a Chart,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            column: self.pos + 1,
            message: message.into(),
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                acc = acc.checked_div(&rhs).map_err(|_| Error::Syntax {
                    column: at + 1,
                    message: "division by zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Scalar> {
        let base = self.base()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let neg = if self.eat(b'-') {
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
            return Err(self.error("expected integer exponent"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let k: i64 = digits
            .parse()
            .map_err(|_| self.error("exponent too large"))?;
        let k = if neg { -k } else { k };
        base.pow(k).map_err(|_| Error::Syntax {
            column: at + 1,
            message: "zero raised to a negative power".into(),
        })
    }

    fn base(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Scalar> {
        let start = self.pos;
        let mut int = BigInt::zero();
        let mut frac_den = BigInt::one();
        let mut seen_dot = false;
        let mut digits = 0;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_digit() {
                int = int * 10 + (c - b'0');
                if seen_dot {
                    frac_den *= 10;
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
            return Err(self.error("malformed number"));
        }
        Ok(Scalar::from_rational(BigRational::new(int, frac_den)))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn identifier(&mut self) -> Result<Scalar> {
        self.skip_ws();
        let start = self.pos;
        let name = self.ident();
        match name.as_str() {
            "exp" => {
                self.expect(b'(')?;
                let arg = self.expr()?;
                self.expect(b')')?;
                return Ok(Scalar::exp(&arg));
            }
            "diff" => return self.diff(),
            _ => {}
        }
        if let Some(i) = self.chart.coordinate_index(&name) {
            return Ok(Scalar::coord(i));
        }
        if self.chart.is_function(&name) {
            if self.peek() == Some(b'(') {
                self.pos += 1;
                self.function_arguments(&name)?;
            }
            return Ok(Scalar::func(&name));
        }
        Err(Error::UnknownSymbol {
            name,
            column: start + 1,
        })
    }

    /// Function symbols depend on every coordinate, so the only admissible
    /// argument list is the chart's coordinates in order.
    fn function_arguments(&mut self, name: &str) -> Result<()> {
        let coords = self.chart.coordinates();
        if self.eat(b')') {
            if coords.is_empty() {
                return Ok(());
            }
            return Err(self.error(format!("`{name}` must be applied to all coordinates")));
        }
        for (k, c) in coords.iter().enumerate() {
            if k > 0 {
                self.expect(b',')?;
            }
            self.skip_ws();
            let at = self.pos;
            let arg = self.ident();
            if &arg != c {
                self.pos = at;
                return Err(self.error(format!(
                    "argument {} of `{name}` must be the coordinate `{c}`",
                    k + 1
                )));
            }
        }
        self.expect(b')')
    }

    fn diff(&mut self) -> Result<Scalar> {
        self.expect(b'(')?;
        self.skip_ws();
        let at = self.pos;
        let name = self.ident();
        if !self.chart.is_function(&name) {
            self.pos = at;
            return Err(self.error("`diff` expects a declared function symbol"));
        }
        let mut partials = Vec::new();
        while self.eat(b',') {
            self.skip_ws();
            let at = self.pos;
            let c = self.ident();
            match self.chart.coordinate_index(&c) {
                Some(i) => partials.push(i),
                None => {
                    self.pos = at;
                    return Err(self.error(format!("`{c}` is not a coordinate")));
                }
            }
        }
        self.expect(b')')?;
        partials.sort_unstable();
        Ok(Scalar::from_poly(Poly::term(
            Monomial::generator(Generator::Func {
                name: name.as_str().into(),
                partials,
            }),
            BigRational::one(),
        )))
    }
}
