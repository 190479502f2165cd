use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::poly::{Generator, Monomial, Poly};
use super::Scalar;

/// Renders a scalar in the input grammar, so output always re-parses.
pub struct ScalarDisplay<'a> {
    scalar: &'a Scalar,
    names: &'a [String],
}

impl<'a> ScalarDisplay<'a> {
    pub(crate) fn new(scalar: &'a Scalar, names: &'a [String]) -> Self {
        ScalarDisplay { scalar, names }
    }
}

impl fmt::Display for ScalarDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.scalar;
        if s.den.is_one() {
            return write_poly(f, &s.num, self.names);
        }
        let wrap = |f: &mut fmt::Formatter<'_>, p: &Poly| -> fmt::Result {
            if p.len() == 1 && p.terms().all(|(m, c)| m.is_one() || c.is_one()) {
                write_poly(f, p, self.names)
            } else {
                f.write_str("(")?;
                write_poly(f, p, self.names)?;
                f.write_str(")")
            }
        };
        wrap(f, &s.num)?;
        f.write_str("/")?;
        wrap(f, &s.den)
    }
}

fn coord_name(names: &[String], i: usize) -> String {
    names
        .get(i)
        .cloned()
        .unwrap_or_else(|| format!("x{}", i + 1))
}

fn write_generator(f: &mut fmt::Formatter<'_>, g: &Generator, names: &[String]) -> fmt::Result {
    match g {
        Generator::Coord(i) => f.write_str(&coord_name(names, *i)),
        Generator::Func { name, partials } if partials.is_empty() => f.write_str(name),
        Generator::Func { name, partials } => {
            write!(f, "diff({name}")?;
            for p in partials {
                write!(f, ",{}", coord_name(names, *p))?;
            }
            f.write_str(")")
        }
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, names: &[String]) -> fmt::Result {
    let mut first = true;
    for (g, k) in m.powers() {
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write_generator(f, g, names)?;
        if *k > 1 {
            write!(f, "^{k}")?;
        }
    }
    if let Some(e) = m.exp_arg() {
        if !first {
            f.write_str("*")?;
        }
        write!(f, "exp({})", e.display(names))?;
    }
    Ok(())
}

fn write_poly(f: &mut fmt::Formatter<'_>, p: &Poly, names: &[String]) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    // Constant term last reads more naturally; terms are otherwise in
    // monomial order.
    let mut terms: Vec<(&Monomial, &BigRational)> = p.terms().filter(|(m, _)| !m.is_one()).collect();
    terms.extend(p.terms().filter(|(m, _)| m.is_one()));
    for (idx, (m, c)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        match (idx, neg) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        if m.is_one() {
            write_rational(f, &a)?;
        } else {
            if !a.is_one() {
                write_rational(f, &a)?;
                f.write_str("*")?;
            }
            write_monomial(f, m, names)?;
        }
    }
    Ok(())
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.denom().is_one() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}
