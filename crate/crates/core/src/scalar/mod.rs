//! Exact symbolic scalars: rational functions over coordinates, uninterpreted
//! function symbols with formal partials, and exponential monomials.

mod display;
mod parse;
mod poly;
mod zero;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use display::ScalarDisplay;
pub use parse::parse_expr;
pub use poly::{Generator, Monomial, Poly};
pub use zero::{Decision, SamplePoint, ZeroConfig};

/// A normalized quotient `num / den`.
///
/// Normalization is idempotent and structural equality after it is sound but
/// not complete (there is no multivariate gcd); use [`Scalar::decide`] for
/// semantic zero tests.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Scalar {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn coord(i: usize) -> Self {
        Scalar::from_poly(Poly::term(
            Monomial::generator(Generator::Coord(i)),
            BigRational::one(),
        ))
    }

    /// An uninterpreted function symbol depending on all coordinates.
    pub fn func(name: &str) -> Self {
        Scalar::from_poly(Poly::term(
            Monomial::generator(Generator::func(name)),
            BigRational::one(),
        ))
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar::normalized(p, Poly::one())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    /// True when no function symbols, coordinates or exponentials occur.
    pub fn is_constant(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn exp(arg: &Scalar) -> Scalar {
        if arg.is_structurally_zero() {
            return Scalar::one();
        }
        Scalar::from_poly(Poly::term(
            Monomial::exponential(arg.clone()),
            BigRational::one(),
        ))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        if other.is_structurally_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self.num.mul(&other.den);
        let den = self.den.mul(&other.num);
        Ok(Scalar::normalized(num, den))
    }

    pub fn recip(&self) -> Result<Scalar> {
        Scalar::one().checked_div(self)
    }

    pub fn pow(&self, k: i64) -> Result<Scalar> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Scalar::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, k: &BigRational) -> Scalar {
        if k.is_zero() {
            return Scalar::zero();
        }
        Scalar::normalized(self.num.scale(k), self.den.clone())
    }

    pub fn scale_int(&self, k: i64) -> Scalar {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    /// Formal partial derivative with respect to coordinate `i`.
    pub fn partial(&self, i: usize) -> Scalar {
        let dn = self.num.partial(i);
        if self.den.is_one() {
            return dn;
        }
        let d = Scalar {
            num: self.den.clone(),
            den: Poly::one(),
        };
        let dd = self.den.partial(i);
        // (n/d)' = n'/d - (n/d) d'/d
        let q = &dn - &(self * &dd);
        q.checked_div(&d).expect("denominators are never zero")
    }

    pub fn generators(&self) -> BTreeSet<Generator> {
        let mut out = BTreeSet::new();
        self.collect_generators(&mut out);
        out
    }

    pub(crate) fn collect_generators(&self, out: &mut BTreeSet<Generator>) {
        self.num.generators(out);
        self.den.generators(out);
    }

    /// Function-symbol names occurring anywhere, including inside exponents.
    pub fn function_names(&self) -> BTreeSet<String> {
        self.generators()
            .into_iter()
            .filter_map(|g| match g {
                Generator::Func { name, .. } => Some(name.to_string()),
                Generator::Coord(_) => None,
            })
            .collect()
    }

    /// Highest coordinate index referenced, if any.
    pub fn max_coord(&self) -> Option<usize> {
        self.generators()
            .into_iter()
            .filter_map(|g| match g {
                Generator::Coord(i) => Some(i),
                Generator::Func { partials, .. } => partials.last().copied(),
            })
            .max()
    }

    /// Members of the class on which `num == 0` is an exact decision:
    /// every exponent, recursively, is a polynomial.
    pub fn in_exact_class(&self) -> bool {
        fn poly_ok(p: &Poly) -> bool {
            p.terms().all(|(m, _)| match m.exp_arg() {
                None => true,
                Some(e) => e.den.is_one() && poly_ok(&e.num),
            })
        }
        poly_ok(&self.num) && poly_ok(&self.den)
    }

    pub fn decide(&self, cfg: &ZeroConfig) -> Decision {
        zero::decide(self, cfg)
    }

    pub(crate) fn eval(&self, point: &SamplePoint) -> Option<f64> {
        let (n, _) = self.num.eval(point)?;
        let (d, _) = self.den.eval(point)?;
        let v = n / d;
        (v.is_finite() && d != 0.0).then_some(v)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> ScalarDisplay<'a> {
        ScalarDisplay::new(self, names)
    }

    /// Runs normalization again on an already normalized value; a fixed
    /// point by construction.
    pub fn renormalized(&self) -> Scalar {
        Scalar::normalized(self.num.clone(), self.den.clone())
    }

    fn normalized(num: Poly, den: Poly) -> Scalar {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Scalar::zero();
        }
        let (mut num, mut den) = (num, den);

        // A monomial denominator: its coefficient and exponential are units.
        if den.len() == 1 {
            let (m, c) = den.terms().next().map(|(m, c)| (m.clone(), c.clone())).unwrap();
            if !(c.is_one() && m.exp_arg().is_none()) {
                num = num.mul_term(&m.exp_inverse(), &c.recip());
                den = Poly::term(m.without_exp(), BigRational::one());
            }
        }

        let content = common_content(&num.power_content(), &den.power_content());
        if !content.is_empty() {
            num = num.div_powers(&content);
            den = den.div_powers(&content);
        }

        if den.len() > 1 && den.terms().all(|(m, _)| m.exp_arg().is_some()) {
            let pivot = den.terms().next_back().map(|(m, _)| m.exp_inverse()).unwrap();
            num = num.mul_term(&pivot, &BigRational::one());
            den = den.mul_term(&pivot, &BigRational::one());
        }

        let lead = den.terms().next_back().map(|(_, c)| c.clone()).unwrap();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }

        if !den.is_one() && !num.has_exp() && !den.has_exp() {
            if let Some(q) = num.div_exact(&den) {
                return Scalar {
                    num: q,
                    den: Poly::one(),
                };
            }
        }
        Scalar { num, den }
    }
}

fn common_content(a: &[(Generator, u32)], b: &[(Generator, u32)]) -> Vec<(Generator, u32)> {
    let mut out = Vec::new();
    for (g, k) in a {
        if let Ok(j) = b.binary_search_by(|(h, _)| h.cmp(g)) {
            out.push((g.clone(), (*k).min(b[j].1)));
        }
    }
    out
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(c: BigRational) -> Self {
        Scalar::from_rational(c)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_structurally_zero() {
            return rhs.clone();
        }
        if rhs.is_structurally_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Scalar::normalized(self.num.add(&rhs.num), self.den.clone());
        }
        if let Some(q) = self.den.div_exact(&rhs.den) {
            return Scalar::normalized(self.num.add(&rhs.num.mul(&q)), self.den.clone());
        }
        if let Some(q) = rhs.den.div_exact(&self.den) {
            return Scalar::normalized(self.num.mul(&q).add(&rhs.num), rhs.den.clone());
        }
        Scalar::normalized(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_structurally_zero() || rhs.is_structurally_zero() {
            return Scalar::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar::normalized(self.num.mul(&rhs.num), Poly::one());
        }
        // Cheap cross-cancellation before multiplying out.
        let (mut an, mut ad) = (self.num.clone(), self.den.clone());
        let (mut bn, mut bd) = (rhs.num.clone(), rhs.den.clone());
        if let Some(q) = an.div_exact(&bd) {
            an = q;
            bd = Poly::one();
        }
        if let Some(q) = bn.div_exact(&ad) {
            bn = q;
            ad = Poly::one();
        }
        Scalar::normalized(an.mul(&bn), ad.mul(&bd))
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by the zero scalar")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Scalar {
    /// Coordinates print positionally as `x1, x2, ...`; use
    /// [`Scalar::display`] for chart names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..=self.max_coord().unwrap_or(0))
            .map(|i| format!("x{}", i + 1))
            .collect();
        write!(f, "{}", self.display(&names))
    }
}
