//! Sparse polynomials over the rationals in coordinate and function-symbol
//! generators, with an exponential factor `exp(E)` attached to each monomial.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Scalar;

/// An indeterminate of the polynomial ring.
///
/// Function symbols depend on every base coordinate; each formal partial is a
/// separate generator, keyed by the sorted multiset of differentiation indices
/// so that mixed partials commute.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Coord(usize),
    Func { name: Arc<str>, partials: Vec<usize> },
}

impl Generator {
    pub fn func(name: &str) -> Self {
        Generator::Func {
            name: Arc::from(name),
            partials: Vec::new(),
        }
    }

    /// The generator representing the partial of a function symbol.
    fn differentiated(&self, i: usize) -> Option<Generator> {
        match self {
            Generator::Coord(_) => None,
            Generator::Func { name, partials } => {
                let mut partials = partials.clone();
                let at = partials.partition_point(|&p| p <= i);
                partials.insert(at, i);
                Some(Generator::Func {
                    name: name.clone(),
                    partials,
                })
            }
        }
    }
}

/// A power product of generators times an optional `exp(E)` factor.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub(crate) powers: Vec<(Generator, u32)>,
    pub(crate) exp: Option<Box<Scalar>>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn generator(g: Generator) -> Self {
        Monomial {
            powers: vec![(g, 1)],
            exp: None,
        }
    }

    pub fn exponential(arg: Scalar) -> Self {
        Monomial {
            powers: Vec::new(),
            exp: if arg.is_structurally_zero() {
                None
            } else {
                Some(Box::new(arg))
            },
        }
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty() && self.exp.is_none()
    }

    pub fn powers(&self) -> &[(Generator, u32)] {
        &self.powers
    }

    pub fn exp_arg(&self) -> Option<&Scalar> {
        self.exp.as_deref()
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|(_, k)| k).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let powers = merge_powers(&self.powers, &other.powers);
        let exp = match (&self.exp, &other.exp) {
            (None, None) => None,
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => {
                let sum = a.as_ref() + b.as_ref();
                if sum.is_structurally_zero() {
                    None
                } else {
                    Some(Box::new(sum))
                }
            }
        };
        Monomial { powers, exp }
    }

    /// Exponential part inverted, powers dropped.
    pub(crate) fn exp_inverse(&self) -> Monomial {
        Monomial {
            powers: Vec::new(),
            exp: self.exp.as_ref().map(|e| Box::new(-e.as_ref())),
        }
    }

    pub(crate) fn without_exp(&self) -> Monomial {
        Monomial {
            powers: self.powers.clone(),
            exp: None,
        }
    }

    fn power_of(&self, g: &Generator) -> u32 {
        self.powers
            .binary_search_by(|(h, _)| h.cmp(g))
            .map(|i| self.powers[i].1)
            .unwrap_or(0)
    }

    /// Divides the power part by `d`; `None` when some exponent would go
    /// negative. Exponential factors are units and always divide.
    fn div_powers(&self, d: &[(Generator, u32)]) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.powers.len());
        let mut j = 0;
        for (g, k) in &self.powers {
            let mut k = *k;
            if j < d.len() && d[j].0 < *g {
                return None;
            }
            if j < d.len() && d[j].0 == *g {
                if d[j].1 > k {
                    return None;
                }
                k -= d[j].1;
                j += 1;
            }
            if k > 0 {
                out.push((g.clone(), k));
            }
        }
        if j < d.len() {
            return None;
        }
        Some(Monomial {
            powers: out,
            exp: self.exp.clone(),
        })
    }

    /// Graded order on the power part, used to pick leading terms for
    /// exact division. Only meaningful for exp-free monomials.
    fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (mut i, mut j) = (0, 0);
            let (a, b) = (&self.powers, &other.powers);
            while i < a.len() || j < b.len() {
                let ord = match (a.get(i), b.get(j)) {
                    (Some((ga, ka)), Some((gb, kb))) => match ga.cmp(gb) {
                        Ordering::Less => {
                            i += 1;
                            Ordering::Greater.then(ka.cmp(&0))
                        }
                        Ordering::Greater => {
                            j += 1;
                            Ordering::Less.then(kb.cmp(&0))
                        }
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                            ka.cmp(kb)
                        }
                    },
                    (Some(_), None) => Ordering::Greater,
                    (None, Some(_)) => Ordering::Less,
                    (None, None) => Ordering::Equal,
                };
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            Ordering::Equal
        })
    }
}

fn merge_powers(a: &[(Generator, u32)], b: &[(Generator, u32)]) -> Vec<(Generator, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                out.push((a[i].0.clone(), a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// A finite Q-linear combination of monomials. Zero coefficients are never
/// stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    pub(crate) terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn has_exp(&self) -> bool {
        self.terms.keys().any(|m| m.exp.is_some())
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut out, rest) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &rest.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, k: &BigRational) -> Poly {
        let mut out = Poly::zero();
        for (n, c) in &self.terms {
            out.add_term(n.mul(m), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }

    /// Largest power product dividing every term (exponential parts ignored).
    pub(crate) fn power_content(&self) -> Vec<(Generator, u32)> {
        let mut iter = self.terms.keys();
        let Some(first) = iter.next() else {
            return Vec::new();
        };
        let mut content = first.powers.clone();
        for m in iter {
            content.retain_mut(|(g, k)| {
                *k = (*k).min(m.power_of(g));
                *k > 0
            });
            if content.is_empty() {
                break;
            }
        }
        content
    }

    pub(crate) fn div_powers(&self, d: &[(Generator, u32)]) -> Poly {
        if d.is_empty() {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    (
                        m.div_powers(d).expect("content divides every term"),
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().max_by(|a, b| a.0.grlex_cmp(b.0))
    }

    /// Exact quotient `self / d` for exp-free polynomials, or `None` when `d`
    /// does not divide `self`.
    pub(crate) fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() || self.has_exp() || d.has_exp() {
            return None;
        }
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        // Each step strictly lowers the leading monomial of the remainder.
        let mut budget = 4096usize;
        while let Some((rm, rc)) = rem.leading() {
            budget = budget.checked_sub(1)?;
            let qm = rm.div_powers(&dm.powers)?;
            let qc = rc / &dc;
            rem = rem.sub(&d.mul_term(&qm, &qc));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn generators(&self, out: &mut std::collections::BTreeSet<Generator>) {
        for m in self.terms.keys() {
            for (g, _) in &m.powers {
                out.insert(g.clone());
            }
            if let Some(e) = &m.exp {
                e.collect_generators(out);
            }
        }
    }

    /// Formal partial derivative with respect to coordinate `i`.
    pub(crate) fn partial(&self, i: usize) -> Scalar {
        let mut plain = Poly::zero();
        let mut by_exp: BTreeMap<&Scalar, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (idx, (g, k)) in m.powers.iter().enumerate() {
                let factor = match g {
                    Generator::Coord(j) if *j == i => None,
                    Generator::Coord(_) => continue,
                    Generator::Func { .. } => g.differentiated(i),
                };
                let mut powers = m.powers.clone();
                if *k == 1 {
                    powers.remove(idx);
                } else {
                    powers[idx].1 -= 1;
                }
                let mut rest = Monomial {
                    powers,
                    exp: m.exp.clone(),
                };
                if let Some(f) = factor {
                    rest = rest.mul(&Monomial::generator(f));
                }
                plain.add_term(rest, c * BigRational::from_integer(BigInt::from(*k)));
            }
            if let Some(e) = &m.exp {
                by_exp
                    .entry(e.as_ref())
                    .or_default()
                    .add_term(m.clone(), c.clone());
            }
        }
        let mut out = Scalar::from_poly(plain);
        for (arg, p) in by_exp {
            let d = arg.partial(i);
            if !d.is_structurally_zero() {
                out = &out + &(&Scalar::from_poly(p) * &d);
            }
        }
        out
    }

    pub(crate) fn eval(&self, point: &super::zero::SamplePoint) -> Option<(f64, f64)> {
        let mut value = 0.0;
        let mut scale = 0.0;
        for (m, c) in &self.terms {
            let mut t = ratio_to_f64(c);
            for (g, k) in &m.powers {
                t *= point.value(g)?.powi(*k as i32);
            }
            if let Some(e) = &m.exp {
                t *= e.eval(point)?.exp();
            }
            if !t.is_finite() {
                return None;
            }
            value += t;
            scale += t.abs();
        }
        Some((value, scale))
    }
}

pub(crate) fn ratio_to_f64(c: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or(f64::NAN)
}
