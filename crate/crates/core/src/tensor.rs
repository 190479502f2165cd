//! Sparse exterior algebra over a rank-m frame.
//!
//! Sign conventions: pairing is the determinant, so `<e_I, e*^I> = 1`; a
//! blade contracts by applying its first (smallest) factor first, i.e.
//! `i_{X1 ^ ... ^ Xk} = i_{Xk} o ... o i_{X1}`, and likewise for forms
//! acting on multivectors. With these choices `pairing(P, a) = i_P a = i_a P`
//! whenever the grades agree.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Decision, Scalar, ZeroConfig};

pub const MAX_RANK: usize = 16;

/// A basis blade `e_{i1} ^ ... ^ e_{ik}` with `i1 < ... < ik`, stored as a
/// bitmask and ordered lexicographically by its index tuple.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Blade(u32);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn from_bits(bits: u32) -> Self {
        Blade(bits)
    }

    pub fn single(i: usize) -> Self {
        Blade(1 << i)
    }

    pub fn top(rank: usize) -> Self {
        Blade(((1u64 << rank) - 1) as u32)
    }

    /// Sorts `indices` into a blade, returning the permutation sign, or
    /// `None` if an index repeats.
    pub fn from_indices(indices: &[usize]) -> Option<(i32, Blade)> {
        let mut acc = (1, Blade::EMPTY);
        for &i in indices {
            let (s, b) = acc.1.wedge(Blade::single(i))?;
            acc = (acc.0 * s, b);
        }
        Some(acc)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits & (1 << i) != 0)
    }

    pub fn index_vec(self) -> Vec<usize> {
        self.indices().collect()
    }

    /// `e_self ^ e_other = sign * e_result`.
    pub fn wedge(self, other: Blade) -> Option<(i32, Blade)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // Each factor of `other` moves left past the larger factors of `self`.
        let mut swaps = 0;
        for j in other.indices() {
            swaps += (self.0 >> (j + 1)).count_ones();
        }
        let sign = if swaps % 2 == 0 { 1 } else { -1 };
        Some((sign, Blade(self.0 | other.0)))
    }

    /// Single interior product by the dual of basis element `i`:
    /// `(-1)^(position of i)` times the blade with `i` removed.
    pub fn remove(self, i: usize) -> Option<(i32, Blade)> {
        if !self.contains(i) {
            return None;
        }
        let pos = (self.0 & ((1 << i) - 1)).count_ones();
        let sign = if pos % 2 == 0 { 1 } else { -1 };
        Some((sign, Blade(self.0 & !(1 << i))))
    }

    /// Contraction by the blade `by`, applying its smallest index first.
    pub fn contract(self, by: Blade) -> Option<(i32, Blade)> {
        let mut acc = (1, self);
        for i in by.indices() {
            let (s, b) = acc.1.remove(i)?;
            acc = (acc.0 * s, b);
        }
        Some(acc)
    }

    /// All blades of a given grade in lexicographic order.
    pub fn all(rank: usize, grade: usize) -> Vec<Blade> {
        let mut out = Vec::new();
        if grade > rank {
            return out;
        }
        let mut idx: Vec<usize> = (0..grade).collect();
        loop {
            out.push(Blade(idx.iter().fold(0, |b, &i| b | (1 << i))));
            let mut k = grade;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if idx[k] < rank - grade + k {
                    idx[k] += 1;
                    for t in k + 1..grade {
                        idx[t] = idx[t - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// The complementary blade in a rank-m frame.
    pub fn complement(self, rank: usize) -> Blade {
        Blade(Blade::top(rank).0 & !self.0)
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.indices().cmp(other.indices())
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variance {
    Multivector,
    Form,
}

impl Variance {
    pub fn name(self) -> &'static str {
        match self {
            Variance::Multivector => "multivector",
            Variance::Form => "form",
        }
    }
}

/// A homogeneous element of `Γ(∧^k A)` or `Γ(∧^k A*)`.
///
/// Zero tensors may carry a grade above the rank; they arise from wedge or
/// differential overflow and behave as absorbing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorTensor {
    variance: Variance,
    rank: usize,
    grade: usize,
    terms: BTreeMap<Blade, Scalar>,
}

impl ExteriorTensor {
    pub fn zero(variance: Variance, rank: usize, grade: usize) -> Self {
        assert!(rank <= MAX_RANK, "rank above {MAX_RANK} is not supported");
        ExteriorTensor {
            variance,
            rank,
            grade,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(variance: Variance, rank: usize, s: Scalar) -> Self {
        let mut t = ExteriorTensor::zero(variance, rank, 0);
        t.add_term(Blade::EMPTY, s);
        t
    }

    /// `coeff * e_{i1} ^ ... ^ e_{ik}` for arbitrary index order.
    pub fn monomial(variance: Variance, rank: usize, indices: &[usize], coeff: Scalar) -> Result<Self> {
        for &i in indices {
            if i >= rank {
                return Err(Error::IndexOutOfRange { index: i, dim: rank });
            }
        }
        let mut t = ExteriorTensor::zero(variance, rank, indices.len());
        if let Some((s, b)) = Blade::from_indices(indices) {
            t.add_term(b, coeff.scale_int(s as i64));
        }
        Ok(t)
    }

    pub fn basis(variance: Variance, rank: usize, blade: Blade) -> Self {
        let mut t = ExteriorTensor::zero(variance, rank, blade.grade());
        t.add_term(blade, Scalar::one());
        t
    }

    /// The grade-1 element `Σ c_i e_i`.
    pub fn from_components(variance: Variance, comps: Vec<Scalar>) -> Self {
        let mut t = ExteriorTensor::zero(variance, comps.len(), 1);
        for (i, c) in comps.into_iter().enumerate() {
            t.add_term(Blade::single(i), c);
        }
        t
    }

    pub fn from_terms(
        variance: Variance,
        rank: usize,
        grade: usize,
        terms: impl IntoIterator<Item = (Blade, Scalar)>,
    ) -> Self {
        let mut t = ExteriorTensor::zero(variance, rank, grade);
        for (b, c) in terms {
            t.add_term(b, c);
        }
        t
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: Blade) -> Scalar {
        self.terms.get(&b).cloned().unwrap_or_default()
    }

    /// Component `i` of a grade-1 tensor.
    pub fn component(&self, i: usize) -> Scalar {
        self.coeff(Blade::single(i))
    }

    pub fn components(&self) -> Vec<Scalar> {
        (0..self.rank).map(|i| self.component(i)).collect()
    }

    /// The coefficient of a grade-0 tensor.
    pub fn as_scalar(&self) -> Scalar {
        debug_assert_eq!(self.grade, 0);
        self.coeff(Blade::EMPTY)
    }

    /// The single coefficient of a top-grade tensor.
    pub fn top_coeff(&self) -> Scalar {
        self.coeff(Blade::top(self.rank))
    }

    pub fn add_term(&mut self, b: Blade, c: Scalar) {
        debug_assert_eq!(b.grade(), self.grade);
        if c.is_structurally_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_structurally_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn same_space(&self, other: &ExteriorTensor) -> Result<()> {
        if self.variance != other.variance {
            return Err(Error::VarianceMismatch {
                expected: self.variance.name(),
                found: other.variance.name(),
            });
        }
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    fn expect(&self, v: Variance) -> Result<()> {
        if self.variance != v {
            return Err(Error::VarianceMismatch {
                expected: v.name(),
                found: self.variance.name(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &ExteriorTensor) -> Result<ExteriorTensor> {
        self.same_space(other)?;
        if self.is_empty() {
            return Ok(ExteriorTensor {
                grade: other.grade,
                ..other.clone()
            });
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        if self.grade != other.grade {
            return Err(Error::Grade(format!(
                "cannot add grades {} and {}",
                self.grade, other.grade
            )));
        }
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> ExteriorTensor {
        let mut out = ExteriorTensor::zero(self.variance, self.rank, self.grade);
        if s.is_structurally_zero() {
            return out;
        }
        for (b, c) in &self.terms {
            out.add_term(*b, c * s);
        }
        out
    }

    pub fn scale_int(&self, k: i64) -> ExteriorTensor {
        self.scale(&Scalar::from_int(k))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> ExteriorTensor {
        let mut out = ExteriorTensor::zero(self.variance, self.rank, self.grade);
        for (b, c) in &self.terms {
            out.add_term(*b, f(c));
        }
        out
    }

    pub fn try_wedge(&self, other: &ExteriorTensor) -> Result<ExteriorTensor> {
        self.same_space(other)?;
        let grade = self.grade + other.grade;
        let mut out = ExteriorTensor::zero(self.variance, self.rank, grade);
        if grade > self.rank {
            return Ok(out);
        }
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((s, blade)) = a.wedge(*b) {
                    out.add_term(blade, (ca * cb).scale_int(s as i64));
                }
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &ExteriorTensor) -> ExteriorTensor {
        self.try_wedge(other).expect("wedge of incompatible tensors")
    }

    fn contract_generic(outer: &ExteriorTensor, by: &ExteriorTensor) -> ExteriorTensor {
        let mut out = ExteriorTensor::zero(outer.variance, outer.rank, outer.grade - by.grade);
        for (b, cb) in &by.terms {
            for (a, ca) in &outer.terms {
                if let Some((s, blade)) = a.contract(*b) {
                    out.add_term(blade, (ca * cb).scale_int(s as i64));
                }
            }
        }
        out
    }

    /// `i_P α` for a multivector `P` and a form `α` with `|P| <= |α|`.
    pub fn contract_section(p: &ExteriorTensor, alpha: &ExteriorTensor) -> Result<ExteriorTensor> {
        p.expect(Variance::Multivector)?;
        alpha.expect(Variance::Form)?;
        if p.rank != alpha.rank {
            return Err(Error::RankMismatch(p.rank, alpha.rank));
        }
        if p.grade > alpha.grade {
            if p.is_empty() || alpha.is_empty() {
                return Ok(ExteriorTensor::zero(Variance::Form, alpha.rank, 0));
            }
            return Err(Error::Grade(format!(
                "cannot contract a grade-{} multivector into a grade-{} form",
                p.grade, alpha.grade
            )));
        }
        Ok(Self::contract_generic(alpha, p))
    }

    /// `i_η P` for a form `η` and a multivector `P` with `|η| <= |P|`.
    pub fn contract_form(eta: &ExteriorTensor, p: &ExteriorTensor) -> Result<ExteriorTensor> {
        eta.expect(Variance::Form)?;
        p.expect(Variance::Multivector)?;
        if p.rank != eta.rank {
            return Err(Error::RankMismatch(p.rank, eta.rank));
        }
        if eta.grade > p.grade {
            if p.is_empty() || eta.is_empty() {
                return Ok(ExteriorTensor::zero(Variance::Multivector, p.rank, 0));
            }
            return Err(Error::Grade(format!(
                "cannot contract a grade-{} form into a grade-{} multivector",
                eta.grade, p.grade
            )));
        }
        Ok(Self::contract_generic(p, eta))
    }

    /// Determinant pairing of equal-grade multivector and form.
    pub fn pairing(p: &ExteriorTensor, alpha: &ExteriorTensor) -> Result<Scalar> {
        p.expect(Variance::Multivector)?;
        alpha.expect(Variance::Form)?;
        if p.rank != alpha.rank {
            return Err(Error::RankMismatch(p.rank, alpha.rank));
        }
        if p.grade != alpha.grade && !p.is_empty() && !alpha.is_empty() {
            return Err(Error::Grade(format!(
                "pairing needs equal grades, got {} and {}",
                p.grade, alpha.grade
            )));
        }
        let mut acc = Scalar::zero();
        for (b, c) in &p.terms {
            if let Some(d) = alpha.terms.get(b) {
                acc = &acc + &(c * d);
            }
        }
        Ok(acc)
    }

    /// Zero decision across all coefficients, with the first offending blade.
    pub fn decide(&self, cfg: &ZeroConfig) -> (Decision, Option<Blade>) {
        let mut probable = false;
        let mut indeterminate = None;
        for (b, c) in &self.terms {
            match c.decide(cfg) {
                Decision::Zero => {}
                Decision::ProbablyZero => probable = true,
                Decision::NonZero => return (Decision::NonZero, Some(*b)),
                Decision::ProbablyNonZero => return (Decision::ProbablyNonZero, Some(*b)),
                Decision::Indeterminate => {
                    indeterminate.get_or_insert(*b);
                }
            }
        }
        if let Some(b) = indeterminate {
            return (Decision::Indeterminate, Some(b));
        }
        if probable {
            (Decision::ProbablyZero, None)
        } else {
            (Decision::Zero, None)
        }
    }

    /// Same tensor with grade reset; used when an empty result carries an
    /// overflowed grade.
    pub fn with_grade(mut self, grade: usize) -> Self {
        debug_assert!(self.terms.keys().all(|b| b.grade() == grade));
        self.grade = grade;
        self
    }

    pub fn display<'a>(&'a self, coords: &'a [String], frame: &'a [String]) -> TensorDisplay<'a> {
        TensorDisplay {
            tensor: self,
            coords,
            frame,
        }
    }
}

impl Add for &ExteriorTensor {
    type Output = ExteriorTensor;
    fn add(self, rhs: &ExteriorTensor) -> ExteriorTensor {
        self.try_add(rhs).expect("sum of incompatible tensors")
    }
}

impl Add for ExteriorTensor {
    type Output = ExteriorTensor;
    fn add(self, rhs: ExteriorTensor) -> ExteriorTensor {
        &self + &rhs
    }
}

impl Neg for &ExteriorTensor {
    type Output = ExteriorTensor;
    fn neg(self) -> ExteriorTensor {
        self.map_coeffs(|c| -c)
    }
}

impl Neg for ExteriorTensor {
    type Output = ExteriorTensor;
    fn neg(self) -> ExteriorTensor {
        -&self
    }
}

impl Sub for &ExteriorTensor {
    type Output = ExteriorTensor;
    fn sub(self, rhs: &ExteriorTensor) -> ExteriorTensor {
        self + &(-rhs)
    }
}

impl Sub for ExteriorTensor {
    type Output = ExteriorTensor;
    fn sub(self, rhs: ExteriorTensor) -> ExteriorTensor {
        &self - &rhs
    }
}

pub struct TensorDisplay<'a> {
    tensor: &'a ExteriorTensor,
    coords: &'a [String],
    frame: &'a [String],
}

/// Renders a blade with the frame names, e.g. `dx1^dx3`.
pub fn blade_name(b: Blade, frame: &[String]) -> String {
    if b == Blade::EMPTY {
        return "1".into();
    }
    b.indices()
        .map(|i| frame.get(i).cloned().unwrap_or_else(|| format!("e{}", i + 1)))
        .collect::<Vec<_>>()
        .join("^")
}

impl fmt::Display for TensorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.tensor;
        if t.is_empty() {
            return f.write_str("0");
        }
        for (k, (b, c)) in t.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if *b == Blade::EMPTY {
                write!(f, "{}", c.display(self.coords))?;
            } else if c.is_one() {
                f.write_str(&blade_name(*b, self.frame))?;
            } else {
                write!(f, "({})*{}", c.display(self.coords), blade_name(*b, self.frame))?;
            }
        }
        Ok(())
    }
}
