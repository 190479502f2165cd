//! Globally framed Lie algebroids and their Cartan calculus.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::report::{Checker, Names, VerificationReport};
use crate::scalar::{Scalar, ZeroConfig};
use crate::tensor::{Blade, ExteriorTensor, Variance};

/// The finite data `(rank, frame, anchor, structure functions)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub name: String,
    pub chart: Chart,
    pub rank: usize,
    pub vector_names: Vec<String>,
    pub form_names: Vec<String>,
    /// `anchor[i][a]`: coefficient of `∂/∂x_a` in `ρ(e_i)`.
    pub anchor: Vec<Vec<Scalar>>,
    /// `brackets[(i, j)][k] = c_ij^k` for `i < j`; missing pairs commute.
    pub brackets: BTreeMap<(usize, usize), Vec<Scalar>>,
}

impl Presentation {
    /// Empty bracket, zero anchor, names `e1..em` and `e1*..em*`.
    pub fn new(name: &str, chart: Chart, rank: usize) -> Self {
        let dim = chart.dim();
        Presentation {
            name: name.to_string(),
            chart,
            rank,
            vector_names: (1..=rank).map(|i| format!("e{i}")).collect(),
            form_names: (1..=rank).map(|i| format!("e{i}*")).collect(),
            anchor: vec![vec![Scalar::zero(); dim]; rank],
            brackets: BTreeMap::new(),
        }
    }

    /// Sets `[e_i, e_j] = Σ_k c[k] e_k`, storing the antisymmetric partner
    /// implicitly.
    pub fn set_bracket(&mut self, i: usize, j: usize, c: Vec<Scalar>) -> Result<()> {
        if i >= self.rank || j >= self.rank {
            return Err(Error::IndexOutOfRange {
                index: i.max(j),
                dim: self.rank,
            });
        }
        if c.len() != self.rank {
            return Err(Error::Algebroid(format!(
                "bracket [{},{}] needs {} components",
                i + 1,
                j + 1,
                self.rank
            )));
        }
        if i == j {
            if c.iter().any(|s| !s.is_structurally_zero()) {
                return Err(Error::Algebroid(format!("[e{0},e{0}] must vanish", i + 1)));
            }
            return Ok(());
        }
        let (key, c) = if i < j {
            ((i, j), c)
        } else {
            ((j, i), c.into_iter().map(|s| -s).collect())
        };
        if c.iter().all(Scalar::is_structurally_zero) {
            self.brackets.remove(&key);
        } else {
            self.brackets.insert(key, c);
        }
        Ok(())
    }
}

/// A presented Lie algebroid with cached differentials of basis forms.
#[derive(Debug)]
pub struct Algebroid {
    pres: Presentation,
    c: Vec<Vec<Vec<Scalar>>>,
    d_basis: Vec<OnceLock<ExteriorTensor>>,
    names: Names,
}

impl Clone for Algebroid {
    fn clone(&self) -> Self {
        Algebroid::unchecked(self.pres.clone())
    }
}

impl PartialEq for Algebroid {
    fn eq(&self, other: &Self) -> bool {
        self.pres == other.pres
    }
}

impl Algebroid {
    /// Builds and validates; fails with the axiom report's first witness.
    pub fn new(pres: Presentation) -> Result<Self> {
        let a = Algebroid::unchecked(pres);
        let report = a.validate_axioms(&ZeroConfig::default());
        if !report.passed() {
            let w = report
                .witnesses
                .first()
                .map(|w| format!("{} (residual {})", w.element, w.residual))
                .unwrap_or_default();
            return Err(Error::Algebroid(format!("axioms fail at {w}")));
        }
        Ok(a)
    }

    /// Builds without checking the Lie algebroid axioms.
    pub fn unchecked(pres: Presentation) -> Self {
        let m = pres.rank;
        let mut c = vec![vec![vec![Scalar::zero(); m]; m]; m];
        for (&(i, j), v) in &pres.brackets {
            for (k, s) in v.iter().enumerate() {
                c[i][j][k] = s.clone();
                c[j][i][k] = -s;
            }
        }
        let names = Names {
            coords: pres.chart.coordinates().to_vec(),
            vectors: pres.vector_names.clone(),
            forms: pres.form_names.clone(),
        };
        Algebroid {
            d_basis: (0..(1usize << m)).map(|_| OnceLock::new()).collect(),
            pres,
            c,
            names,
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn name(&self) -> &str {
        &self.pres.name
    }

    pub fn rank(&self) -> usize {
        self.pres.rank
    }

    pub fn dim(&self) -> usize {
        self.pres.chart.dim()
    }

    pub fn chart(&self) -> &Chart {
        &self.pres.chart
    }

    pub fn names(&self) -> &Names {
        &self.names
    }

    pub fn structure(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[i][j][k]
    }

    pub fn anchor_entry(&self, i: usize, a: usize) -> &Scalar {
        &self.pres.anchor[i][a]
    }

    /// True when the anchor vanishes identically, as for a Lie algebra.
    pub fn anchor_is_zero(&self) -> bool {
        self.pres
            .anchor
            .iter()
            .all(|row| row.iter().all(Scalar::is_structurally_zero))
    }

    // --- constructors of elements -------------------------------------

    pub fn zero_vector(&self, grade: usize) -> ExteriorTensor {
        ExteriorTensor::zero(Variance::Multivector, self.rank(), grade)
    }

    pub fn zero_form(&self, grade: usize) -> ExteriorTensor {
        ExteriorTensor::zero(Variance::Form, self.rank(), grade)
    }

    pub fn function(&self, f: Scalar) -> ExteriorTensor {
        ExteriorTensor::scalar(Variance::Form, self.rank(), f)
    }

    pub fn multivector_scalar(&self, f: Scalar) -> ExteriorTensor {
        ExteriorTensor::scalar(Variance::Multivector, self.rank(), f)
    }

    pub fn vector(&self, comps: Vec<Scalar>) -> ExteriorTensor {
        assert_eq!(comps.len(), self.rank());
        ExteriorTensor::from_components(Variance::Multivector, comps)
    }

    pub fn covector(&self, comps: Vec<Scalar>) -> ExteriorTensor {
        assert_eq!(comps.len(), self.rank());
        ExteriorTensor::from_components(Variance::Form, comps)
    }

    pub fn basis_vector(&self, blade: Blade) -> ExteriorTensor {
        ExteriorTensor::basis(Variance::Multivector, self.rank(), blade)
    }

    pub fn basis_form(&self, blade: Blade) -> ExteriorTensor {
        ExteriorTensor::basis(Variance::Form, self.rank(), blade)
    }

    pub fn top_vector(&self) -> ExteriorTensor {
        self.basis_vector(Blade::top(self.rank()))
    }

    pub fn top_form(&self) -> ExteriorTensor {
        self.basis_form(Blade::top(self.rank()))
    }

    // --- anchor ---------------------------------------------------------

    /// `ρ(e_i)(f)`.
    pub fn anchor_basis(&self, i: usize, f: &Scalar) -> Scalar {
        if f.is_constant() {
            return Scalar::zero();
        }
        let mut acc = Scalar::zero();
        for (a, r) in self.pres.anchor[i].iter().enumerate() {
            if !r.is_structurally_zero() {
                acc = &acc + &(r * &f.partial(a));
            }
        }
        acc
    }

    /// `ρ(X)(f)` for a section `X`.
    pub fn anchor_apply(&self, x: &ExteriorTensor, f: &Scalar) -> Scalar {
        debug_assert_eq!(x.grade(), 1);
        if f.is_constant() {
            return Scalar::zero();
        }
        let mut acc = Scalar::zero();
        for (b, xi) in x.terms() {
            let i = b.indices().next().unwrap();
            let r = self.anchor_basis(i, f);
            if !r.is_structurally_zero() {
                acc = &acc + &(xi * &r);
            }
        }
        acc
    }

    /// Components of `ρ(X)` on the coordinate frame.
    pub fn anchor_vector(&self, x: &ExteriorTensor) -> Vec<Scalar> {
        (0..self.dim())
            .map(|a| {
                x.terms()
                    .map(|(b, xi)| xi * &self.pres.anchor[b.indices().next().unwrap()][a])
                    .sum()
            })
            .collect()
    }

    // --- differential ----------------------------------------------------

    /// `d_A f = Σ ρ(e_i)(f) e*^i`.
    pub fn d_function(&self, f: &Scalar) -> ExteriorTensor {
        let mut out = self.zero_form(1);
        for i in 0..self.rank() {
            out.add_term(Blade::single(i), self.anchor_basis(i, f));
        }
        out
    }

    /// `d_A e*^I`, built from `d e*^k = -Σ_{i<j} c_ij^k e*^i ^ e*^j` as a
    /// derivation and cached.
    pub fn d_basis(&self, blade: Blade) -> &ExteriorTensor {
        self.d_basis[blade.bits() as usize].get_or_init(|| {
            let g = blade.grade();
            let m = self.rank();
            if g == 0 || g >= m {
                return self.zero_form(g + 1);
            }
            let first = blade.indices().next().unwrap();
            let mut d1 = self.zero_form(2);
            for i in 0..m {
                for j in i + 1..m {
                    let c = &self.c[i][j][first];
                    if !c.is_structurally_zero() {
                        d1.add_term(Blade::from_bits((1 << i) | (1 << j)), -c);
                    }
                }
            }
            if g == 1 {
                return d1;
            }
            let rest = Blade::from_bits(blade.bits() & !(1 << first));
            let head = self.basis_form(Blade::single(first));
            let a = d1.wedge(&self.basis_form(rest));
            let b = head.wedge(self.d_basis(rest));
            &a - &b
        })
    }

    pub fn d(&self, alpha: &ExteriorTensor) -> ExteriorTensor {
        assert_eq!(alpha.variance(), Variance::Form, "d_A acts on forms");
        let k = alpha.grade();
        let mut out = self.zero_form(k + 1);
        if k >= self.rank() {
            return out;
        }
        for (b, c) in alpha.terms() {
            if !c.is_constant() {
                let df = self.d_function(c);
                out = &out + &df.wedge(&self.basis_form(*b));
            }
            let db = self.d_basis(*b);
            if !db.is_empty() {
                out = &out + &db.scale(c);
            }
        }
        out
    }

    // --- brackets ----------------------------------------------------------

    /// `[X, e_i]` for every frame index.
    fn bracket_with_frame(&self, x: &ExteriorTensor) -> Vec<ExteriorTensor> {
        let m = self.rank();
        (0..m)
            .map(|i| {
                let mut out = self.zero_vector(1);
                for l in 0..m {
                    let mut s = -self.anchor_basis(i, &x.component(l));
                    for (b, xj) in x.terms() {
                        let j = b.indices().next().unwrap();
                        let c = &self.c[j][i][l];
                        if !c.is_structurally_zero() {
                            s = &s + &(xj * c);
                        }
                    }
                    out.add_term(Blade::single(l), s);
                }
                out
            })
            .collect()
    }

    /// `[e_j, P]`, the derivation extension of the frame action.
    fn frame_bracket(&self, j: usize, p: &ExteriorTensor) -> ExteriorTensor {
        let mut out = self.zero_vector(p.grade());
        let m = self.rank();
        for (blade, coeff) in p.terms() {
            out.add_term(*blade, self.anchor_basis(j, coeff));
            let idx = blade.index_vec();
            for (pos, &i) in idx.iter().enumerate() {
                for l in 0..m {
                    let c = &self.c[j][i][l];
                    if c.is_structurally_zero() {
                        continue;
                    }
                    let mut replaced = idx.clone();
                    replaced[pos] = l;
                    if let Some((s, b)) = Blade::from_indices(&replaced) {
                        out.add_term(b, (coeff * c).scale_int(s as i64));
                    }
                }
            }
        }
        out
    }

    /// The section bracket `[X, Y]`.
    pub fn bracket(&self, x: &ExteriorTensor, y: &ExteriorTensor) -> ExteriorTensor {
        self.schouten(x, y)
    }

    /// The Schouten bracket, by recursion on the monomials of `Q`:
    /// `[P, Q ^ R] = [P, Q] ^ R + (-1)^((|P|-1)|Q|) Q ^ [P, R]`.
    pub fn schouten(&self, p: &ExteriorTensor, q: &ExteriorTensor) -> ExteriorTensor {
        assert_eq!(p.variance(), Variance::Multivector);
        assert_eq!(q.variance(), Variance::Multivector);
        let (pg, qg) = (p.grade(), q.grade());
        let m = self.rank();
        if pg + qg == 0 {
            return self.zero_vector(0);
        }
        let grade = pg + qg - 1;
        if grade > m || p.is_empty() || q.is_empty() {
            return self.zero_vector(grade);
        }
        if pg == 0 {
            // [f, Q] = -i_{d f} Q
            let df = self.d_function(&p.as_scalar());
            return -ExteriorTensor::contract_form(&df, q).unwrap();
        }
        let p_sign = if pg % 2 == 1 { 1 } else { -1 }; // (-1)^(|P|-1)
        let mut with_frame: HashMap<usize, ExteriorTensor> = HashMap::new();
        let mut with_blade: HashMap<Blade, ExteriorTensor> = HashMap::new();
        let mut out = self.zero_vector(grade);
        for (blade, c) in q.terms() {
            if !c.is_constant() {
                // [P, c] = (-1)^(|P|+1) i_{d c} P
                let dc = self.d_function(c);
                let pc = ExteriorTensor::contract_form(&dc, p).unwrap();
                let t = pc.wedge(&self.basis_vector(*blade));
                out = &out + &t.scale_int(p_sign as i64);
            }
            let pb = self.schouten_blade(p, *blade, p_sign, &mut with_frame, &mut with_blade);
            out = &out + &pb.scale(c);
        }
        out
    }

    fn schouten_blade(
        &self,
        p: &ExteriorTensor,
        blade: Blade,
        p_sign: i32,
        with_frame: &mut HashMap<usize, ExteriorTensor>,
        with_blade: &mut HashMap<Blade, ExteriorTensor>,
    ) -> ExteriorTensor {
        let grade = p.grade() + blade.grade() - 1;
        if blade == Blade::EMPTY {
            return self.zero_vector(p.grade().saturating_sub(1));
        }
        if let Some(t) = with_blade.get(&blade) {
            return t.clone();
        }
        let first = blade.indices().next().unwrap();
        let rest = Blade::from_bits(blade.bits() & !(1 << first));
        let pe = with_frame
            .entry(first)
            .or_insert_with(|| -self.frame_bracket(first, p))
            .clone();
        let mut out = pe.wedge(&self.basis_vector(rest));
        if rest != Blade::EMPTY {
            let pr = self.schouten_blade(p, rest, p_sign, with_frame, with_blade);
            let t = self.basis_vector(Blade::single(first)).wedge(&pr);
            out = &out + &t.scale_int(p_sign as i64);
        }
        let out = out.with_grade(grade);
        with_blade.insert(blade, out.clone());
        out
    }

    // --- Lie derivatives ---------------------------------------------------

    /// `L_X α` from the pointwise formula
    /// `(L_X α)(X_1..X_n) = ρ(X)(α(X_1..X_n)) - Σ α(.., [X, X_i], ..)`,
    /// which on coframes reads `L_X e*^j = -Σ_i [X, e_i]^j e*^i`.
    pub fn lie_form(&self, x: &ExteriorTensor, alpha: &ExteriorTensor) -> ExteriorTensor {
        assert_eq!(x.grade(), 1);
        let m = self.rank();
        let brackets = self.bracket_with_frame(x);
        let mut out = self.zero_form(alpha.grade());
        for (blade, coeff) in alpha.terms() {
            out.add_term(*blade, self.anchor_apply(x, coeff));
            let idx = blade.index_vec();
            for (pos, &j) in idx.iter().enumerate() {
                for (i, bi) in brackets.iter().enumerate().take(m) {
                    let c = bi.component(j);
                    if c.is_structurally_zero() {
                        continue;
                    }
                    let mut replaced = idx.clone();
                    replaced[pos] = i;
                    if let Some((s, b)) = Blade::from_indices(&replaced) {
                        out.add_term(b, (coeff * &c).scale_int(-(s as i64)));
                    }
                }
            }
        }
        out
    }

    /// `L_X α = i_X d_A α + d_A i_X α`.
    pub fn lie_form_cartan(&self, x: &ExteriorTensor, alpha: &ExteriorTensor) -> ExteriorTensor {
        let a = ExteriorTensor::contract_section(x, &self.d(alpha)).unwrap();
        if alpha.grade() == 0 {
            return a.with_grade(0);
        }
        let b = self.d(&ExteriorTensor::contract_section(x, alpha).unwrap());
        &a + &b
    }

    /// `L_X P = [X, P]`.
    pub fn lie_multivector(&self, x: &ExteriorTensor, p: &ExteriorTensor) -> ExteriorTensor {
        self.schouten(x, p)
    }

    /// `L_P = i_P o d_A - (-1)^i d_A o i_P` for `P` of grade `i`.
    pub fn lie_general(&self, p: &ExteriorTensor, alpha: &ExteriorTensor) -> ExteriorTensor {
        let i = p.grade();
        let k = alpha.grade();
        let grade = (k + 1).checked_sub(i);
        let Some(grade) = grade else {
            return self.zero_form(0);
        };
        let da = self.d(alpha);
        let mut out = if i <= k + 1 && da.grade() <= self.rank() {
            ExteriorTensor::contract_section(p, &da).unwrap()
        } else {
            self.zero_form(grade)
        };
        if i <= k {
            let ia = ExteriorTensor::contract_section(p, alpha).unwrap();
            let t = self.d(&ia);
            let t = if i % 2 == 0 { -t } else { t };
            out = &out.with_grade_if_empty(grade) + &t.with_grade_if_empty(grade);
        }
        out.with_grade_if_empty(grade)
    }

    // --- axioms --------------------------------------------------------------

    /// Jacobi on frame triples and the anchor morphism on frame pairs.
    pub fn validate_axioms(&self, cfg: &ZeroConfig) -> VerificationReport {
        let mut chk = Checker::new("validate", cfg, &self.names);
        let m = self.rank();
        let e = |i: usize| self.basis_vector(Blade::single(i));
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let jac = &(&self.bracket(&self.bracket(&e(i), &e(j)), &e(k))
                        + &self.bracket(&self.bracket(&e(j), &e(k)), &e(i)))
                        + &self.bracket(&self.bracket(&e(k), &e(i)), &e(j));
                    let names = &self.names.vectors;
                    chk.tensor(
                        || format!("Jacobi({}, {}, {})", names[i], names[j], names[k]),
                        &jac,
                    );
                }
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                let lhs = self.anchor_vector(&self.bracket(&e(i), &e(j)));
                for (a, l) in lhs.iter().enumerate() {
                    let mut r = Scalar::zero();
                    for b in 0..self.dim() {
                        r = &r + &(&self.pres.anchor[i][b] * &self.pres.anchor[j][a].partial(b));
                        r = &r - &(&self.pres.anchor[j][b] * &self.pres.anchor[i][a].partial(b));
                    }
                    let names = &self.names;
                    chk.scalar(
                        || {
                            format!(
                                "anchor([{}, {}]) component {}",
                                names.vectors[i], names.vectors[j], names.coords[a]
                            )
                        },
                        &(l - &r),
                    );
                }
            }
        }
        chk.finish()
    }
}

impl ExteriorTensor {
    /// Resets the grade of an empty tensor; nonempty tensors are unchanged.
    pub fn with_grade_if_empty(self, grade: usize) -> ExteriorTensor {
        if self.is_empty() && self.grade() != grade {
            ExteriorTensor::zero(self.variance(), self.rank(), grade)
        } else {
            self
        }
    }
}

// --- builders ----------------------------------------------------------------

/// `TM` over a chart: identity anchor, zero bracket on the coordinate frame.
pub fn tangent(chart: &Chart) -> Algebroid {
    let d = chart.dim();
    let mut p = Presentation::new(&format!("T R^{d}"), chart.clone(), d);
    p.vector_names = chart.coordinates().iter().map(|c| format!("d_{c}")).collect();
    p.form_names = chart.coordinates().iter().map(|c| format!("d{c}")).collect();
    for i in 0..d {
        p.anchor[i][i] = Scalar::one();
    }
    Algebroid::unchecked(p)
}

/// A Lie algebra as an algebroid over a point, from constant structure
/// constants `[e_i, e_j] = Σ c^k e_k` listed for some pairs.
pub fn lie_algebra_point(rank: usize, brackets: &[((usize, usize), Vec<Scalar>)]) -> Result<Algebroid> {
    let mut p = Presentation::new("point algebra", Chart::point(), rank);
    p.vector_names = (1..=rank).map(|i| format!("X{i}")).collect();
    p.form_names = (1..=rank).map(|i| format!("X{i}*")).collect();
    for ((i, j), c) in brackets {
        p.set_bracket(*i, *j, c.clone())?;
    }
    Algebroid::new(p)
}

/// The action algebroid `M × g` of an infinitesimal action: constant
/// sections bracket as in `g`, and the anchor sends `e_i` to `φ(e_i)`.
pub fn action(
    chart: &Chart,
    rank: usize,
    brackets: &[((usize, usize), Vec<Scalar>)],
    fields: Vec<Vec<Scalar>>,
) -> Result<Algebroid> {
    if fields.len() != rank || fields.iter().any(|f| f.len() != chart.dim()) {
        return Err(Error::Algebroid(format!(
            "action needs {rank} vector fields with {} components",
            chart.dim()
        )));
    }
    let mut p = Presentation::new("action algebroid", chart.clone(), rank);
    p.vector_names = (1..=rank).map(|i| format!("X{i}")).collect();
    p.form_names = (1..=rank).map(|i| format!("X{i}*")).collect();
    p.anchor = fields;
    for ((i, j), c) in brackets {
        p.set_bracket(*i, *j, c.clone())?;
    }
    Algebroid::new(p)
}

/// `T*M` of a Poisson bivector `π` (given as a tangent bivector):
/// `ρ(dx_a) = Σ_b π^{ab} ∂_b` and `[dx_a, dx_b] = d π^{ab}`.
pub fn cotangent_of_poisson(chart: &Chart, pi: &ExteriorTensor) -> Result<Algebroid> {
    let d = chart.dim();
    if pi.grade() != 2 || pi.rank() != d || pi.variance() != Variance::Multivector {
        return Err(Error::Algebroid("π must be a tangent bivector".into()));
    }
    let tm = tangent(chart);
    let jac = tm.schouten(pi, pi);
    let (dec, blade) = jac.decide(&ZeroConfig::default());
    if !dec.is_zero() {
        let b = blade.map(|b| tm.names().blade(&jac, b)).unwrap_or_default();
        return Err(Error::Algebroid(format!(
            "π is not Poisson: [π,π] = {} (first nonzero at {b})",
            tm.names().tensor(&jac)
        )));
    }
    let entry = |a: usize, b: usize| -> Scalar {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => pi.coeff(Blade::from_bits((1 << a) | (1 << b))),
            std::cmp::Ordering::Greater => -pi.coeff(Blade::from_bits((1 << a) | (1 << b))),
            std::cmp::Ordering::Equal => Scalar::zero(),
        }
    };
    let mut p = Presentation::new("cotangent algebroid", chart.clone(), d);
    p.vector_names = chart.coordinates().iter().map(|c| format!("d{c}")).collect();
    p.form_names = chart.coordinates().iter().map(|c| format!("d_{c}")).collect();
    for a in 0..d {
        for b in 0..d {
            p.anchor[a][b] = entry(a, b);
        }
    }
    for a in 0..d {
        for b in a + 1..d {
            let pab = entry(a, b);
            p.set_bracket(a, b, (0..d).map(|c| pab.partial(c)).collect())?;
        }
    }
    Algebroid::new(p)
}
