//! Nambu structures on a presented Lie algebroid.

use crate::algebroid::Algebroid;
use crate::error::{Error, Result};
use crate::report::{Checker, VerificationReport, Witness};
use crate::scalar::{Decision, Scalar, ZeroConfig};
use crate::tensor::{Blade, ExteriorTensor, Variance};

pub(crate) const EXHAUSTIVE: &str =
    "weighted basis: exhaustive over C-infinity coefficients (identity is first-order in the weight)";
const ORDER_2: &str =
    "order 2 admitted by opt-in; the condition is only expected to hold for locally decomposable bivectors";

#[derive(Clone, Debug, PartialEq)]
pub enum NambuStatus {
    Unchecked,
    Verified,
    Refuted(Witness),
}

/// An `n`-multisection together with what is known about the Nambu condition.
#[derive(Clone, Debug, PartialEq)]
pub struct NambuStructure {
    pi: ExteriorTensor,
    allow_order_2: bool,
    status: NambuStatus,
}

impl NambuStructure {
    /// Checks shape only; run [`NambuStructure::verify`] for the condition.
    pub fn new(a: &Algebroid, pi: ExteriorTensor, allow_order_2: bool) -> Result<Self> {
        if pi.variance() != Variance::Multivector {
            return Err(Error::VarianceMismatch {
                expected: Variance::Multivector.name(),
                found: pi.variance().name(),
            });
        }
        if pi.rank() != a.rank() {
            return Err(Error::RankMismatch(pi.rank(), a.rank()));
        }
        let n = pi.grade();
        let lowest = if allow_order_2 { 2 } else { 3 };
        if n < lowest || n > a.rank() {
            return Err(Error::Nambu(format!(
                "order {n} outside {lowest}..={} (order 2 needs --allow-order-2)",
                a.rank()
            )));
        }
        Ok(NambuStructure {
            pi,
            allow_order_2,
            status: NambuStatus::Unchecked,
        })
    }

    pub fn tensor(&self) -> &ExteriorTensor {
        &self.pi
    }

    pub fn order(&self) -> usize {
        self.pi.grade()
    }

    pub fn allows_order_2(&self) -> bool {
        self.allow_order_2
    }

    pub fn status(&self) -> &NambuStatus {
        &self.status
    }

    pub fn is_verified(&self) -> bool {
        self.status == NambuStatus::Verified
    }

    /// Runs the Nambu checker and records the outcome.
    pub fn verify(&mut self, a: &Algebroid, cfg: &ZeroConfig) -> VerificationReport {
        let report = check_nambu(a, self, cfg);
        self.status = if report.passed() {
            NambuStatus::Verified
        } else {
            match report.witnesses.first() {
                Some(w) => NambuStatus::Refuted(w.clone()),
                None => NambuStatus::Unchecked,
            }
        };
        report
    }

    pub(crate) fn assume_verified(mut self) -> Self {
        self.status = NambuStatus::Verified;
        self
    }

    pub(crate) fn require_verified(&self) -> Result<()> {
        match &self.status {
            NambuStatus::Verified => Ok(()),
            NambuStatus::Unchecked => Err(Error::Nambu("structure has not been verified".into())),
            NambuStatus::Refuted(w) => Err(Error::Nambu(format!("structure was refuted at {}", w.element))),
        }
    }
}

/// A fresh uninterpreted function symbol, for weighted-basis sweeps.
pub(crate) fn weight(a: &Algebroid, prefix: &str) -> (String, Scalar) {
    let name = a.chart().fresh_symbol(prefix);
    let s = Scalar::func(&name);
    (name, s)
}

pub(crate) fn weights(a: &Algebroid, prefix: &str, count: usize) -> Vec<(String, Scalar)> {
    a.chart()
        .fresh_symbols(prefix, count)
        .into_iter()
        .map(|n| {
            let s = Scalar::func(&n);
            (n, s)
        })
        .collect()
}

fn form_name(a: &Algebroid, b: Blade) -> String {
    crate::tensor::blade_name(b, &a.names().forms)
}

/// `Π♯(α) = ι_α Π` for `α` of grade `n-1`.
pub fn sharp(pi: &ExteriorTensor, alpha: &ExteriorTensor) -> Result<ExteriorTensor> {
    if alpha.grade() + 1 != pi.grade() {
        return Err(Error::Grade(format!(
            "sharp needs a {}-form, got grade {}",
            pi.grade().saturating_sub(1),
            alpha.grade()
        )));
    }
    ExteriorTensor::contract_form(alpha, pi).map(|t| t.with_grade_if_empty(1))
}

fn sharp_unchecked(pi: &ExteriorTensor, alpha: &ExteriorTensor) -> ExteriorTensor {
    ExteriorTensor::contract_form(alpha, pi).unwrap().with_grade_if_empty(1)
}

fn sign(n: usize) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `ι_{d_A α} Π`, the scalar in the second term of the Nambu condition.
pub(crate) fn pairing_d(a: &Algebroid, pi: &ExteriorTensor, alpha: &ExteriorTensor) -> Scalar {
    let da = a.d(alpha).with_grade_if_empty(pi.grade());
    ExteriorTensor::pairing(pi, &da).unwrap()
}

/// Both sides of the Nambu condition: `(L_{Π♯α} Π, (-1)^n (ι_{dα}Π) Π)`.
pub fn nambu_sides(a: &Algebroid, pi: &ExteriorTensor, alpha: &ExteriorTensor) -> (ExteriorTensor, ExteriorTensor) {
    let n = pi.grade();
    let lhs = a.lie_multivector(&sharp_unchecked(pi, alpha), pi).with_grade_if_empty(n);
    let rhs = pi.scale(&pairing_d(a, pi, alpha).scale_int(sign(n)));
    (lhs, rhs)
}

pub fn nambu_residual(a: &Algebroid, pi: &ExteriorTensor, alpha: &ExteriorTensor) -> ExteriorTensor {
    let (l, r) = nambu_sides(a, pi, alpha);
    &l - &r
}

/// Looks for a concrete failing `α = g ω` with `g` among `1` and the
/// coordinates, so a weighted failure can be reported as a plain form.
fn concrete_witness(a: &Algebroid, pi: &ExteriorTensor, omega: Blade, cfg: &ZeroConfig) -> Option<ExteriorTensor> {
    let candidates = std::iter::once(Scalar::one()).chain((0..a.dim()).map(Scalar::coord));
    for g in candidates {
        let alpha = a.basis_form(omega).scale(&g);
        if !nambu_residual(a, pi, &alpha).decide(cfg).0.is_zero() {
            return Some(alpha);
        }
    }
    None
}

/// Tests the Nambu condition on `α = w·ω` for every basis `(n-1)`-form `ω`.
pub fn check_nambu(a: &Algebroid, ns: &NambuStructure, cfg: &ZeroConfig) -> VerificationReport {
    let pi = ns.tensor();
    let n = ns.order();
    let mut chk = Checker::new("nambu", cfg, a.names());
    chk.note(EXHAUSTIVE);
    if n == 2 {
        chk.note(ORDER_2);
    }
    let (wn, w) = weight(a, "w");
    let mut first_failure = None;
    for omega in Blade::all(a.rank(), n - 1) {
        let alpha = a.basis_form(omega).scale(&w);
        let r = nambu_residual(a, pi, &alpha);
        if !chk.tensor(|| format!("alpha = {wn}*{}", form_name(a, omega)), &r) && first_failure.is_none() {
            first_failure = Some(omega);
        }
    }
    let mut report = chk.finish();
    if let Some(alpha) = first_failure.and_then(|o| concrete_witness(a, pi, o, cfg)) {
        let (l, r) = nambu_sides(a, pi, &alpha);
        let names = a.names();
        report = report
            .value("witness alpha", names.tensor(&alpha))
            .value("L_{sharp alpha} Pi", names.tensor(&l))
            .value("(-1)^n (i_{d alpha} Pi) Pi", names.tensor(&r));
    }
    report
}

/// Wade's condition `[Π♯α, Π]♯(β) = -Π♯(ι_{Π♯β} d_A α)`, with `α` weighted
/// and `β` over the plain basis.
pub fn check_wade(a: &Algebroid, ns: &NambuStructure, cfg: &ZeroConfig) -> VerificationReport {
    let pi = ns.tensor();
    let n = ns.order();
    let mut chk = Checker::new("wade", cfg, a.names());
    chk.note(EXHAUSTIVE);
    let (wn, w) = weight(a, "w");
    let basis = Blade::all(a.rank(), n - 1);
    for &oa in &basis {
        let alpha = a.basis_form(oa).scale(&w);
        let x = sharp_unchecked(pi, &alpha);
        let bracket = a.schouten(&x, pi).with_grade_if_empty(n);
        let da = a.d(&alpha).with_grade_if_empty(n);
        for &ob in &basis {
            let beta = a.basis_form(ob);
            let lhs = ExteriorTensor::contract_form(&beta, &bracket).unwrap().with_grade_if_empty(1);
            let y = sharp_unchecked(pi, &beta);
            let inner = ExteriorTensor::contract_section(&y, &da).unwrap().with_grade_if_empty(n - 1);
            let rhs = -sharp_unchecked(pi, &inner);
            chk.tensor(
                || format!("alpha = {wn}*{}, beta = {}", form_name(a, oa), form_name(a, ob)),
                &(&lhs - &rhs),
            );
        }
    }
    chk.finish()
}

/// The Plücker-type test `(ι_γ Π) ∧ Π = 0` over basis `(n-1)`-forms `γ`.
pub fn check_pointwise_decomposability(a: &Algebroid, ns: &NambuStructure, cfg: &ZeroConfig) -> VerificationReport {
    let pi = ns.tensor();
    let mut chk = Checker::new("decomposable", cfg, a.names());
    chk.note("pointwise test: pass means decomposable wherever Pi is nonzero");
    for g in Blade::all(a.rank(), ns.order() - 1) {
        let r = sharp_unchecked(pi, &a.basis_form(g)).wedge(pi);
        chk.tensor(|| format!("gamma = {}", form_name(a, g)), &r);
    }
    chk.finish()
}

/// `ι_{α_1 ∧ … ∧ α_k} Π` for closed 1-forms `α_i`, of order `n - k ≥ 3`.
pub fn subordinate(a: &Algebroid, ns: &NambuStructure, alphas: &[ExteriorTensor], cfg: &ZeroConfig) -> Result<NambuStructure> {
    let n = ns.order();
    let k = alphas.len();
    if k == 0 || n < k + 3 {
        return Err(Error::Nambu(format!(
            "subordinate order {} is below 3",
            n as i64 - k as i64
        )));
    }
    let mut bar = a.function(Scalar::one());
    for (i, al) in alphas.iter().enumerate() {
        if al.variance() != Variance::Form || al.grade() != 1 || al.rank() != a.rank() {
            return Err(Error::Grade(format!("subordinate form {} must be a 1-form", i + 1)));
        }
        let d = a.d(al);
        if !d.decide(cfg).0.is_zero() {
            return Err(Error::Nambu(format!(
                "form {} is not closed: d = {}",
                i + 1,
                a.names().tensor(&d)
            )));
        }
        bar = bar.wedge(al);
    }
    let bar = bar.with_grade_if_empty(k);
    let pi = ExteriorTensor::contract_form(&bar, ns.tensor())?.with_grade_if_empty(n - k);
    Ok(NambuStructure::new(a, pi, false)?.assume_verified())
}

pub(crate) fn wedge_differentials(a: &Algebroid, fs: &[Scalar]) -> ExteriorTensor {
    let mut w = a.function(Scalar::one());
    for f in fs {
        w = w.wedge(&a.d_function(f));
    }
    w.with_grade_if_empty(fs.len())
}

/// `Π♯(d_A f_1 ∧ … ∧ d_A f_{n-1})`.
pub fn hamiltonian_section(a: &Algebroid, ns: &NambuStructure, fs: &[Scalar]) -> Result<ExteriorTensor> {
    if fs.len() + 1 != ns.order() {
        return Err(Error::Grade(format!(
            "a Hamiltonian section of order {} needs {} functions, got {}",
            ns.order(),
            ns.order() - 1,
            fs.len()
        )));
    }
    sharp(ns.tensor(), &wedge_differentials(a, fs))
}

/// `{f_1, …, f_n} = Π(d_A f_1, …, d_A f_n)`.
pub fn induced_base_bracket(a: &Algebroid, ns: &NambuStructure, fs: &[Scalar]) -> Result<Scalar> {
    if fs.len() != ns.order() {
        return Err(Error::Grade(format!("bracket needs {} functions, got {}", ns.order(), fs.len())));
    }
    ExteriorTensor::pairing(ns.tensor(), &wedge_differentials(a, fs))
}

/// `Λ = ∧^n ρ (Π)`, a multivector field on the base chart.
pub fn pushforward(a: &Algebroid, ns: &NambuStructure) -> ExteriorTensor {
    let d = a.dim();
    let n = ns.order();
    let mut out = ExteriorTensor::zero(Variance::Multivector, d, n);
    if n > d {
        return out;
    }
    let rho: Vec<ExteriorTensor> = (0..a.rank())
        .map(|i| {
            let comps = (0..d).map(|c| a.anchor_entry(i, c).clone()).collect();
            ExteriorTensor::from_components(Variance::Multivector, comps)
        })
        .collect();
    for (b, c) in ns.tensor().terms() {
        let mut w = ExteriorTensor::scalar(Variance::Multivector, d, c.clone());
        for i in b.indices() {
            w = w.wedge(&rho[i]);
        }
        out = &out + &w.with_grade_if_empty(n);
    }
    out.with_grade_if_empty(n)
}

/// `ρ^*`: pulls a form on the base chart back to `A^*`.
pub fn pullback_form(a: &Algebroid, beta: &ExteriorTensor) -> ExteriorTensor {
    let k = beta.grade();
    let rows: Vec<ExteriorTensor> = (0..a.dim())
        .map(|c| a.covector((0..a.rank()).map(|i| a.anchor_entry(i, c).clone()).collect()))
        .collect();
    let mut out = a.zero_form(k);
    for (b, c) in beta.terms() {
        let mut w = a.function(c.clone());
        for i in b.indices() {
            w = w.wedge(&rows[i]);
        }
        out = &out + &w.with_grade_if_empty(k);
    }
    out.with_grade_if_empty(k)
}

/// The fundamental identity of the induced base bracket,
/// `{f, {g_1..g_n}} = Σ_i {g_1..{f, g_i}..g_n}` with `f = (f_1..f_{n-1})`.
pub fn fundamental_identity_check(
    a: &Algebroid,
    ns: &NambuStructure,
    fs: &[Scalar],
    gs: &[Scalar],
    cfg: &ZeroConfig,
) -> Result<VerificationReport> {
    let n = ns.order();
    if fs.len() + 1 != n || gs.len() != n {
        return Err(Error::Grade("fundamental identity needs n-1 and n functions".into()));
    }
    let br = |args: &[Scalar]| induced_base_bracket(a, ns, args);
    let with = |extra: &Scalar| {
        let mut v = fs.to_vec();
        v.push(extra.clone());
        v
    };
    let lhs = br(&with(&br(gs)?))?;
    let mut rhs = Scalar::zero();
    for i in 0..n {
        let mut g = gs.to_vec();
        g[i] = br(&with(&gs[i]))?;
        rhs = &rhs + &br(&g)?;
    }
    let mut chk = Checker::new("fundamental-identity", cfg, a.names());
    chk.scalar(|| "base bracket".to_string(), &(&lhs - &rhs));
    Ok(chk.finish())
}

/// `Π_μ` with `⟨Π_μ, μ⟩ = 1`, for a top form `μ` that does not vanish.
pub fn maximal_from_volume(a: &Algebroid, mu: &ExteriorTensor, declared_nonvanishing: bool, cfg: &ZeroConfig) -> Result<NambuStructure> {
    let m = a.rank();
    if m < 3 {
        return Err(Error::Nambu(format!("maximal structures need rank at least 3, got {m}")));
    }
    if mu.variance() != Variance::Form || mu.grade() != m || mu.rank() != m {
        return Err(Error::Volume("expected a top-degree form".into()));
    }
    let u = mu.top_coeff();
    match u.decide(cfg) {
        Decision::NonZero => {}
        Decision::Zero => return Err(Error::Volume("top coefficient vanishes identically".into())),
        _ if declared_nonvanishing => {}
        d => {
            return Err(Error::Volume(format!(
                "cannot decide that the top coefficient is nonzero ({d:?}); declare it nonvanishing"
            )))
        }
    }
    let pi = a.top_vector().scale(&u.recip()?);
    Ok(NambuStructure::new(a, pi, false)?.assume_verified())
}
