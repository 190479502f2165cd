//! Volume calculus and modular tensor fields.

use crate::algebroid::Algebroid;
use crate::error::{Error, Result};
use crate::leibniz::LeibnizAlgebroid;
use crate::nambu::{self, NambuStructure, EXHAUSTIVE};
use crate::report::{Checker, VerificationReport};
use crate::scalar::{Decision, Scalar, ZeroConfig};
use crate::tensor::{blade_name, Blade, ExteriorTensor, Variance};

/// A top form `u·e*^1∧…∧e*^m` with `u` nowhere zero.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeSection {
    rank: usize,
    u: Scalar,
    declared_nonvanishing: bool,
}

impl VolumeSection {
    /// Accepts `u` when it is symbolically nonzero, or when the caller
    /// declares it nonvanishing and it is not identically zero.
    pub fn new(a: &Algebroid, u: Scalar, declared_nonvanishing: bool, cfg: &ZeroConfig) -> Result<Self> {
        match u.decide(cfg) {
            Decision::NonZero => {}
            Decision::Zero => return Err(Error::Volume("coefficient vanishes identically".into())),
            _ if declared_nonvanishing => {}
            d => {
                return Err(Error::Volume(format!(
                    "cannot show the coefficient is nonzero ({d:?}); declare it nonvanishing"
                )))
            }
        }
        Ok(VolumeSection {
            rank: a.rank(),
            u,
            declared_nonvanishing,
        })
    }

    pub fn standard(a: &Algebroid) -> Self {
        VolumeSection {
            rank: a.rank(),
            u: Scalar::one(),
            declared_nonvanishing: false,
        }
    }

    pub fn coefficient(&self) -> &Scalar {
        &self.u
    }

    pub fn declared_nonvanishing(&self) -> bool {
        self.declared_nonvanishing
    }

    pub fn form(&self) -> ExteriorTensor {
        let mut t = ExteriorTensor::zero(Variance::Form, self.rank, self.rank);
        t.add_term(Blade::top(self.rank), self.u.clone());
        t
    }

    /// `e^g μ`.
    pub fn rescaled(&self, g: &Scalar) -> VolumeSection {
        VolumeSection {
            rank: self.rank,
            u: &self.u * &Scalar::exp(g),
            declared_nonvanishing: true,
        }
    }

    /// `*_μ P = ι_P μ`.
    pub fn star(&self, p: &ExteriorTensor) -> ExteriorTensor {
        let k = p.grade();
        ExteriorTensor::contract_section(p, &self.form())
            .unwrap()
            .with_grade_if_empty(self.rank - k)
    }

    /// The inverse of [`VolumeSection::star`] on forms of any degree.
    pub fn star_inv(&self, alpha: &ExteriorTensor) -> ExteriorTensor {
        let m = self.rank;
        let k = m - alpha.grade();
        let top = ExteriorTensor::basis(Variance::Form, m, Blade::top(m));
        let mut out = ExteriorTensor::zero(Variance::Multivector, m, k);
        for (b, c) in alpha.terms() {
            let i = b.complement(m);
            // ι_{e_I} e*^top = s e*^{comp I}
            let s = ExteriorTensor::contract_section(&ExteriorTensor::basis(Variance::Multivector, m, i), &top)
                .unwrap()
                .coeff(*b);
            let coeff = (c / &self.u).scale_int(if s == Scalar::one() { 1 } else { -1 });
            out.add_term(i, coeff);
        }
        out
    }

    /// `∂_μ = *_μ^{-1} ∘ d_A ∘ *_μ`.
    pub fn boundary(&self, a: &Algebroid, p: &ExteriorTensor) -> ExteriorTensor {
        let k = p.grade();
        if k == 0 {
            return ExteriorTensor::zero(Variance::Multivector, self.rank, 0);
        }
        let d = a.d(&self.star(p)).with_grade_if_empty(self.rank - k + 1);
        self.star_inv(&d).with_grade_if_empty(k - 1)
    }

    /// `div_μ X`, defined by `L_X μ = (div_μ X) μ`.
    pub fn div(&self, a: &Algebroid, x: &ExteriorTensor) -> Scalar {
        self.boundary(a, x).as_scalar()
    }

    /// The right side of the closed form
    /// `(-1)^k ∂_μ(X_1∧…∧X_k) = Σ_i (-1)^i div(X_i) X_1∧…X̂_i…∧X_k
    ///   + Σ_{i<j} (-1)^{i+j} [X_i, X_j] ∧ X_1∧…X̂_i…X̂_j…∧X_k`,
    /// divided through by `(-1)^k`.
    pub fn boundary_of_wedge(&self, a: &Algebroid, xs: &[ExteriorTensor]) -> ExteriorTensor {
        let k = xs.len();
        let mut out = a.zero_vector(k.saturating_sub(1));
        let wedge_except = |skip: &[usize]| {
            let mut w = a.multivector_scalar(Scalar::one());
            for (l, x) in xs.iter().enumerate() {
                if !skip.contains(&l) {
                    w = w.wedge(x);
                }
            }
            w
        };
        let sgn = |e: usize| if e % 2 == 0 { 1 } else { -1 };
        for i in 0..k {
            // 1-based index i+1
            let t = wedge_except(&[i]).scale(&self.div(a, &xs[i])).scale_int(sgn(i + 1));
            out = &out + &t.with_grade_if_empty(k - 1);
        }
        for i in 0..k {
            for j in i + 1..k {
                let t = a.bracket(&xs[i], &xs[j]).wedge(&wedge_except(&[i, j])).scale_int(sgn(i + j + 2));
                out = &out + &t.with_grade_if_empty(k - 1);
            }
        }
        out.scale_int(sgn(k)).with_grade_if_empty(k.saturating_sub(1))
    }
}

/// `M^μ = ∂_μ Π` with the structure and volume it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularTensor {
    pub tensor: ExteriorTensor,
    pub volume: VolumeSection,
    pub pi: ExteriorTensor,
}

impl ModularTensor {
    /// `ι_α M^μ` for `α` of grade `n-1`.
    pub fn eval(&self, alpha: &ExteriorTensor) -> Scalar {
        ExteriorTensor::pairing(&self.tensor, alpha).unwrap()
    }
}

/// `(ι_α M) μ - L_{Π♯α} μ - (-1)^n (ι_{dα} Π) μ` for one `α`.
fn defining_residual(a: &Algebroid, pi: &ExteriorTensor, m: &ExteriorTensor, mu: &VolumeSection, alpha: &ExteriorTensor) -> ExteriorTensor {
    let n = pi.grade();
    let form = mu.form();
    let x = ExteriorTensor::contract_form(alpha, pi).unwrap().with_grade_if_empty(1);
    let lhs = form.scale(&ExteriorTensor::pairing(m, alpha).unwrap());
    let mut s = nambu::pairing_d(a, pi, alpha);
    if n % 2 == 1 {
        s = -s;
    }
    let rhs = &a.lie_form(&x, &form).with_grade_if_empty(form.grade()) + &form.scale(&s);
    &lhs - &rhs
}

/// The defining relation of `M^μ` on weighted basis `(n-1)`-forms.
pub fn defining_relation_check(a: &Algebroid, pi: &ExteriorTensor, m: &ExteriorTensor, mu: &VolumeSection, cfg: &ZeroConfig) -> VerificationReport {
    let mut chk = Checker::new("modular-definition", cfg, a.names());
    chk.note(EXHAUSTIVE);
    let (wn, w) = nambu::weight(a, "w");
    for b in Blade::all(a.rank(), pi.grade() - 1) {
        let alpha = a.basis_form(b).scale(&w);
        let r = defining_residual(a, pi, m, mu, &alpha);
        chk.tensor(|| format!("alpha = {wn}*{}", blade_name(b, &a.names().forms)), &r);
    }
    chk.finish()
}

/// Computes `∂_μ Π` and confirms the defining relation before returning.
pub fn modular_tensor(a: &Algebroid, ns: &NambuStructure, mu: &VolumeSection, cfg: &ZeroConfig) -> Result<ModularTensor> {
    ns.require_verified()?;
    let pi = ns.tensor().clone();
    let m = mu.boundary(a, &pi);
    let report = defining_relation_check(a, &pi, &m, mu, cfg);
    if !report.passed() {
        let w = report.witnesses.first().map(|w| format!("{}: {}", w.element, w.residual)).unwrap_or_default();
        return Err(Error::Nambu(format!("modular tensor violates its defining relation at {w}")));
    }
    Ok(ModularTensor {
        tensor: m,
        volume: mu.clone(),
        pi,
    })
}

/// `ι_α ∂_μ P = div_μ(ι_α P) + (-1)^k ι_{d_A α} P`.
pub fn divergence_identity_residual(a: &Algebroid, mu: &VolumeSection, p: &ExteriorTensor, alpha: &ExteriorTensor) -> Result<Scalar> {
    let k = p.grade();
    if k == 0 || alpha.grade() + 1 != k {
        return Err(Error::Grade(format!(
            "divergence identity needs a (k-1)-form for a k-vector, got grades {} and {k}",
            alpha.grade()
        )));
    }
    let lhs = ExteriorTensor::pairing(&mu.boundary(a, p), alpha)?;
    let ip = ExteriorTensor::contract_form(alpha, p)?.with_grade_if_empty(1);
    let da = a.d(alpha).with_grade_if_empty(k);
    let mut t = ExteriorTensor::pairing(p, &da)?;
    if k % 2 == 1 {
        t = -t;
    }
    Ok(&(&lhs - &mu.div(a, &ip)) - &t)
}

pub fn divergence_identity_check(a: &Algebroid, mu: &VolumeSection, p: &ExteriorTensor, alpha: &ExteriorTensor, cfg: &ZeroConfig) -> Result<VerificationReport> {
    let r = divergence_identity_residual(a, mu, p, alpha)?;
    let mut chk = Checker::new("divergence-identity", cfg, a.names());
    let names = a.names();
    chk.scalar(|| format!("P = {}, alpha = {}", names.tensor(p), names.tensor(alpha)), &r);
    Ok(chk.finish())
}

/// `M^{μ'}` for `μ' = e^g μ`, checked against
/// `ι_α(M^{μ'} - M^μ) = ρΠ♯(α)(g)` on weighted basis forms.
pub fn volume_change(a: &Algebroid, m: &ModularTensor, g: &Scalar, cfg: &ZeroConfig) -> (ModularTensor, VerificationReport) {
    let mu2 = m.volume.rescaled(g);
    let m2 = ModularTensor {
        tensor: mu2.boundary(a, &m.pi),
        volume: mu2,
        pi: m.pi.clone(),
    };
    let mut chk = Checker::new("volume-change", cfg, a.names());
    chk.note(EXHAUSTIVE);
    let (wn, w) = nambu::weight(a, "w");
    for b in Blade::all(a.rank(), m.pi.grade() - 1) {
        let alpha = a.basis_form(b).scale(&w);
        let x = ExteriorTensor::contract_form(&alpha, &m.pi).unwrap().with_grade_if_empty(1);
        let r = &(&m2.eval(&alpha) - &m.eval(&alpha)) - &a.anchor_apply(&x, g);
        chk.scalar(|| format!("alpha = {wn}*{}", blade_name(b, &a.names().forms)), &r);
    }
    (m2, chk.finish())
}

/// `ι_{[α,β]} M = ρΠ♯(α)(ι_β M) - ρΠ♯(β)(ι_α M)` on weighted basis pairs.
/// With `wade` set the bracket is Wade's; that residual is only reported.
pub fn cocycle_check(a: &Algebroid, ns: &NambuStructure, m: &ModularTensor, wade: bool, cfg: &ZeroConfig) -> Result<VerificationReport> {
    let l = LeibnizAlgebroid::new(a, ns)?;
    let name = if wade { "cocycle-wade" } else { "cocycle" };
    let mut chk = Checker::new(name, cfg, a.names());
    chk.note(EXHAUSTIVE);
    if wade {
        chk.note("Wade bracket substituted: residual reported, not asserted");
    }
    let w = nambu::weights(a, "w", 2);
    let basis = Blade::all(a.rank(), ns.order() - 1);
    for &p in &basis {
        let alpha = a.basis_form(p).scale(&w[0].1);
        for &q in &basis {
            let beta = a.basis_form(q).scale(&w[1].1);
            let br = if wade { l.wade_bracket(&alpha, &beta)? } else { l.bracket(&alpha, &beta)? };
            let lhs = m.eval(&br);
            let rhs = &l.anchor_apply(&alpha, &m.eval(&beta)) - &l.anchor_apply(&beta, &m.eval(&alpha));
            let forms = &a.names().forms;
            chk.scalar(
                || format!("({}*{}, {}*{})", w[0].0, blade_name(p, forms), w[1].0, blade_name(q, forms)),
                &(&lhs - &rhs),
            );
        }
    }
    Ok(chk.finish())
}

/// `∂_μ M = 0`, `ι_M μ = d_A(ι_Π μ)` and `L_M μ = 0`.
pub fn corollaries_check(a: &Algebroid, m: &ModularTensor, cfg: &ZeroConfig) -> VerificationReport {
    let mut chk = Checker::new("modular-corollaries", cfg, a.names());
    let mu = &m.volume;
    chk.tensor(|| "boundary of M".into(), &mu.boundary(a, &m.tensor));
    let lhs = mu.star(&m.tensor);
    let rhs = a.d(&mu.star(&m.pi)).with_grade_if_empty(lhs.grade());
    chk.tensor(|| "i_M mu - d(i_Pi mu)".into(), &(&lhs - &rhs));
    chk.tensor(|| "L_M mu".into(), &a.lie_general(&m.tensor, &mu.form()));
    chk.finish()
}

/// `M^μ_{ι_ᾱΠ} = ι_ᾱ M^μ_Π`, both sides computed by `∂_μ`.
pub fn subordinate_modular_check(a: &Algebroid, ns: &NambuStructure, alphas: &[ExteriorTensor], mu: &VolumeSection, cfg: &ZeroConfig) -> Result<VerificationReport> {
    let sub = nambu::subordinate(a, ns, alphas, cfg)?;
    let m_sub = mu.boundary(a, sub.tensor());
    let m = mu.boundary(a, ns.tensor());
    let mut bar = a.function(Scalar::one());
    for al in alphas {
        bar = bar.wedge(al);
    }
    let bar = bar.with_grade_if_empty(alphas.len());
    let rhs = ExteriorTensor::contract_form(&bar, &m)?.with_grade_if_empty(m_sub.grade());
    let mut chk = Checker::new("subordinate-modular", cfg, a.names());
    chk.tensor(|| format!("alpha bar = {}", a.names().tensor(&bar)), &(&m_sub - &rhs));
    Ok(chk.finish())
}

/// Accepts `g` iff `M^μ = d𝒜 g`, then checks that `e^{-g} μ` is invariant
/// under every Hamiltonian section, using uninterpreted `f_i`.
pub fn hamiltonian_invariance_check(a: &Algebroid, ns: &NambuStructure, mu: &VolumeSection, g: &Scalar, cfg: &ZeroConfig) -> Result<VerificationReport> {
    let m = modular_tensor(a, ns, mu, cfg)?;
    let mut chk = Checker::new("hamiltonian-invariance", cfg, a.names());
    let l = LeibnizAlgebroid::new(a, ns)?;
    let mut accepted = true;
    for b in Blade::all(a.rank(), ns.order() - 1) {
        let alpha = a.basis_form(b);
        let r = &m.eval(&alpha) - &l.anchor_apply(&alpha, g);
        accepted &= chk.scalar(|| format!("potential at {}", blade_name(b, &a.names().forms)), &r);
    }
    if !accepted {
        chk.note("potential rejected: M is not the coboundary of g");
        return Ok(chk.finish());
    }
    let mu2 = mu.rescaled(&-g.clone());
    let fs: Vec<Scalar> = a
        .chart()
        .fresh_symbols("h", ns.order() - 1)
        .iter()
        .map(|n| Scalar::func(n))
        .collect();
    let x = nambu::hamiltonian_section(a, ns, &fs)?;
    let r = a.lie_form(&x, &mu2.form());
    chk.tensor(|| "L_X mu' for X Hamiltonian".into(), &r);
    chk.note("exhaustive over Hamiltonians: the functions are uninterpreted");
    Ok(chk.finish())
}
