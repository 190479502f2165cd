//! Characteristic cocycles of line representations and the comparison of
//! the intrinsic modular class of `∧^{m-1}T^*M` with the Nambu one.

use crate::algebroid::Algebroid;
use crate::error::{Error, Result};
use crate::leibniz::LeibnizAlgebroid;
use crate::linalg::{self, Matrix};
use crate::modular::{self, VolumeSection};
use crate::nambu::{self, NambuStructure};
use crate::report::{Checker, VerificationReport};
use crate::scalar::{Scalar, ZeroConfig};
use crate::tensor::{blade_name, Blade, ExteriorTensor};

/// A representation of the derived algebroid on a trivial line bundle.
/// Sections are written `f·s₀` for a fixed generator `s₀`; [`act`] returns
/// the coefficient of `∇_a(f·s₀)`.
///
/// [`act`]: LineRepresentation::act
pub trait LineRepresentation {
    fn name(&self) -> &str;
    fn act(&self, a: &ExteriorTensor, f: &Scalar) -> Result<Scalar>;
}

/// `∇_a f = ρΠ♯(a)(f)`, flat with zero characteristic cocycle.
pub struct TrivialRep<'l, 'a> {
    pub leibniz: &'l LeibnizAlgebroid<'a>,
}

impl LineRepresentation for TrivialRep<'_, '_> {
    fn name(&self) -> &str {
        "trivial"
    }
    fn act(&self, a: &ExteriorTensor, f: &Scalar) -> Result<Scalar> {
        Ok(self.leibniz.anchor_apply(a, f))
    }
}

/// `∇_α λ = L_{Π♯α} λ + (-1)^m ⟨Π, d_A α⟩ λ` on top forms, generator
/// `e*^1 ∧ … ∧ e*^m`.
pub struct MaximalRep<'l, 'a> {
    pub leibniz: &'l LeibnizAlgebroid<'a>,
}

impl LineRepresentation for MaximalRep<'_, '_> {
    fn name(&self) -> &str {
        "maximal"
    }
    fn act(&self, a: &ExteriorTensor, f: &Scalar) -> Result<Scalar> {
        let l = self.leibniz;
        let alg = l.algebroid();
        let lambda = alg.top_form().scale(f);
        let x = l.sharp(a);
        let mut s = nambu::pairing_d(alg, l.pi(), a);
        if alg.rank() % 2 == 1 {
            s = -s;
        }
        let out = &alg.lie_form(&x, &lambda) + &lambda.scale(&s);
        Ok(out.top_coeff())
    }
}

/// A global coframe `η_1..η_m` of a chart, with `η = η_1 ∧ … ∧ η_m`.
#[derive(Clone, Debug)]
pub struct Coframe {
    pub forms: Vec<ExteriorTensor>,
    matrix: Matrix,
    inverse: Matrix,
    bar_inverse: Matrix,
    volume: VolumeSection,
}

impl Coframe {
    pub fn new(a: &Algebroid, forms: Vec<ExteriorTensor>, cfg: &ZeroConfig) -> Result<Self> {
        let m = a.rank();
        if forms.len() != m || forms.iter().any(|f| f.grade() != 1 || f.rank() != m) {
            return Err(Error::Grade(format!("a coframe needs {m} one-forms")));
        }
        let matrix: Matrix = forms.iter().map(|f| f.components()).collect();
        let inverse = linalg::inverse(&matrix, cfg)?;
        let mut top = a.function(Scalar::one());
        for f in &forms {
            top = top.wedge(f);
        }
        let volume = VolumeSection::new(a, top.top_coeff(), false, cfg)
            .map_err(|e| Error::Singular(format!("coframe is degenerate: {e}")))?;
        let bars = Self::bars(a, &forms);
        let blades = Blade::all(m, m - 1);
        let bar_matrix: Matrix = bars.iter().map(|b| blades.iter().map(|&k| b.coeff(k)).collect()).collect();
        let bar_inverse = linalg::inverse(&bar_matrix, cfg)?;
        Ok(Coframe {
            forms,
            matrix,
            inverse,
            bar_inverse,
            volume,
        })
    }

    pub fn standard(a: &Algebroid, cfg: &ZeroConfig) -> Self {
        let forms = (0..a.rank()).map(|i| a.basis_form(Blade::single(i))).collect();
        Coframe::new(a, forms, cfg).unwrap()
    }

    fn bars(a: &Algebroid, forms: &[ExteriorTensor]) -> Vec<ExteriorTensor> {
        (0..forms.len())
            .map(|i| {
                let mut w = a.function(Scalar::one());
                for (k, f) in forms.iter().enumerate() {
                    if k != i {
                        w = w.wedge(f);
                    }
                }
                w.with_grade_if_empty(forms.len() - 1)
            })
            .collect()
    }

    /// `η̄_i = η_1 ∧ … η̂_i … ∧ η_m`.
    pub fn bar(&self, a: &Algebroid) -> Vec<ExteriorTensor> {
        Self::bars(a, &self.forms)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn volume(&self) -> &VolumeSection {
        &self.volume
    }
}

fn require_tangent(a: &Algebroid) -> Result<()> {
    let tangent = a.rank() == a.dim()
        && a.presentation().brackets.is_empty()
        && (0..a.rank()).all(|i| (0..a.dim()).all(|j| *a.anchor_entry(i, j) == Scalar::from_int((i == j) as i64)));
    if tangent {
        Ok(())
    } else {
        Err(Error::Unsupported("the comparison is only implemented for tangent algebroids of a chart".into()))
    }
}

/// `c_{kj}` in `L_{Π♯(df_1∧…∧df_{m-1})} η_k = Σ_j c_{kj} η_j`.
pub fn coframe_coefficients(l: &LeibnizAlgebroid, coframe: &Coframe, fs: &[Scalar]) -> Result<Matrix> {
    let a = l.algebroid();
    if fs.len() + 1 != l.order() {
        return Err(Error::Grade(format!("expected {} functions, got {}", l.order() - 1, fs.len())));
    }
    let x = l.sharp(&nambu::wedge_differentials(a, fs));
    Ok(lie_coefficients(a, coframe, &x))
}

fn lie_coefficients(a: &Algebroid, coframe: &Coframe, x: &ExteriorTensor) -> Matrix {
    let v: Matrix = coframe
        .forms
        .iter()
        .map(|eta| a.lie_form(x, eta).with_grade_if_empty(1).components())
        .collect();
    linalg::mul(&v, &coframe.inverse)
}

/// `B_{ij}` in `[a, η̄_i] = Σ_j B_{ij} η̄_j`, brackets of the derived algebroid.
fn bar_coefficients(l: &LeibnizAlgebroid, coframe: &Coframe, a_form: &ExteriorTensor) -> Result<Matrix> {
    let alg = l.algebroid();
    let m = alg.rank();
    let blades = Blade::all(m, m - 1);
    let mut w = Matrix::new();
    for b in coframe.bar(alg) {
        let br = l.bracket(a_form, &b)?;
        w.push(blades.iter().map(|&k| br.coeff(k)).collect());
    }
    Ok(linalg::mul(&w, &coframe.bar_inverse))
}

/// The Q-representation `∇_a((η̄_1∧…∧η̄_m) ⊗ η)`, with the derived
/// bracket extended to the top power as a derivation.
pub struct IntrinsicRep<'l, 'a> {
    pub leibniz: &'l LeibnizAlgebroid<'a>,
    pub coframe: Coframe,
}

impl IntrinsicRep<'_, '_> {
    /// Coefficient of `[a, η̄_1∧…∧η̄_m]` against `η̄_1∧…∧η̄_m`.
    pub fn gerstenhaber_trace(&self, a: &ExteriorTensor) -> Result<Scalar> {
        Ok(linalg::trace(&bar_coefficients(self.leibniz, &self.coframe, a)?))
    }

    /// `(L_{ρ(a)} η) / η`.
    pub fn volume_term(&self, a: &ExteriorTensor) -> Result<Scalar> {
        let alg = self.leibniz.algebroid();
        let eta = self.coframe.volume.form();
        let l = alg.lie_form(&self.leibniz.sharp(a), &eta).with_grade_if_empty(eta.grade());
        l.top_coeff().checked_div(self.coframe.volume.coefficient())
    }
}

impl LineRepresentation for IntrinsicRep<'_, '_> {
    fn name(&self) -> &str {
        "intrinsic"
    }
    fn act(&self, a: &ExteriorTensor, f: &Scalar) -> Result<Scalar> {
        let theta0 = &self.gerstenhaber_trace(a)? + &self.volume_term(a)?;
        Ok(&(f * &theta0) + &self.leibniz.anchor_apply(a, f))
    }
}

/// `θ_s(a)` from `∇_a s = θ_s(a) s`, for `s` given by its coefficient.
pub fn characteristic_cocycle<'r, R: LineRepresentation + ?Sized>(
    rep: &'r R,
    s: &Scalar,
) -> Result<impl Fn(&ExteriorTensor) -> Result<Scalar> + 'r> {
    if s.is_structurally_zero() {
        return Err(Error::Singular("trivializing section vanishes".into()));
    }
    let s = s.clone();
    Ok(move |a: &ExteriorTensor| rep.act(a, &s)?.checked_div(&s))
}

/// Flatness `∇_{[α,β]} = [∇_α, ∇_β]` and the Leibniz rule in the section,
/// on weighted basis pairs with an uninterpreted section coefficient.
pub fn representation_check<R: LineRepresentation + ?Sized>(l: &LeibnizAlgebroid, rep: &R, cfg: &ZeroConfig) -> Result<VerificationReport> {
    let a = l.algebroid();
    let mut chk = Checker::new(format!("representation-{}", rep.name()), cfg, a.names());
    chk.note(nambu::EXHAUSTIVE);
    let w = nambu::weights(a, "w", 2);
    let f = Scalar::func(&a.chart().fresh_symbol("s"));
    let basis = Blade::all(a.rank(), l.order() - 1);
    let forms = &a.names().forms;
    for &p in &basis {
        let alpha = a.basis_form(p).scale(&w[0].1);
        let law = &rep.act(&alpha, &f)? - &(&(&f * &rep.act(&alpha, &Scalar::one())?) + &l.anchor_apply(&alpha, &f));
        chk.scalar(|| format!("Leibniz rule at {}*{}", w[0].0, blade_name(p, forms)), &law);
        for &q in &basis {
            let beta = a.basis_form(q).scale(&w[1].1);
            let lhs = rep.act(&l.bracket(&alpha, &beta)?, &f)?;
            let rhs = &rep.act(&alpha, &rep.act(&beta, &f)?)? - &rep.act(&beta, &rep.act(&alpha, &f)?)?;
            chk.scalar(
                || format!("flatness at ({}*{}, {}*{})", w[0].0, blade_name(p, forms), w[1].0, blade_name(q, forms)),
                &(&lhs - &rhs),
            );
        }
    }
    Ok(chk.finish())
}

/// Both parts of the coframe lemma for uninterpreted `f_1..f_{m-1}`:
/// `tr B = (m-1) tr c` and `L_X η = (tr c) η`.
pub fn lemma_check(l: &LeibnizAlgebroid, coframe: &Coframe, cfg: &ZeroConfig) -> Result<VerificationReport> {
    let a = l.algebroid();
    let m = a.rank();
    let fs: Vec<Scalar> = a.chart().fresh_symbols("f", m - 1).iter().map(|n| Scalar::func(n)).collect();
    let c = coframe_coefficients(l, coframe, &fs)?;
    let tr = linalg::trace(&c);
    let df = nambu::wedge_differentials(a, &fs);
    let rep = IntrinsicRep {
        leibniz: l,
        coframe: coframe.clone(),
    };
    let mut chk = Checker::new("coframe-lemma", cfg, a.names());
    let part1 = &rep.gerstenhaber_trace(&df)? - &tr.scale_int(m as i64 - 1);
    chk.scalar(|| "part 1: bracket with the top power of the bars".into(), &part1);
    let x = l.sharp(&df);
    let eta = coframe.volume.form();
    let part2 = &a.lie_form(&x, &eta) - &eta.scale(&tr);
    chk.tensor(|| "part 2: Lie derivative of the volume".into(), &part2);
    chk.note("Hamiltonians are uninterpreted functions");
    Ok(chk.finish())
}

/// `θ(a) = m ι_a M^η` for `a = df_1 ∧ … ∧ df_{m-1}` with uninterpreted
/// `f_i`, and on weighted basis forms.
pub fn compare_theorem(a: &Algebroid, pi: &ExteriorTensor, coframe: &Coframe, declared_nonvanishing: bool, cfg: &ZeroConfig) -> Result<VerificationReport> {
    require_tangent(a)?;
    let m = a.rank();
    if pi.grade() != m {
        return Err(Error::Nambu("the comparison needs a top-degree multivector".into()));
    }
    let u = pi.top_coeff();
    match u.decide(cfg) {
        crate::scalar::Decision::NonZero => {}
        _ if declared_nonvanishing && !u.decide(cfg).is_zero() => {}
        _ => return Err(Error::Nambu("the multivector must not vanish".into())),
    }
    let mut ns = NambuStructure::new(a, pi.clone(), false)?;
    let vr = ns.verify(a, cfg);
    if !vr.passed() {
        return Err(Error::Nambu("top-degree multivector failed the Nambu check".into()));
    }
    let l = LeibnizAlgebroid::new(a, &ns)?;
    let mt = modular::modular_tensor(a, &ns, coframe.volume(), cfg)?;
    let rep = IntrinsicRep {
        leibniz: &l,
        coframe: coframe.clone(),
    };
    let theta = characteristic_cocycle(&rep, &Scalar::one())?;
    let mut chk = Checker::new("elw-compare", cfg, a.names());
    let fs: Vec<Scalar> = a.chart().fresh_symbols("f", m - 1).iter().map(|n| Scalar::func(n)).collect();
    let df = nambu::wedge_differentials(a, &fs);
    let t = theta(&df)?;
    let mv = mt.eval(&df);
    chk.scalar(|| "theta(df_1^..^df_{m-1}) - m M(df_1^..^df_{m-1})".into(), &(&t - &mv.scale_int(m as i64)));
    let (wn, w) = nambu::weight(a, "w");
    for b in Blade::all(m, m - 1) {
        let alpha = a.basis_form(b).scale(&w);
        let r = &theta(&alpha)? - &mt.eval(&alpha).scale_int(m as i64);
        chk.scalar(|| format!("alpha = {wn}*{}", blade_name(b, &a.names().forms)), &r);
    }
    chk.note("Hamiltonians are uninterpreted functions");
    let mut report = chk.finish();
    report = report.value("M^eta", a.names().tensor(&mt.tensor));
    let factor = if mv.decide(cfg).is_zero() {
        if t.decide(cfg).is_zero() {
            "both sides vanish".to_string()
        } else {
            "undefined".to_string()
        }
    } else if (&t - &mv.scale_int(m as i64)).decide(cfg).is_zero() {
        m.to_string()
    } else {
        match t.checked_div(&mv) {
            Ok(r) if r.is_constant() => a.names().scalar(&r),
            _ => "not constant".to_string(),
        }
    };
    Ok(report.value("factor", factor))
}
