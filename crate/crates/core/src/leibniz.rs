//! The Leibniz algebroid `(∧^{n-1}A^*, [ , ], ρ∘Π♯)` induced by a Nambu
//! structure.

use crate::algebroid::Algebroid;
use crate::error::{Error, Result};
use crate::nambu::{self, NambuStructure, EXHAUSTIVE};
use crate::report::{Checker, VerificationReport};
use crate::scalar::{Scalar, ZeroConfig};
use crate::tensor::{blade_name, Blade, ExteriorTensor, Variance};

pub struct LeibnizAlgebroid<'a> {
    a: &'a Algebroid,
    pi: ExteriorTensor,
    n: usize,
}

impl<'a> LeibnizAlgebroid<'a> {
    /// Only verified structures induce a Leibniz algebroid.
    pub fn new(a: &'a Algebroid, ns: &NambuStructure) -> Result<Self> {
        ns.require_verified()?;
        Ok(LeibnizAlgebroid {
            a,
            pi: ns.tensor().clone(),
            n: ns.order(),
        })
    }

    pub fn algebroid(&self) -> &Algebroid {
        self.a
    }

    pub fn pi(&self) -> &ExteriorTensor {
        &self.pi
    }

    pub fn order(&self) -> usize {
        self.n
    }

    fn check(&self, alpha: &ExteriorTensor) -> Result<()> {
        if alpha.variance() != Variance::Form || alpha.grade() + 1 != self.n || alpha.rank() != self.a.rank() {
            return Err(Error::Grade(format!(
                "Leibniz sections are {}-forms of rank {}",
                self.n - 1,
                self.a.rank()
            )));
        }
        Ok(())
    }

    pub fn sharp(&self, alpha: &ExteriorTensor) -> ExteriorTensor {
        ExteriorTensor::contract_form(alpha, &self.pi).unwrap().with_grade_if_empty(1)
    }

    /// `ρ(Π♯α)(f)`.
    pub fn anchor_apply(&self, alpha: &ExteriorTensor, f: &Scalar) -> Scalar {
        self.a.anchor_apply(&self.sharp(alpha), f)
    }

    fn lie_term(&self, alpha: &ExteriorTensor, beta: &ExteriorTensor) -> ExteriorTensor {
        self.a.lie_form(&self.sharp(alpha), beta).with_grade_if_empty(self.n - 1)
    }

    /// `(-1)^n (ι_{d_A α} Π) β`, the second term of the bracket.
    pub fn second_term(&self, alpha: &ExteriorTensor, beta: &ExteriorTensor) -> ExteriorTensor {
        let s = nambu::pairing_d(self.a, &self.pi, alpha);
        let s = if self.n % 2 == 0 { s } else { -s };
        beta.scale(&s)
    }

    /// `-ι_{Π♯β} d_A α`, the second term of Wade's bracket.
    pub fn wade_second_term(&self, alpha: &ExteriorTensor, beta: &ExteriorTensor) -> ExteriorTensor {
        let da = self.a.d(alpha).with_grade_if_empty(self.n);
        -ExteriorTensor::contract_section(&self.sharp(beta), &da)
            .unwrap()
            .with_grade_if_empty(self.n - 1)
    }

    /// `[α, β] = L_{Π♯α} β + (-1)^n (ι_{d_A α} Π) β`.
    pub fn bracket(&self, alpha: &ExteriorTensor, beta: &ExteriorTensor) -> Result<ExteriorTensor> {
        self.check(alpha)?;
        self.check(beta)?;
        Ok(self.bracket_unchecked(alpha, beta))
    }

    fn bracket_unchecked(&self, alpha: &ExteriorTensor, beta: &ExteriorTensor) -> ExteriorTensor {
        &self.lie_term(alpha, beta) + &self.second_term(alpha, beta)
    }

    /// `L_{Π♯α} β - ι_{Π♯β} d_A α`.
    pub fn wade_bracket(&self, alpha: &ExteriorTensor, beta: &ExteriorTensor) -> Result<ExteriorTensor> {
        self.check(alpha)?;
        self.check(beta)?;
        Ok(&self.lie_term(alpha, beta) + &self.wade_second_term(alpha, beta))
    }

    /// `D(f)(α, β) = ρΠ♯(β)(f) α - ρΠ♯(α)(f) β + d_A f ∧ ι_{Π♯α} β`.
    pub fn loday_derivation(&self, f: &Scalar, alpha: &ExteriorTensor, beta: &ExteriorTensor) -> Result<ExteriorTensor> {
        self.check(alpha)?;
        self.check(beta)?;
        let k = self.n - 1;
        let t1 = alpha.scale(&self.anchor_apply(beta, f));
        let t2 = beta.scale(&self.anchor_apply(alpha, f));
        let inner = ExteriorTensor::contract_section(&self.sharp(alpha), beta).unwrap();
        let t3 = self.a.d_function(f).wedge(&inner.with_grade_if_empty(k.saturating_sub(1)));
        Ok((&(&t1 - &t2) + &t3.with_grade_if_empty(k)).with_grade_if_empty(k))
    }

    /// `(d f)(α) = ρΠ♯(α)(f)`.
    pub fn cochain_d0(&self, f: &Scalar, alpha: &ExteriorTensor) -> Result<Scalar> {
        self.check(alpha)?;
        Ok(self.anchor_apply(alpha, f))
    }

    /// `(d c)(α, β) = ρΠ♯(α)(c(β)) - ρΠ♯(β)(c(α)) - c([α, β])`.
    pub fn cochain_d1(
        &self,
        c: &dyn Fn(&ExteriorTensor) -> Scalar,
        alpha: &ExteriorTensor,
        beta: &ExteriorTensor,
    ) -> Result<Scalar> {
        let br = self.bracket(alpha, beta)?;
        Ok(&(&self.anchor_apply(alpha, &c(beta)) - &self.anchor_apply(beta, &c(alpha))) - &c(&br))
    }

    /// The coboundary in degree `k`, evaluated on `args`; only `k ∈ {0, 1}`
    /// is available.
    pub fn cochain_d(
        &self,
        k: usize,
        c: &dyn Fn(&[&ExteriorTensor]) -> Scalar,
        args: &[&ExteriorTensor],
    ) -> Result<Scalar> {
        if args.len() != k + 1 {
            return Err(Error::Grade(format!("a {}-cochain takes {} arguments", k + 1, k + 1)));
        }
        match k {
            0 => self.cochain_d0(&c(&[]), args[0]),
            1 => self.cochain_d1(&|x| c(&[x]), args[0], args[1]),
            _ => Err(Error::Unsupported(format!("Leibniz coboundary in degree {k}"))),
        }
    }

    fn basis(&self) -> Vec<Blade> {
        Blade::all(self.a.rank(), self.n - 1)
    }

    fn name(&self, b: Blade) -> String {
        blade_name(b, &self.a.names().forms)
    }

    fn weighted(&self, count: usize) -> Vec<(String, Scalar)> {
        nambu::weights(self.a, "w", count)
    }

    fn checker(&self, name: &str, cfg: &ZeroConfig) -> Checker {
        let mut chk = Checker::new(name, cfg, self.a.names());
        chk.note(EXHAUSTIVE);
        chk
    }

    /// `[α,[β,γ]] = [[α,β],γ] + [β,[α,γ]]` on weighted basis triples.
    pub fn left_leibniz_check(&self, cfg: &ZeroConfig) -> VerificationReport {
        let mut chk = self.checker("left-leibniz", cfg);
        let w = self.weighted(3);
        let basis = self.basis();
        let el = |i: usize, b: Blade| self.a.basis_form(b).scale(&w[i].1);
        for &p in &basis {
            let alpha = el(0, p);
            for &q in &basis {
                let beta = el(1, q);
                let ab = self.bracket_unchecked(&alpha, &beta);
                for &r in &basis {
                    let gamma = el(2, r);
                    let lhs = self.bracket_unchecked(&alpha, &self.bracket_unchecked(&beta, &gamma));
                    let rhs = &self.bracket_unchecked(&ab, &gamma)
                        + &self.bracket_unchecked(&beta, &self.bracket_unchecked(&alpha, &gamma));
                    chk.tensor(
                        || {
                            format!(
                                "({}*{}, {}*{}, {}*{})",
                                w[0].0,
                                self.name(p),
                                w[1].0,
                                self.name(q),
                                w[2].0,
                                self.name(r)
                            )
                        },
                        &(&lhs - &rhs),
                    );
                }
            }
        }
        chk.finish()
    }

    fn pairs(&self, name: &str, cfg: &ZeroConfig, mut f: impl FnMut(&mut Checker, &ExteriorTensor, &ExteriorTensor, &dyn Fn() -> String)) -> VerificationReport {
        let mut chk = self.checker(name, cfg);
        let w = self.weighted(2);
        let basis = self.basis();
        for &p in &basis {
            let alpha = self.a.basis_form(p).scale(&w[0].1);
            for &q in &basis {
                let beta = self.a.basis_form(q).scale(&w[1].1);
                let label = || format!("({}*{}, {}*{})", w[0].0, self.name(p), w[1].0, self.name(q));
                f(&mut chk, &alpha, &beta, &label);
            }
        }
        chk.finish()
    }

    /// `Π♯[α, β] = [Π♯α, Π♯β]`.
    pub fn sharp_morphism_check(&self, cfg: &ZeroConfig) -> VerificationReport {
        self.pairs("sharp-morphism", cfg, |chk, alpha, beta, label| {
            let lhs = self.sharp(&self.bracket_unchecked(alpha, beta));
            let rhs = self.a.bracket(&self.sharp(alpha), &self.sharp(beta));
            chk.tensor(label, &(&lhs - &rhs));
        })
    }

    /// `ι_{d[α,β]} Π = ρΠ♯(α)(ι_{dβ}Π) - ρΠ♯(β)(ι_{dα}Π)`.
    pub fn pairing_identity_check(&self, cfg: &ZeroConfig) -> VerificationReport {
        self.pairs("d-pairing", cfg, |chk, alpha, beta, label| {
            let p = |x: &ExteriorTensor| nambu::pairing_d(self.a, &self.pi, x);
            let lhs = p(&self.bracket_unchecked(alpha, beta));
            let rhs = &self.anchor_apply(alpha, &p(beta)) - &self.anchor_apply(beta, &p(alpha));
            chk.scalar(label, &(&lhs - &rhs));
        })
    }

    /// `[α, β] + [β, α] = 0`; expected only for maximal structures.
    pub fn skewness_check(&self, cfg: &ZeroConfig) -> VerificationReport {
        let maximal = self.n == self.a.rank();
        let mut r = self.pairs("skewness", cfg, |chk, alpha, beta, label| {
            let s = &self.bracket_unchecked(alpha, beta) + &self.bracket_unchecked(beta, alpha);
            chk.tensor(label, &s);
        });
        if !maximal {
            r = r.note("order is not maximal; skewness is not expected");
        }
        r
    }

    /// `[fα, β] = f[α, β] - (ρΠ♯(β)f) α + D(f)(α, β)` and the derivation rule
    /// `[α, fβ] = f[α, β] + (ρΠ♯(α)f) β` with `f` uninterpreted.
    pub fn loday_check(&self, cfg: &ZeroConfig) -> VerificationReport {
        let f = Scalar::func(&self.a.chart().fresh_symbol("f"));
        self.pairs("loday", cfg, |chk, alpha, beta, label| {
            let ab = self.bracket_unchecked(alpha, beta);
            let lhs = self.bracket_unchecked(&alpha.scale(&f), beta);
            let rhs = &(&ab.scale(&f) - &alpha.scale(&self.anchor_apply(beta, &f)))
                + &self.loday_derivation(&f, alpha, beta).unwrap();
            chk.tensor(|| format!("first slot {}", label()), &(&lhs - &rhs));
            let lhs = self.bracket_unchecked(alpha, &beta.scale(&f));
            let rhs = &ab.scale(&f) + &beta.scale(&self.anchor_apply(alpha, &f));
            chk.tensor(|| format!("second slot {}", label()), &(&lhs - &rhs));
        })
    }

    /// `d∘d = 0` on a function, evaluated on weighted pairs.
    pub fn cochain_square_check(&self, f: &Scalar, cfg: &ZeroConfig) -> VerificationReport {
        self.pairs("d-squared", cfg, |chk, alpha, beta, label| {
            let c = |x: &ExteriorTensor| self.anchor_apply(x, f);
            let r = self.cochain_d1(&c, alpha, beta).unwrap();
            chk.scalar(label, &r);
        })
    }

    /// All identities of the induced algebroid; skewness only when maximal.
    pub fn suite(&self, cfg: &ZeroConfig) -> Vec<VerificationReport> {
        let mut out = vec![
            self.left_leibniz_check(cfg),
            self.sharp_morphism_check(cfg),
            self.pairing_identity_check(cfg),
            self.loday_check(cfg),
            self.cochain_square_check(&Scalar::func(&self.a.chart().fresh_symbol("f")), cfg),
        ];
        if self.n == self.a.rank() {
            out.push(self.skewness_check(cfg));
        }
        out
    }
}
