use nambu_core::algebroid::{self, Algebroid};
use nambu_core::modular::{self, VolumeSection};
use nambu_core::nambu::{self, NambuStructure};
use nambu_core::random::Sampler;
use nambu_core::{Blade, Chart, ExteriorTensor, Scalar, Variance, ZeroConfig};
use proptest::prelude::*;

fn cfg() -> ZeroConfig {
    ZeroConfig::default()
}

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn is_zero(t: &ExteriorTensor) -> bool {
    t.decide(&cfg()).0.is_zero()
}

fn tangent(dim: usize) -> Algebroid {
    algebroid::tangent(&Chart::standard(dim))
}

fn vmono(rank: usize, idx: &[usize], c: Scalar) -> ExteriorTensor {
    ExteriorTensor::monomial(Variance::Multivector, rank, idx, c).unwrap()
}

fn fmono(rank: usize, idx: &[usize], c: Scalar) -> ExteriorTensor {
    ExteriorTensor::monomial(Variance::Form, rank, idx, c).unwrap()
}

fn pointalg4() -> Algebroid {
    let e4 = |k: i64| vec![int(0), int(0), int(0), int(k)];
    algebroid::lie_algebra_point(4, &[((0, 3), e4(1)), ((1, 3), e4(2)), ((2, 3), e4(3))]).unwrap()
}

fn verified(a: &Algebroid, pi: ExteriorTensor) -> NambuStructure {
    let mut ns = NambuStructure::new(a, pi, false).unwrap();
    assert!(ns.verify(a, &cfg()).passed());
    ns
}

#[test]
fn star_examples() {
    let a = tangent(3);
    let mu = VolumeSection::standard(&a);
    assert_eq!(mu.star(&vmono(3, &[0], int(1))), fmono(3, &[1, 2], int(1)));
    assert_eq!(mu.star(&a.multivector_scalar(int(1))), mu.form());
    let p = vmono(3, &[1], Scalar::coord(0));
    assert_eq!(mu.star(&p), ExteriorTensor::contract_section(&p, &mu.form()).unwrap());
    assert!(VolumeSection::new(&a, int(0), true, &cfg()).is_err());
    assert!(VolumeSection::new(&a, Scalar::coord(0), false, &cfg()).is_ok());
}

#[test]
fn boundary_examples() {
    let a = tangent(3);
    let mu = VolumeSection::standard(&a);
    let x = vmono(3, &[0], Scalar::coord(0));
    assert_eq!(mu.boundary(&a, &x).as_scalar(), int(1));
    assert_eq!(mu.div(&a, &x), int(1));
    let e = Scalar::exp(&Scalar::coord(1));
    let mu_e = VolumeSection::new(&a, e.clone(), false, &cfg()).unwrap();
    let ns = nambu::maximal_from_volume(&a, &mu_e.form(), false, &cfg()).unwrap();
    assert!(mu_e.boundary(&a, ns.tensor()).is_empty());
    // L_X μ = div_μ(X) μ
    let x = a.vector(vec![Scalar::coord(2), e.clone(), int(3)]);
    let lhs = a.lie_form(&x, &mu_e.form());
    assert!(is_zero(&(&lhs - &mu_e.form().scale(&mu_e.div(&a, &x)))));
}

#[test]
fn closed_form_of_boundary_matches() {
    let p = pointalg4();
    let mu = VolumeSection::standard(&p);
    let e = |i| p.basis_vector(Blade::single(i));
    for (i, j) in [(0, 1), (0, 3), (1, 3), (2, 3)] {
        let direct = mu.boundary(&p, &e(i).wedge(&e(j)));
        let closed = mu.boundary_of_wedge(&p, &[e(i), e(j)]);
        assert_eq!(direct, closed, "X{} ^ X{}", i + 1, j + 1);
    }
    let t = tangent(4);
    let mu = VolumeSection::new(&t, Scalar::exp(&Scalar::coord(0)), false, &cfg()).unwrap();
    let mut s = Sampler::new(3, 4, 4);
    for k in 1..=4 {
        let xs: Vec<ExteriorTensor> = (0..k).map(|_| s.vector()).collect();
        let mut w = t.multivector_scalar(int(1));
        for x in &xs {
            w = w.wedge(x);
        }
        let direct = mu.boundary(&t, &w.with_grade_if_empty(k));
        assert!(is_zero(&(&direct - &mu.boundary_of_wedge(&t, &xs))), "k = {k}");
    }
}

#[test]
fn modular_tensor_examples() {
    let a = tangent(3);
    let mu = VolumeSection::standard(&a);
    let pm = verified(&a, a.top_vector());
    assert!(modular::modular_tensor(&a, &pm, &mu, &cfg()).unwrap().tensor.is_empty());

    // Π_f = x1 Π_μ: M = Π_μ♯(d x1) = ∂2^∂3
    let f = Scalar::coord(0);
    let pf = verified(&a, a.top_vector().scale(&f));
    let m = modular::modular_tensor(&a, &pf, &mu, &cfg()).unwrap();
    assert_eq!(m.tensor, vmono(3, &[1, 2], int(1)));
    assert_eq!(m.tensor, ExteriorTensor::contract_form(&a.d_function(&f), pm.tensor()).unwrap());

    // unverified input is refused
    let raw = NambuStructure::new(&a, a.top_vector(), false).unwrap();
    assert!(modular::modular_tensor(&a, &raw, &mu, &cfg()).is_err());
}

#[test]
fn point_algebra_structure_constant_values() {
    let p = pointalg4();
    let ns = verified(&p, vmono(4, &[0, 1, 2], int(1)));
    let mu = VolumeSection::standard(&p);
    let m = modular::modular_tensor(&p, &ns, &mu, &cfg()).unwrap();
    let lambda = [1, 2, 3];
    let n = 3i64;
    let mut got = Vec::new();
    for i in 1..=3usize {
        let rest: Vec<usize> = (0..3).filter(|&j| j != i - 1).collect();
        let v = m.eval(&fmono(4, &rest, int(1)));
        let sign = if (n - i as i64 + 1) % 2 == 0 { 1 } else { -1 };
        assert_eq!(v, int(sign * lambda[i - 1]));
        got.push(v);
    }
    assert_eq!(got, vec![int(-1), int(2), int(-3)]);
    // forms involving X4* vanish
    for b in Blade::all(4, 2).into_iter().filter(|b| b.contains(3)) {
        assert!(m.eval(&ExteriorTensor::basis(Variance::Form, 4, b)).is_structurally_zero());
    }
}

#[test]
fn divergence_identity_all_grades() {
    for a in [tangent(4), pointalg4()] {
        let mu = VolumeSection::new(&a, if a.dim() > 0 { Scalar::exp(&Scalar::coord(1)) } else { int(2) }, false, &cfg()).unwrap();
        let mut s = Sampler::new(11, a.dim(), 4).with_functions(&["g".to_string()]);
        for k in 1..=4 {
            for _ in 0..4 {
                let p = s.multivector(k);
                for b in Blade::all(4, k - 1) {
                    let alpha = a.basis_form(b).scale(&Scalar::func("g"));
                    let r = modular::divergence_identity_residual(&a, &mu, &p, &alpha).unwrap();
                    assert!(r.decide(&cfg()).is_zero(), "{} k={k}", a.name());
                }
            }
        }
        let z = a.zero_vector(2);
        assert!(modular::divergence_identity_check(&a, &mu, &z, &a.basis_form(Blade::single(0)), &cfg()).unwrap().passed());
    }
    // k = 1 with α = f: ι_f ∂_μ X = div_μ(fX) - ι_{d f} X
    let a = tangent(4);
    let mu = VolumeSection::standard(&a);
    let x = a.vector(vec![Scalar::coord(1), int(1), Scalar::coord(0), int(0)]);
    let f = Scalar::func("g");
    let lhs = &f * &mu.div(&a, &x);
    let rhs = &mu.div(&a, &x.scale(&f)) - &ExteriorTensor::pairing(&x, &a.d_function(&f)).unwrap();
    assert!((&lhs - &rhs).decide(&cfg()).is_zero());
    assert!(modular::divergence_identity_check(&a, &mu, &x, &a.function(f), &cfg()).unwrap().passed());
}

#[test]
fn volume_change_examples() {
    let a = tangent(3);
    let ns = verified(&a, a.top_vector());
    let mu = VolumeSection::standard(&a);
    let m = modular::modular_tensor(&a, &ns, &mu, &cfg()).unwrap();
    let (m0, r) = modular::volume_change(&a, &m, &int(0), &cfg());
    assert!(r.passed());
    assert_eq!(m0.tensor, m.tensor);
    let (m1, r) = modular::volume_change(&a, &m, &Scalar::coord(0), &cfg());
    assert!(r.passed());
    // ι_α(M' - M) = ρΠ♯(α)(x1): only dx2^dx3 sees ∂1
    assert_eq!(m1.eval(&fmono(3, &[1, 2], int(1))), int(1));

    let p = pointalg4();
    let ns = verified(&p, vmono(4, &[0, 1, 2], int(1)));
    let m = modular::modular_tensor(&p, &ns, &VolumeSection::standard(&p), &cfg()).unwrap();
    let (m2, r) = modular::volume_change(&p, &m, &int(5), &cfg());
    assert!(r.passed());
    assert_eq!(m2.tensor, m.tensor);
}

#[test]
fn cocycle_and_corollaries_on_examples() {
    let t3 = tangent(3);
    let t4 = tangent(4);
    let p = pointalg4();
    let e = Scalar::exp(&Scalar::coord(0));
    let cases = vec![
        (&t3, t3.top_vector().scale(&e), VolumeSection::standard(&t3)),
        (&t3, t3.top_vector(), VolumeSection::new(&t3, Scalar::coord(1), true, &cfg()).unwrap()),
        (&t4, vmono(4, &[0, 1, 2], Scalar::coord(3)), VolumeSection::standard(&t4)),
        (&p, vmono(4, &[0, 1, 2], int(1)), VolumeSection::standard(&p)),
    ];
    for (a, pi, mu) in cases {
        let ns = verified(a, pi);
        let m = modular::modular_tensor(a, &ns, &mu, &cfg()).unwrap();
        let r = modular::cocycle_check(a, &ns, &m, false, &cfg()).unwrap();
        assert!(r.passed(), "{}: {:?}", a.name(), r.witnesses);
        assert!(modular::corollaries_check(a, &m, &cfg()).passed());
        let wade = modular::cocycle_check(a, &ns, &m, true, &cfg()).unwrap();
        assert!(wade.notes.iter().any(|n| n.contains("not asserted")));
    }
}

#[test]
fn subordinate_relation() {
    let a = tangent(4);
    let ns = verified(&a, a.top_vector().scale(&Scalar::exp(&Scalar::coord(0))));
    let mu = VolumeSection::standard(&a);
    let dx4 = fmono(4, &[3], int(1));
    assert!(modular::subordinate_modular_check(&a, &ns, &[dx4], &mu, &cfg()).unwrap().passed());
    let a5 = tangent(5);
    let ns5 = verified(&a5, vmono(5, &[0, 1, 2, 3], int(1)));
    let mu5 = VolumeSection::standard(&a5);
    let dx5 = fmono(5, &[4], int(1));
    assert!(modular::subordinate_modular_check(&a5, &ns5, &[dx5], &mu5, &cfg()).unwrap().passed());
    let closed = a.d_function(&Scalar::func("g"));
    assert!(modular::subordinate_modular_check(&a, &ns, &[closed], &mu, &cfg()).unwrap().passed());
}

#[test]
fn hamiltonian_invariance() {
    let a = tangent(3);
    let mu = VolumeSection::standard(&a);
    let pm = verified(&a, a.top_vector());
    assert!(modular::hamiltonian_invariance_check(&a, &pm, &mu, &int(0), &cfg()).unwrap().passed());
    let pf = verified(&a, a.top_vector().scale(&Scalar::exp(&Scalar::coord(0))));
    let r = modular::hamiltonian_invariance_check(&a, &pf, &mu, &Scalar::coord(0), &cfg()).unwrap();
    assert!(r.passed(), "{r:?}");
    let r = modular::hamiltonian_invariance_check(&a, &pf, &mu, &Scalar::coord(1), &cfg()).unwrap();
    assert!(!r.passed());
    assert!(r.notes.iter().any(|n| n.contains("potential rejected")));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn star_roundtrip_and_boundary_squares_to_zero(seed in any::<u64>(), k in 0usize..=4) {
        let a = tangent(4);
        let mu = VolumeSection::new(&a, Scalar::exp(&Scalar::coord(2)), false, &cfg()).unwrap();
        let mut s = Sampler::new(seed, 4, 4);
        let p = s.multivector(k);
        prop_assert_eq!(mu.star_inv(&mu.star(&p)).with_grade_if_empty(k), p.clone());
        if k >= 2 {
            prop_assert!(is_zero(&mu.boundary(&a, &mu.boundary(&a, &p))));
        }
    }

    #[test]
    fn lie_derivative_of_star(seed in any::<u64>(), k in 0usize..=3) {
        let a = tangent(3);
        let mu = VolumeSection::new(&a, Scalar::exp(&Scalar::coord(0)), false, &cfg()).unwrap();
        let mut s = Sampler::new(seed, 3, 3);
        let (x, p) = (s.vector(), s.multivector(k));
        let lhs = a.lie_form(&x, &mu.star(&p));
        let rhs = &mu.star(&a.lie_multivector(&x, &p).with_grade_if_empty(k)) + &mu.star(&p).scale(&mu.div(&a, &x));
        prop_assert!(is_zero(&(&lhs - &rhs)));
    }
}
