use nambu_core::algebroid::{self, Algebroid};
use nambu_core::leibniz::LeibnizAlgebroid;
use nambu_core::nambu::NambuStructure;
use nambu_core::random::Sampler;
use nambu_core::{Chart, ExteriorTensor, Scalar, Variance, ZeroConfig};
use proptest::prelude::*;

fn cfg() -> ZeroConfig {
    ZeroConfig::default()
}

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn tangent(dim: usize) -> Algebroid {
    algebroid::tangent(&Chart::standard(dim))
}

fn form(rank: usize, idx: &[usize], c: Scalar) -> ExteriorTensor {
    ExteriorTensor::monomial(Variance::Form, rank, idx, c).unwrap()
}

fn verified(a: &Algebroid, pi: ExteriorTensor) -> NambuStructure {
    let mut ns = NambuStructure::new(a, pi, false).unwrap();
    assert!(ns.verify(a, &cfg()).passed());
    ns
}

fn first_n(rank: usize, n: usize) -> ExteriorTensor {
    ExteriorTensor::monomial(Variance::Multivector, rank, &(0..n).collect::<Vec<_>>(), int(1)).unwrap()
}

fn pointalg4() -> Algebroid {
    let e4 = |k: i64| vec![int(0), int(0), int(0), int(k)];
    algebroid::lie_algebra_point(4, &[((0, 3), e4(1)), ((1, 3), e4(2)), ((2, 3), e4(3))]).unwrap()
}

fn symplectic_cotangent() -> Algebroid {
    let chart = Chart::new(&["x1", "y1", "x2", "y2"], &[]).unwrap();
    let pi = &ExteriorTensor::monomial(Variance::Multivector, 4, &[0, 1], int(1)).unwrap()
        + &ExteriorTensor::monomial(Variance::Multivector, 4, &[2, 3], int(1)).unwrap();
    algebroid::cotangent_of_poisson(&chart, &pi).unwrap()
}

#[test]
fn requires_a_verified_structure() {
    let a = tangent(3);
    let ns = NambuStructure::new(&a, a.top_vector(), false).unwrap();
    assert!(LeibnizAlgebroid::new(&a, &ns).is_err());
    let ns = verified(&a, a.top_vector());
    let l = LeibnizAlgebroid::new(&a, &ns).unwrap();
    assert!(l.bracket(&form(3, &[0], int(1)), &form(3, &[0, 1], int(1))).is_err());
}

#[test]
fn bracket_examples() {
    let a = tangent(3);
    let ns = verified(&a, a.top_vector());
    let l = LeibnizAlgebroid::new(&a, &ns).unwrap();
    let d12 = form(3, &[0, 1], int(1));
    assert!(l.bracket(&d12, &d12).unwrap().is_empty());

    // [x1 dx1^dx2, dx2^dx3]: Π♯α = x1 ∂3, L_{x1∂3}(dx2^dx3) = d(-x1 dx2) = -dx1^dx2,
    // and d(x1 dx1^dx2) = 0 kills the second term.
    let alpha = form(3, &[0, 1], Scalar::coord(0));
    let beta = form(3, &[1, 2], int(1));
    let got = l.bracket(&alpha, &beta).unwrap();
    assert_eq!(got, form(3, &[0, 1], int(-1)));
    let x = l.sharp(&alpha);
    let oracle = &a.lie_form_cartan(&x, &beta) + &l.second_term(&alpha, &beta);
    assert_eq!(got, oracle);
    assert_eq!(got, l.wade_bracket(&alpha, &beta).unwrap());
}

#[test]
fn wade_discrepancy_witness() {
    for n in 3..=4 {
        for k in 1..=2 {
            let m = n + k;
            let a = tangent(m);
            let ns = verified(&a, first_n(m, n));
            let l = LeibnizAlgebroid::new(&a, &ns).unwrap();
            let alpha = form(m, &(1..n).collect::<Vec<_>>(), Scalar::coord(0));
            let beta = form(m, &(2..=n).collect::<Vec<_>>(), int(1));
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(l.second_term(&alpha, &beta), beta.scale_int(sign));
            assert!(l.wade_second_term(&alpha, &beta).is_empty());
            let diff = &l.bracket(&alpha, &beta).unwrap() - &l.wade_bracket(&alpha, &beta).unwrap();
            assert_eq!(diff, beta.scale_int(sign));
        }
    }
}

#[test]
fn wade_bracket_trivial_cases() {
    let a = tangent(4);
    let ns = verified(&a, first_n(4, 3));
    let l = LeibnizAlgebroid::new(&a, &ns).unwrap();
    let z = ExteriorTensor::zero(Variance::Form, 4, 2);
    assert!(l.wade_bracket(&z, &z).unwrap().is_empty());
    for (p, q) in [([0, 1], [1, 3]), ([1, 2], [0, 2]), ([0, 3], [2, 3])] {
        let (alpha, beta) = (form(4, &p, int(2)), form(4, &q, int(-1)));
        assert_eq!(l.wade_bracket(&alpha, &beta).unwrap(), l.bracket(&alpha, &beta).unwrap());
    }
}

#[test]
fn loday_derivation_examples() {
    let a = tangent(4);
    let ns = verified(&a, first_n(4, 3));
    let l = LeibnizAlgebroid::new(&a, &ns).unwrap();
    let alpha = form(4, &[1, 2], int(1));
    let beta = form(4, &[1, 3], int(1));
    assert!(l.loday_derivation(&int(7), &alpha, &beta).unwrap().is_empty());
    // Π♯α = ∂1, Π♯β = 0: D(x1) = 0·α - 1·β + dx1 ^ i_{∂1}β = -dx2^dx4
    let d = l.loday_derivation(&Scalar::coord(0), &alpha, &beta).unwrap();
    assert_eq!(d, form(4, &[1, 3], int(-1)));
}

#[test]
fn cochain_examples() {
    let a = tangent(3);
    let ns = verified(&a, a.top_vector());
    let l = LeibnizAlgebroid::new(&a, &ns).unwrap();
    let v = l.cochain_d0(&Scalar::coord(0), &form(3, &[1, 2], int(1))).unwrap();
    assert_eq!(v, int(1));
    let f = Scalar::func("h");
    assert!(l.cochain_square_check(&f, &cfg()).passed());
    let c = |_: &[&ExteriorTensor]| int(0);
    let x = form(3, &[0, 1], int(1));
    assert!(l.cochain_d(2, &c, &[&x, &x, &x]).is_err());
    assert!(l.cochain_d(1, &c, &[&x]).is_err());
    assert_eq!(l.cochain_d(0, &|_| Scalar::coord(2), &[&x]).unwrap(), int(1));
}

#[test]
fn identity_suites_on_verified_structures() {
    let t3 = tangent(3);
    let t4 = tangent(4);
    let p = pointalg4();
    let c = symplectic_cotangent();
    let e = Scalar::exp(&Scalar::coord(0));
    let cases = vec![
        (&t3, t3.top_vector().scale(&e)),
        (&t4, first_n(4, 3).scale(&Scalar::coord(3))),
        (&p, first_n(4, 3)),
        (&p, p.top_vector()),
        (&c, c.top_vector()),
    ];
    for (a, pi) in cases {
        let ns = verified(a, pi);
        let l = LeibnizAlgebroid::new(a, &ns).unwrap();
        for r in l.suite(&cfg()) {
            assert!(r.passed(), "{} on {}: {:?}", r.check, a.name(), r.witnesses);
            assert_eq!(r.status, nambu_core::Status::Pass);
        }
    }
}

#[test]
fn skewness_fails_below_maximal_order() {
    let a = tangent(4);
    let ns = verified(&a, first_n(4, 3));
    let l = LeibnizAlgebroid::new(&a, &ns).unwrap();
    let r = l.skewness_check(&cfg());
    assert!(!r.passed());
    assert!(r.notes.iter().any(|n| n.contains("not maximal")));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn derivation_and_loday_rules_hold(seed in any::<u64>()) {
        let a = tangent(4);
        let ns = verified(&a, first_n(4, 3).scale(&Scalar::exp(&Scalar::coord(3))));
        let l = LeibnizAlgebroid::new(&a, &ns).unwrap();
        let mut s = Sampler::new(seed, 4, 4);
        let (alpha, beta, f) = (s.form(2), s.form(2), s.scalar());
        let ab = l.bracket(&alpha, &beta).unwrap();
        let lhs = l.bracket(&alpha, &beta.scale(&f)).unwrap();
        let rhs = &ab.scale(&f) + &beta.scale(&l.anchor_apply(&alpha, &f));
        prop_assert!((&lhs - &rhs).decide(&cfg()).0.is_zero());
        let lhs = l.bracket(&alpha.scale(&f), &beta).unwrap();
        let rhs = &(&ab.scale(&f) - &alpha.scale(&l.anchor_apply(&beta, &f)))
            + &l.loday_derivation(&f, &alpha, &beta).unwrap();
        prop_assert!((&lhs - &rhs).decide(&cfg()).0.is_zero());
    }
}
