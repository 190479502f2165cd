use nambu_core::algebroid::{self, Algebroid, Presentation};
use nambu_core::random::Sampler;
use nambu_core::{parse_expr, Blade, Chart, ExteriorTensor, Scalar, Variance, ZeroConfig};

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&n| int(n)).collect()
}

fn is_zero(t: &ExteriorTensor) -> bool {
    t.decide(&ZeroConfig::default()).0.is_zero()
}

fn tangent(dim: usize) -> Algebroid {
    let names: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    let chart = Chart::new(&names, &["g".to_string()]).unwrap();
    algebroid::tangent(&chart)
}

/// `[X_i, X_4] = λ_i X_4` with λ = (1, 2, 3).
fn pointalg4() -> Algebroid {
    algebroid::lie_algebra_point(
        4,
        &[
            ((0, 3), ints(&[0, 0, 0, 1])),
            ((1, 3), ints(&[0, 0, 0, 2])),
            ((2, 3), ints(&[0, 0, 0, 3])),
        ],
    )
    .unwrap()
}

fn su2() -> Algebroid {
    algebroid::lie_algebra_point(
        3,
        &[
            ((0, 1), ints(&[0, 0, 1])),
            ((1, 2), ints(&[1, 0, 0])),
            ((2, 0), ints(&[0, 1, 0])),
        ],
    )
    .unwrap()
}

fn aff1() -> Algebroid {
    let chart = Chart::new(&["x"], &[]).unwrap();
    algebroid::action(
        &chart,
        2,
        &[((0, 1), ints(&[1, 0]))],
        vec![vec![int(1)], vec![Scalar::coord(0)]],
    )
    .unwrap()
}

fn cotangent_symplectic() -> Algebroid {
    let chart = Chart::new(&["x1", "y1", "x2", "y2"], &[]).unwrap();
    let pi = &ExteriorTensor::monomial(Variance::Multivector, 4, &[0, 1], int(1)).unwrap()
        + &ExteriorTensor::monomial(Variance::Multivector, 4, &[2, 3], int(1)).unwrap();
    algebroid::cotangent_of_poisson(&chart, &pi).unwrap()
}

fn cotangent_conformal() -> Algebroid {
    let chart = Chart::standard(3);
    let pi = ExteriorTensor::monomial(Variance::Multivector, 3, &[0, 1], Scalar::coord(2)).unwrap();
    algebroid::cotangent_of_poisson(&chart, &pi).unwrap()
}

fn all() -> Vec<Algebroid> {
    vec![
        tangent(2),
        tangent(3),
        tangent(4),
        pointalg4(),
        su2(),
        aff1(),
        cotangent_symplectic(),
        cotangent_conformal(),
    ]
}

#[test]
fn builders_validate() {
    for a in all() {
        assert!(a.validate_axioms(&ZeroConfig::default()).passed(), "{}", a.name());
    }
    let t3 = tangent(3);
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(*t3.anchor_entry(i, j), int((i == j) as i64));
            for k in 0..3 {
                assert!(t3.structure(i, j, k).is_structurally_zero());
            }
        }
    }
}

#[test]
fn broken_jacobi_names_the_triple() {
    let mut p = Presentation::new("broken", Chart::point(), 4);
    p.set_bracket(0, 1, ints(&[0, 0, 1, 0])).unwrap();
    p.set_bracket(0, 3, ints(&[0, 0, 0, 1])).unwrap();
    p.set_bracket(2, 3, ints(&[1, 0, 0, 0])).unwrap();
    let a = Algebroid::unchecked(p.clone());
    let report = a.validate_axioms(&ZeroConfig::default());
    assert!(!report.passed());
    assert!(report.witnesses[0].element.starts_with("Jacobi("));
    assert!(Algebroid::new(p).is_err());
}

#[test]
fn abelian_action_violating_anchor_morphism_is_rejected() {
    let chart = Chart::new(&["x"], &[]).unwrap();
    let r = algebroid::action(&chart, 2, &[], vec![vec![int(1)], vec![Scalar::coord(0)]]);
    assert!(r.is_err());
    let a = aff1();
    assert_eq!(a.bracket(&a.basis_vector(Blade::single(0)), &a.basis_vector(Blade::single(1))),
        a.basis_vector(Blade::single(0)));
}

#[test]
fn non_poisson_bivector_is_rejected() {
    let chart = Chart::standard(3);
    // v · curl v = -1 for the dual vector field v = (x2, 0, 1)
    let pi = ExteriorTensor::monomial(Variance::Multivector, 3, &[0, 1], int(1)).unwrap()
        + ExteriorTensor::monomial(Variance::Multivector, 3, &[1, 2], Scalar::coord(1)).unwrap();
    let err = algebroid::cotangent_of_poisson(&chart, &pi).unwrap_err();
    assert!(err.to_string().contains("not Poisson"), "{err}");
}

#[test]
fn cotangent_structure_functions_are_derivatives_of_pi() {
    let a = cotangent_conformal();
    // [dx1, dx2] = d(x3) = dx3
    assert_eq!(*a.structure(0, 1, 2), int(1));
    assert_eq!(*a.structure(1, 0, 2), int(-1));
    // ρ(dx1) = x3 ∂2
    assert_eq!(*a.anchor_entry(0, 1), Scalar::coord(2));
    assert_eq!(*a.anchor_entry(1, 0), -Scalar::coord(2));
}

#[test]
fn d_examples() {
    let t2 = tangent(2);
    let f = parse_expr("x1*x2", t2.chart()).unwrap();
    let df = t2.d_function(&f);
    assert_eq!(df, t2.covector(vec![Scalar::coord(1), Scalar::coord(0)]));

    let s = su2();
    let d3 = s.d(&s.basis_form(Blade::single(2)));
    assert_eq!(d3, ExteriorTensor::monomial(Variance::Form, 3, &[0, 1], int(-1)).unwrap());

    for a in all() {
        let top = a.function(Scalar::coord(0).scale_int(0) + int(1)).wedge(&a.top_form());
        assert!(a.d(&top).is_empty());
    }
}

/// The de Rham-type formula evaluated on frame tuples, independent of the
/// derivation-rule implementation.
fn d_oracle(a: &Algebroid, alpha: &ExteriorTensor) -> ExteriorTensor {
    let n = alpha.grade();
    let m = a.rank();
    let mut out = a.zero_form(n + 1);
    let eval = |vs: &[ExteriorTensor]| -> Scalar {
        let mut w = a.multivector_scalar(Scalar::one());
        for v in vs {
            w = w.wedge(v);
        }
        ExteriorTensor::pairing(&w.with_grade_if_empty(vs.len()), alpha).unwrap()
    };
    for blade in Blade::all(m, n + 1) {
        let xs: Vec<ExteriorTensor> = blade.indices().map(|i| a.basis_vector(Blade::single(i))).collect();
        let idx = blade.index_vec();
        let mut acc = Scalar::zero();
        for i in 0..=n {
            let mut rest = xs.clone();
            rest.remove(i);
            let term = a.anchor_basis(idx[i], &eval(&rest));
            acc = if i % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        for i in 0..=n {
            for j in i + 1..=n {
                let mut args = vec![a.bracket(&xs[i], &xs[j])];
                for (k, x) in xs.iter().enumerate() {
                    if k != i && k != j {
                        args.push(x.clone());
                    }
                }
                let term = eval(&args);
                acc = if (i + j) % 2 == 0 { &acc + &term } else { &acc - &term };
            }
        }
        out.add_term(blade, acc);
    }
    out
}

#[test]
fn d_matches_explicit_formula_and_squares_to_zero() {
    for (n, a) in all().into_iter().enumerate() {
        let funcs = a.chart().functions().to_vec();
        let mut s = Sampler::new(17 + n as u64, a.dim(), a.rank()).with_functions(&funcs);
        for _ in 0..12 {
            let k = s.index(a.rank() + 1);
            let alpha = s.form(k);
            let d = a.d(&alpha);
            assert!(is_zero(&(&d - &d_oracle(&a, &alpha))), "{} grade {k}", a.name());
            assert!(is_zero(&a.d(&d)), "d^2 on {}", a.name());
        }
    }
}

#[test]
fn lie_derivative_examples() {
    let t2 = tangent(2);
    let d1 = t2.basis_vector(Blade::single(0));
    let x1 = Scalar::coord(0);
    let a = t2.basis_form(Blade::single(1)).scale(&x1);
    assert_eq!(t2.lie_form(&d1, &a), t2.basis_form(Blade::single(1)));

    // L_{fX}α = f L_X α + d f ^ i_X α with f = x1, X = ∂2, α = dx1^dx2
    let d2 = t2.basis_vector(Blade::single(1));
    let alpha = t2.top_form();
    let lhs = t2.lie_form(&d2.scale(&x1), &alpha);
    let rhs = &t2.lie_form(&d2, &alpha).scale(&x1)
        + &t2.d_function(&x1).wedge(&ExteriorTensor::contract_section(&d2, &alpha).unwrap());
    assert!(is_zero(&(&lhs - &rhs)));

    // L_{X1} μ = -(Σ_k c_1k^k) μ on the point algebra
    let p = pointalg4();
    let x = p.basis_vector(Blade::single(0));
    let tr: Scalar = (0..4).map(|k| p.structure(0, k, k).clone()).sum();
    assert_eq!(p.lie_form(&x, &p.top_form()), p.top_form().scale(&-tr.clone()));
    assert_eq!(tr, int(1));
}

#[test]
fn lie_multivector_and_schouten_examples() {
    let t2 = tangent(2);
    let d1 = t2.basis_vector(Blade::single(0));
    let x1d2 = t2.basis_vector(Blade::single(1)).scale(&Scalar::coord(0));
    assert_eq!(t2.lie_multivector(&d1, &x1d2), t2.basis_vector(Blade::single(1)));
    assert!(t2.lie_multivector(&d1, &t2.zero_vector(2)).is_empty());

    let f = parse_expr("x1^2", t2.chart()).unwrap();
    let r = t2.schouten(&d1, &t2.multivector_scalar(f));
    assert_eq!(r.as_scalar(), parse_expr("2*x1", t2.chart()).unwrap());

    let t3 = tangent(3);
    let x1 = Scalar::coord(0);
    // L_{fX} P = f L_X P - ρ(X)(f) P for top P
    let d1 = t3.basis_vector(Blade::single(0));
    let top = t3.top_vector();
    let lhs = t3.lie_multivector(&d1.scale(&x1), &top);
    let rhs = &t3.lie_multivector(&d1, &top).scale(&x1) - &top.scale(&t3.anchor_apply(&d1, &x1));
    assert!(is_zero(&(&lhs - &rhs)));
    assert_eq!(lhs, -top.clone());

    // graded antisymmetry: [P,Q] = -(-1)^{(p-1)(q-1)} [Q,P], symmetric for bivectors
    let p = t3.basis_vector(Blade::from_bits(0b011));
    let q = t3.basis_vector(Blade::from_bits(0b110)).scale(&x1);
    let pq = t3.schouten(&p, &q);
    let qp = t3.schouten(&q, &p);
    assert!(is_zero(&(&pq - &qp)));
    // a case with a nonzero bracket: [∂1^∂2, x1 ∂1^∂3] = ∂1^∂2^∂3
    let q = t3.basis_vector(Blade::from_bits(0b101)).scale(&x1);
    let pq = t3.schouten(&p, &q);
    assert_eq!(pq, t3.top_vector());
    assert!(is_zero(&(&pq - &t3.schouten(&q, &p))));
    let v = t3.basis_vector(Blade::single(2)).scale(&x1);
    assert!(is_zero(&(&t3.schouten(&p, &v) + &t3.schouten(&v, &p))));
}

#[test]
fn generalized_lie_derivative_examples() {
    let t3 = tangent(3);
    let mut s = Sampler::new(5, 3, 3);
    for _ in 0..10 {
        let (x, a) = (s.vector(), s.form(2));
        assert!(is_zero(&(&t3.lie_general(&x, &a) - &t3.lie_form(&x, &a))));
    }
    let p = t3.basis_vector(Blade::from_bits(0b011));
    assert!(t3.lie_general(&p, &t3.top_form()).is_empty());
}

#[test]
fn lie_form_direct_agrees_with_cartan() {
    for (n, a) in all().into_iter().enumerate() {
        let funcs = a.chart().functions().to_vec();
        let mut s = Sampler::new(99 + n as u64, a.dim(), a.rank()).with_functions(&funcs);
        for _ in 0..10 {
            let k = s.index(a.rank() + 1);
            let (x, alpha) = (s.vector(), s.form(k));
            let direct = a.lie_form(&x, &alpha);
            let cartan = a.lie_form_cartan(&x, &alpha);
            assert!(is_zero(&(&direct - &cartan)), "{}", a.name());
        }
    }
}

/// `(L_X P)(α_1..α_n) = ρ(X)(P(α_1..α_n)) - Σ P(.., L_X α_i, ..)`.
#[test]
fn lie_multivector_matches_dual_formula() {
    for (n, a) in all().into_iter().enumerate() {
        let mut s = Sampler::new(7 + n as u64, a.dim(), a.rank());
        for _ in 0..6 {
            let k = 1 + s.index(a.rank());
            let (x, p) = (s.vector(), s.multivector(k));
            let lp = a.lie_multivector(&x, &p);
            for b in Blade::all(a.rank(), k) {
                let alphas: Vec<ExteriorTensor> =
                    b.indices().map(|i| a.basis_form(Blade::single(i))).collect();
                let wedge_all = |v: &[ExteriorTensor]| {
                    v.iter().skip(1).fold(v[0].clone(), |acc, t| acc.wedge(t))
                };
                let mut rhs = a.anchor_apply(&x, &ExteriorTensor::pairing(&p, &wedge_all(&alphas)).unwrap());
                for i in 0..alphas.len() {
                    let mut v = alphas.clone();
                    v[i] = a.lie_form(&x, &alphas[i]);
                    rhs = &rhs - &ExteriorTensor::pairing(&p, &wedge_all(&v)).unwrap();
                }
                let lhs = ExteriorTensor::pairing(&lp, &a.basis_form(b)).unwrap();
                assert!((&lhs - &rhs).decide(&ZeroConfig::default()).is_zero(), "{}", a.name());
            }
        }
    }
}

/// Graded Jacobi in the form
/// `[P,[Q,R]] = [[P,Q],R] + (-1)^((|P|-1)(|Q|-1)) [Q,[P,R]]`.
#[test]
fn schouten_graded_jacobi() {
    for (n, a) in all().into_iter().enumerate() {
        let mut s = Sampler::new(31 + n as u64, a.dim(), a.rank());
        for _ in 0..6 {
            let gp = s.index(3.min(a.rank()) + 1);
            let gq = s.index(3.min(a.rank()) + 1);
            let gr = s.index(2.min(a.rank()) + 1);
            if gp + gq + gr > 6 {
                continue;
            }
            let (p, q, r) = (s.multivector(gp), s.multivector(gq), s.multivector(gr));
            let lhs = a.schouten(&p, &a.schouten(&q, &r));
            let t1 = a.schouten(&a.schouten(&p, &q), &r);
            let t2 = a.schouten(&q, &a.schouten(&p, &r));
            let sign = if ((gp as i64 - 1) * (gq as i64 - 1)) % 2 == 0 { 1 } else { -1 };
            let g = lhs.grade();
            let rhs = &t1.with_grade_if_empty(g) + &t2.scale_int(sign).with_grade_if_empty(g);
            assert!(is_zero(&(&lhs.with_grade_if_empty(rhs.grade()) - &rhs)), "{}", a.name());
        }
    }
}
