//! The eight acceptance criteria, one printed line each.

use std::process::Command;
use std::time::{Duration, Instant};

use nambu_core::algebroid::{self, Algebroid};
use nambu_core::elw::{self, Coframe};
use nambu_core::leibniz::LeibnizAlgebroid;
use nambu_core::library::EXAMPLES;
use nambu_core::model::{Expectation, Model};
use nambu_core::modular::{self, VolumeSection};
use nambu_core::nambu::{self, NambuStructure};
use nambu_core::suite::{self, Options};
use nambu_core::{Blade, Chart, ExteriorTensor, Scalar, Status, Variance, VerificationReport, ZeroConfig};

type Outcome = Result<String, String>;

fn cfg() -> ZeroConfig {
    ZeroConfig::default()
}

fn exact(r: &VerificationReport, what: &str) -> Result<(), String> {
    if r.status == Status::Pass {
        Ok(())
    } else {
        Err(format!("{what}: {} is {} {:?}", r.check, r.status.label(), r.witnesses.first()))
    }
}

fn models() -> Vec<Model> {
    EXAMPLES.iter().map(|e| Model::parse(e.source).unwrap()).collect()
}

fn tangent(m: usize) -> Algebroid {
    algebroid::tangent(&Chart::standard(m))
}

fn first_n(m: usize, n: usize) -> ExteriorTensor {
    ExteriorTensor::monomial(Variance::Multivector, m, &(0..n).collect::<Vec<_>>(), Scalar::one()).unwrap()
}

fn pointalg4() -> Algebroid {
    Model::parse(nambu_core::library::find("pointalg4").unwrap().source).unwrap().algebroid().unwrap()
}

fn verified_models() -> Vec<(Model, Algebroid, NambuStructure)> {
    let mut out = Vec::new();
    for m in models() {
        let Some(n) = &m.nambu else { continue };
        if n.expect == Expectation::Fail {
            continue;
        }
        let a = m.algebroid().unwrap();
        let mut ns = m.nambu_structure(&a, false).unwrap();
        assert!(ns.verify(&a, &cfg()).passed(), "{}", m.name);
        out.push((m, a, ns));
    }
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let opts = Options::default();
    let mut count = 0;
    for m in models().into_iter().filter(|m| m.rank <= 5) {
        let a = m.algebroid().map_err(|e| e.to_string())?;
        let r = suite::cartan(&a, &opts);
        exact(&r, &m.name)?;
        count += 1;
    }
    let t = start.elapsed();
    if t > Duration::from_secs(30) {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("{count} algebroids x {} inputs, {:.1} s", opts.cartan_inputs, t.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let mut cases = 0;
    for a in [tangent(4), pointalg4()] {
        let mu = VolumeSection::standard(&a);
        let w = Scalar::func(&a.chart().fresh_symbol("w"));
        for k in 1..=4 {
            for b in Blade::all(4, k) {
                let p = a.basis_vector(b).scale(&w);
                for c in Blade::all(4, k - 1) {
                    let alpha = a.basis_form(c).scale(&Scalar::exp(&w));
                    let r = modular::divergence_identity_check(&a, &mu, &p, &alpha, &cfg()).map_err(|e| e.to_string())?;
                    exact(&r, a.name())?;
                    cases += 1;
                }
            }
        }
        let xs: Vec<ExteriorTensor> = (0..4)
            .map(|i| &a.basis_vector(Blade::single(i)).scale(&w) + &a.basis_vector(Blade::single((i + 1) % 4)))
            .collect();
        for k in 1..=4 {
            let direct = mu.boundary(&a, &xs[1..k].iter().fold(xs[0].clone(), |acc, x| acc.wedge(x)));
            let closed = mu.boundary_of_wedge(&a, &xs[..k]);
            if !(&direct - &closed).decide(&cfg()).0.is_exact() || !(&direct - &closed).decide(&cfg()).0.is_zero() {
                return Err(format!("closed form differs at k = {k} on {}", a.name()));
            }
        }
    }
    Ok(format!("{cases} divergence cases, closed form k = 1..4"))
}

fn criterion_3() -> Outcome {
    for m in 3..=5 {
        let a = tangent(m);
        for n in 3..=m {
            let mut ns = NambuStructure::new(&a, first_n(m, n), false).map_err(|e| e.to_string())?;
            exact(&ns.verify(&a, &cfg()), &format!("d1..d{n} in R^{m}"))?;
        }
        let f = Scalar::func("f");
        let mut ns = NambuStructure::new(&a, a.top_vector().scale(&f), false).map_err(|e| e.to_string())?;
        exact(&ns.verify(&a, &cfg()), &format!("f top in R^{m}"))?;
    }
    let a6 = tangent(6);
    let pi = &first_n(6, 3) + &ExteriorTensor::monomial(Variance::Multivector, 6, &[3, 4, 5], Scalar::one()).unwrap();
    let ns = NambuStructure::new(&a6, pi, false).unwrap();
    let r = nambu::check_nambu(&a6, &ns, &cfg());
    if r.status != Status::Fail || r.witnesses.is_empty() {
        return Err("R^6 sum was not refuted".into());
    }
    let chart = Chart::new(&["x1", "y1", "x2", "y2"], &[]).unwrap();
    let a4 = algebroid::tangent(&chart);
    let omega = &first_n(4, 2) + &ExteriorTensor::monomial(Variance::Multivector, 4, &[2, 3], Scalar::one()).unwrap();
    let ns = NambuStructure::new(&a4, omega, true).unwrap();
    let r = nambu::check_nambu(&a4, &ns, &cfg());
    let witness = r.values.iter().find(|(k, _)| k == "witness alpha").map(|(_, v)| v.as_str());
    if r.status != Status::Fail || witness != Some("(y1)*dx1") {
        return Err(format!("symplectic witness was {witness:?}"));
    }
    Ok("monomials and f*top pass; R^6 and symplectic refuted, witness y1 dx1".into())
}

fn criterion_4() -> Outcome {
    let mut agreed = 0;
    let mut cases: Vec<(Algebroid, ExteriorTensor)> = Vec::new();
    for m in 3..=5 {
        for n in 3..=m {
            cases.push((tangent(m), first_n(m, n)));
        }
    }
    for (_, a, ns) in verified_models() {
        cases.push((a, ns.tensor().clone()));
    }
    for (a, pi) in &cases {
        let ns = NambuStructure::new(a, pi.clone(), false).unwrap();
        if !nambu::check_pointwise_decomposability(a, &ns, &cfg()).passed() {
            continue;
        }
        let h = nambu::check_nambu(a, &ns, &cfg()).passed();
        let w = nambu::check_wade(a, &ns, &cfg()).passed();
        if h != w {
            return Err(format!("definitions disagree on {}", a.name()));
        }
        agreed += 1;
    }
    for n in 3..=4 {
        for k in 1..=2 {
            let m = n + k;
            let a = tangent(m);
            let mut ns = NambuStructure::new(&a, first_n(m, n), false).unwrap();
            ns.verify(&a, &cfg());
            let l = LeibnizAlgebroid::new(&a, &ns).map_err(|e| e.to_string())?;
            let alpha = ExteriorTensor::monomial(Variance::Form, m, &(1..n).collect::<Vec<_>>(), Scalar::coord(0)).unwrap();
            let beta = ExteriorTensor::monomial(Variance::Form, m, &(2..=n).collect::<Vec<_>>(), Scalar::one()).unwrap();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            if l.second_term(&alpha, &beta) != beta.scale_int(sign) || !l.wade_second_term(&alpha, &beta).is_empty() {
                return Err(format!("discrepancy witness not reproduced for n = {n}, k = {k}"));
            }
        }
    }
    Ok(format!("{agreed} decomposable structures agree; discrepancy (-1)^n beta vs 0 for n = 3,4, k = 1,2"))
}

fn criterion_5() -> Outcome {
    let mut maximal = 0;
    let mut count = 0;
    for (model, a, ns) in verified_models() {
        let l = LeibnizAlgebroid::new(&a, &ns).map_err(|e| e.to_string())?;
        let reports = l.suite(&cfg());
        for r in &reports {
            exact(r, &model.name)?;
        }
        if reports.iter().any(|r| r.check == "skewness") {
            maximal += 1;
        }
        count += 1;
    }
    if maximal == 0 {
        return Err("no maximal structure exercised skewness".into());
    }
    Ok(format!("{count} structures, {maximal} maximal"))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let opts = Options::default();
    let mut names = Vec::new();
    for (model, a, ns) in verified_models() {
        for r in suite::modular_suite(&model, &a, &ns, &opts).map_err(|e| e.to_string())? {
            exact(&r, &model.name)?;
            if !names.contains(&r.check) {
                names.push(r.check.clone());
            }
        }
    }
    for needed in ["modular-definition", "modular-corollaries", "cocycle", "volume-change", "modular-expected", "volume-structure", "subordinate-modular"] {
        if !names.iter().any(|n| n == needed) {
            return Err(format!("no `{needed}` report was produced"));
        }
    }
    // point-base values, checked directly
    let p = pointalg4();
    let mut ns = NambuStructure::new(&p, first_n(4, 3), false).unwrap();
    ns.verify(&p, &cfg());
    let mt = modular::modular_tensor(&p, &ns, &VolumeSection::standard(&p), &cfg()).map_err(|e| e.to_string())?;
    let vals: Vec<Scalar> = [[1, 2], [0, 2], [0, 1]]
        .iter()
        .map(|idx| mt.eval(&ExteriorTensor::monomial(Variance::Form, 4, idx, Scalar::one()).unwrap()))
        .collect();
    if vals != [-1, 2, -3].map(Scalar::from_int) {
        return Err(format!("point-base values {vals:?}"));
    }
    let t = start.elapsed();
    if t > Duration::from_secs(60) {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("{} report kinds exact, point-base (-1, 2, -3), {:.1} s", names.len(), t.as_secs_f64()))
}

fn criterion_7() -> Outcome {
    let a = tangent(3);
    let coframe = Coframe::standard(&a, &cfg());
    let pi = a.top_vector().scale(&Scalar::exp(&Scalar::coord(0)));
    let r = elw::compare_theorem(&a, &pi, &coframe, false, &cfg()).map_err(|e| e.to_string())?;
    exact(&r, "exp volume")?;
    let factor = r.values.iter().find(|(k, _)| k == "factor").map(|(_, v)| v.clone());
    if factor.as_deref() != Some("3") {
        return Err(format!("factor {factor:?}"));
    }
    let mut ns = NambuStructure::new(&a, pi, false).unwrap();
    ns.verify(&a, &cfg());
    let l = LeibnizAlgebroid::new(&a, &ns).unwrap();
    exact(&elw::lemma_check(&l, &coframe, &cfg()).map_err(|e| e.to_string())?, "lemma")?;
    let r = elw::compare_theorem(&a, &a.top_vector(), &coframe, false, &cfg()).map_err(|e| e.to_string())?;
    exact(&r, "volume tensor")?;
    let both = r.values.iter().any(|(k, v)| k == "factor" && v == "both sides vanish");
    if !both {
        return Err("volume tensor sides do not both vanish".into());
    }
    Ok("factor 3, lemma parts 1 and 2, volume tensor both sides zero".into())
}

fn criterion_8() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_nambu");
    for e in EXAMPLES {
        let out = Command::new(bin).args(["verify", "--suite", "all", e.name]).output().map_err(|e| e.to_string())?;
        if out.status.code() != Some(0) {
            return Err(format!("{} exited with {:?}", e.name, out.status.code()));
        }
    }
    let args = ["verify", "--suite", "all", "--json", "--seed", "42", "pointalg4"];
    let first = Command::new(bin).args(args).output().map_err(|e| e.to_string())?.stdout;
    let second = Command::new(bin).args(args).output().map_err(|e| e.to_string())?.stdout;
    if first != second || first.is_empty() {
        return Err("JSON output differs between runs".into());
    }
    serde_json::from_slice::<serde_json::Value>(&first).map_err(|e| e.to_string())?;
    Ok(format!("{} models exit 0; JSON byte-identical under a fixed seed", EXAMPLES.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("Cartan suite", criterion_1),
        ("divergence identity and closed form", criterion_2),
        ("Nambu checker", criterion_3),
        ("definition equivalence", criterion_4),
        ("Leibniz suite", criterion_5),
        ("modular suite", criterion_6),
        ("ELW comparison", criterion_7),
        ("CLI", criterion_8),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
