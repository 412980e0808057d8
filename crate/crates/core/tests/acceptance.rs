mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nilgeo::algdsl::{
    parse_algebra, parse_complex_form, parse_endo, parse_real_form, parse_vector,
};
use nilgeo::classify::{
    ccy_obstruction_filter, classify_catalog, contact_existence_polynomial, Catalog,
    ClassifyOptions, Summary,
};
use nilgeo::curvature::{check_alpha_einstein, ricci_scalar, transverse_ricci};
use nilgeo::deform::{kernel_report, reference_operator, Stencil};
use nilgeo::error::{Error, FailureKind};
use nilgeo::exterior::{ComplexKForm, Vector};
use nilgeo::legendrian::{
    check_special_legendrian, comass_probe, comass_sample, extension_obstruction, FamilySpec,
    LegendrianVerdict, Subalgebra,
};
use nilgeo::presets::{heisenberg_ccy, kodaira_thurston, CcyData};
use nilgeo::scalar::Scalar;
use nilgeo::structures::{
    check_hypo, check_r_contact_ccy, hypo_from_ccy, verify_ccy, CcyStructure, Normalization,
    HYPO_D_OMEGA2_ALPHA,
};
use nilgeo::{QAlgebra, Rational};
use proptest::test_runner::{Config, TestCaseError, TestRunner};

type Q = Rational;
type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn q(n: i64) -> Q {
    Q::from_int(n)
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn data(alg: &str, alpha: &str, j: &str, eps: &str) -> CcyData<Q> {
    let algebra: QAlgebra = parse_algebra(alg).unwrap();
    let n = algebra.dim();
    CcyData {
        alpha: parse_real_form(alpha, n).unwrap(),
        j: parse_endo(j, n).unwrap(),
        epsilon: parse_complex_form(eps, n).unwrap(),
        algebra,
    }
}

fn h3() -> CcyData<Q> {
    data("(0,0,12)", "2*e3", "pairs:(1,2)", "e1 + i*e2")
}

fn h5() -> CcyData<Q> {
    data(
        "(0,0,0,0,12+34)",
        "2*e5",
        "pairs:(1,2),(3,4)",
        "(e1+i*e2)^(e3+i*e4)",
    )
}

fn h7() -> CcyData<Q> {
    data(
        "(0,0,0,0,0,0,12+34+56)",
        "2*e7",
        "pairs:(1,2),(3,4),(5,6)",
        "(e1+i*e2)^(e3+i*e4)^(e5+i*e6)",
    )
}

fn verified(d: &CcyData<Q>) -> Result<CcyStructure<Q>, String> {
    d.verify(Normalization::Standard).map_err(|e| e.to_string())
}

fn ccy_verification() -> Outcome {
    let mut times = Vec::new();
    for (name, d) in [("h(3)", h3()), ("(0,0,0,0,12+34)", h5()), ("n = 3", h7())] {
        let start = Instant::now();
        verified(&d).map_err(|e| format!("{name}: {e}"))?;
        let t = start.elapsed();
        ensure(t < Duration::from_secs(1), format!("{name} took {t:?}"))?;
        times.push(format!("{name} {:.1} ms", t.as_secs_f64() * 1e3));
    }
    ensure(
        heisenberg_ccy::<Q>(3) == h7(),
        "family preset differs from the n = 3 example",
    )?;
    Ok(times.join(", "))
}

fn normalization_ledger() -> Outcome {
    let d = h5();
    verified(&d)?;
    match d.verify(Normalization::Strict) {
        Err(Error::Check(f)) if f.kind == FailureKind::NotCcy => {
            let factor = f.witness("expected/found").unwrap_or("?");
            ensure(factor == "2", format!("strict factor {factor}"))?;
            Ok(format!(
                "standard passes; strict fails at \"{}\" by factor {factor}",
                f.clause
            ))
        }
        other => Err(format!(
            "strict reading did not fail as expected: {:?}",
            other.map(|_| ())
        )),
    }
}

fn curvature_constants() -> Outcome {
    let mut out = Vec::new();
    for (n, d) in [(1i64, h3()), (2, h5()), (3, h7())] {
        let s = verified(&d)?;
        let g = s.metric();
        let rep = ricci_scalar(s.algebra(), &g).map_err(|e| e.to_string())?;
        let (l, nu) =
            check_alpha_einstein(&rep.ricci, &g, s.contact().alpha()).map_err(|e| e.to_string())?;
        ensure(
            (l.clone(), nu.clone()) == (q(-2), q(2 * n + 2)),
            format!("n = {n}: (lambda, nu) = ({l}, {nu})"),
        )?;
        ensure(
            rep.scalar == q(-2 * n),
            format!("n = {n}: scalar {}", rep.scalar),
        )?;
        let t = transverse_ricci(s.sasakian()).map_err(|e| e.to_string())?;
        ensure(t.is_ricci_flat(), format!("n = {n}: Ric^T = {}", t.ricci))?;
        ensure(
            t.ricci == t.ricci_plus_2g,
            format!("n = {n}: Ric^T computations disagree"),
        )?;
        out.push(format!("n={n}: ({l}, {nu}), s = {}", rep.scalar));
    }
    Ok(out.join("; "))
}

fn betti_obstructions() -> Outcome {
    let b3 = parse_algebra::<Q>("(0,0,12)").unwrap().betti_numbers();
    ensure(b3.0 == [1, 2, 2, 1], format!("h(3): {b3}"))?;
    ensure(b3.get(1) >= 2 && b3.get(2) >= 2, "h(3): odd-n clause fails")?;
    let b5 = parse_algebra::<Q>("(0,0,0,0,12+34)")
        .unwrap()
        .betti_numbers();
    ensure(b5.get(3) == 5, format!("(0,0,0,0,12+34): {b5}"))?;
    for e in Catalog::builtin().entries {
        let b = parse_algebra::<Q>(&e.spec).unwrap().betti_numbers();
        ensure(
            b.satisfies_poincare_duality(),
            format!("{}: duality fails for {b}", e.name),
        )?;
        ensure(
            b.euler_characteristic() == 0,
            format!("{}: euler {}", e.name, b.euler_characteristic()),
        )?;
    }
    Ok(format!("h(3) {b3}, h5 {b5}"))
}

fn classification() -> Outcome {
    let cat = Catalog::builtin();
    let opts = ClassifyOptions {
        random_samples: 16,
        seed: 2024,
        jobs: 4,
        ..Default::default()
    };
    let reps = classify_catalog::<Q>(&cat, &opts).map_err(|e| e.to_string())?;
    let contact: Vec<bool> = reps.iter().map(|r| r.has_contact()).collect();
    ensure(
        contact == [true, true, true, false, false],
        format!("contact verdicts {contact:?}"),
    )?;
    let ccy: Vec<&str> = reps
        .iter()
        .filter(|r| r.summary == Summary::CcyVerified)
        .map(|r| r.entry.spec.as_str())
        .collect();
    ensure(
        ccy == ["(0,0,0,0,12+34)"],
        format!("CCY verified on {ccy:?}"),
    )?;
    ensure(
        reps.iter().all(|r| r.filter_sound()),
        "filter obstructs a verified structure",
    )?;
    let d = h5();
    let f = ccy_obstruction_filter(&d.algebra, &d.alpha).map_err(|e| e.to_string())?;
    ensure(!f.is_obstructed(), "filter obstructs the h5 example")?;
    let polys: Vec<String> = reps
        .iter()
        .map(|r| {
            contact_existence_polynomial(&parse_algebra::<Q>(&r.entry.spec).unwrap())
                .unwrap()
                .to_string()
        })
        .collect();
    Ok(format!("polynomials {polys:?}"))
}

fn legendrian_verdicts() -> Outcome {
    let s3 = verified(&h3())?;
    let s5 = verified(&h5())?;
    let verdict = |s: &CcyStructure<Q>, basis: &str| -> Result<LegendrianVerdict, String> {
        let n = s.algebra().dim();
        let vs: Vec<Vector<Q>> = basis
            .split(';')
            .map(|v| parse_vector(v.trim(), n).unwrap())
            .collect();
        let sub = Subalgebra::new(s.algebra(), vs).map_err(|e| e.to_string())?;
        Ok(check_special_legendrian(&sub, s)
            .map_err(|e| e.to_string())?
            .verdict)
    };
    let a = verdict(&s3, "X1")?;
    let b = verdict(&s3, "X2")?;
    let c = verdict(&s5, "X1; X3")?;
    ensure(
        (a, b, c)
            == (
                LegendrianVerdict::SpecialLegendrian,
                LegendrianVerdict::LegendrianOnly,
                LegendrianVerdict::SpecialLegendrian,
            ),
        format!("{a}, {b}, {c}"),
    )?;
    Ok(format!("{a}, {b}, {c}"))
}

fn calibration_bound() -> Outcome {
    let s = verified(&h5())?;
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let start = Instant::now();
    let sample = comass_sample(&s, 100_000, 7, jobs);
    let probe =
        comass_probe(&s, &[Vector::basis(5, 1), Vector::basis(5, 3)]).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    ensure(
        sample.max <= 1.0 + 1e-9,
        format!("sampled max {}", sample.max),
    )?;
    ensure(probe == q(1), format!("probe {probe}"))?;
    ensure(t < Duration::from_secs(10), format!("took {t:?}"))?;
    Ok(format!(
        "max {:.6} over {} frames (seed 7), probe {probe}, {:.2} s",
        sample.max,
        sample.samples,
        t.as_secs_f64()
    ))
}

fn moduli_dimension() -> Outcome {
    let mut out = Vec::new();
    for n in [8, 16, 64, 256] {
        let start = Instant::now();
        let op = reference_operator::<Q>(n, Stencil::Staggered).map_err(|e| e.to_string())?;
        let (dim, reeb) = kernel_report(&op);
        ensure(
            dim == 1 && reeb,
            format!("N = {n}: kernel {dim}, Reeb direction {reeb}"),
        )?;
        out.push(format!(
            "N={n} ({:.0} ms)",
            start.elapsed().as_secs_f64() * 1e3
        ));
    }
    Ok(format!(
        "kernel 1 spanned by the constant Reeb field at {}",
        out.join(", ")
    ))
}

fn extension_obstruction_check() -> Outcome {
    let base = h3();
    let sub =
        Subalgebra::new(&base.algebra, vec![Vector::basis(3, 1)]).map_err(|e| e.to_string())?;
    let ts = [q(0), Q::from_ratio(1, 3), Q::from_ratio(1, 2), q(1), q(2)];
    let rot = extension_obstruction(
        &sub,
        &FamilySpec::pythagorean(&base, &ts),
        Normalization::Standard,
    )
    .map_err(|e| e.to_string())?;
    for s in &rot {
        ensure(
            s.class_is_zero() == (s.t == q(0)),
            format!("rotation t = {}: pullback {}", s.t, s.pullback),
        )?;
    }
    let cst = extension_obstruction(
        &sub,
        &FamilySpec::constant(&base, &ts),
        Normalization::Standard,
    )
    .map_err(|e| e.to_string())?;
    ensure(
        cst.iter().all(|s| s.class_is_zero()),
        "constant family has a nonzero class",
    )?;
    let classes: Vec<String> = rot
        .iter()
        .map(|s| format!("t={}: {}", s.t, s.pullback))
        .collect();
    Ok(classes.join(", "))
}

fn hypo() -> Outcome {
    let s = verified(&h5())?;
    let (alpha, [w1, w2, w3]) = hypo_from_ccy(&s);
    let good = check_hypo(s.algebra(), &alpha, [&w1, &w2, &w3]).map_err(|e| e.to_string())?;
    ensure(
        good.passed(),
        format!("induced quadruple fails: {:?}", good.first_failure()),
    )?;
    let bad = check_hypo(s.algebra(), &alpha, [&w2, &w1, &w3]).map_err(|e| e.to_string())?;
    let c = bad.clause(HYPO_D_OMEGA2_ALPHA).ok_or("missing clause")?;
    ensure(!c.passed, "permuted quadruple passes d(omega_2^alpha) = 0")?;
    Ok(format!(
        "permuted quadruple fails \"{}\" with {}",
        c.name, c.witness[0].1
    ))
}

fn r_contact() -> Outcome {
    kodaira_thurston::<Q>()
        .verify(Normalization::Standard)
        .map_err(|e| e.to_string())?;
    for d in [h3(), h5()] {
        let a = verified(&d)?;
        let b = check_r_contact_ccy(
            &d.algebra,
            std::slice::from_ref(&d.alpha),
            &d.j,
            &d.epsilon,
            Normalization::Standard,
        )
        .map_err(|e| e.to_string())?;
        let all = a.all_clauses();
        for c in b.all_clauses() {
            ensure(
                all.contains(&c),
                format!("r = 1 clause {:?} differs from the CCY check", c.name),
            )?;
        }
        let twice = ComplexKForm::new(d.epsilon.re.scale(q(2)), d.epsilon.im.scale(q(2))).unwrap();
        let fa = verify_ccy(&d.algebra, &d.alpha, &d.j, &twice, Normalization::Standard);
        let fb = check_r_contact_ccy(
            &d.algebra,
            std::slice::from_ref(&d.alpha),
            &d.j,
            &twice,
            Normalization::Standard,
        );
        match (fa, fb) {
            (Err(Error::Check(x)), Err(Error::Check(y))) => ensure(
                (&x.clause, &x.witness) == (&y.clause, &y.witness),
                "failures differ",
            )?,
            _ => return Err("2*eps was not rejected by both checks".into()),
        }
    }
    Ok("Kodaira-Thurston passes; r = 1 clauses and failures match the CCY check".into())
}

fn property_suites() -> Outcome {
    fn run<S: proptest::strategy::Strategy>(
        name: &str,
        s: S,
        f: fn(S::Value) -> bool,
    ) -> Result<String, String>
    where
        S::Value: Clone + std::fmt::Debug,
    {
        let mut runner = TestRunner::new(Config {
            cases: 1000,
            failure_persistence: None,
            ..Config::default()
        });
        runner
            .run(&s, |x| {
                if f(x) {
                    Ok(())
                } else {
                    Err(TestCaseError::fail("identity fails"))
                }
            })
            .map_err(|e| format!("{name}: {e}"))?;
        Ok(name.to_string())
    }
    let names = [
        run("d^2 = 0", common::d_squared_input(), common::d_squared)?,
        run("wedge laws", common::wedge_input(), common::wedge_laws)?,
        run(
            "contraction antiderivation",
            common::contract_input(),
            common::antiderivation,
        )?,
        run("** sign", common::star_input(), common::star_sign)?,
        run(
            "Koszul torsion/metric",
            common::metric_input(10),
            common::koszul,
        )?,
        run(
            "Ricci symmetry",
            common::metric_input(8),
            common::ricci_symmetric,
        )?,
        run("first Bianchi", common::metric_input(8), common::bianchi)?,
    ];
    Ok(format!("1000 trials each: {}", names.join(", ")))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("CCY verification", ccy_verification),
        ("normalization ledger", normalization_ledger),
        ("curvature constants", curvature_constants),
        ("Betti obstructions", betti_obstructions),
        ("classification", classification),
        ("special Legendrian", legendrian_verdicts),
        ("calibration bound", calibration_bound),
        ("moduli dimension", moduli_dimension),
        ("extension obstruction", extension_obstruction_check),
        ("Hypo", hypo),
        ("r-contact CY", r_contact),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
