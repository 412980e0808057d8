use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nilgeo::algdsl::{
    parse_algebra, parse_complex_form, parse_endo, parse_metric, parse_real_form, parse_vector,
};
use nilgeo::classify::{
    ccy_obstruction_filter, classify_catalog, Catalog, ClassifyOptions, FilterVerdict,
    SampleOutcome,
};
use nilgeo::curvature::{check_alpha_einstein, levi_civita, ricci_scalar, transverse_ricci};
use nilgeo::deform::{assemble_operator, kernel_report, reduce, CircleGrid, Stencil};
use nilgeo::exterior::{KForm, Vector};
use nilgeo::legendrian::{
    check_special_legendrian, check_special_legendrian_r, comass_probe, comass_sample,
    extension_obstruction, FamilySpec, LegendrianVerdict, Subalgebra,
};
use nilgeo::presets::{heisenberg_ccy, CcyData};
use nilgeo::report::{Approx, CheckResult, Report};
use nilgeo::structures::{
    check_contact, check_hypo, check_r_contact_ccy, check_sasakian, hypo_from_ccy, CcyStructure,
    Normalization,
};
use nilgeo::{Error, QAlgebra, Rational, Result};

#[derive(Parser)]
#[command(
    name = "nilgeo",
    version,
    about = "Exact checks for invariant contact Calabi-Yau geometry"
)]
struct Cli {
    /// Print a human-readable summary instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// JSON object of flag values; explicit flags take precedence.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Lie algebra, e.g. "(0,0,12)".
    #[arg(long)]
    algebra: Option<String>,
}

#[derive(Args, Clone, Default)]
struct Structure {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    alpha: Option<String>,
    /// Almost complex structure on the contact distribution, e.g. "pairs:(1,2)".
    #[arg(long = "J")]
    j: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    /// Normalize without the 1/n! factor.
    #[arg(long = "strict-def31")]
    strict: bool,
}

#[derive(Args, Clone, Default)]
struct Sampling {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Contact condition and Reeb field of --alpha.
    CheckContact(Structure),
    /// Contact, calibration and normality of (--alpha, --J).
    CheckSasakian(Structure),
    /// Full contact Calabi-Yau check including --epsilon.
    CheckCcy(Structure),
    /// Hypo conditions, from explicit --omega forms or derived from the CCY data.
    CheckHypo {
        #[command(flatten)]
        s: Structure,
        #[arg(long)]
        omega1: Option<String>,
        #[arg(long)]
        omega2: Option<String>,
        #[arg(long)]
        omega3: Option<String>,
    },
    /// r-contact Calabi-Yau check for several contact forms.
    CheckRccy {
        #[command(flatten)]
        s: Structure,
        /// Contact forms separated by ';'.
        #[arg(long)]
        alphas: Option<String>,
    },
    /// Betti numbers of the Chevalley-Eilenberg complex.
    Betti(Common),
    /// Levi-Civita, Ricci, alpha-Einstein and transverse Ricci.
    Curvature {
        #[command(flatten)]
        s: Structure,
        #[arg(long)]
        metric: Option<String>,
    },
    /// Legendrian and special Legendrian verdict for a subalgebra.
    Legendrian {
        #[command(flatten)]
        s: Structure,
        #[arg(long)]
        alphas: Option<String>,
        /// Vectors separated by ';', e.g. "X1; X3".
        #[arg(long)]
        basis: Option<String>,
    },
    /// Extension obstruction along a family, or the CCY quadratic filter.
    Obstruction {
        #[command(flatten)]
        s: Structure,
        #[arg(long, value_enum, default_value_t = Kind::Extension)]
        kind: Kind,
        #[arg(long)]
        basis: Option<String>,
        #[arg(long, value_enum, default_value_t = Family::Rotation)]
        family: Family,
        /// Comma-separated parameters of the family.
        #[arg(long)]
        t: Option<String>,
    },
    /// Kernel of the discretized deformation operator on a circle.
    ModuliKernel {
        #[command(flatten)]
        s: Structure,
        #[arg(long = "N", default_value_t = 64)]
        n: usize,
        #[arg(long, value_enum, default_value_t = StencilArg::Staggered)]
        stencil: StencilArg,
        /// Tangent vector of the circle.
        #[arg(long)]
        tangent: Option<String>,
    },
    /// Sampled comass of Re epsilon with an optional exact probe.
    Comass {
        #[command(flatten)]
        s: Structure,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Orthonormal frame for the exact probe, vectors separated by ';'.
        #[arg(long)]
        frame: Option<String>,
    },
    /// Contact, CCY and filter verdicts for a catalog of algebras.
    Classify {
        /// JSON array of {name, spec, notes}; defaults to the builtin catalog.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[command(flatten)]
        sampling: Sampling,
        /// Random sample contact forms per entry.
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long = "strict-def31")]
        strict: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Extension,
    CcyFilter,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Rotation,
    Constant,
}

#[derive(Clone, Copy, ValueEnum)]
enum StencilArg {
    Staggered,
    Central,
}

/// Flag values after merging `--file` and resolving `@path` values.
struct Inputs {
    map: BTreeMap<String, String>,
}

impl Inputs {
    fn load(file: &Option<PathBuf>, flags: Vec<(&str, Option<String>)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        if let Some(path) = file {
            let text = read(path)?;
            let obj: BTreeMap<String, serde_json::Value> = serde_json::from_str(&text)
                .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
            for (k, v) in obj {
                let s = match v {
                    serde_json::Value::String(s) => s,
                    other => other.to_string(),
                };
                map.insert(k, s);
            }
        }
        for (k, v) in flags {
            if let Some(v) = v {
                map.insert(k.to_string(), v);
            }
        }
        for v in map.values_mut() {
            if let Some(path) = v.strip_prefix('@') {
                *v = read(&PathBuf::from(path))?.trim().to_string();
            }
        }
        Ok(Inputs { map })
    }

    fn get(&self, k: &str) -> Option<&str> {
        self.map.get(k).map(String::as_str)
    }

    fn req(&self, k: &str) -> Result<&str> {
        self.get(k)
            .ok_or_else(|| Error::Invalid(format!("missing --{k}")))
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn structure_flags(s: &Structure) -> Vec<(&'static str, Option<String>)> {
    vec![
        ("algebra", s.common.algebra.clone()),
        ("alpha", s.alpha.clone()),
        ("J", s.j.clone()),
        ("epsilon", s.epsilon.clone()),
    ]
}

fn mode(strict: bool, inp: &Inputs) -> Normalization {
    if strict || inp.get("strict-def31").is_some_and(|v| v == "true") {
        Normalization::Strict
    } else {
        Normalization::Standard
    }
}

fn default_seed() -> u64 {
    std::env::var("NILGEO_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(0)
}

fn algebra(inp: &Inputs) -> Result<QAlgebra> {
    parse_algebra(inp.req("algebra")?)
}

fn vectors(text: &str, dim: usize) -> Result<Vec<Vector<Rational>>> {
    text.split(';')
        .map(|v| parse_vector(v.trim(), dim))
        .collect()
}

fn forms(text: &str, dim: usize) -> Result<Vec<KForm<Rational>>> {
    text.split(';')
        .map(|v| parse_real_form(v.trim(), dim))
        .collect()
}

fn ccy_data(inp: &Inputs) -> Result<CcyData<Rational>> {
    let algebra = algebra(inp)?;
    let dim = algebra.dim();
    Ok(CcyData {
        alpha: parse_real_form(inp.req("alpha")?, dim)?,
        j: parse_endo(inp.req("J")?, dim)?,
        epsilon: parse_complex_form(inp.req("epsilon")?, dim)?,
        algebra,
    })
}

fn ccy(inp: &Inputs, m: Normalization) -> Result<CcyStructure<Rational>> {
    ccy_data(inp)?.verify(m)
}

fn run(cli: Cli) -> Report {
    let (name, outcome) = match cli.cmd {
        Cmd::CheckContact(s) => (
            "check-contact",
            Inputs::load(&s.common.file, structure_flags(&s)).and_then(|inp| {
                let alg = algebra(&inp)?;
                let mut r = Report::new("check-contact", inp.map.clone());
                let res = (|| {
                    let c = check_contact(&alg, &parse_real_form(inp.req("alpha")?, alg.dim())?)?;
                    r.extend_clauses(&c.clauses);
                    r.push(
                        CheckResult::pass("contact")
                            .value("R", c.reeb())
                            .value("kappa", c.kappa()),
                    );
                    Ok(())
                })();
                finish(r, res)
            }),
        ),
        Cmd::CheckSasakian(s) => (
            "check-sasakian",
            Inputs::load(&s.common.file, structure_flags(&s)).and_then(|inp| {
                let alg = algebra(&inp)?;
                let mut r = Report::new("check-sasakian", inp.map.clone());
                let res = (|| {
                    let c = check_contact(&alg, &parse_real_form(inp.req("alpha")?, alg.dim())?)?;
                    r.extend_clauses(&c.clauses);
                    let sas = check_sasakian(&c, &parse_endo(inp.req("J")?, alg.dim())?)?;
                    r.extend_clauses(&sas.clauses);
                    r.push(CheckResult::pass("Sasakian").value("g", sas.metric()));
                    Ok(())
                })();
                finish(r, res)
            }),
        ),
        Cmd::CheckCcy(s) => (
            "check-ccy",
            Inputs::load(&s.common.file, structure_flags(&s)).and_then(|inp| {
                let m = mode(s.strict, &inp);
                let mut r = Report::new("check-ccy", inp.map.clone());
                let res = ccy(&inp, m).map(|c| {
                    r.extend_clauses(&c.all_clauses());
                    r.push(
                        CheckResult::pass("CCY")
                            .value("normalization", format!("{m:?}"))
                            .value("g", c.metric()),
                    );
                });
                finish(r, res)
            }),
        ),
        Cmd::CheckHypo {
            s,
            omega1,
            omega2,
            omega3,
        } => {
            let mut flags = structure_flags(&s);
            flags.extend([("omega1", omega1), ("omega2", omega2), ("omega3", omega3)]);
            (
                "check-hypo",
                Inputs::load(&s.common.file, flags).and_then(|inp| {
                    let mut r = Report::new("check-hypo", inp.map.clone());
                    let res = (|| {
                        let alg = algebra(&inp)?;
                        let dim = alg.dim();
                        let (alpha, omegas) = if inp.get("omega1").is_some() {
                            let w = ["omega1", "omega2", "omega3"].map(|k| {
                                inp.req(k).and_then(|t| parse_real_form::<Rational>(t, dim))
                            });
                            let [a, b, c] = w;
                            (parse_real_form(inp.req("alpha")?, dim)?, [a?, b?, c?])
                        } else {
                            let (alpha, w) = hypo_from_ccy(&ccy(&inp, mode(s.strict, &inp))?);
                            for (k, f) in ["omega1", "omega2", "omega3"].iter().zip(&w) {
                                r.input.insert(format!("{k} (derived)"), f.to_string());
                            }
                            (alpha, w)
                        };
                        let rep = check_hypo(&alg, &alpha, [&omegas[0], &omegas[1], &omegas[2]])?;
                        r.extend_clauses(&rep.clauses);
                        Ok(())
                    })();
                    finish(r, res)
                }),
            )
        }
        Cmd::CheckRccy { s, alphas } => {
            let mut flags = structure_flags(&s);
            flags.push(("alphas", alphas));
            (
                "check-rccy",
                Inputs::load(&s.common.file, flags).and_then(|inp| {
                    let mut r = Report::new("check-rccy", inp.map.clone());
                    let res = (|| {
                        let alg = algebra(&inp)?;
                        let dim = alg.dim();
                        let alphas = forms(
                            inp.get("alphas")
                                .or(inp.get("alpha"))
                                .ok_or_else(|| Error::Invalid("missing --alphas".into()))?,
                            dim,
                        )?;
                        let c = check_r_contact_ccy(
                            &alg,
                            &alphas,
                            &parse_endo(inp.req("J")?, dim)?,
                            &parse_complex_form(inp.req("epsilon")?, dim)?,
                            mode(s.strict, &inp),
                        )?;
                        r.extend_clauses(&c.all_clauses());
                        r.push(CheckResult::pass("r-contact CY").value("r", c.contact().r()));
                        Ok(())
                    })();
                    finish(r, res)
                }),
            )
        }
        Cmd::Betti(c) => (
            "betti",
            Inputs::load(&c.file, vec![("algebra", c.algebra.clone())]).and_then(|inp| {
                let mut r = Report::new("betti", inp.map.clone());
                let res = algebra(&inp).map(|alg| betti(&mut r, &alg));
                finish(r, res)
            }),
        ),
        Cmd::Curvature { s, metric } => {
            let mut flags = structure_flags(&s);
            flags.push(("metric", metric));
            (
                "curvature",
                Inputs::load(&s.common.file, flags).and_then(|inp| {
                    let mut r = Report::new("curvature", inp.map.clone());
                    let res = curvature(&mut r, &inp);
                    finish(r, res)
                }),
            )
        }
        Cmd::Legendrian { s, alphas, basis } => {
            let mut flags = structure_flags(&s);
            flags.extend([("alphas", alphas), ("basis", basis)]);
            (
                "legendrian",
                Inputs::load(&s.common.file, flags).and_then(|inp| {
                    let mut r = Report::new("legendrian", inp.map.clone());
                    let res = legendrian(&mut r, &inp, mode(s.strict, &inp));
                    finish(r, res)
                }),
            )
        }
        Cmd::Obstruction {
            s,
            kind,
            basis,
            family,
            t,
        } => {
            let mut flags = structure_flags(&s);
            flags.extend([("basis", basis), ("t", t)]);
            (
                "obstruction",
                Inputs::load(&s.common.file, flags).and_then(|inp| {
                    let mut r = Report::new("obstruction", inp.map.clone());
                    let res = match kind {
                        Kind::CcyFilter => filter(&mut r, &inp),
                        Kind::Extension => extension(&mut r, &inp, family, mode(s.strict, &inp)),
                    };
                    finish(r, res)
                }),
            )
        }
        Cmd::ModuliKernel {
            s,
            n,
            stencil,
            tangent,
        } => {
            let mut flags = structure_flags(&s);
            flags.push(("tangent", tangent));
            (
                "moduli-kernel",
                Inputs::load(&s.common.file, flags).and_then(|mut inp| {
                    inp.map.insert("N".into(), n.to_string());
                    let mut r = Report::new("moduli-kernel", inp.map.clone());
                    let res = moduli(&mut r, &inp, n, stencil, mode(s.strict, &inp));
                    finish(r, res)
                }),
            )
        }
        Cmd::Comass {
            s,
            sampling,
            samples,
            frame,
        } => {
            let mut flags = structure_flags(&s);
            flags.push(("frame", frame));
            (
                "comass",
                Inputs::load(&s.common.file, flags).and_then(|mut inp| {
                    let seed = sampling.seed.unwrap_or_else(default_seed);
                    inp.map.insert("samples".into(), samples.to_string());
                    inp.map.insert("seed".into(), seed.to_string());
                    let mut r = Report::new("comass", inp.map.clone());
                    let res = comass(
                        &mut r,
                        &inp,
                        samples,
                        seed,
                        sampling.jobs,
                        mode(s.strict, &inp),
                    );
                    finish(r, res)
                }),
            )
        }
        Cmd::Classify {
            catalog,
            sampling,
            samples,
            strict,
        } => (
            "classify",
            (|| {
                let seed = sampling.seed.unwrap_or_else(default_seed);
                let mut input = BTreeMap::from([
                    ("samples".to_string(), samples.to_string()),
                    ("seed".to_string(), seed.to_string()),
                ]);
                let cat = match &catalog {
                    Some(p) => {
                        input.insert("catalog".into(), p.display().to_string());
                        Catalog::from_json(&read(p)?)?
                    }
                    None => Catalog::builtin(),
                };
                let mut r = Report::new("classify", input);
                let opts = ClassifyOptions {
                    random_samples: samples,
                    seed,
                    jobs: sampling.jobs,
                    normalization: if strict {
                        Normalization::Strict
                    } else {
                        Normalization::Standard
                    },
                };
                let res = classify_catalog::<Rational>(&cat, &opts).map(|reps| {
                    for e in reps {
                        let mut c = CheckResult::new(
                            e.entry.name.clone(),
                            e.filter_sound(),
                            e.summary.to_string(),
                        )
                        .value("spec", &e.canonical_spec)
                        .value("betti", &e.betti)
                        .value(
                            "contact polynomial",
                            e.contact_polynomial
                                .as_ref()
                                .map_or("undefined (even dimension)".into(), |p| p.to_string()),
                        );
                        for (k, s) in e.samples.iter().enumerate() {
                            let v = match &s.outcome {
                                SampleOutcome::NotContact => "not contact".to_string(),
                                SampleOutcome::Unsupported(m) => format!("unsupported: {m}"),
                                SampleOutcome::Filter(f) => filter_summary(&f.verdict),
                            };
                            c = c.value(
                                format!("sample {k:02}"),
                                format!("alpha = {}: {v}", s.alpha),
                            );
                        }
                        for (a, why) in &e.attempts {
                            c = c
                                .value(format!("ansatz {a}"), why.as_deref().unwrap_or("verified"));
                        }
                        if let Some(a) = &e.verified {
                            c = c
                                .value("ccy alpha", &a.alpha)
                                .value("ccy J", a.j.matrix())
                                .value("ccy epsilon", &a.epsilon);
                        }
                        if let Some(f) = &e.soundness {
                            c = c.value("filter at ccy alpha", filter_summary(&f.verdict));
                        }
                        r.push(c);
                    }
                });
                finish(r, res)
            })(),
        ),
    };
    outcome.unwrap_or_else(|e| {
        let mut r = Report::new(name, BTreeMap::new());
        r.record_error(&e);
        r
    })
}

fn finish(mut r: Report, res: Result<()>) -> Result<Report> {
    if let Err(e) = res {
        r.record_error(&e);
    }
    Ok(r)
}

fn filter_summary(v: &FilterVerdict<Rational>) -> String {
    match v {
        FilterVerdict::Obstructed => "Obstructed".into(),
        FilterVerdict::Inconclusive { witness, value } => {
            format!("Inconclusive (gamma = {witness}, q = {value})")
        }
    }
}

fn betti(r: &mut Report, alg: &QAlgebra) {
    let b = alg.betti_numbers();
    let dim = alg.dim();
    r.push(
        CheckResult::pass("betti numbers")
            .value("b", &b)
            .value("euler characteristic", b.euler_characteristic()),
    );
    r.push(CheckResult::new(
        "Poincare duality",
        b.satisfies_poincare_duality(),
        if b.satisfies_poincare_duality() {
            "pass"
        } else {
            "fail"
        },
    ));
    if dim % 2 == 1 {
        let n = dim / 2;
        let (name, ok) = if n % 2 == 1 {
            (
                format!("b_{n} >= 2 and b_{} >= 2", n + 1),
                b.get(n) >= 2 && b.get(n + 1) >= 2,
            )
        } else {
            (format!("b_{} > 0", n + 1), b.get(n + 1) > 0)
        };
        let c = CheckResult::new(name, ok, if ok { "pass" } else { "CCY obstructed" })
            .witness(format!("b_{n}"), b.get(n))
            .witness(format!("b_{}", n + 1), b.get(n + 1));
        r.push(c);
    }
}

fn curvature(r: &mut Report, inp: &Inputs) -> Result<()> {
    let alg = algebra(inp)?;
    let dim = alg.dim();
    let sas = match (inp.get("alpha"), inp.get("J")) {
        (Some(a), Some(j)) => {
            let c = check_contact(&alg, &parse_real_form(a, dim)?)?;
            Some(check_sasakian(&c, &parse_endo(j, dim)?)?)
        }
        _ => None,
    };
    let g = match (inp.get("metric"), &sas) {
        (Some(m), _) => parse_metric(m, dim)?,
        (None, Some(s)) => s.metric(),
        (None, None) => return Err(Error::Invalid("need --metric, or --alpha with --J".into())),
    };
    let conn = levi_civita(&alg, &g)?;
    let ok = |b: bool| if b { "pass" } else { "fail" };
    let tf = conn.is_torsion_free(&alg);
    r.push(CheckResult::new("torsion-free", tf, ok(tf)));
    let mc = conn.is_metric(&g);
    r.push(CheckResult::new("metric-compatible", mc, ok(mc)));
    let bi = conn.satisfies_bianchi(&alg);
    r.push(CheckResult::new("first Bianchi identity", bi, ok(bi)));
    let rep = ricci_scalar(&alg, &g)?;
    let sym = rep.ricci.is_symmetric();
    r.push(
        CheckResult::new("Ricci symmetric", sym, ok(sym))
            .value("Ric", &rep.ricci)
            .value("scalar", &rep.scalar),
    );
    if let Some(a) = inp.get("alpha") {
        let alpha = parse_real_form(a, dim)?;
        let (l, nu) = check_alpha_einstein(&rep.ricci, &g, &alpha)?;
        r.push(
            CheckResult::pass("alpha-Einstein")
                .value("lambda", l)
                .value("nu", nu),
        );
    }
    if let Some(s) = &sas {
        let t = transverse_ricci(s)?;
        r.push(CheckResult::pass("Ric^T agrees with Ric + 2g on xi").value("Ric^T", &t.ricci));
        let flat = t.is_ricci_flat();
        r.push(CheckResult::new("Ric^T = 0", flat, ok(flat)).value("rho^T", &t.ricci_form));
        r.extend_clauses(&t.parallel);
    }
    Ok(())
}

fn subalgebra(inp: &Inputs, alg: &QAlgebra) -> Result<Subalgebra<Rational>> {
    Subalgebra::new(alg, vectors(inp.req("basis")?, alg.dim())?)
}

fn legendrian(r: &mut Report, inp: &Inputs, m: Normalization) -> Result<()> {
    let rep = if let Some(alphas) = inp.get("alphas") {
        let alg = algebra(inp)?;
        let dim = alg.dim();
        let s = check_r_contact_ccy(
            &alg,
            &forms(alphas, dim)?,
            &parse_endo(inp.req("J")?, dim)?,
            &parse_complex_form(inp.req("epsilon")?, dim)?,
            m,
        )?;
        check_special_legendrian_r(&subalgebra(inp, &alg)?, &s)?
    } else {
        let c = ccy(inp, m)?;
        check_special_legendrian(&subalgebra(inp, c.algebra())?, &c)?
    };
    let special = rep.verdict == LegendrianVerdict::SpecialLegendrian;
    let mut c = CheckResult::new("special Legendrian", special, rep.verdict.to_string())
        .value("integrable", rep.integrable)
        .value("orientation", rep.orientation)
        .value("det gram", &rep.volume_squared)
        .value("calibrated", rep.calibrated)
        .value("pullback dalpha", &rep.dalpha)
        .value("pullback Re eps", &rep.re_epsilon)
        .value("pullback Im eps", &rep.im_epsilon);
    for (k, a) in rep.alpha.iter().enumerate() {
        c = c.value(format!("pullback alpha_{}", k + 1), a);
    }
    r.push(c);
    Ok(())
}

fn filter(r: &mut Report, inp: &Inputs) -> Result<()> {
    let alg = algebra(inp)?;
    let f = ccy_obstruction_filter(&alg, &parse_real_form(inp.req("alpha")?, alg.dim())?)?;
    let mut c = CheckResult::new(
        "ccy filter",
        !f.is_obstructed(),
        if f.is_obstructed() {
            "Obstructed"
        } else {
            "Inconclusive"
        },
    )
    .value("dim W", f.space.len())
    .value("q", f.quadratic.render("c"))
    .value("required sign of q(Re eps)", f.sign);
    for (k, w) in f.space.iter().enumerate() {
        c = c.value(format!("W basis {:02}", k + 1), w);
    }
    if let FilterVerdict::Inconclusive { witness, value } = &f.verdict {
        c = c.witness("gamma", witness).witness("q(gamma)", value);
    }
    r.push(c);
    Ok(())
}

fn extension(r: &mut Report, inp: &Inputs, family: Family, m: Normalization) -> Result<()> {
    let base = ccy_data(inp)?;
    let ts: Vec<Rational> = inp
        .get("t")
        .unwrap_or("0,1/3,1/2,1")
        .split(',')
        .map(|t| parse_real_form::<Rational>(t.trim(), 1).map(|f| f.scalar_value()))
        .collect::<Result<_>>()?;
    let fam = match family {
        Family::Rotation => FamilySpec::pythagorean(&base, &ts),
        Family::Constant => FamilySpec::constant(&base, &ts),
    };
    let sub = subalgebra(inp, &base.algebra)?;
    for s in extension_obstruction(&sub, &fam, m)? {
        let zero = s.class_is_zero();
        let mut c = CheckResult::new(
            format!("[p*Im eps_t] = 0 at t = {}", s.t),
            zero,
            if zero { "class zero" } else { "class nonzero" },
        )
        .value("pullback", &s.pullback);
        if let Some(p) = &s.primitive {
            c = c.value("primitive", p);
        }
        r.push(c);
    }
    Ok(())
}

fn moduli(
    r: &mut Report,
    inp: &Inputs,
    n: usize,
    stencil: StencilArg,
    m: Normalization,
) -> Result<()> {
    let grid = CircleGrid::new(n)?;
    let (c, x) = if inp.get("algebra").is_some() {
        let c = ccy(inp, m)?;
        let x = parse_vector(inp.get("tangent").unwrap_or("X1"), c.algebra().dim())?;
        (c, x)
    } else {
        (
            heisenberg_ccy::<Rational>(1).verify(m)?,
            Vector::basis(3, 1),
        )
    };
    let stencil = match stencil {
        StencilArg::Staggered => Stencil::Staggered,
        StencilArg::Central => Stencil::Central,
    };
    let sys = reduce(&c, &x)?;
    let op = assemble_operator(grid, &c, &x, stencil)?;
    let (dim, reeb) = kernel_report(&op);
    r.push(
        CheckResult::new(
            "kernel dimension = 1",
            dim == 1,
            if dim == 1 { "pass" } else { "fail" },
        )
        .value("kernelDim", dim)
        .value("c", &sys.c)
        .value("k", &sys.k)
        .value("N", n),
    );
    r.push(CheckResult::new(
        "constant Reeb direction in kernel",
        reeb,
        if reeb { "pass" } else { "fail" },
    ));
    Ok(())
}

fn comass(
    r: &mut Report,
    inp: &Inputs,
    samples: usize,
    seed: u64,
    jobs: usize,
    m: Normalization,
) -> Result<()> {
    let c = ccy(inp, m)?;
    let s = comass_sample(&c, samples, seed, jobs);
    let ok = s.max <= 1.0 + 1e-9;
    let mut cr = CheckResult::new(
        "sampled Re eps <= 1 + 1e-9",
        ok,
        if ok { "pass" } else { "fail" },
    )
    .value("samples", s.samples);
    cr.approx = Some(Approx {
        value: format!("{:.12}", s.max),
        seed: s.seed,
    });
    r.push(cr);
    if let Some(f) = inp.get("frame") {
        let v = comass_probe(&c, &vectors(f, c.algebra().dim())?)?;
        r.push(CheckResult::pass("exact probe").value("Re eps(frame)", v));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = cli.text;
    let report = run(cli);
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    let out = if text {
        report.to_string()
    } else {
        format!("{}\n", report.to_json())
    };
    let _ = std::io::stdout().write_all(out.as_bytes());
    ExitCode::from(report.exit_code() as u8)
}
