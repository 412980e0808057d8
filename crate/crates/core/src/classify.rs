//! Classification evidence on a catalog of nilpotent Lie algebras: contact
//! existence by exact polynomial identity testing, constructive CCY search
//! over a fixed ansatz table, and a necessary-condition filter for CCY
//! nonexistence at a given contact form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algdsl::{parse_algebra, serialize_algebra};
use crate::cealg::{covector, BettiTable, LieAlgebra};
use crate::error::{Error, Result};
use crate::exterior::{Blade, ComplexKForm, Endo, KForm};
use crate::linalg::Matrix;
use num_traits::Zero;

use crate::poly::MultiPoly;
use crate::presets::product_form;
use crate::scalar::Scalar;
use crate::structures::{c_n, check_contact, verify_ccy, Normalization};

/// Coefficient of the volume form in `α ∧ (dα)^n` for `α = Σ a_i e^i`.
pub fn contact_existence_polynomial<T: Scalar>(alg: &LieAlgebra<T>) -> Result<MultiPoly<T>> {
    let dim = alg.dim();
    if dim.is_multiple_of(2) {
        return Err(Error::Invalid(format!(
            "contact forms need odd dimension, got {dim}"
        )));
    }
    let symbolic = alg.map(|c| MultiPoly::constant(c.clone()));
    let vars: Vec<MultiPoly<T>> = (1..=dim).map(MultiPoly::var).collect();
    let alpha = covector(&vars);
    let dalpha = symbolic.differential(&alpha);
    Ok(alpha.wedge(&dalpha.power(dim / 2)).top_coefficient())
}

#[derive(Clone, Debug, PartialEq)]
pub enum FilterVerdict<T> {
    /// No closed `γ` with `γ ∧ dα = 0` has `γ ∧ γ ∧ α` of the sign forced on
    /// `Re ε`, so no invariant CCY structure has this contact form.
    Obstructed,
    /// `γ` is such a form; `value` is its volume coefficient.
    Inconclusive { witness: KForm<T>, value: T },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FilterReport<T> {
    pub verdict: FilterVerdict<T>,
    /// Basis of `W = {γ ∈ Λ^n : dγ = 0, γ ∧ dα = 0}`.
    pub space: Vec<KForm<T>>,
    /// `q(c) = vol(γ(c) ∧ γ(c) ∧ α)` in the coordinates `c` of `W`.
    pub quadratic: MultiPoly<T>,
    /// Sign of `q(Re ε)` for any CCY `ε`: that of `c_n · vol(κ^n ∧ α)`.
    pub sign: i8,
}

impl<T: Scalar> FilterReport<T> {
    pub fn is_obstructed(&self) -> bool {
        matches!(self.verdict, FilterVerdict::Obstructed)
    }
}

/// Exact necessary-condition filter at a fixed contact form. Defined for
/// `dim = 2n + 1` with `n` even; for odd `n`, `γ ∧ γ` vanishes identically.
///
/// A CCY `ε` has `ε ∧ ε = 0`, so `Re ε ∧ Re ε = ½ Re(ε ∧ ε̄)`, a positive
/// multiple of `c_n κ^n`. Hence `Re ε ∈ W` and `q(Re ε)` has a known sign.
pub fn ccy_obstruction_filter<T: Scalar>(
    alg: &LieAlgebra<T>,
    alpha: &KForm<T>,
) -> Result<FilterReport<T>> {
    let contact = check_contact(alg, alpha)?;
    let (dim, n) = (alg.dim(), contact.n());
    if n % 2 == 1 {
        return Err(Error::Unsupported(format!(
            "the filter needs dim = 2n + 1 with n even, got n = {n}"
        )));
    }
    let dalpha = contact.dalpha();
    let blades = Blade::all(dim, n);
    let targets_d = Blade::all(dim, n + 1);
    let targets_w = if n + 2 <= dim {
        Blade::all(dim, n + 2)
    } else {
        Vec::new()
    };
    let columns: Vec<Vec<T>> = blades
        .iter()
        .map(|b| {
            let f = KForm::basis(dim, &b.indices());
            let df = alg.differential(&f);
            let fw = f.wedge(&dalpha);
            targets_d
                .iter()
                .map(|t| df.coeff_blade(*t))
                .chain(targets_w.iter().map(|t| fw.coeff_blade(*t)))
                .collect()
        })
        .collect();
    let system = Matrix::from_columns(&columns);
    let space: Vec<KForm<T>> = system
        .nullspace()
        .into_iter()
        .map(|v| combine(&blades, dim, n, &v))
        .collect();
    let m = space.len();
    let b = Matrix::from_fn(m, m, |i, j| {
        space[i].wedge(&space[j]).wedge(alpha).top_coefficient()
    });
    let mut quadratic = MultiPoly::zero();
    for i in 0..m {
        for j in 0..m {
            quadratic =
                quadratic + (MultiPoly::<T>::var(i + 1) * MultiPoly::var(j + 1)).scale(&b[(i, j)]);
        }
    }
    let volume = contact.kappa().power(n).wedge(alpha).top_coefficient() * c_n::<T>(n).re;
    let sign: i8 = if volume.is_positive() { 1 } else { -1 };
    let verdict = match witness(&space, &b, sign) {
        Some((witness, value)) => FilterVerdict::Inconclusive { witness, value },
        None => FilterVerdict::Obstructed,
    };
    Ok(FilterReport {
        verdict,
        space,
        quadratic,
        sign,
    })
}

fn combine<T: Scalar>(blades: &[Blade], dim: usize, n: usize, v: &[T]) -> KForm<T> {
    blades
        .iter()
        .zip(v)
        .fold(KForm::zero(dim, n), |acc, (b, c)| {
            acc + KForm::basis(dim, &b.indices()).scale(c.clone())
        })
}

/// A `γ ∈ W` with `sign · q(γ) > 0`. Tries `w_i ± w_j` over the first
/// off-diagonal pair with `B_ij ≠ 0`, then single `w_i`, then diagonalizes.
fn witness<T: Scalar>(space: &[KForm<T>], b: &Matrix<T>, sign: i8) -> Option<(KForm<T>, T)> {
    let m = space.len();
    let good = |v: &T| {
        if sign > 0 {
            v.is_positive()
        } else {
            v.is_negative()
        }
    };
    let two = T::from_int(2);
    if let Some((i, j)) = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .find(|&(i, j)| !b[(i, j)].is_zero())
    {
        let bij = b[(i, j)].clone();
        let diag = b[(i, i)].clone() + b[(j, j)].clone();
        for s in [T::one(), -T::one()] {
            let value = diag.clone() + two.clone() * s.clone() * bij.clone();
            if good(&value) {
                return Some((space[i].clone() + space[j].scale(s), value));
            }
        }
    }
    if let Some(i) = (0..m).find(|&i| good(&b[(i, i)])) {
        return Some((space[i].clone(), b[(i, i)].clone()));
    }
    let (p, d) = congruence_diagonal(b);
    let k = (0..m).find(|&k| good(&d[k]))?;
    let gamma = (0..m).fold(KForm::zero(space[0].dim(), space[0].degree()), |acc, i| {
        acc + space[i].scale(p[(i, k)].clone())
    });
    Some((gamma, d[k].clone()))
}

/// `P` and `D` with `Pᵀ B P = diag(D)`, by symmetric elimination.
fn congruence_diagonal<T: Scalar>(b: &Matrix<T>) -> (Matrix<T>, Vec<T>) {
    let m = b.rows();
    let mut a = b.clone();
    let mut p: Matrix<T> = Matrix::identity(m);
    let add = |a: &mut Matrix<T>, p: &mut Matrix<T>, dst: usize, src: usize, f: T| {
        for r in 0..m {
            let v = a[(r, src)].clone() * f.clone();
            a[(r, dst)] = a[(r, dst)].clone() + v;
            let v = p[(r, src)].clone() * f.clone();
            p[(r, dst)] = p[(r, dst)].clone() + v;
        }
        for c in 0..m {
            let v = a[(src, c)].clone() * f.clone();
            a[(dst, c)] = a[(dst, c)].clone() + v;
        }
    };
    for k in 0..m {
        if a[(k, k)].is_zero() {
            if let Some(j) = (k + 1..m).find(|&j| !a[(j, j)].is_zero()) {
                for r in 0..m {
                    let (x, y) = (a[(r, k)].clone(), a[(r, j)].clone());
                    a[(r, k)] = y;
                    a[(r, j)] = x;
                    let (x, y) = (p[(r, k)].clone(), p[(r, j)].clone());
                    p[(r, k)] = y;
                    p[(r, j)] = x;
                }
                for c in 0..m {
                    let (x, y) = (a[(k, c)].clone(), a[(j, c)].clone());
                    a[(k, c)] = y;
                    a[(j, c)] = x;
                }
            } else if let Some(j) = (k + 1..m).find(|&j| !a[(k, j)].is_zero()) {
                add(&mut a, &mut p, k, j, T::one());
            } else {
                continue;
            }
        }
        for i in k + 1..m {
            if !a[(i, k)].is_zero() {
                let f = -(a[(i, k)].clone() / a[(k, k)].clone());
                add(&mut a, &mut p, i, k, f);
            }
        }
    }
    let d = (0..m).map(|k| a[(k, k)].clone()).collect();
    (p, d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub spec: String,
    #[serde(default)]
    pub notes: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// Every entry must parse and satisfy Jacobi.
    pub fn new(entries: Vec<CatalogEntry>) -> Result<Self> {
        for e in &entries {
            parse_algebra::<crate::Rational>(&e.spec)
                .map_err(|err| Error::Invalid(format!("catalog entry {:?}: {err}", e.name)))?;
        }
        Ok(Catalog { entries })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let entries: Vec<CatalogEntry> =
            serde_json::from_str(text).map_err(|e| Error::parse(e.column(), e.to_string()))?;
        Catalog::new(entries)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("serializable")
    }

    /// The three contact 5-dimensional algebras plus two non-contact controls.
    pub fn builtin() -> Self {
        let e = |name: &str, spec: &str, notes: &str| CatalogEntry {
            name: name.into(),
            spec: spec.into(),
            notes: notes.into(),
        };
        Catalog {
            entries: vec![
                e("L5,6", "(0,0,12,13,14+23)", "contact, filiform"),
                e("L5,5", "(0,0,0,12,13+24)", "contact"),
                e("h5", "(0,0,0,0,12+34)", "contact, 5-dimensional Heisenberg"),
                e("h3+R2", "(0,0,0,0,12)", "no contact form"),
                e("R5", "(0,0,0,0,0)", "abelian, no contact form"),
            ],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One row of the ansatz table: `α = 2e^{dim}`, `J` from pairs, `ε = Π (e^a + i e^b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ansatz<T> {
    pub name: String,
    pub alpha: KForm<T>,
    pub j: Endo<T>,
    pub epsilon: ComplexKForm<T>,
}

/// Pairs `(2k−1, 2k)`, and pairs read off the terms of `d e^{dim}` when those
/// form a perfect matching of `1..dim−1`; each in both orientations.
pub fn ansatz_table<T: Scalar>(alg: &LieAlgebra<T>) -> Vec<Ansatz<T>> {
    let dim = alg.dim();
    if dim.is_multiple_of(2) {
        return Vec::new();
    }
    let mut pair_sets: Vec<(String, Vec<(usize, usize)>)> = vec![(
        "standard pairs".into(),
        (1..=dim / 2).map(|k| (2 * k - 1, 2 * k)).collect(),
    )];
    let de = alg.d_generator(dim);
    let adapted: Vec<(usize, usize)> = de
        .terms()
        .map(|(b, _)| {
            let ix = b.indices();
            (ix[0], ix[1])
        })
        .collect();
    let mut seen = vec![false; dim];
    let matching = adapted.len() == dim / 2
        && adapted.iter().all(|&(a, b)| {
            let fresh = !seen[a - 1] && !seen[b - 1] && b < dim;
            seen[a - 1] = true;
            seen[b - 1] = true;
            fresh
        });
    if matching && adapted != pair_sets[0].1 {
        pair_sets.push(("adapted pairs".into(), adapted));
    }
    let mut table = Vec::new();
    for (name, pairs) in pair_sets {
        let swapped: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (b, a)).collect();
        for (suffix, p) in [("", pairs), (" (reversed)", swapped)] {
            if let Ok(j) = Endo::from_pairs(dim, &p) {
                table.push(Ansatz {
                    name: format!("{name}{suffix}"),
                    alpha: KForm::generator(dim, dim).scale(T::from_int(2)),
                    j,
                    epsilon: product_form(dim, &p),
                });
            }
        }
    }
    table
}

/// Deterministic sample contact forms, then `random` seeded draws with
/// numerators in `−3..=3` and denominators in `1..=3`.
pub fn sample_alphas<T: Scalar>(dim: usize, random: usize, seed: u64) -> Vec<KForm<T>> {
    let top = KForm::generator(dim, dim);
    let mut out = vec![top.clone(), top.scale(T::from_int(2))];
    if dim > 1 {
        out.push(top.clone() + KForm::generator(dim, 1));
        out.push(top.clone() - KForm::generator(dim, 2).scale(T::from_ratio(1, 2)));
        let all: Vec<T> = (1..=dim).map(|i| T::from_int(i as i64)).collect();
        out.push(covector(&all));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let coeffs: Vec<T> = (0..dim)
            .map(|_| T::from_ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3)))
            .collect();
        out.push(covector(&coeffs));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum SampleOutcome<T> {
    NotContact,
    Filter(FilterReport<T>),
    Unsupported(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleResult<T> {
    pub alpha: KForm<T>,
    pub outcome: SampleOutcome<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Summary {
    NoContact,
    ContactCcyNotFound,
    CcyVerified,
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Summary::NoContact => "no contact",
            Summary::ContactCcyNotFound => "contact, CCY not found",
            Summary::CcyVerified => "CCY verified",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntryReport<T> {
    pub entry: CatalogEntry,
    pub canonical_spec: String,
    pub betti: BettiTable,
    /// `None` in even dimension.
    pub contact_polynomial: Option<MultiPoly<T>>,
    pub samples: Vec<SampleResult<T>>,
    /// Ansatz rows tried, with the first failing clause for rejected ones.
    pub attempts: Vec<(String, Option<String>)>,
    pub verified: Option<Ansatz<T>>,
    /// Filter at the verified `α`; must not be `Obstructed`.
    pub soundness: Option<FilterReport<T>>,
    pub summary: Summary,
}

impl<T: Scalar> EntryReport<T> {
    pub fn has_contact(&self) -> bool {
        self.contact_polynomial
            .as_ref()
            .is_some_and(|p| !p.is_zero())
    }

    pub fn filter_sound(&self) -> bool {
        self.soundness.as_ref().is_none_or(|f| !f.is_obstructed())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub random_samples: usize,
    pub seed: u64,
    pub jobs: usize,
    pub normalization: Normalization,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            random_samples: 8,
            seed: 0,
            jobs: 1,
            normalization: Normalization::Standard,
        }
    }
}

pub fn classify_entry<T: Scalar>(
    entry: &CatalogEntry,
    opts: &ClassifyOptions,
) -> Result<EntryReport<T>> {
    let alg: LieAlgebra<T> = parse_algebra(&entry.spec)?;
    let dim = alg.dim();
    let betti = alg.betti_numbers();
    let contact_polynomial = contact_existence_polynomial(&alg).ok();
    let mut report = EntryReport {
        entry: entry.clone(),
        canonical_spec: serialize_algebra(&alg),
        betti,
        contact_polynomial,
        samples: Vec::new(),
        attempts: Vec::new(),
        verified: None,
        soundness: None,
        summary: Summary::NoContact,
    };
    if !report.has_contact() {
        return Ok(report);
    }
    report.summary = Summary::ContactCcyNotFound;
    for alpha in sample_alphas::<T>(dim, opts.random_samples, opts.seed) {
        let outcome = match ccy_obstruction_filter(&alg, &alpha) {
            Ok(f) => SampleOutcome::Filter(f),
            Err(Error::Check(_)) => SampleOutcome::NotContact,
            Err(Error::Unsupported(m)) => SampleOutcome::Unsupported(m),
            Err(e) => return Err(e),
        };
        report.samples.push(SampleResult { alpha, outcome });
    }
    for a in ansatz_table(&alg) {
        match verify_ccy(&alg, &a.alpha, &a.j, &a.epsilon, opts.normalization) {
            Ok(_) => {
                report.attempts.push((a.name.clone(), None));
                report.soundness = match ccy_obstruction_filter(&alg, &a.alpha) {
                    Ok(f) => Some(f),
                    Err(Error::Unsupported(_)) => None,
                    Err(e) => return Err(e),
                };
                report.verified = Some(a);
                report.summary = Summary::CcyVerified;
                break;
            }
            Err(Error::Check(f)) => report
                .attempts
                .push((a.name.clone(), Some(format!("{}: {}", f.kind, f.clause)))),
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

/// Entries run in parallel on up to `jobs` threads; output order follows the catalog.
pub fn classify_catalog<T: Scalar>(
    catalog: &Catalog,
    opts: &ClassifyOptions,
) -> Result<Vec<EntryReport<T>>> {
    let jobs = opts.jobs.max(1);
    let n = catalog.entries.len();
    let mut slots: Vec<Option<Result<EntryReport<T>>>> = (0..n).map(|_| None).collect();
    std::thread::scope(|s| {
        for (w, chunk) in slots.chunks_mut(n.div_ceil(jobs).max(1)).enumerate() {
            let start = w * n.div_ceil(jobs).max(1);
            let entries = &catalog.entries;
            s.spawn(move || {
                for (k, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(classify_entry(&entries[start + k], opts));
                }
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every slot filled"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algdsl::parse_real_form;
    use crate::scalar::Rational;

    type Q = Rational;

    fn alg(s: &str) -> LieAlgebra<Q> {
        parse_algebra(s).unwrap()
    }

    #[test]
    fn contact_polynomials() {
        assert_eq!(
            contact_existence_polynomial(&alg("(0,0,0,0,12+34)"))
                .unwrap()
                .to_string(),
            "2*a5^3"
        );
        assert_eq!(
            contact_existence_polynomial(&alg("(0,0,12,13,14+23)"))
                .unwrap()
                .to_string(),
            "2*a5^3"
        );
        assert!(contact_existence_polynomial(&alg("(0,0,0,0,12)"))
            .unwrap()
            .is_zero());
        assert!(contact_existence_polynomial(&alg("(0,0,0,0,0)"))
            .unwrap()
            .is_zero());
        assert!(contact_existence_polynomial(&alg("(0,0,0,0)")).is_err());
    }

    #[test]
    fn filter_examples() {
        let g = alg("(0,0,0,0,12+34)");
        let f = ccy_obstruction_filter(&g, &parse_real_form("2*e5", 5).unwrap()).unwrap();
        match &f.verdict {
            FilterVerdict::Inconclusive { witness, value } => {
                assert_eq!(witness.to_string(), "e13 - e24");
                assert_eq!(*value, Q::from_int(4));
            }
            v => panic!("{v:?}"),
        }
        let h = alg("(0,0,0,0,12)");
        assert!(ccy_obstruction_filter(&h, &parse_real_form("e5", 5).unwrap()).is_err());
        let f = ccy_obstruction_filter(
            &alg("(0,0,12,13,14+23)"),
            &parse_real_form("2*e5", 5).unwrap(),
        )
        .unwrap();
        assert!(f.is_obstructed());
        assert_eq!(
            (f.sign, f.quadratic.render("c")),
            (1, "-4*c3^2".to_string())
        );
        let f = ccy_obstruction_filter(
            &alg("(0,0,0,12,13+24)"),
            &parse_real_form("2*e5", 5).unwrap(),
        )
        .unwrap();
        assert_eq!(f.sign, -1);
        match f.verdict {
            FilterVerdict::Inconclusive { value, .. } => assert!(value < Q::from_int(0)),
            v => panic!("{v:?}"),
        }
        let h3 = alg("(0,0,12)");
        assert!(matches!(
            ccy_obstruction_filter(&h3, &parse_real_form("e3", 3).unwrap()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn congruence_diagonalizes() {
        let rows = [[0, 1, 2], [1, 0, -3], [2, -3, 0]];
        let b = Matrix::from_fn(3, 3, |i, j| Q::from_int(rows[i][j]));
        let (p, d) = congruence_diagonal(&b);
        let dd = p.transpose().mul(&b).mul(&p);
        assert_eq!(
            dd,
            Matrix::from_fn(3, 3, |i, j| if i == j {
                d[i].clone()
            } else {
                Q::from_int(0)
            })
        );
        assert!(p.det() != Q::from_int(0));
        let space: Vec<KForm<Q>> = (1..=3).map(|i| KForm::generator(3, i)).collect();
        let neg = Matrix::from_fn(2, 2, |i, j| Q::from_int([[-1, 11], [11, -100]][i][j]));
        let (w, v) = witness(&space[..2], &neg, 1).unwrap();
        assert!(v > Q::from_int(0), "{w} {v}");
        assert!(witness(&space[..2], &neg.scale(&Q::from_int(0)), 1).is_none());
    }

    #[test]
    fn builtin_catalog() {
        let cat = Catalog::builtin();
        assert_eq!(Catalog::from_json(&cat.to_json()).unwrap(), cat);
        let reps = classify_catalog::<Q>(
            &cat,
            &ClassifyOptions {
                jobs: 3,
                ..Default::default()
            },
        )
        .unwrap();
        let contact: Vec<bool> = reps.iter().map(|r| r.has_contact()).collect();
        assert_eq!(contact, [true, true, true, false, false]);
        let verified: Vec<bool> = reps
            .iter()
            .map(|r| r.summary == Summary::CcyVerified)
            .collect();
        assert_eq!(verified, [false, false, true, false, false]);
        assert!(reps.iter().all(|r| r.filter_sound()));
        for r in &reps {
            assert!(r.betti.satisfies_poincare_duality());
            assert_eq!(r.betti.euler_characteristic(), 0);
        }
        assert!(
            classify_catalog::<Q>(&Catalog::default(), &Default::default())
                .unwrap()
                .is_empty()
        );
        assert!(Catalog::from_json(r#"[{"name":"bad","spec":"(34,0,0,12)"}]"#).is_err());
    }
}
