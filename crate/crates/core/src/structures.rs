//! Contact, calibrated, Sasakian, contact Calabi–Yau, Hypo and r-contact
//! structures on a Lie algebra, verified clause by clause.
//!
//! Every check returns the assembled structure on success and a
//! [`CheckFailure`] naming the failed clause, with exact witnesses, otherwise.
//! Passed clauses are kept on the structure for reporting.

use num_complex::Complex;

use crate::cealg::LieAlgebra;
use crate::error::{ensure_dim, CheckFailure, Error, FailureKind, Result};
use crate::exterior::{ComplexKForm, Endo, KForm, Metric, Vector};
use crate::linalg::Matrix;
use crate::scalar::{factorial, Scalar};

/// One verified (or failed) condition with the values that decided it.
#[derive(Clone, Debug, PartialEq)]
pub struct Clause {
    pub name: String,
    pub passed: bool,
    pub witness: Vec<(String, String)>,
}

impl Clause {
    fn failure(&self, kind: FailureKind) -> CheckFailure {
        let mut f = CheckFailure::new(kind, self.name.clone());
        f.witness = self.witness.clone();
        f
    }
}

struct Log {
    kind: FailureKind,
    clauses: Vec<Clause>,
}

impl Log {
    fn new(kind: FailureKind) -> Self {
        Log {
            kind,
            clauses: Vec::new(),
        }
    }

    fn require(&mut self, name: &str, ok: bool, witness: Vec<(String, String)>) -> Result<()> {
        let c = Clause {
            name: name.to_string(),
            passed: ok,
            witness,
        };
        let out = if ok {
            Ok(())
        } else {
            Err(c.failure(self.kind).into())
        };
        self.clauses.push(c);
        out
    }
}

fn w(name: &str, value: impl std::fmt::Display) -> (String, String) {
    (name.to_string(), value.to_string())
}

/// How `ε∧ε̄` is compared with `κ^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `ε∧ε̄ = c_n κ^n / n!`
    #[default]
    Standard,
    /// `ε∧ε̄ = c_n κ^n`
    Strict,
}

impl Normalization {
    fn clause(self) -> &'static str {
        match self {
            Normalization::Standard => "eps^conj(eps) = c_n kappa^n/n!",
            Normalization::Strict => "eps^conj(eps) = c_n kappa^n",
        }
    }
}

/// `c_n = (−1)^{n(n+1)/2} (2i)^n`.
pub fn c_n<T: Scalar>(n: usize) -> Complex<T> {
    let two = T::from_int(2);
    let mut c = Complex::new(T::one(), T::zero());
    for _ in 0..n {
        c = c * Complex::new(T::zero(), two.clone());
    }
    if (n * (n + 1) / 2) % 2 == 1 {
        c = Complex::new(-c.re, -c.im);
    }
    c
}

fn fmt_complex<T: Scalar>(z: &Complex<T>) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => z.re.to_string(),
        (true, false) => format!("{}*i", z.im),
        (false, false) => {
            if z.im.is_negative() {
                format!("{} - {}*i", z.re, -z.im.clone())
            } else {
                format!("{} + {}*i", z.re, z.im)
            }
        }
    }
}

fn row_matrix<T: Scalar>(forms: &[KForm<T>]) -> Matrix<T> {
    let n = forms[0].dim();
    Matrix::from_fn(forms.len(), n, |a, i| forms[a].coeff(&[i + 1]))
}

/// Basis of `ξ = ∩ ker α_i`.
fn kernel_basis<T: Scalar>(alphas: &[KForm<T>]) -> Vec<Vector<T>> {
    row_matrix(alphas)
        .nullspace()
        .into_iter()
        .map(Vector::new)
        .collect()
}

/// Unique solutions of `α_i(R_j) = δ_ij`, `ι_{R_j} dα = 0`, if any.
fn solve_reeb<T: Scalar>(alphas: &[KForm<T>], dalpha: &KForm<T>) -> Option<Vec<Vector<T>>> {
    let n = dalpha.dim();
    let r = alphas.len();
    let b = dalpha.bilinear_matrix().transpose();
    let mut rows: Vec<Vec<T>> = (0..r).map(|a| row_matrix(alphas).row(a).to_vec()).collect();
    rows.extend((0..n).map(|k| b.row(k).to_vec()));
    let sys = Matrix::from_rows(rows);
    if sys.rank() < n {
        return None;
    }
    (0..r)
        .map(|i| {
            let mut rhs = vec![T::zero(); r + n];
            rhs[i] = T::one();
            sys.solve(&rhs).map(Vector::new)
        })
        .collect()
}

/// Stage shared by contact and r-contact: volume form and Reeb fields.
fn contact_clauses<T: Scalar>(
    log: &mut Log,
    alphas: &[KForm<T>],
    dalpha: &KForm<T>,
    n: usize,
) -> Result<Vec<Vector<T>>> {
    let dim = dalpha.dim();
    let vol = alphas
        .iter()
        .fold(KForm::constant(dim, T::one()), |acc, a| acc.wedge(a))
        .wedge(&dalpha.power(n));
    log.require(
        "volume form nonzero",
        !vol.top_coefficient().is_zero(),
        vec![w("volume", &vol)],
    )?;
    let reebs = solve_reeb(alphas, dalpha);
    let witness = match &reebs {
        Some(rs) => rs
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let name = if rs.len() == 1 {
                    "R".to_string()
                } else {
                    format!("R{}", i + 1)
                };
                (name, r.to_string())
            })
            .collect(),
        None => vec![w("system", "singular")],
    };
    log.require("Reeb field solvable", reebs.is_some(), witness)?;
    Ok(reebs.unwrap())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContactStructure<T> {
    alg: LieAlgebra<T>,
    alpha: KForm<T>,
    reeb: Vector<T>,
    kappa: KForm<T>,
    n: usize,
    pub clauses: Vec<Clause>,
}

impl<T: Scalar> ContactStructure<T> {
    pub fn algebra(&self) -> &LieAlgebra<T> {
        &self.alg
    }

    pub fn alpha(&self) -> &KForm<T> {
        &self.alpha
    }

    pub fn reeb(&self) -> &Vector<T> {
        &self.reeb
    }

    /// `κ = ½ dα`.
    pub fn kappa(&self) -> &KForm<T> {
        &self.kappa
    }

    pub fn dalpha(&self) -> KForm<T> {
        self.kappa.scale(T::from_int(2))
    }

    /// `n` with `dim = 2n + 1`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Basis of `ξ = ker α`.
    pub fn xi_basis(&self) -> Vec<Vector<T>> {
        kernel_basis(std::slice::from_ref(&self.alpha))
    }
}

fn check_one_form<T: Scalar>(alg: &LieAlgebra<T>, f: &KForm<T>) -> Result<()> {
    ensure_dim(alg.dim(), f.dim())?;
    if f.degree() != 1 {
        return Err(Error::Degree(format!(
            "expected a 1-form, got degree {}",
            f.degree()
        )));
    }
    Ok(())
}

/// Verify `α∧(dα)^n ≠ 0` and solve for the Reeb field.
pub fn check_contact<T: Scalar>(
    alg: &LieAlgebra<T>,
    alpha: &KForm<T>,
) -> Result<ContactStructure<T>> {
    check_one_form(alg, alpha)?;
    let dim = alg.dim();
    if dim.is_multiple_of(2) {
        return Err(Error::Invalid(format!(
            "contact forms need odd dimension, got {dim}"
        )));
    }
    let n = dim / 2;
    let dalpha = alg.differential(alpha);
    let mut log = Log::new(FailureKind::NotContact);
    let reeb = contact_clauses(&mut log, std::slice::from_ref(alpha), &dalpha, n)?.remove(0);
    Ok(ContactStructure {
        alg: alg.clone(),
        alpha: alpha.clone(),
        reeb,
        kappa: dalpha.scale(T::from_ratio(1, 2)),
        n,
        clauses: log.clauses,
    })
}

/// Calibration clauses for `J` against `κ`, with Reeb family `reebs`.
/// Returns the matrix of `g_J(X_i, X_j) = κ(X_i, J X_j)`.
fn calibration_clauses<T: Scalar>(
    log: &mut Log,
    alphas: &[KForm<T>],
    reebs: &[Vector<T>],
    kappa: &KForm<T>,
    j: &Endo<T>,
) -> Result<Matrix<T>> {
    let dim = kappa.dim();
    let single = reebs.len() == 1;
    let m = j.matrix();
    for (i, r) in reebs.iter().enumerate() {
        let jr = j.apply(r);
        let name = if single {
            "J(R)".to_string()
        } else {
            format!("J(R{})", i + 1)
        };
        log.require("J(R) = 0", jr.is_zero(), vec![w(&name, &jr)])?;
    }
    let mut target = Matrix::identity(dim).scale(&-T::one());
    for (a, r) in alphas.iter().zip(reebs) {
        let outer = Matrix::from_fn(dim, dim, |i, k| r.get(i + 1) * a.coeff(&[k + 1]));
        target = target.add(&outer);
    }
    let j2 = m.mul(m);
    let witness = match j2.first_difference(&target) {
        None => vec![],
        Some((_, col)) => vec![
            w(&format!("J^2 X{}", col + 1), Vector::new(j2.column(col))),
            w("expected", Vector::new(target.column(col))),
        ],
    };
    let name = if single {
        "J^2 = -I + alpha(x)R"
    } else {
        "J^2 = -I + sum alpha_i(x)R_i"
    };
    log.require(name, witness.is_empty(), witness)?;
    for (a, alpha) in alphas.iter().enumerate() {
        let row = row_matrix(std::slice::from_ref(alpha)).mul(m);
        let bad = (0..dim).find(|&k| !row[(0, k)].is_zero());
        let witness = match bad {
            None => vec![],
            Some(k) => vec![w(
                &format!(
                    "alpha{}(J X{})",
                    if single {
                        String::new()
                    } else {
                        (a + 1).to_string()
                    },
                    k + 1
                ),
                &row[(0, k)],
            )],
        };
        log.require("J preserves xi", witness.is_empty(), witness)?;
    }
    let g = kappa.bilinear_matrix().mul(m);
    let witness = match g.first_difference(&g.transpose()) {
        None => vec![],
        Some((a, b)) => vec![
            w(&format!("g_J(X{}, X{})", a + 1, b + 1), &g[(a, b)]),
            w(&format!("g_J(X{}, X{})", b + 1, a + 1), &g[(b, a)]),
        ],
    };
    log.require("g_J symmetric", witness.is_empty(), witness)?;
    let xi = kernel_basis(alphas);
    let metric = Metric::new(g.clone()).expect("symmetry checked");
    let gram = metric.gram(&xi);
    let witness = if let Some(a) = (0..xi.len()).find(|&a| !gram[(a, a)].is_positive()) {
        vec![w(&format!("g_J({0}, {0})", xi[a]), &gram[(a, a)])]
    } else if let Some((k, minor)) = gram.first_nonpositive_leading_minor() {
        vec![
            w("xi basis", fmt_list(&xi)),
            w(&format!("leading minor {k}"), minor),
        ]
    } else {
        vec![]
    };
    log.require("g_J positive definite on xi", witness.is_empty(), witness)?;
    let rotated = m.transpose().mul(&g).mul(m);
    let witness = match rotated.first_difference(&g) {
        None => vec![],
        Some((a, b)) => vec![
            w(&format!("g_J(JX{}, JX{})", a + 1, b + 1), &rotated[(a, b)]),
            w(&format!("g_J(X{}, X{})", a + 1, b + 1), &g[(a, b)]),
        ],
    };
    log.require("g_J J-invariant", witness.is_empty(), witness)?;
    Ok(g)
}

fn fmt_list<T: Scalar>(vs: &[Vector<T>]) -> String {
    let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// A contact structure with a `κ`-calibrated complex structure on `ξ`,
/// extended by `J(R) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CalibratedStructure<T> {
    contact: ContactStructure<T>,
    j: Endo<T>,
    g_j: Matrix<T>,
    pub clauses: Vec<Clause>,
}

impl<T: Scalar> CalibratedStructure<T> {
    pub fn contact(&self) -> &ContactStructure<T> {
        &self.contact
    }

    pub fn j(&self) -> &Endo<T> {
        &self.j
    }

    /// `g_J(X, Y) = κ(X, JY)`, degenerate along `R`.
    pub fn g_j(&self) -> &Matrix<T> {
        &self.g_j
    }

    /// `g = g_J + α⊗α`.
    pub fn metric(&self) -> Metric<T> {
        let a = self.contact.alpha();
        let n = a.dim();
        let aa = Matrix::from_fn(n, n, |i, k| a.coeff(&[i + 1]) * a.coeff(&[k + 1]));
        Metric::new(self.g_j.add(&aa)).expect("sum of symmetric matrices")
    }
}

/// Verify that `J` is calibrated by `κ` (Hermitian, positive on `ξ`).
pub fn check_calibrated<T: Scalar>(
    contact: &ContactStructure<T>,
    j: &Endo<T>,
) -> Result<CalibratedStructure<T>> {
    ensure_dim(contact.alg.dim(), j.dim())?;
    let mut log = Log::new(FailureKind::NotCalibrated);
    let g_j = calibration_clauses(
        &mut log,
        std::slice::from_ref(&contact.alpha),
        std::slice::from_ref(&contact.reeb),
        &contact.kappa,
        j,
    )?;
    Ok(CalibratedStructure {
        contact: contact.clone(),
        j: j.clone(),
        g_j,
        clauses: log.clauses,
    })
}

/// `N_J(X,Y) = [JX,JY] − J[X,JY] − J[Y,JX] + J²[X,Y]`.
pub fn nijenhuis<T: Scalar>(
    alg: &LieAlgebra<T>,
    j: &Endo<T>,
    x: &Vector<T>,
    y: &Vector<T>,
) -> Vector<T> {
    let (jx, jy) = (j.apply(x), j.apply(y));
    let xy = alg.bracket(x, y);
    alg.bracket(&jx, &jy) - j.apply(&alg.bracket(x, &jy)) - j.apply(&alg.bracket(y, &jx))
        + j.apply(&j.apply(&xy))
}

/// Calibration plus `N_J + dα⊗R = 0` on all basis pairs. The returned
/// structure is Sasakian.
pub fn check_sasakian<T: Scalar>(
    contact: &ContactStructure<T>,
    j: &Endo<T>,
) -> Result<CalibratedStructure<T>> {
    let mut cal = check_calibrated(contact, j)?;
    let alg = &contact.alg;
    let dim = alg.dim();
    let dalpha = contact.dalpha();
    let mut log = Log::new(FailureKind::NotSasakian);
    let mut witness = vec![];
    'outer: for a in 1..=dim {
        for b in a + 1..=dim {
            let (x, y) = (Vector::basis(dim, a), Vector::basis(dim, b));
            let nj = nijenhuis(alg, j, &x, &y);
            let rhs = contact.reeb.scale(-dalpha.coeff(&[a, b]));
            if nj != rhs {
                witness = vec![
                    w("pair", format!("(X{a}, X{b})")),
                    w("N_J", nj),
                    w("-dalpha(x)R", rhs),
                ];
                break 'outer;
            }
        }
    }
    log.require("N_J = -dalpha(x)R", witness.is_empty(), witness)?;
    cal.clauses.extend(log.clauses);
    Ok(cal)
}

fn check_epsilon_shape<T: Scalar>(eps: &ComplexKForm<T>, dim: usize, n: usize) -> Result<()> {
    ensure_dim(dim, eps.dim())?;
    if eps.degree() != n {
        return Err(Error::Degree(format!(
            "volume form must have degree {n}, got {}",
            eps.degree()
        )));
    }
    Ok(())
}

fn horizontal_clause<T: Scalar>(
    log: &mut Log,
    eps: &ComplexKForm<T>,
    reebs: &[Vector<T>],
) -> Result<()> {
    let single = reebs.len() == 1;
    for (i, r) in reebs.iter().enumerate() {
        let c = eps.contract(r);
        let name = if single {
            "i_R eps".to_string()
        } else {
            format!("i_R{} eps", i + 1)
        };
        log.require("i_R eps = 0", c.is_zero(), vec![w(&name, &c)])?;
    }
    Ok(())
}

/// `ε(JX, …) = i ε(X, …)`, i.e. `ι_{JX} Re ε = −ι_X Im ε` and
/// `ι_{JX} Im ε = ι_X Re ε` on every basis vector.
fn type_clause<T: Scalar>(log: &mut Log, eps: &ComplexKForm<T>, j: &Endo<T>) -> Result<()> {
    let dim = eps.dim();
    let mut witness = vec![];
    for i in 1..=dim {
        let x = Vector::basis(dim, i);
        let jx = j.apply(&x);
        let lhs = eps.contract(&jx);
        let ix = eps.contract(&x);
        let rhs = ComplexKForm::new(-ix.im, ix.re).expect("same shape");
        if lhs != rhs {
            witness = vec![
                w(&format!("i_(JX{i}) eps"), lhs),
                w(&format!("i*i_(X{i}) eps"), rhs),
            ];
            break;
        }
    }
    log.require("eps of type (n,0)", witness.is_empty(), witness)
}

fn closed_clause<T: Scalar>(
    log: &mut Log,
    alg: &LieAlgebra<T>,
    eps: &ComplexKForm<T>,
) -> Result<()> {
    let d = ComplexKForm::new(alg.differential(&eps.re), alg.differential(&eps.im))
        .expect("same shape");
    log.require("d eps = 0", d.is_zero(), vec![w("d eps", &d)])
}

fn normalization_clause<T: Scalar>(
    log: &mut Log,
    eps: &ComplexKForm<T>,
    kappa: &KForm<T>,
    n: usize,
    mode: Normalization,
) -> Result<()> {
    let lhs = eps.wedge(&eps.conj());
    let mut c = c_n::<T>(n);
    if mode == Normalization::Standard {
        let f = factorial::<T>(n);
        c = Complex::new(c.re / f.clone(), c.im / f);
    }
    let rhs = ComplexKForm::from_real(kappa.power(n)).scale(&c);
    let mut witness = vec![w("eps^conj(eps)", &lhs), w("expected", &rhs)];
    let ok = lhs == rhs;
    if !ok {
        if let Some((b, _)) = rhs.re.terms().chain(rhs.im.terms()).next() {
            let l = Complex::new(lhs.re.coeff_blade(b), lhs.im.coeff_blade(b));
            let r = Complex::new(rhs.re.coeff_blade(b), rhs.im.coeff_blade(b));
            if !(l.re.is_zero() && l.im.is_zero()) {
                witness.push(w("expected/found", fmt_complex(&(r / l))));
            }
        }
    }
    log.require(mode.clause(), ok, witness)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CcyStructure<T> {
    sasakian: CalibratedStructure<T>,
    epsilon: ComplexKForm<T>,
    normalization: Normalization,
    pub clauses: Vec<Clause>,
}

impl<T: Scalar> CcyStructure<T> {
    pub fn sasakian(&self) -> &CalibratedStructure<T> {
        &self.sasakian
    }

    pub fn contact(&self) -> &ContactStructure<T> {
        &self.sasakian.contact
    }

    pub fn algebra(&self) -> &LieAlgebra<T> {
        &self.sasakian.contact.alg
    }

    pub fn j(&self) -> &Endo<T> {
        &self.sasakian.j
    }

    pub fn epsilon(&self) -> &ComplexKForm<T> {
        &self.epsilon
    }

    pub fn metric(&self) -> Metric<T> {
        self.sasakian.metric()
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// Every clause checked on the way, contact through CCY.
    pub fn all_clauses(&self) -> Vec<Clause> {
        let mut v = self.contact().clauses.clone();
        v.extend(self.sasakian.clauses.iter().cloned());
        v.extend(self.clauses.iter().cloned());
        v
    }
}

/// Verify that `ε` completes a Sasakian structure to a contact Calabi–Yau
/// structure: basic, of type `(n,0)`, closed and normalized.
pub fn check_ccy<T: Scalar>(
    sasakian: &CalibratedStructure<T>,
    epsilon: &ComplexKForm<T>,
    mode: Normalization,
) -> Result<CcyStructure<T>> {
    let contact = &sasakian.contact;
    let alg = &contact.alg;
    let n = contact.n;
    check_epsilon_shape(epsilon, alg.dim(), n)?;
    let mut log = Log::new(FailureKind::NotCcy);
    let reeb = std::slice::from_ref(&contact.reeb);
    horizontal_clause(&mut log, epsilon, reeb)?;
    let lie = ComplexKForm::new(
        alg.lie_derivative(&contact.reeb, &epsilon.re)?,
        alg.lie_derivative(&contact.reeb, &epsilon.im)?,
    )?;
    log.require("L_R eps = 0", lie.is_zero(), vec![w("L_R eps", &lie)])?;
    type_clause(&mut log, epsilon, &sasakian.j)?;
    closed_clause(&mut log, alg, epsilon)?;
    normalization_clause(&mut log, epsilon, &contact.kappa, n, mode)?;
    let dalpha = contact.dalpha();
    let re_d = epsilon.re.wedge(&dalpha);
    let im_d = epsilon.im.wedge(&dalpha);
    log.require(
        "Re eps^dalpha = 0",
        re_d.is_zero(),
        vec![w("Re eps^dalpha", &re_d)],
    )?;
    log.require(
        "Im eps^dalpha = 0",
        im_d.is_zero(),
        vec![w("Im eps^dalpha", &im_d)],
    )?;
    let ee = epsilon.wedge(epsilon);
    log.require("eps^eps = 0", ee.is_zero(), vec![w("eps^eps", &ee)])?;
    Ok(CcyStructure {
        sasakian: sasakian.clone(),
        epsilon: epsilon.clone(),
        normalization: mode,
        clauses: log.clauses,
    })
}

/// The whole chain contact, Sasakian, CCY from raw data.
pub fn verify_ccy<T: Scalar>(
    alg: &LieAlgebra<T>,
    alpha: &KForm<T>,
    j: &Endo<T>,
    epsilon: &ComplexKForm<T>,
    mode: Normalization,
) -> Result<CcyStructure<T>> {
    let contact = check_contact(alg, alpha)?;
    let sas = check_sasakian(&contact, j)?;
    check_ccy(&sas, epsilon, mode)
}

/// Clause-by-clause outcome of a check that reports every condition.
#[derive(Clone, Debug, PartialEq)]
pub struct ClauseReport {
    pub kind: FailureKind,
    pub clauses: Vec<Clause>,
}

impl ClauseReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.passed)
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }

    pub fn first_failure(&self) -> Option<CheckFailure> {
        self.failures().next().map(|c| c.failure(self.kind))
    }

    pub fn into_result(self) -> Result<Self> {
        match self.first_failure() {
            Some(f) => Err(f.into()),
            None => Ok(self),
        }
    }
}

pub const HYPO_ORTHOGONAL: &str = "omega_i^omega_j = 0 for i != j";
pub const HYPO_EQUAL_SQUARES: &str = "omega_1^2 = omega_2^2 = omega_3^2 = v";
pub const HYPO_VOLUME: &str = "v^alpha != 0";
pub const HYPO_COMPATIBLE: &str = "i_X omega_1 = i_Y omega_2 implies omega_3(X,Y) >= 0";
pub const HYPO_D_OMEGA1: &str = "d omega_1 = 0";
pub const HYPO_D_OMEGA2_ALPHA: &str = "d(omega_2^alpha) = 0";
pub const HYPO_D_OMEGA3_ALPHA: &str = "d(omega_3^alpha) = 0";

/// Evaluate all Hypo conditions on a 5-dimensional algebra.
///
/// The compatibility condition is checked as positive semidefiniteness of
/// the quadratic form `(X, Y) ↦ ω_3(X, Y)` on the space of pairs with
/// `ι_X ω_1 = ι_Y ω_2`.
pub fn check_hypo<T: Scalar>(
    alg: &LieAlgebra<T>,
    alpha: &KForm<T>,
    omegas: [&KForm<T>; 3],
) -> Result<ClauseReport> {
    if alg.dim() != 5 {
        return Err(Error::Invalid(format!(
            "Hypo structures live in dimension 5, got {}",
            alg.dim()
        )));
    }
    check_one_form(alg, alpha)?;
    for o in omegas {
        ensure_dim(5, o.dim())?;
        if o.degree() != 2 {
            return Err(Error::Degree(format!(
                "omega must be a 2-form, got degree {}",
                o.degree()
            )));
        }
    }
    let mut clauses = Vec::new();
    let mut push = |name: &str, ok: bool, witness: Vec<(String, String)>| {
        clauses.push(Clause {
            name: name.into(),
            passed: ok,
            witness,
        })
    };
    let mut witness = vec![];
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let p = omegas[a].wedge(omegas[b]);
        if !p.is_zero() {
            witness.push(w(&format!("omega_{}^omega_{}", a + 1, b + 1), &p));
        }
    }
    push(HYPO_ORTHOGONAL, witness.is_empty(), witness);
    let squares: Vec<KForm<T>> = omegas.iter().map(|o| o.wedge(o)).collect();
    let v = squares[0].clone();
    let equal = squares.iter().all(|s| *s == v);
    let witness = squares
        .iter()
        .enumerate()
        .map(|(i, s)| w(&format!("omega_{}^2", i + 1), s))
        .collect();
    push(HYPO_EQUAL_SQUARES, equal, witness);
    let va = v.wedge(alpha);
    push(HYPO_VOLUME, !va.is_zero(), vec![w("v^alpha", &va)]);
    let (ok, witness) = hypo_compatibility(omegas);
    push(HYPO_COMPATIBLE, ok, witness);
    let d1 = alg.differential(omegas[0]);
    push(HYPO_D_OMEGA1, d1.is_zero(), vec![w("d omega_1", &d1)]);
    let d2 = alg.differential(&omegas[1].wedge(alpha));
    push(
        HYPO_D_OMEGA2_ALPHA,
        d2.is_zero(),
        vec![w("d(omega_2^alpha)", &d2)],
    );
    let d3 = alg.differential(&omegas[2].wedge(alpha));
    push(
        HYPO_D_OMEGA3_ALPHA,
        d3.is_zero(),
        vec![w("d(omega_3^alpha)", &d3)],
    );
    Ok(ClauseReport {
        kind: FailureKind::NotHypo,
        clauses,
    })
}

fn hypo_compatibility<T: Scalar>(omegas: [&KForm<T>; 3]) -> (bool, Vec<(String, String)>) {
    let dim = omegas[0].dim();
    let m1 = omegas[0].bilinear_matrix();
    let m2 = omegas[1].bilinear_matrix();
    let m3 = omegas[2].bilinear_matrix();
    // (ι_X ω_1)_k = Σ_i x_i ω_1(X_i, X_k)
    let c = Matrix::from_fn(dim, 2 * dim, |k, col| {
        if col < dim {
            m1[(col, k)].clone()
        } else {
            -m2[(col - dim, k)].clone()
        }
    });
    let basis = c.nullspace();
    let half = T::from_ratio(1, 2);
    let q = |z: &[T], z2: &[T]| -> T {
        let mut s = T::zero();
        for i in 0..dim {
            for k in 0..dim {
                let b = &m3[(i, k)];
                if !b.is_zero() {
                    s = s + b.clone()
                        * (z[i].clone() * z2[dim + k].clone() + z2[i].clone() * z[dim + k].clone());
                }
            }
        }
        s * half.clone()
    };
    let k = basis.len();
    let gram = Matrix::from_fn(k, k, |a, b| q(&basis[a], &basis[b]));
    let pair = |z: &[T]| {
        format!(
            "X = {}, Y = {}",
            Vector::new(z[..dim].to_vec()),
            Vector::new(z[dim..].to_vec())
        )
    };
    if let Some(a) = (0..k).find(|&a| gram[(a, a)].is_negative()) {
        return (
            false,
            vec![w("pair", pair(&basis[a])), w("omega_3(X,Y)", &gram[(a, a)])],
        );
    }
    for a in 0..k {
        for b in 0..k {
            let (da, db, x) = (&gram[(a, a)], &gram[(b, b)], &gram[(a, b)]);
            if a == b || x.is_zero() || da.clone() * db.clone() >= x.clone() * x.clone() {
                continue;
            }
            // Q(t z_a + z_b) = t² d_a + 2 t x + d_b is negative somewhere
            let t = if da.is_zero() {
                -(db.clone() + T::one()) / (T::from_int(2) * x.clone())
            } else {
                -x.clone() / da.clone()
            };
            let z: Vec<T> = basis[a]
                .iter()
                .zip(&basis[b])
                .map(|(u, v)| t.clone() * u.clone() + v.clone())
                .collect();
            let value = q(&z, &z);
            return (false, vec![w("pair", pair(&z)), w("omega_3(X,Y)", value)]);
        }
    }
    if !gram.is_positive_semidefinite() {
        return (false, vec![w("restricted form", &gram)]);
    }
    (true, vec![w("solution space dimension", k)])
}

/// `(α, ½dα, Re ε, Im ε)` of a 5-dimensional CCY structure.
pub fn hypo_from_ccy<T: Scalar>(ccy: &CcyStructure<T>) -> (KForm<T>, [KForm<T>; 3]) {
    let c = ccy.contact();
    (
        c.alpha().clone(),
        [
            c.kappa().clone(),
            ccy.epsilon.re.clone(),
            ccy.epsilon.im.clone(),
        ],
    )
}

/// r one-forms with equal differentials, `α_1∧…∧α_r∧(dα_1)^n ≠ 0`, and their
/// Reeb family.
#[derive(Clone, Debug, PartialEq)]
pub struct RContactStructure<T> {
    alg: LieAlgebra<T>,
    alphas: Vec<KForm<T>>,
    reebs: Vec<Vector<T>>,
    kappa: KForm<T>,
    n: usize,
    pub clauses: Vec<Clause>,
}

impl<T: Scalar> RContactStructure<T> {
    pub fn algebra(&self) -> &LieAlgebra<T> {
        &self.alg
    }

    pub fn alphas(&self) -> &[KForm<T>] {
        &self.alphas
    }

    pub fn reebs(&self) -> &[Vector<T>] {
        &self.reebs
    }

    pub fn kappa(&self) -> &KForm<T> {
        &self.kappa
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.alphas.len()
    }

    pub fn xi_basis(&self) -> Vec<Vector<T>> {
        kernel_basis(&self.alphas)
    }
}

pub fn check_r_contact<T: Scalar>(
    alg: &LieAlgebra<T>,
    alphas: &[KForm<T>],
) -> Result<RContactStructure<T>> {
    let r = alphas.len();
    if r == 0 {
        return Err(Error::Invalid("need at least one 1-form".into()));
    }
    for a in alphas {
        check_one_form(alg, a)?;
    }
    let dim = alg.dim();
    if dim < r || (dim - r) % 2 == 1 {
        return Err(Error::Invalid(format!(
            "dimension {dim} is not 2n + r with r = {r}"
        )));
    }
    let n = (dim - r) / 2;
    let mut log = Log::new(FailureKind::NotRContact);
    let d: Vec<KForm<T>> = alphas.iter().map(|a| alg.differential(a)).collect();
    if r > 1 {
        let bad = (1..r).find(|&i| d[i] != d[0]);
        let witness = match bad {
            None => vec![w("dalpha_1", &d[0])],
            Some(i) => vec![w("dalpha_1", &d[0]), w(&format!("dalpha_{}", i + 1), &d[i])],
        };
        log.require("dalpha_i all equal", bad.is_none(), witness)?;
    }
    let reebs = contact_clauses(&mut log, alphas, &d[0], n)?;
    Ok(RContactStructure {
        alg: alg.clone(),
        alphas: alphas.to_vec(),
        reebs,
        kappa: d[0].scale(T::from_ratio(1, 2)),
        n,
        clauses: log.clauses,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RContactCcyStructure<T> {
    contact: RContactStructure<T>,
    j: Endo<T>,
    g_j: Matrix<T>,
    epsilon: ComplexKForm<T>,
    pub clauses: Vec<Clause>,
}

impl<T: Scalar> RContactCcyStructure<T> {
    pub fn contact(&self) -> &RContactStructure<T> {
        &self.contact
    }

    pub fn j(&self) -> &Endo<T> {
        &self.j
    }

    pub fn g_j(&self) -> &Matrix<T> {
        &self.g_j
    }

    pub fn epsilon(&self) -> &ComplexKForm<T> {
        &self.epsilon
    }

    pub fn all_clauses(&self) -> Vec<Clause> {
        let mut v = self.contact.clauses.clone();
        v.extend(self.clauses.iter().cloned());
        v
    }
}

/// r-contact Calabi–Yau check: r-contact structure, calibrated `J` on
/// `ξ = ∩ ker α_i`, and a closed normalized `(n,0)`-form with `ι_{R_i} ε = 0`.
pub fn check_r_contact_ccy<T: Scalar>(
    alg: &LieAlgebra<T>,
    alphas: &[KForm<T>],
    j: &Endo<T>,
    epsilon: &ComplexKForm<T>,
    mode: Normalization,
) -> Result<RContactCcyStructure<T>> {
    let rc = check_r_contact(alg, alphas)?;
    ensure_dim(alg.dim(), j.dim())?;
    check_epsilon_shape(epsilon, alg.dim(), rc.n)?;
    let mut log = Log::new(FailureKind::NotRContactCcy);
    let g_j = calibration_clauses(&mut log, &rc.alphas, &rc.reebs, &rc.kappa, j)?;
    horizontal_clause(&mut log, epsilon, &rc.reebs)?;
    type_clause(&mut log, epsilon, j)?;
    closed_clause(&mut log, alg, epsilon)?;
    normalization_clause(&mut log, epsilon, &rc.kappa, rc.n, mode)?;
    Ok(RContactCcyStructure {
        contact: rc,
        j: j.clone(),
        g_j,
        epsilon: epsilon.clone(),
        clauses: log.clauses,
    })
}
