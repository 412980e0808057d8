//! Left-invariant Riemannian geometry: Levi-Civita connection, curvature,
//! the α-Einstein test and the transverse connection of a Sasakian structure.
//!
//! Conventions: `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]}Z` and
//! `Ric(X,Y) = tr(Z ↦ R(Z,X)Y)`.

use crate::cealg::LieAlgebra;
use crate::error::{ensure_dim, CheckFailure, Error, FailureKind, Result};
use crate::exterior::{KForm, Metric, Vector};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::structures::{CalibratedStructure, Clause};

/// `∇_{X_i} X_j` for all basis pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection<T> {
    gamma: Vec<Vec<Vector<T>>>,
}

impl<T: Scalar> Connection<T> {
    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    /// `∇_{X_i} X_j`, 1-based.
    pub fn christoffel(&self, i: usize, j: usize) -> &Vector<T> {
        &self.gamma[i - 1][j - 1]
    }

    pub fn nabla(&self, x: &Vector<T>, y: &Vector<T>) -> Vector<T> {
        let n = self.dim();
        let mut out = Vector::zero(n);
        for i in 0..n {
            let xi = &x.coeffs()[i];
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                let yj = &y.coeffs()[j];
                if !yj.is_zero() {
                    out = out + self.gamma[i][j].scale(xi.clone() * yj.clone());
                }
            }
        }
        out
    }

    /// `R(X_a, X_b) X_c`, 1-based.
    pub fn riemann(&self, alg: &LieAlgebra<T>, a: usize, b: usize, c: usize) -> Vector<T> {
        let n = self.dim();
        let (xa, xb) = (Vector::basis(n, a), Vector::basis(n, b));
        let xc = Vector::basis(n, c);
        self.nabla(&xa, self.christoffel(b, c))
            - self.nabla(&xb, self.christoffel(a, c))
            - self.nabla(alg.basis_bracket(a, b), &xc)
    }

    /// `Ric(X_a, X_b) = Σ_k (R(X_k, X_a) X_b)^k`.
    pub fn ricci(&self, alg: &LieAlgebra<T>) -> Matrix<T> {
        let n = self.dim();
        let rows: Vec<Vec<T>> = std::thread::scope(|s| {
            let handles: Vec<_> = (1..=n)
                .map(|a| {
                    s.spawn(move || {
                        (1..=n)
                            .map(|b| {
                                (1..=n).fold(T::zero(), |acc, k| {
                                    acc + self.riemann(alg, k, a, b).get(k)
                                })
                            })
                            .collect()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        Matrix::from_rows(rows)
    }

    /// `∇_X Y − ∇_Y X = [X, Y]` on basis pairs.
    pub fn is_torsion_free(&self, alg: &LieAlgebra<T>) -> bool {
        let n = self.dim();
        (1..=n).all(|i| {
            (1..=n).all(|j| {
                self.christoffel(i, j).clone() - self.christoffel(j, i).clone()
                    == *alg.basis_bracket(i, j)
            })
        })
    }

    /// `g(∇_X Y, Z) + g(Y, ∇_X Z) = 0` on basis triples.
    pub fn is_metric(&self, g: &Metric<T>) -> bool {
        let n = self.dim();
        (1..=n).all(|i| {
            (1..=n).all(|j| {
                (1..=n).all(|k| {
                    let (xj, xk) = (Vector::basis(n, j), Vector::basis(n, k));
                    (g.inner(self.christoffel(i, j), &xk) + g.inner(&xj, self.christoffel(i, k)))
                        .is_zero()
                })
            })
        })
    }

    /// `R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0` on basis triples.
    pub fn satisfies_bianchi(&self, alg: &LieAlgebra<T>) -> bool {
        let n = self.dim();
        (1..=n).all(|a| {
            (1..=n).all(|b| {
                (1..=n).all(|c| {
                    (self.riemann(alg, a, b, c)
                        + self.riemann(alg, b, c, a)
                        + self.riemann(alg, c, a, b))
                    .is_zero()
                })
            })
        })
    }
}

/// Levi-Civita connection of a left-invariant metric, by the Koszul formula
/// `2g(∇_X Y, Z) = g([X,Y],Z) − g([Y,Z],X) + g([Z,X],Y)`.
pub fn levi_civita<T: Scalar>(alg: &LieAlgebra<T>, g: &Metric<T>) -> Result<Connection<T>> {
    ensure_dim(alg.dim(), g.dim())?;
    if !g.is_positive_definite() {
        return Err(Error::DegenerateMetric);
    }
    let n = alg.dim();
    let ginv = g.inverse_matrix();
    let half = T::from_ratio(1, 2);
    let x = |i: usize| Vector::basis(n, i);
    let gamma = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let rhs: Vec<T> = (1..=n)
                        .map(|k| {
                            (g.inner(alg.basis_bracket(i, j), &x(k))
                                - g.inner(alg.basis_bracket(j, k), &x(i))
                                + g.inner(alg.basis_bracket(k, i), &x(j)))
                                * half.clone()
                        })
                        .collect();
                    Vector::new(ginv.mul_vec(&rhs))
                })
                .collect()
        })
        .collect();
    Ok(Connection { gamma })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureReport<T> {
    pub ricci: Matrix<T>,
    pub scalar: T,
    /// `(λ, ν)` once [`check_alpha_einstein`] has succeeded.
    pub alpha_einstein: Option<(T, T)>,
    /// Transverse Ricci form on a basis of `ξ`.
    pub transverse_ricci: Option<Matrix<T>>,
}

/// Ricci tensor and scalar curvature.
pub fn ricci_scalar<T: Scalar>(alg: &LieAlgebra<T>, g: &Metric<T>) -> Result<CurvatureReport<T>> {
    let conn = levi_civita(alg, g)?;
    let ricci = conn.ricci(alg);
    let ginv = g.inverse_matrix();
    let n = alg.dim();
    let mut scalar = T::zero();
    for i in 0..n {
        for j in 0..n {
            scalar = scalar + ginv[(i, j)].clone() * ricci[(i, j)].clone();
        }
    }
    Ok(CurvatureReport {
        ricci,
        scalar,
        alpha_einstein: None,
        transverse_ricci: None,
    })
}

/// Solve `Ric = λ g + ν α⊗α` exactly.
pub fn check_alpha_einstein<T: Scalar>(
    ricci: &Matrix<T>,
    g: &Metric<T>,
    alpha: &KForm<T>,
) -> Result<(T, T)> {
    let n = g.dim();
    ensure_dim(n, ricci.rows())?;
    ensure_dim(n, alpha.dim())?;
    let a = |i: usize| alpha.coeff(&[i + 1]);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            rows.push(vec![g.matrix()[(i, j)].clone(), a(i) * a(j)]);
            rhs.push(ricci[(i, j)].clone());
        }
    }
    match Matrix::from_rows(rows).solve(&rhs) {
        Some(v) => Ok((v[0].clone(), v[1].clone())),
        None => Err(CheckFailure::new(
            FailureKind::NotAlphaEinstein,
            "Ric = lambda g + nu alpha(x)alpha",
        )
        .with("Ric", ricci)
        .with("g", g)
        .into()),
    }
}

/// Transverse data of a Sasakian structure on a basis `v_1, …, v_2n` of `ξ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransverseReport<T> {
    pub xi_basis: Vec<Vector<T>>,
    /// `Ric^T(v_a, v_b)` from the curvature of `∇^ξ`.
    pub ricci: Matrix<T>,
    /// `Ric(v_a, v_b) + 2 g(v_a, v_b)`.
    pub ricci_plus_2g: Matrix<T>,
    /// `ρ^T(v_a, v_b) = Ric^T(J v_a, v_b)`.
    pub ricci_form: Matrix<T>,
    pub parallel: Vec<Clause>,
}

impl<T: Scalar> TransverseReport<T> {
    pub fn is_ricci_flat(&self) -> bool {
        self.ricci.is_zero()
    }
}

struct Transverse<'a, T> {
    alg: &'a LieAlgebra<T>,
    conn: Connection<T>,
    alpha: &'a KForm<T>,
    reeb: &'a Vector<T>,
}

impl<T: Scalar> Transverse<'_, T> {
    fn alpha_of(&self, v: &Vector<T>) -> T {
        self.alpha.evaluate(std::slice::from_ref(v))
    }

    fn proj(&self, v: &Vector<T>) -> Vector<T> {
        v.clone() - self.reeb.scale(self.alpha_of(v))
    }

    /// `∇^ξ_X Y = (∇_{X − α(X)R} Y + α(X)[R, Y])^ξ`.
    fn nabla(&self, x: &Vector<T>, y: &Vector<T>) -> Vector<T> {
        let ax = self.alpha_of(x);
        let horizontal = x.clone() - self.reeb.scale(ax.clone());
        let v = self.conn.nabla(&horizontal, y) + self.alg.bracket(self.reeb, y).scale(ax);
        self.proj(&v)
    }
}

/// Transverse Ricci tensor by two independent routes, plus the
/// parallelism identities of `∇^ξ`. Fails with
/// [`FailureKind::TransverseRicciMismatch`] if the routes disagree.
pub fn transverse_ricci<T: Scalar>(sas: &CalibratedStructure<T>) -> Result<TransverseReport<T>> {
    let contact = sas.contact();
    let alg = contact.algebra();
    let g = sas.metric();
    let n = alg.dim();
    let t = Transverse {
        alg,
        conn: levi_civita(alg, &g)?,
        alpha: contact.alpha(),
        reeb: contact.reeb(),
    };
    let xi = contact.xi_basis();
    let k = xi.len();
    let h = g.gram(&xi);
    let hinv = h.inverse().ok_or(Error::DegenerateMetric)?;
    let ric_t = Matrix::from_fn(k, k, |a, b| {
        let (x, y) = (&xi[a], &xi[b]);
        let mut s = T::zero();
        for (c, vc) in xi.iter().enumerate() {
            for (d, vd) in xi.iter().enumerate() {
                let coef = &hinv[(c, d)];
                if coef.is_zero() {
                    continue;
                }
                let r = t.nabla(x, &t.nabla(vc, vd))
                    - t.nabla(vc, &t.nabla(x, vd))
                    - t.nabla(&alg.bracket(x, vc), vd);
                s = s + coef.clone() * g.inner(&r, y);
            }
        }
        s
    });
    let ric = t.conn.ricci(alg);
    let two = T::from_int(2);
    let via_ric = Matrix::from_fn(k, k, |a, b| {
        let mut s = g.inner(&xi[a], &xi[b]) * two.clone();
        for i in 0..n {
            for j in 0..n {
                s = s + xi[a].coeffs()[i].clone() * ric[(i, j)].clone() * xi[b].coeffs()[j].clone();
            }
        }
        s
    });
    if let Some((a, b)) = ric_t.first_difference(&via_ric) {
        return Err(CheckFailure::new(
            FailureKind::TransverseRicciMismatch,
            "Ric^T = Ric + 2g on xi",
        )
        .with("pair", format!("({}, {})", xi[a], xi[b]))
        .with("Ric^T", &ric_t[(a, b)])
        .with("Ric + 2g", &via_ric[(a, b)])
        .into());
    }
    // ρ^T(v_a, v_b) = Ric^T(J v_a, v_b); J v_a stays in ξ, expand it in the basis.
    let basis_cols: Vec<Vec<T>> = xi.iter().map(|v| v.coeffs().to_vec()).collect();
    let span = Matrix::from_columns(&basis_cols);
    let jcoords: Vec<Vec<T>> = xi
        .iter()
        .map(|v| {
            span.solve(sas.j().apply(v).coeffs())
                .expect("J preserves xi")
        })
        .collect();
    let rho = Matrix::from_fn(k, k, |a, b| {
        (0..k).fold(T::zero(), |acc, c| {
            acc + jcoords[a][c].clone() * ric_t[(c, b)].clone()
        })
    });
    let parallel = parallel_suite(&t, sas, &g, &xi);
    Ok(TransverseReport {
        xi_basis: xi,
        ricci: ric_t,
        ricci_plus_2g: via_ric,
        ricci_form: rho,
        parallel,
    })
}

fn parallel_suite<T: Scalar>(
    t: &Transverse<'_, T>,
    sas: &CalibratedStructure<T>,
    g: &Metric<T>,
    xi: &[Vector<T>],
) -> Vec<Clause> {
    let n = t.alg.dim();
    let j = sas.j();
    let dalpha = sas.contact().dalpha();
    let frame: Vec<Vector<T>> = (1..=n).map(|i| Vector::basis(n, i)).collect();
    let mut out = Vec::new();
    let mut push = |name: &str, bad: Option<String>| {
        out.push(Clause {
            name: name.into(),
            passed: bad.is_none(),
            witness: bad.map(|b| vec![("at".to_string(), b)]).unwrap_or_default(),
        })
    };
    let mut bad = None;
    'j: for x in &frame {
        for y in xi {
            let lhs = t.nabla(x, &j.apply(y)) - j.apply(&t.nabla(x, y));
            if !lhs.is_zero() {
                bad = Some(format!("X = {x}, Y = {y}: {lhs}"));
                break 'j;
            }
        }
    }
    push("nabla^xi J = 0", bad);
    let mut bad_g = None;
    let mut bad_d = None;
    for x in &frame {
        for y in xi {
            for z in xi {
                let (ny, nz) = (t.nabla(x, y), t.nabla(x, z));
                if bad_g.is_none() {
                    let v = g.inner(&ny, z) + g.inner(y, &nz);
                    if !v.is_zero() {
                        bad_g = Some(format!("X = {x}, Y = {y}, Z = {z}: {v}"));
                    }
                }
                if bad_d.is_none() {
                    let v = dalpha.evaluate(&[ny, z.clone()]) + dalpha.evaluate(&[y.clone(), nz]);
                    if !v.is_zero() {
                        bad_d = Some(format!("X = {x}, Y = {y}, Z = {z}: {v}"));
                    }
                }
            }
        }
    }
    push("nabla^xi g_J = 0", bad_g);
    push("nabla^xi dalpha = 0", bad_d);
    let mut bad = None;
    'tor: for x in xi {
        for y in xi {
            let v = t.nabla(x, y) - t.nabla(y, x) - t.proj(&t.alg.bracket(x, y));
            if !v.is_zero() {
                bad = Some(format!("X = {x}, Y = {y}: {v}"));
                break 'tor;
            }
        }
    }
    push("nabla^xi_X Y - nabla^xi_Y X = [X,Y]^xi", bad);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algdsl::{
        parse_algebra, parse_complex_form, parse_endo, parse_metric, parse_real_form,
    };
    use crate::scalar::Rational;
    use crate::structures::{verify_ccy, Normalization};

    type Q = Rational;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn h3() -> LieAlgebra<Q> {
        parse_algebra("(0,0,12)").unwrap()
    }

    #[test]
    fn koszul_examples() {
        let g = parse_metric::<Q>("diag(1,1,4)", 3).unwrap();
        let c = levi_civita(&h3(), &g).unwrap();
        assert_eq!(
            c.christoffel(1, 2),
            &Vector::basis(3, 3).scale(Q::from_ratio(-1, 2))
        );
        assert!(c.christoffel(1, 1).is_zero());
        assert!(c.is_torsion_free(&h3()) && c.is_metric(&g) && c.satisfies_bianchi(&h3()));
        let ab = LieAlgebra::<Q>::abelian(3);
        let c = levi_civita(&ab, &g).unwrap();
        assert!((1..=3).all(|i| (1..=3).all(|j| c.christoffel(i, j).is_zero())));
    }

    #[test]
    fn ricci_examples() {
        let g = parse_metric::<Q>("diag(1,1,4)", 3).unwrap();
        let r = ricci_scalar(&h3(), &g).unwrap();
        assert_eq!(
            r.ricci,
            Matrix::from_rows(vec![
                vec![q(-2), q(0), q(0)],
                vec![q(0), q(-2), q(0)],
                vec![q(0), q(0), q(8)],
            ])
        );
        assert_eq!(r.scalar, q(-2));
        let alpha = parse_real_form("2*e3", 3).unwrap();
        assert_eq!(
            check_alpha_einstein(&r.ricci, &g, &alpha).unwrap(),
            (q(-2), q(4))
        );
        let unit = Metric::identity(3);
        let r = ricci_scalar(&h3(), &unit).unwrap();
        let e3 = parse_real_form("e3", 3).unwrap();
        assert_eq!(
            check_alpha_einstein(&r.ricci, &unit, &e3).unwrap(),
            (Q::from_ratio(-1, 2), q(1))
        );
        let five = parse_algebra::<Q>("(0,0,0,0,12+34)").unwrap();
        let g5 = parse_metric::<Q>("diag(1,1,1,1,4)", 5).unwrap();
        let r = ricci_scalar(&five, &g5).unwrap();
        assert_eq!(r.scalar, q(-4));
        assert_eq!(
            check_alpha_einstein(&r.ricci, &g5, &parse_real_form("2*e5", 5).unwrap()).unwrap(),
            (q(-2), q(6))
        );
    }

    #[test]
    fn not_alpha_einstein() {
        let g = parse_metric::<Q>("diag(1,2,3)", 3).unwrap();
        let alg = parse_algebra::<Q>("(0,0,12)").unwrap();
        let r = ricci_scalar(&alg, &g).unwrap();
        let e1 = parse_real_form("e1", 3).unwrap();
        let err = check_alpha_einstein(&r.ricci, &g, &e1).unwrap_err();
        assert_eq!(err.as_check().unwrap().kind, FailureKind::NotAlphaEinstein);
    }

    #[test]
    fn transverse_examples() {
        for (alg, alpha, j, eps) in [
            ("(0,0,12)", "2*e3", "pairs:(1,2)", "e1 + i*e2"),
            (
                "(0,0,0,0,12+34)",
                "2*e5",
                "pairs:(1,2),(3,4)",
                "(e1+i*e2)^(e3+i*e4)",
            ),
        ] {
            let alg = parse_algebra::<Q>(alg).unwrap();
            let n = alg.dim();
            let ccy = verify_ccy(
                &alg,
                &parse_real_form(alpha, n).unwrap(),
                &parse_endo(j, n).unwrap(),
                &parse_complex_form(eps, n).unwrap(),
                Normalization::Standard,
            )
            .unwrap();
            let t = transverse_ricci(ccy.sasakian()).unwrap();
            assert!(t.is_ricci_flat());
            assert!(t.ricci_form.is_zero());
            assert!(t.parallel.iter().all(|c| c.passed), "{:?}", t.parallel);
        }
    }
}
