#![allow(dead_code)]

use nilgeo::algdsl::parse_algebra;
use nilgeo::cealg::LieAlgebra;
use nilgeo::curvature::levi_civita;
use nilgeo::exterior::{Blade, KForm, Metric, Vector};
use nilgeo::linalg::Matrix;
use nilgeo::scalar::Scalar;
use nilgeo::Rational;
use proptest::prelude::*;

pub type Q = Rational;

pub const CATALOG: &[&str] = &[
    "(0,0,12)",
    "(0,0,12,0)",
    "(0,0,12,13)",
    "(0,0,0,0,12+34)",
    "(0,0,12,13,14+23)",
    "(0,0,0,12,13+24)",
    "(0,0,0,0,12)",
    "(0,0,0,0,0)",
    "(0,0,0,12,13,23)",
    "(0,0,0,0,0,0,12+34+56)",
];

pub fn algebra(i: usize) -> LieAlgebra<Q> {
    parse_algebra(CATALOG[i % CATALOG.len()]).unwrap()
}

pub fn q(n: i64) -> Q {
    Q::from_int(n)
}

/// A form of the given degree with small integer coefficients.
pub fn form(dim: usize, degree: usize, coeffs: &[i64]) -> KForm<Q> {
    let degree = degree.min(dim);
    Blade::all(dim, degree)
        .into_iter()
        .zip(coeffs.iter().cycle())
        .fold(KForm::zero(dim, degree), |acc, (b, &c)| {
            acc + KForm::basis(dim, &b.indices()).scale(q(c))
        })
}

/// Unimodular integer matrix from elementary row operations.
pub fn unimodular(dim: usize, ops: &[(usize, usize, i64)]) -> Matrix<Q> {
    let mut p: Matrix<Q> = Matrix::identity(dim);
    for &(i, j, k) in ops {
        let (i, j) = (i % dim, j % dim);
        if i == j {
            continue;
        }
        for c in 0..dim {
            let v = p[(j, c)].clone() * q(k);
            p[(i, c)] = p[(i, c)].clone() + v;
        }
    }
    p
}

/// `Pᵀ P` for an invertible integer `P`; its determinant is a perfect square.
pub fn metric(dim: usize, ops: &[(usize, usize, i64)], diag: &[i64]) -> Metric<Q> {
    let mut p = unimodular(dim, ops);
    for (r, d) in diag.iter().take(dim).enumerate() {
        for c in 0..dim {
            p[(r, c)] = p[(r, c)].clone() * q(*d);
        }
    }
    Metric::new(p.transpose().mul(&p)).unwrap()
}

pub fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 1..40)
}

pub fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..8, 0usize..8, -2i64..=2), 0..6)
}

pub fn sign(k: usize) -> Q {
    if k.is_multiple_of(2) {
        q(1)
    } else {
        q(-1)
    }
}

pub fn d_squared((a, k, c): (usize, usize, Vec<i64>)) -> bool {
    let g = algebra(a);
    let f = form(g.dim(), k, &c);
    g.differential(&g.differential(&f)).is_zero()
}

pub fn d_squared_input() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (0usize..10, 0usize..7, coeffs())
}

type WedgeIn = (usize, usize, usize, usize, Vec<i64>, Vec<i64>, Vec<i64>);

pub fn wedge_laws((dim, p, r, s, ca, cb, cc): WedgeIn) -> bool {
    let a = form(dim, p, &ca);
    let b = form(dim, r, &cb);
    let c = form(dim, s, &cc);
    let (p, r) = (a.degree(), b.degree());
    a.wedge(&b) == b.wedge(&a).scale(sign(p * r)) && a.wedge(&b).wedge(&c) == a.wedge(&b.wedge(&c))
}

pub fn wedge_input() -> impl Strategy<Value = WedgeIn> {
    (
        1usize..7,
        0usize..4,
        0usize..4,
        0usize..3,
        coeffs(),
        coeffs(),
        coeffs(),
    )
}

type ContractIn = (usize, usize, usize, Vec<i64>, Vec<i64>, Vec<i64>);

/// `ι_v(a ∧ b) = ι_v a ∧ b + (−1)^p a ∧ ι_v b`; trivially true when `p + r > dim`.
pub fn antiderivation((dim, p, r, ca, cb, v): ContractIn) -> bool {
    if p + r > dim {
        return true;
    }
    let a = form(dim, p, &ca);
    let b = form(dim, r, &cb);
    let v = Vector::new(v[..dim].iter().map(|&x| q(x)).collect());
    a.wedge(&b).contract(&v)
        == a.contract(&v).wedge(&b) + a.wedge(&b.contract(&v)).scale(sign(a.degree()))
}

pub fn contract_input() -> impl Strategy<Value = ContractIn> {
    (
        2usize..7,
        1usize..4,
        1usize..4,
        coeffs(),
        coeffs(),
        prop::collection::vec(-3i64..=3, 7),
    )
}

type StarIn = (
    usize,
    usize,
    Vec<i64>,
    Vec<(usize, usize, i64)>,
    Vec<i64>,
    bool,
);

pub fn star_sign((dim, k, c, o, diag, orient): StarIn) -> bool {
    let f = form(dim, k, &c);
    let g = metric(dim, &o, &diag);
    let orient = if orient { 1 } else { -1 };
    let ss = f
        .hodge_star(&g, orient)
        .unwrap()
        .hodge_star(&g, orient)
        .unwrap();
    let k = f.degree();
    ss == f.scale(sign(k * (dim - k)))
}

pub fn star_input() -> impl Strategy<Value = StarIn> {
    (
        1usize..6,
        0usize..6,
        coeffs(),
        ops(),
        prop::collection::vec(1i64..=3, 6),
        prop::bool::ANY,
    )
}

type MetricIn = (usize, Vec<(usize, usize, i64)>, Vec<i64>);

pub fn metric_input(algebras: usize) -> impl Strategy<Value = MetricIn> {
    (0usize..algebras, ops(), prop::collection::vec(1i64..=2, 7))
}

pub fn koszul((a, o, diag): MetricIn) -> bool {
    let g = algebra(a);
    let m = metric(g.dim(), &o, &diag);
    let conn = levi_civita(&g, &m).unwrap();
    conn.is_torsion_free(&g) && conn.is_metric(&m)
}

pub fn ricci_symmetric((a, o, diag): MetricIn) -> bool {
    let g = algebra(a);
    let m = metric(g.dim(), &o, &diag);
    levi_civita(&g, &m).unwrap().ricci(&g).is_symmetric()
}

pub fn bianchi((a, o, diag): MetricIn) -> bool {
    let g = algebra(a);
    let m = metric(g.dim(), &o, &diag);
    levi_civita(&g, &m).unwrap().satisfies_bianchi(&g)
}
