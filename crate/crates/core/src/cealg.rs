//! Chevalley–Eilenberg complex of a Lie algebra.
//!
//! An algebra is given by the differentials `d e^k` of its coframe. Brackets
//! are recovered through `dγ(X, Y) = −γ([X, Y])`, so Salamon's `(0,0,12)`
//! has `[X_1, X_2] = −X_3`. Betti numbers of the algebra are the Betti numbers
//! of any compact nilmanifold it defines (Nomizu), which is how topological
//! obstructions on nilmanifolds are checked here.

use std::fmt;

use crate::error::{ensure_dim, Error, Result};
use crate::exterior::{Blade, KForm, Vector};
use crate::linalg::Matrix;
use crate::scalar::{Ring, Scalar};

#[derive(Clone, PartialEq, Debug)]
pub struct LieAlgebra<T> {
    dim: usize,
    d1: Vec<KForm<T>>,
    brackets: Vec<Vec<Vector<T>>>,
}

impl<T: Ring> LieAlgebra<T> {
    /// Algebra with `d e^k = d1[k-1]`. Fails unless `d ∘ d = 0` on every
    /// generator (the Jacobi identity).
    pub fn new(d1: Vec<KForm<T>>) -> Result<Self> {
        let alg = Self::new_unchecked(d1)?;
        for k in 1..=alg.dim {
            let dd = alg.differential(&alg.d1[k - 1]);
            if !dd.is_zero() {
                return Err(Error::Jacobi {
                    generator: k,
                    value: format!("{dd:?}"),
                });
            }
        }
        Ok(alg)
    }

    /// Like [`LieAlgebra::new`] without the Jacobi check.
    pub fn new_unchecked(d1: Vec<KForm<T>>) -> Result<Self> {
        let dim = d1.len();
        for f in &d1 {
            ensure_dim(dim, f.dim())?;
            if f.degree() != 2 && !(f.is_zero() && dim < 2) {
                return Err(Error::Degree(format!(
                    "differential of a generator must be a 2-form, got degree {}",
                    f.degree()
                )));
            }
        }
        let mut brackets = vec![vec![Vector::zero(dim); dim]; dim];
        for i in 1..=dim {
            for j in 1..=dim {
                let coeffs = (1..=dim).map(|k| -d1[k - 1].coeff(&[i, j])).collect();
                brackets[i - 1][j - 1] = Vector::new(coeffs);
            }
        }
        Ok(LieAlgebra { dim, d1, brackets })
    }

    pub fn abelian(dim: usize) -> Self {
        Self::new((0..dim).map(|_| KForm::zero(dim, 2.min(dim))).collect()).unwrap()
    }

    /// `(0,…,0, 12+34+…+(2n-1)(2n))`: `[X_{2k-1}, X_{2k}] = −X_{2n+1}`.
    pub fn heisenberg(n: usize) -> Self {
        let dim = 2 * n + 1;
        let mut d1: Vec<KForm<T>> = (0..dim).map(|_| KForm::zero(dim, 2)).collect();
        d1[dim - 1] = (1..=n).fold(KForm::zero(dim, 2), |acc, k| {
            acc + KForm::basis(dim, &[2 * k - 1, 2 * k])
        });
        Self::new(d1).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `d e^k`, 1-based.
    pub fn d_generator(&self, k: usize) -> &KForm<T> {
        &self.d1[k - 1]
    }

    pub fn generator_differentials(&self) -> &[KForm<T>] {
        &self.d1
    }

    /// `[X_i, X_j]`, 1-based.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &Vector<T> {
        &self.brackets[i - 1][j - 1]
    }

    pub fn bracket(&self, x: &Vector<T>, y: &Vector<T>) -> Vector<T> {
        let mut out = Vector::zero(self.dim);
        for i in 1..=self.dim {
            let xi = x.get(i);
            if xi.is_zero() {
                continue;
            }
            for j in 1..=self.dim {
                let yj = y.get(j);
                if yj.is_zero() {
                    continue;
                }
                out = out + self.basis_bracket(i, j).scale(xi.clone() * yj);
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.d1.iter().all(KForm::is_zero)
    }

    /// Chevalley–Eilenberg differential, extended from generators as a graded
    /// derivation. Panics on dimension mismatch; see [`LieAlgebra::try_differential`].
    pub fn differential(&self, a: &KForm<T>) -> KForm<T> {
        self.try_differential(a)
            .expect("form and algebra dimensions differ")
    }

    pub fn try_differential(&self, a: &KForm<T>) -> Result<KForm<T>> {
        ensure_dim(self.dim, a.dim())?;
        let n = self.dim;
        let mut out = KForm::zero(n, (a.degree() + 1).min(n));
        if a.degree() >= n {
            return Ok(out);
        }
        for (b, c) in a.terms() {
            let idx = b.indices();
            for (m, &i) in idx.iter().enumerate() {
                let de = &self.d1[i - 1];
                if de.is_zero() {
                    continue;
                }
                let left = KForm::basis(n, &idx[..m]);
                let right = KForm::basis(n, &idx[m + 1..]);
                let term = left.wedge(de).wedge(&right).scale(c.clone());
                out = out + if m % 2 == 1 { -term } else { term };
            }
        }
        Ok(out)
    }

    /// Cartan formula `𝓛_v = d ι_v + ι_v d` on invariant forms.
    pub fn lie_derivative(&self, v: &Vector<T>, a: &KForm<T>) -> Result<KForm<T>> {
        ensure_dim(self.dim, v.dim())?;
        ensure_dim(self.dim, a.dim())?;
        let da = self.try_differential(a)?;
        let inner = if da.degree() > a.degree() {
            da.contract(v)
        } else {
            KForm::zero(self.dim, a.degree())
        };
        if a.degree() == 0 {
            return Ok(inner);
        }
        Ok(self.differential(&a.contract(v)) + inner)
    }

    /// The 1-form `Σ coeffs[i] e^{i+1}`.
    pub fn one_form(&self, coeffs: &[T]) -> KForm<T> {
        covector(coeffs)
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> LieAlgebra<U> {
        LieAlgebra::new_unchecked(self.d1.iter().map(|d| d.map(&f)).collect())
            .expect("mapping preserves shape")
    }
}

/// The 1-form with the given coordinates in the coframe.
pub fn covector<T: Ring>(coeffs: &[T]) -> KForm<T> {
    let n = coeffs.len();
    coeffs
        .iter()
        .enumerate()
        .fold(KForm::zero(n, 1), |acc, (i, c)| {
            acc + KForm::generator(n, i + 1).scale(c.clone())
        })
}

/// Betti numbers `b_0, …, b_n` of the Chevalley–Eilenberg complex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BettiTable(pub Vec<usize>);

impl BettiTable {
    pub fn get(&self, k: usize) -> usize {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    pub fn satisfies_poincare_duality(&self) -> bool {
        let n = self.0.len();
        (0..n).all(|k| self.0[k] == self.0[n - 1 - k])
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|b| b.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl<T: Scalar> LieAlgebra<T> {
    /// Matrix of `d: Λ^k → Λ^{k+1}` in lexicographic bases; column `j` is the
    /// image of the `j`-th basis `k`-form.
    pub fn differential_matrix(&self, k: usize) -> Matrix<T> {
        let n = self.dim;
        let src = Blade::all(n, k);
        let dst = Blade::all(n, k + 1);
        let mut m = Matrix::zeros(dst.len(), src.len());
        for (j, b) in src.iter().enumerate() {
            let img = self.differential(&KForm::basis(n, &b.indices()));
            for (i, t) in dst.iter().enumerate() {
                m[(i, j)] = img.coeff_blade(*t);
            }
        }
        m
    }

    /// `b_k = dim ker(d|Λ^k) − rank(d|Λ^{k−1})`, exactly.
    pub fn betti_numbers(&self) -> BettiTable {
        let n = self.dim;
        // ranks[k] = rank of d: Λ^k → Λ^{k+1}
        let ranks: Vec<usize> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..n)
                .map(|k| s.spawn(move || self.differential_matrix(k).rank()))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let dim_k = |k: usize| Blade::all(n, k).len();
        BettiTable(
            (0..=n)
                .map(|k| {
                    let out_rank = if k < n { ranks[k] } else { 0 };
                    let in_rank = if k > 0 { ranks[k - 1] } else { 0 };
                    dim_k(k) - out_rank - in_rank
                })
                .collect(),
        )
    }

    /// If `a = d b` for some `b`, one such primitive (free coordinates set to
    /// zero); `Ok(None)` if `a` is closed but not exact.
    pub fn is_exact(&self, a: &KForm<T>) -> Result<Option<KForm<T>>> {
        ensure_dim(self.dim, a.dim())?;
        let da = self.differential(a);
        if a.degree() < self.dim && !da.is_zero() {
            return Err(Error::NotClosed(da.to_string()));
        }
        let k = a.degree();
        if k == 0 {
            return Ok(a.is_zero().then(|| KForm::zero(self.dim, 0)));
        }
        let n = self.dim;
        let m = self.differential_matrix(k - 1);
        let rhs: Vec<T> = Blade::all(n, k).iter().map(|b| a.coeff_blade(*b)).collect();
        Ok(m.solve(&rhs).map(|x| {
            let mut b = KForm::zero(n, k - 1);
            for (blade, c) in Blade::all(n, k - 1).into_iter().zip(x) {
                b = b + KForm::basis(n, &blade.indices()).scale(c);
            }
            b
        }))
    }

    /// Lower central series reaches zero.
    pub fn is_nilpotent(&self) -> bool {
        let n = self.dim;
        let mut current: Vec<Vector<T>> = (1..=n).map(|i| Vector::basis(n, i)).collect();
        for _ in 0..=n {
            let mut next = Vec::new();
            for x in 1..=n {
                for y in &current {
                    let b = self.bracket(&Vector::basis(n, x), y);
                    if !b.is_zero() {
                        next.push(b);
                    }
                }
            }
            let basis = span_basis(&next);
            if basis.is_empty() {
                return true;
            }
            if basis.len() == span_basis(&current).len() {
                return false;
            }
            current = basis;
        }
        false
    }

    /// Structure of the subalgebra spanned by `basis`, in its own basis, or
    /// `None` if the span is not closed under the bracket.
    pub fn subalgebra(&self, basis: &[Vector<T>]) -> Result<Option<LieAlgebra<T>>> {
        for v in basis {
            ensure_dim(self.dim, v.dim())?;
        }
        let k = basis.len();
        let cols: Vec<Vec<T>> = basis.iter().map(|v| v.coeffs().to_vec()).collect();
        let span = Matrix::from_columns(&cols);
        if span.rank() < k {
            return Err(Error::Dependent);
        }
        let mut d1: Vec<KForm<T>> = (0..k).map(|_| KForm::zero(k, 2.min(k))).collect();
        for a in 0..k {
            for b in a + 1..k {
                let br = self.bracket(&basis[a], &basis[b]);
                let Some(coords) = span.solve(br.coeffs()) else {
                    return Ok(None);
                };
                for (c, s) in coords.into_iter().enumerate() {
                    if !s.is_zero() {
                        d1[c] = d1[c].clone() - KForm::basis(k, &[a + 1, b + 1]).scale(s);
                    }
                }
            }
        }
        LieAlgebra::new(d1).map(Some)
    }

    /// The same algebra in the basis `Y_j = Σ_i p[i][j] X_i`.
    pub fn rebase(&self, p: &Matrix<T>) -> Result<LieAlgebra<T>> {
        let pinv = p.inverse().ok_or(Error::Dependent)?;
        let ys: Vec<Vector<T>> = (0..self.dim).map(|j| Vector::new(p.column(j))).collect();
        let d1 = (0..self.dim)
            .map(|a| {
                let f = covector(pinv.row(a));
                self.differential(&f).pullback(&ys)
            })
            .collect::<Result<Vec<_>>>()?;
        LieAlgebra::new(d1)
    }
}

fn span_basis<T: Scalar>(vs: &[Vector<T>]) -> Vec<Vector<T>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let rows: Vec<Vec<T>> = vs.iter().map(|v| v.coeffs().to_vec()).collect();
    let (r, pivots) = Matrix::from_rows(rows).rref();
    (0..pivots.len())
        .map(|i| Vector::new(r.row(i).to_vec()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type F = KForm<Rational>;
    type V = Vector<Rational>;
    type Alg = LieAlgebra<Rational>;

    fn e(dim: usize, idx: &[usize]) -> F {
        F::basis(dim, idx)
    }

    fn five() -> Alg {
        Alg::heisenberg(2)
    }

    fn h3() -> Alg {
        Alg::heisenberg(1)
    }

    #[test]
    fn brackets_follow_sign_convention() {
        let h = h3();
        assert_eq!(h.basis_bracket(1, 2), &-V::basis(3, 3));
        assert_eq!(h.basis_bracket(2, 1), &V::basis(3, 3));
        assert!(h.basis_bracket(1, 3).is_zero());
    }

    #[test]
    fn differential_examples() {
        let g = five();
        assert_eq!(g.differential(&e(5, &[5])), e(5, &[1, 2]) + e(5, &[3, 4]));
        assert_eq!(g.differential(&e(5, &[1, 5])), -e(5, &[1, 3, 4]));
        assert!(g.differential(&e(5, &[1, 2])).is_zero());
    }

    #[test]
    fn jacobi_failure_is_rejected() {
        let d1 = vec![e(4, &[3, 4]), F::zero(4, 2), F::zero(4, 2), e(4, &[1, 2])];
        assert!(matches!(Alg::new(d1), Err(Error::Jacobi { .. })));
    }

    #[test]
    fn betti_examples() {
        assert_eq!(h3().betti_numbers(), BettiTable(vec![1, 2, 2, 1]));
        assert_eq!(five().betti_numbers(), BettiTable(vec![1, 4, 5, 5, 4, 1]));
        assert_eq!(
            Alg::abelian(5).betti_numbers(),
            BettiTable(vec![1, 5, 10, 10, 5, 1])
        );
    }

    #[test]
    fn exactness_examples() {
        let g = five();
        let kappa = e(5, &[1, 2]) + e(5, &[3, 4]);
        assert_eq!(g.is_exact(&kappa).unwrap(), Some(e(5, &[5])));
        assert_eq!(g.is_exact(&e(5, &[1, 2])).unwrap(), None);
        assert_eq!(g.is_exact(&e(5, &[1, 3, 4])).unwrap(), Some(-e(5, &[1, 5])));
        assert!(matches!(g.is_exact(&e(5, &[5])), Err(Error::NotClosed(_))));
    }

    #[test]
    fn lie_derivative_examples() {
        let h = h3();
        assert_eq!(
            h.lie_derivative(&V::basis(3, 1), &e(3, &[3])).unwrap(),
            e(3, &[2])
        );
        let reeb = V::basis(3, 3).scale(Rational::from_ratio(1, 2));
        assert!(h.lie_derivative(&reeb, &e(3, &[1, 2])).unwrap().is_zero());
        let ab = Alg::abelian(4);
        let v = V::new((1..=4).map(Rational::from_int).collect());
        assert!(ab.lie_derivative(&v, &e(4, &[1, 3])).unwrap().is_zero());
    }

    #[test]
    fn nilpotency() {
        assert!(five().is_nilpotent());
        assert!(Alg::abelian(3).is_nilpotent());
        // (0, 12-ish) non-nilpotent: [X1, X2] = X2, i.e. de2 = -e12
        let d1 = vec![F::zero(2, 2), -e(2, &[1, 2])];
        let g = Alg::new(d1).unwrap();
        assert!(!g.is_nilpotent());
    }

    #[test]
    fn subalgebra_structure() {
        let h = h3();
        let sub = h
            .subalgebra(&[V::basis(3, 1), V::basis(3, 3)])
            .unwrap()
            .unwrap();
        assert!(sub.is_abelian());
        assert!(h
            .subalgebra(&[V::basis(3, 1), V::basis(3, 2)])
            .unwrap()
            .is_none());
        let full = h
            .subalgebra(&[V::basis(3, 1), V::basis(3, 2), V::basis(3, 3)])
            .unwrap()
            .unwrap();
        assert_eq!(full, h);
    }

    #[test]
    fn rebase_identity_is_noop() {
        let g = five();
        assert_eq!(g.rebase(&Matrix::identity(5)).unwrap(), g);
    }
}
