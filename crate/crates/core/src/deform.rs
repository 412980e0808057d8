//! Discretized linearized deformation operator of a special Legendrian
//! circle in a 3-dimensional CCY nilmanifold.
//!
//! A normal field `Z = f R + u JX` on the circle `L` tangent to `X` has
//! linearization
//!
//! ```text
//! F_*(Z) = ( d f + p*(ι_{uJX} dα),  2 p*(𝓛_Z Im ε) )
//!        = ( (f′ + c u) dθ,          k u′ dθ )
//! ```
//!
//! with `c = dα(JX, X)` and `k = 2 Im ε(JX)`. For the Heisenberg structure
//! `c = −2` and `k = 2`. Also `k = −c / Re ε(X)`, which is the relation
//! `θ = −*τ` between the two components.
//!
//! The circle has unit period on an `N`-point grid. The default stencil uses
//! a forward difference for `f` and a backward difference for `u`; its
//! kernel is exactly the constants in `f` for every `N`.

use crate::error::{Error, Result};
use crate::exterior::Vector;
use crate::legendrian::{check_special_legendrian, LegendrianVerdict, Subalgebra};
use crate::linalg::SparseMatrix;
use crate::scalar::Scalar;
use crate::structures::CcyStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircleGrid {
    n: usize,
}

impl CircleGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::Invalid(format!(
                "grid size must be at least 4, got {n}"
            )));
        }
        Ok(CircleGrid { n })
    }

    pub fn size(&self) -> usize {
        self.n
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Stencil {
    /// Forward differences on `f`, backward on `u`.
    #[default]
    Staggered,
    /// Central differences on both; has a spurious checkerboard mode for even `N`.
    Central,
}

/// The constants of the reduced system.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedSystem<T> {
    /// `dα(JX, X)`
    pub c: T,
    /// `2 Im ε(JX)`
    pub k: T,
}

/// Derive `c` and `k` for the circle tangent to `x` and check `k = −c/Re ε(X)`.
pub fn reduce<T: Scalar>(ccy: &CcyStructure<T>, x: &Vector<T>) -> Result<ReducedSystem<T>> {
    if ccy.algebra().dim() != 3 {
        return Err(Error::Unsupported(
            "the deformation operator is assembled for 3-dimensional structures only".into(),
        ));
    }
    let sub = Subalgebra::new(ccy.algebra(), vec![x.clone()])?;
    let verdict = check_special_legendrian(&sub, ccy)?.verdict;
    if verdict != LegendrianVerdict::SpecialLegendrian {
        return Err(Error::Invalid(format!(
            "the circle must be special Legendrian, got {verdict}"
        )));
    }
    let jx = ccy.j().apply(x);
    let c = ccy.contact().dalpha().evaluate(&[jx.clone(), x.clone()]);
    let k = ccy.epsilon().im.evaluate(std::slice::from_ref(&jx)) * T::from_int(2);
    let re_x = ccy.epsilon().re.evaluate(std::slice::from_ref(x));
    if c.is_zero() || k.clone() * re_x != -c.clone() {
        return Err(Error::Invalid(format!(
            "inconsistent reduced system: c = {c}, k = {k}"
        )));
    }
    Ok(ReducedSystem { c, k })
}

/// `2N × 2N` operator on `(f_0, …, f_{N−1}, u_0, …, u_{N−1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearizedOperator<T> {
    pub grid: CircleGrid,
    pub stencil: Stencil,
    pub matrix: SparseMatrix<T>,
}

impl<T: Scalar> LinearizedOperator<T> {
    pub fn zero(grid: CircleGrid) -> Self {
        let n = grid.size();
        LinearizedOperator {
            grid,
            stencil: Stencil::default(),
            matrix: SparseMatrix::new(2 * n, 2 * n),
        }
    }

    pub fn apply(&self, f: &[T], u: &[T]) -> (Vec<T>, Vec<T>) {
        let n = self.grid.size();
        let mut v = f.to_vec();
        v.extend_from_slice(u);
        let mut out = self.matrix.mul_vec(&v);
        let second = out.split_off(n);
        (out, second)
    }

    /// `2N − rank`, exactly.
    pub fn kernel_dimension(&self) -> usize {
        self.matrix.cols() - self.matrix.rank()
    }
}

fn add_difference<T: Scalar>(
    m: &mut SparseMatrix<T>,
    row0: usize,
    col0: usize,
    n: usize,
    scale: &T,
    stencil: Stencil,
    forward: bool,
) {
    let h = T::from_int(n as i64) * scale.clone();
    for i in 0..n {
        let (plus, minus, factor) = match (stencil, forward) {
            (Stencil::Staggered, true) => ((i + 1) % n, i, h.clone()),
            (Stencil::Staggered, false) => (i, (i + n - 1) % n, h.clone()),
            (Stencil::Central, _) => (
                (i + 1) % n,
                (i + n - 1) % n,
                h.clone() * T::from_ratio(1, 2),
            ),
        };
        m.add_to(row0 + i, col0 + plus, factor.clone());
        m.add_to(row0 + i, col0 + minus, -factor);
    }
}

/// Assemble the discretized operator for the circle tangent to `x`.
pub fn assemble_operator<T: Scalar>(
    grid: CircleGrid,
    ccy: &CcyStructure<T>,
    x: &Vector<T>,
    stencil: Stencil,
) -> Result<LinearizedOperator<T>> {
    let sys = reduce(ccy, x)?;
    let n = grid.size();
    let mut m = SparseMatrix::new(2 * n, 2 * n);
    add_difference(&mut m, 0, 0, n, &T::one(), stencil, true);
    for i in 0..n {
        m.add_to(i, n + i, sys.c.clone());
    }
    add_difference(&mut m, n, n, n, &sys.k, stencil, false);
    Ok(LinearizedOperator {
        grid,
        stencil,
        matrix: m,
    })
}

/// The reference case: the circle tangent to `X_1` in the Heisenberg CCY.
pub fn reference_operator<T: Scalar>(n: usize, stencil: Stencil) -> Result<LinearizedOperator<T>> {
    let ccy = crate::presets::heisenberg_ccy::<T>(1).verify(Default::default())?;
    assemble_operator(CircleGrid::new(n)?, &ccy, &Vector::basis(3, 1), stencil)
}

/// Kernel dimension, and whether the constant Reeb field `(f ≡ 1, u ≡ 0)`
/// lies in the kernel (so spans it when the dimension is 1).
pub fn kernel_report<T: Scalar>(op: &LinearizedOperator<T>) -> (usize, bool) {
    let n = op.grid.size();
    let (a, b) = op.apply(&vec![T::one(); n], &vec![T::zero(); n]);
    let reeb = a.iter().chain(&b).all(T::is_zero);
    (op.kernel_dimension(), reeb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::heisenberg_ccy;
    use crate::scalar::Rational;

    type Q = Rational;

    #[test]
    fn reduced_constants() {
        let h = heisenberg_ccy::<Q>(1).verify(Default::default()).unwrap();
        let s = reduce(&h, &Vector::basis(3, 1)).unwrap();
        assert_eq!((s.c, s.k), (Q::from_int(-2), Q::from_int(2)));
        assert!(reduce(&h, &Vector::basis(3, 2)).is_err());
    }

    #[test]
    fn kernel_examples() {
        for n in [4, 5, 8, 16] {
            let op = reference_operator::<Q>(n, Stencil::Staggered).unwrap();
            assert_eq!(kernel_report(&op), (1, true), "N = {n}");
        }
        let op = reference_operator::<Q>(4, Stencil::Staggered).unwrap();
        let (first, _) = op.apply(&vec![Q::from_int(0); 4], &vec![Q::from_int(1); 4]);
        assert!(first.iter().all(|v| *v == Q::from_int(-2)));
        assert_eq!(
            LinearizedOperator::<Q>::zero(CircleGrid::new(4).unwrap()).kernel_dimension(),
            8
        );
        assert!(CircleGrid::new(3).is_err());
    }

    #[test]
    fn central_stencil_has_checkerboard_mode() {
        assert_eq!(
            reference_operator::<Q>(8, Stencil::Central)
                .unwrap()
                .kernel_dimension(),
            2
        );
        assert_eq!(
            reference_operator::<Q>(9, Stencil::Central)
                .unwrap()
                .kernel_dimension(),
            1
        );
    }
}
