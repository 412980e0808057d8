//! Reference structures.

use crate::cealg::LieAlgebra;
use crate::error::Result;
use crate::exterior::{ComplexKForm, Endo, KForm};
use crate::scalar::Scalar;
use crate::structures::{
    check_r_contact_ccy, verify_ccy, CcyStructure, Normalization, RContactCcyStructure,
};

/// Unverified CCY data `(g, α, J, ε)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CcyData<T> {
    pub algebra: LieAlgebra<T>,
    pub alpha: KForm<T>,
    pub j: Endo<T>,
    pub epsilon: ComplexKForm<T>,
}

impl<T: Scalar> CcyData<T> {
    pub fn verify(&self, mode: Normalization) -> Result<CcyStructure<T>> {
        verify_ccy(&self.algebra, &self.alpha, &self.j, &self.epsilon, mode)
    }
}

/// `ε = Π_k (e^{a_k} + i e^{b_k})` over the given pairs.
pub fn product_form<T: Scalar>(dim: usize, pairs: &[(usize, usize)]) -> ComplexKForm<T> {
    pairs.iter().fold(
        ComplexKForm::from_real(KForm::constant(dim, T::one())),
        |acc, &(a, b)| {
            let f = ComplexKForm::new(KForm::generator(dim, a), KForm::generator(dim, b))
                .expect("same shape");
            acc.wedge(&f)
        },
    )
}

/// Heisenberg algebra of dimension `2n + 1` with `α = 2e^{2n+1}`,
/// `J X_{2k−1} = X_{2k}` and `ε = Π (e^{2k−1} + i e^{2k})`.
pub fn heisenberg_ccy<T: Scalar>(n: usize) -> CcyData<T> {
    let dim = 2 * n + 1;
    let pairs: Vec<(usize, usize)> = (1..=n).map(|k| (2 * k - 1, 2 * k)).collect();
    CcyData {
        algebra: LieAlgebra::heisenberg(n),
        alpha: KForm::generator(dim, dim).scale(T::from_int(2)),
        j: Endo::from_pairs(dim, &pairs).expect("valid pairs"),
        epsilon: product_form(dim, &pairs),
    }
}

/// Unverified r-contact CY data.
#[derive(Clone, Debug, PartialEq)]
pub struct RCcyData<T> {
    pub algebra: LieAlgebra<T>,
    pub alphas: Vec<KForm<T>>,
    pub j: Endo<T>,
    pub epsilon: ComplexKForm<T>,
}

impl<T: Scalar> RCcyData<T> {
    pub fn verify(&self, mode: Normalization) -> Result<RContactCcyStructure<T>> {
        check_r_contact_ccy(&self.algebra, &self.alphas, &self.j, &self.epsilon, mode)
    }
}

/// Invariant model of the Kodaira–Thurston manifold: `(0,0,12,0)` with
/// `α_1 = 2e^3`, `α_2 = 2e^3 + 2e^4`, `J X_1 = X_2`, `ε = e^1 + i e^2`.
///
/// In coordinates `e^1 = dx`, `e^2 = dy`, `e^3 = x dy − dz`, `e^4 = dt`, so
/// `X_3 = −∂_z` and `X_4 = ∂_t`.
pub fn kodaira_thurston<T: Scalar>() -> RCcyData<T> {
    let mut d1: Vec<KForm<T>> = (0..4).map(|_| KForm::zero(4, 2)).collect();
    d1[2] = KForm::basis(4, &[1, 2]);
    let two = T::from_int(2);
    RCcyData {
        algebra: LieAlgebra::new(d1).expect("Jacobi holds"),
        alphas: vec![
            KForm::generator(4, 3).scale(two.clone()),
            (KForm::generator(4, 3) + KForm::generator(4, 4)).scale(two),
        ],
        j: Endo::from_pairs(4, &[(1, 2)]).expect("valid pairs"),
        epsilon: product_form(4, &[(1, 2)]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn family_members_verify() {
        for n in 1..=3 {
            heisenberg_ccy::<Rational>(n)
                .verify(Normalization::Standard)
                .unwrap();
        }
        kodaira_thurston::<Rational>()
            .verify(Normalization::Standard)
            .unwrap();
    }
}
