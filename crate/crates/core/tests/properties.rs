mod common;

use common::*;
use nilgeo::algdsl::{
    parse_algebra, parse_endo, parse_real_form, serialize_algebra, serialize_algebra_json,
};
use nilgeo::cealg::LieAlgebra;
use nilgeo::classify::contact_existence_polynomial;
use nilgeo::exterior::{Endo, KForm, Vector};
use nilgeo::legendrian::{extension_obstruction, FamilySpec, Subalgebra};
use nilgeo::presets::heisenberg_ccy;
use nilgeo::structures::{check_contact, check_sasakian, Normalization};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn d_squared_is_zero(x in d_squared_input()) {
        prop_assert!(d_squared(x));
    }

    #[test]
    fn wedge_graded_commutative_and_associative(x in wedge_input()) {
        prop_assert!(wedge_laws(x));
    }

    #[test]
    fn contraction_is_antiderivation(x in contract_input()) {
        prop_assert!(antiderivation(x));
    }

    #[test]
    fn double_hodge_star_sign(x in star_input()) {
        prop_assert!(star_sign(x));
    }

    #[test]
    fn koszul_torsion_free_and_metric(x in metric_input(10)) {
        prop_assert!(koszul(x));
    }

    #[test]
    fn ricci_symmetric_on_catalog(x in metric_input(8)) {
        prop_assert!(ricci_symmetric(x));
    }

    #[test]
    fn first_bianchi_on_catalog(x in metric_input(8)) {
        prop_assert!(bianchi(x));
    }

    #[test]
    fn parse_serialize_round_trip(a in 0usize..10, o in ops()) {
        let g = algebra(a);
        let h = g.rebase(&unimodular(g.dim(), &o)).unwrap();
        for alg in [g, h] {
            prop_assert_eq!(parse_algebra::<Q>(&serialize_algebra(&alg)).unwrap(), alg.clone());
            prop_assert_eq!(parse_algebra::<Q>(&serialize_algebra_json(&alg)).unwrap(), alg);
        }
    }

    #[test]
    fn jacobi_accept_reject(c in prop::collection::vec(-1i64..=1, 10)) {
        // de^k built only from e^i ∧ e^j with i < j < k
        let dim = 5;
        let mut it = c.iter();
        let d1: Vec<KForm<Q>> = (1..=dim)
            .map(|k| {
                let mut f = KForm::zero(dim, 2);
                for j in 1..k {
                    for i in 1..j {
                        if let Some(&x) = it.next() {
                            f = f + KForm::basis(dim, &[i, j]).scale(q(x));
                        }
                    }
                }
                f
            })
            .collect();
        let unchecked = LieAlgebra::new_unchecked(d1.clone()).unwrap();
        let basis = |i: usize| Vector::<Q>::basis(dim, i);
        let mut jacobi = true;
        for i in 1..=dim {
            for j in 1..=dim {
                for k in 1..=dim {
                    let t = unchecked.bracket(&unchecked.bracket(&basis(i), &basis(j)), &basis(k))
                        + unchecked.bracket(&unchecked.bracket(&basis(j), &basis(k)), &basis(i))
                        + unchecked.bracket(&unchecked.bracket(&basis(k), &basis(i)), &basis(j));
                    jacobi &= t.is_zero();
                }
            }
        }
        prop_assert_eq!(LieAlgebra::new(d1).is_ok(), jacobi);
    }

    #[test]
    fn sasakian_verdict_basis_independent(which in 0usize..3, o in ops()) {
        let (spec, alpha, j, expect) = [
            ("(0,0,12)", "2*e3", "pairs:(1,2)", true),
            ("(0,0,0,0,12+34)", "2*e5", "pairs:(1,2),(3,4)", true),
            ("(0,0,0,0,12+34)", "2*e5", "pairs:(1,3),(2,4)", false),
        ][which];
        let g = parse_algebra::<Q>(spec).unwrap();
        let dim = g.dim();
        let p = unimodular(dim, &o);
        let alpha = parse_real_form::<Q>(alpha, dim).unwrap();
        let j: Endo<Q> = parse_endo(j, dim).unwrap();
        let cols: Vec<Vector<Q>> = (0..dim).map(|c| Vector::new(p.column(c))).collect();
        let g2 = g.rebase(&p).unwrap();
        let alpha2 = alpha.pullback_unchecked(&cols);
        let j2 = j.conjugate(&p).unwrap();
        let before = check_contact(&g, &alpha).and_then(|c| check_sasakian(&c, &j)).is_ok();
        let after = check_contact(&g2, &alpha2).and_then(|c| check_sasakian(&c, &j2)).is_ok();
        prop_assert_eq!(before, expect);
        prop_assert_eq!(after, expect);
    }

    #[test]
    fn contact_polynomial_verdict_basis_independent(a in 0usize..10, o in ops()) {
        let g = algebra(a);
        prop_assume!(g.dim() % 2 == 1);
        let h = g.rebase(&unimodular(g.dim(), &o)).unwrap();
        prop_assert_eq!(
            contact_existence_polynomial(&g).unwrap().is_zero(),
            contact_existence_polynomial(&h).unwrap().is_zero()
        );
    }

    #[test]
    fn obstruction_phase_equivariance(n in 1i64..20, d in 1i64..20) {
        let t = Q::new(n.into(), d.into());
        let base = heisenberg_ccy::<Q>(1);
        let sub = Subalgebra::new(&base.algebra, vec![Vector::basis(3, 1)]).unwrap();
        let fam = FamilySpec::pythagorean(&base, &[q(0), t.clone()]);
        let samples = extension_obstruction(&sub, &fam, Normalization::Standard).unwrap();
        let (c, s) = {
            let t2 = t.clone() * t.clone();
            ((q(1) - t2.clone()) / (q(1) + t2.clone()), (t.clone() + t.clone()) / (q(1) + t2))
        };
        let re = base.epsilon.re.pullback_unchecked(sub.basis());
        let im = base.epsilon.im.pullback_unchecked(sub.basis());
        prop_assert_eq!(samples[1].pullback.clone(), re.scale(s.clone()) + im.scale(c));
        prop_assert_eq!(samples[1].class_is_zero(), s == q(0));
    }
}
