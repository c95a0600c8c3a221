//! Invariants as randomized properties.

use num_bigint::BigInt;
use proptest::prelude::*;
use vwcore::algebra::{rat, rint, QSeries, Rat, Ring, ULaurentSeries, YFraction};
use vwcore::blowup::{upsilon_closed_form, upsilon_direct};
use vwcore::direct::arm_leg_pair;
use vwcore::nekrasov::{chi_hat_eval, EvalPoint};
use vwcore::partitions::{pair_terms, Partition};
use vwcore::vw::{delta_check, minimal_surface, q_form, rank2_closed_form_series, vertical_partition_function, y_inverted, SwClass};
use vwcore::Error;

fn partition(max: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..=max, 0..=max).prop_map(Partition::new)
}

fn nonunit_rational() -> impl Strategy<Value = Rat> {
    (-30i64..=30, 1i64..=19)
        .prop_filter("avoid 0, ±1", |(p, q)| *p != 0 && p.abs() != *q)
        .prop_map(|(p, q)| Rat::new(BigInt::from(p), BigInt::from(q)))
}

fn point(r: usize) -> impl Strategy<Value = EvalPoint> {
    (prop::collection::vec(nonunit_rational(), 2), prop::collection::vec(nonunit_rational(), r), nonunit_rational())
        .prop_map(|(t, e, y)| EvalPoint { t, e, y })
}

fn q_series(max_terms: usize) -> impl Strategy<Value = QSeries<Rat>> {
    prop::collection::vec(-5i64..=5, 1..=max_terms).prop_map(|c| {
        let n = c.len() as i64;
        QSeries::from_terms(
            std::iter::once((rint(0), rint(1))).chain(c.into_iter().enumerate().map(|(k, x)| (rint(k as i64 + 1), rint(x)))),
            Some(rint(n)),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn pair_character_forms_agree(l in partition(4), m in partition(4)) {
        prop_assert_eq!(arm_leg_pair(&l, &m), pair_terms(&l, &m));
    }

    #[test]
    fn pair_character_rank(l in partition(5), m in partition(5)) {
        let rank: i64 = arm_leg_pair(&l, &m).iter().map(|t| t.2).sum();
        prop_assert_eq!(rank, (l.size() + m.size()) as i64);
    }

    #[test]
    fn framing_permutation_rank2(p in point(2)) {
        match (chi_hat_eval(2, 2, &p), chi_hat_eval(2, 2, &p.permute_e(&[1, 0]))) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(Error::SingularPoint(_)), _) | (_, Err(Error::SingularPoint(_))) => {}
            (a, b) => prop_assert!(false, "{:?} {:?}", a, b),
        }
    }

    #[test]
    fn framing_inversion_rank3(p in point(3)) {
        match (chi_hat_eval(3, 1, &p), chi_hat_eval(3, 1, &p.invert_e())) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(Error::SingularPoint(_)), _) | (_, Err(Error::SingularPoint(_))) => {}
            (a, b) => prop_assert!(false, "{:?} {:?}", a, b),
        }
    }

    #[test]
    fn upsilon_closed_form_wider_range(l in prop::collection::vec(-3i64..=3, 1..=3)) {
        prop_assert_eq!(upsilon_closed_form(&l), upsilon_direct(&l).unwrap());
    }

    #[test]
    fn log_exp_round_trip(f in q_series(8)) {
        let back = f.log().unwrap().exp().unwrap();
        prop_assert!(back.first_difference(&f).is_none());
    }

    #[test]
    fn rational_powers_compose(f in q_series(6), a in -4i64..=4, b in 1i64..=4) {
        let lhs = f.pow(&rat(a, b)).unwrap().pow(&rint(b)).unwrap();
        let rhs = f.pow(&rint(a)).unwrap();
        prop_assert!(lhs.first_difference(&rhs).is_none());
    }

    #[test]
    fn u_series_inverse(c in prop::collection::vec(-4i64..=4, 1..=6), v in -2i64..=2) {
        prop_assume!(c[0] != 0);
        let f = ULaurentSeries::new(v, v + c.len() as i64 - 1, c.iter().map(|&x| rint(x)).collect::<Vec<Rat>>());
        let g = f.inverse().unwrap();
        let one = f.mul(&g);
        prop_assert!(one.agrees_with(&ULaurentSeries::<Rat>::one()).is_none());
    }

    #[test]
    fn delta_is_congruence(a in prop::collection::vec(-9i64..=9, 3), b in prop::collection::vec(-9i64..=9, 3), r in 1usize..=4) {
        let shifted: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + r as i64 * y).collect();
        prop_assert_eq!(delta_check(&a, &shifted, r), 1);
        prop_assert_eq!(delta_check(&a, &b, r), delta_check(&b, &a, r));
    }

    #[test]
    fn q_form_rank2(a2 in -20i64..=20) {
        prop_assert_eq!(q_form(&[vec![a2]], 2), rat(-a2, 4));
    }

    #[test]
    fn assembler_is_symmetric_for_even_chi(chi in prop::sample::select(vec![2i64, 4]), g in 1i64..=3, k in 1i64..=2, c1 in 0i64..=1) {
        let s = minimal_surface(chi, g, k, c1);
        let u = rank2_closed_form_series(vwcore::vw::required_series_order(&s, 2, 2)).unwrap();
        let z = vertical_partition_function(&s, 2, 2, &u).unwrap();
        prop_assert!(y_inverted(&z).first_difference(&z).is_none());
    }

    #[test]
    fn assembler_ignores_class_order(chi in 1i64..=3, g in 1i64..=3, k in 1i64..=2, extra in -2i64..=2) {
        let mut s = minimal_surface(chi, g, k, 0);
        // On a rank-1 lattice a² = aK forces a ∈ {0, K}; repeat K with another SW value.
        s.classes.push(SwClass { name: "K again".into(), vector: vec![k], sw: extra });
        let u = rank2_closed_form_series(vwcore::vw::required_series_order(&s, 2, 2)).unwrap();
        let z = vertical_partition_function(&s, 2, 2, &u).unwrap();
        s.classes.reverse();
        let w = vertical_partition_function(&s, 2, 2, &u).unwrap();
        prop_assert!(z.first_difference(&w).is_none());
    }

    #[test]
    fn quantum_numbers_are_y_symmetric(n in 0i64..=8) {
        let q = YFraction::from_poly(vwcore::modular::quantum_number(n));
        prop_assert_eq!(q.invert_y(), q);
    }
}
